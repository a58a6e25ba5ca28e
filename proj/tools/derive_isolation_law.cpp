// Brute-force search for the outcome-conditioned correction that leaves the
// secret on one player of the (n,n) tree after the others measure.
//
// For every target and every outcome pattern, tries each
//   [U^{-1}] then X^a Z^b then [j -> -j]
// on the target and keeps the ones with fidelity 1 for a few random secrets.
// Prints the table and checks it against qss::isolation_law. Exit 1 when the
// frozen law disagrees with the search.
//
//   derive_isolation_law [d] [n]

#include "qss/oracle.hpp"
#include "qss/protocols.hpp"
#include "qss/schemes.hpp"

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

using namespace qss;

namespace {

struct Candidate {
    bool inverse_fourier;
    std::uint32_t a, b;
    bool negate;
};

std::string describe(const Candidate& c) {
    std::string s;
    if (c.inverse_fourier) s += "Uinv ";
    s += "X^" + std::to_string(c.a) + " Z^" + std::to_string(c.b);
    if (c.negate) s += " neg";
    return s;
}

DenseState correct(DenseState s, std::size_t site, const Candidate& c, std::uint32_t d) {
    if (c.inverse_fourier) s = apply_local(s, LocalGate::Uinv, site);
    s = apply_pauli(s, PauliOperator::local(s.sites(), site, FieldElement(c.a, d), FieldElement(c.b, d)));
    if (c.negate) {
        std::vector<Amplitude> m(static_cast<std::size_t>(d) * d);
        for (std::uint32_t y = 0; y < d; ++y) m[((d - y) % d) * d + y] = 1.0;
        s = apply_local_matrix(s, site, m);
    }
    return s;
}

double fidelity_on(const DenseState& s, std::size_t site, const QuantumSecret& secret) {
    const auto rho = reduced_density(s, {site});
    Amplitude acc{};
    for (std::size_t r = 0; r < rho.dim; ++r)
        for (std::size_t c = 0; c < rho.dim; ++c) acc += std::conj(secret[r]) * rho(r, c) * secret[c];
    return acc.real();
}

} // namespace

int main(int argc, char** argv) {
    const std::uint32_t d = argc > 1 ? static_cast<std::uint32_t>(std::atoi(argv[1])) : 3;
    const std::size_t n = argc > 2 ? static_cast<std::size_t>(std::atoi(argv[2])) : 3;
    const auto scheme = make_scheme("tree", d, n);

    Rng rng(2024);
    std::vector<QuantumSecret> secrets;
    for (int k = 0; k < 3; ++k) secrets.push_back(random_secret(d, rng));
    std::vector<DenseState> encoded;
    for (const auto& s : secrets) encoded.push_back(encoded_quantum_secret(scheme, s));

    std::vector<Candidate> candidates;
    for (bool pre : {false, true})
        for (std::uint32_t a = 0; a < d; ++a)
            for (std::uint32_t b = 0; b < d; ++b)
                for (bool neg : {false, true}) candidates.push_back({pre, a, b, neg});

    bool consistent = true;
    for (int target = 1; target <= static_cast<int>(n); ++target) {
        // Player 1 measures X unless it is the target; the rest measure Z.
        std::vector<int> measured;
        for (int id = 1; id <= static_cast<int>(n); ++id)
            if (id != target) measured.push_back(id);
        std::size_t patterns = 1;
        for (std::size_t k = 0; k < measured.size(); ++k) patterns *= d;

        std::cout << "target " << target << "\n";
        for (std::size_t p = 0; p < patterns; ++p) {
            std::vector<std::uint32_t> outcome(measured.size());
            std::size_t rem = p;
            for (auto& o : outcome) {
                o = static_cast<std::uint32_t>(rem % d);
                rem /= d;
            }
            std::vector<DenseState> post;
            for (const auto& e : encoded) {
                DenseState s = e;
                for (std::size_t k = 0; k < measured.size(); ++k) {
                    const bool centre = measured[k] == 1;
                    const auto obs = PauliOperator::local(s.sites(), s.site_of(measured[k]),
                                                          centre ? FieldElement::one(d) : FieldElement::zero(d),
                                                          centre ? FieldElement::zero(d) : FieldElement::one(d));
                    s = project(s, obs, FieldElement(outcome[k], d)).state;
                }
                post.push_back(s);
            }
            const std::size_t site = post.front().site_of(target);

            std::vector<std::string> hits;
            for (const auto& c : candidates) {
                bool ok = true;
                for (std::size_t k = 0; k < post.size() && ok; ++k)
                    ok = fidelity_on(correct(post[k], site, c, d), site, secrets[k]) > 1 - 1e-10;
                if (ok) hits.push_back(describe(c));
            }

            FieldElement centre = FieldElement::zero(d);
            FieldVector zs;
            std::cout << "  outcomes";
            for (std::size_t k = 0; k < measured.size(); ++k) {
                std::cout << " " << measured[k] << ":" << outcome[k];
                if (measured[k] == 1) centre = FieldElement(outcome[k], d);
                else zs.push_back(FieldElement(outcome[k], d));
            }
            const auto law = isolation_law(target, centre, zs);
            const Candidate frozen{law.inverse_fourier, law.shift.value(), 0, law.negate};
            bool frozen_found = false;
            for (const auto& h : hits) frozen_found = frozen_found || h == describe(frozen);
            consistent = consistent && frozen_found;
            std::cout << " ->";
            for (const auto& h : hits) std::cout << " [" << h << "]";
            std::cout << (frozen_found ? "  law ok" : "  LAW MISSING") << "\n";
        }
    }
    std::cout << (consistent ? "frozen isolation law agrees with the search\n" : "frozen isolation law is wrong\n");
    return consistent ? 0 : 1;
}
