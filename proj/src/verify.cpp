#include "qss/verify.hpp"

#include "qss/errors.hpp"
#include "qss/protocols.hpp"
#include "qss/rewrite.hpp"
#include "qss/transcript.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qss {

bool VerifyReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::string VerifyReport::render() const {
    std::ostringstream out;
    for (const auto& c : checks) out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    return out.str();
}

namespace {

FieldElement random_element(std::uint32_t d, Rng& rng) { return FieldElement(static_cast<std::int64_t>(rng.below(d)), d); }
FieldElement random_nonzero(std::uint32_t d, Rng& rng) { return FieldElement(static_cast<std::int64_t>(1 + rng.below(d - 1)), d); }

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

double max_abs_difference(std::span<const Amplitude> a, std::span<const Amplitude> b) {
    double worst = 0;
    for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
    return worst;
}

Amplitude omega_power(const FieldElement& e) {
    const double angle = 2.0 * std::numbers::pi * e.value() / e.modulus();
    return {std::cos(angle), std::sin(angle)};
}

// Columns of the dense matrix of p, row-major.
std::vector<Amplitude> dense_matrix(const PauliOperator& p) {
    const std::uint32_t d = p.modulus();
    const std::size_t n = p.size();
    std::vector<int> ids(n);
    for (std::size_t k = 0; k < n; ++k) ids[k] = static_cast<int>(k + 1);
    std::size_t dim = 1;
    for (std::size_t k = 0; k < n; ++k) dim *= d;
    std::vector<Amplitude> m(dim * dim);
    for (std::size_t c = 0; c < dim; ++c) {
        std::vector<std::uint32_t> digits(n);
        std::size_t rem = c;
        for (std::size_t k = 0; k < n; ++k) {
            digits[k] = static_cast<std::uint32_t>(rem % d);
            rem /= d;
        }
        const auto col = apply_pauli(DenseState::basis(d, ids, digits), p);
        for (std::size_t r = 0; r < dim; ++r) m[r * dim + c] = col[r];
    }
    return m;
}

std::vector<Amplitude> matmul(const std::vector<Amplitude>& a, const std::vector<Amplitude>& b, std::size_t dim) {
    std::vector<Amplitude> out(dim * dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t k = 0; k < dim; ++k) {
            const Amplitude v = a[r * dim + k];
            if (v == Amplitude{}) continue;
            for (std::size_t c = 0; c < dim; ++c) out[r * dim + c] += v * b[k * dim + c];
        }
    return out;
}

bool has_neighbour(const LabelledGraph& g, std::size_t i) { return !g.neighbours(i).empty(); }

} // namespace

// ---- random fixtures --------------------------------------------------------

LabelledGraph random_encoded_graph(std::size_t n, std::uint32_t d, Rng& rng, bool s_labels) {
    LabelledGraph g(d, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (rng.below(2)) g.set_weight(i, j, random_nonzero(d, rng));
    if (n >= 2) {
        for (std::size_t i = 0; i < n; ++i) {
            if (has_neighbour(g, i)) continue;
            std::size_t j = static_cast<std::size_t>(rng.below(n - 1));
            if (j >= i) ++j;
            g.set_weight(i, j, random_nonzero(d, rng));
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        g.set_z(i, random_element(d, rng));
        if (s_labels) g.set_m(i, random_element(d, rng));
    }
    return g;
}

LabelledGraph random_labelled_graph(std::size_t n, std::uint32_t d, Rng& rng) {
    auto g = random_encoded_graph(n, d, rng, true);
    for (std::size_t i = 0; i < n; ++i) g.set_x(i, random_element(d, rng));
    return g;
}

DenseState random_state(std::uint32_t d, std::size_t sites, Rng& rng) {
    std::vector<int> ids(sites);
    for (std::size_t k = 0; k < sites; ++k) ids[k] = static_cast<int>(k + 1);
    std::size_t dim = 1;
    for (std::size_t k = 0; k < sites; ++k) dim *= d;
    std::vector<Amplitude> amps(dim);
    for (auto& a : amps) {
        const double re = rng.normal();
        a = Amplitude(re, rng.normal());
    }
    return DenseState(d, ids, std::move(amps)).normalized();
}

PauliOperator random_pauli(std::size_t n, std::uint32_t d, Rng& rng) {
    FieldVector x(n, FieldElement::zero(d)), z(n, FieldElement::zero(d));
    for (std::size_t k = 0; k < n; ++k) {
        x[k] = random_element(d, rng);
        z[k] = random_element(d, rng);
    }
    return PauliOperator(random_element(d, rng), x, z);
}

// ---- graph checks -----------------------------------------------------------

CheckResult check_stabilizer_eigen(const std::vector<std::uint32_t>& ds, std::size_t n_min, std::size_t n_max,
                                   std::size_t graphs, Rng& rng) {
    double worst = 0;
    std::size_t cases = 0;
    for (auto d : ds)
        for (std::size_t n = n_min; n <= n_max; ++n)
            for (std::size_t t = 0; t < graphs; ++t) {
                const auto g = random_encoded_graph(n, d, rng, t % 2 == 1);
                const auto state = build_graph_state(g);
                for (std::size_t i = 0; i < n; ++i) {
                    const auto moved = apply_pauli(state, stabilizer_of(g, i));
                    const auto expected = state.scaled(omega_power(-g.label(i).z));
                    worst = std::max(worst, max_abs_difference(moved.amplitudes(), expected.amplitudes()));
                    ++cases;
                }
            }
    return {"stabilizer eigen-equation", worst < kStateTolerance,
            std::to_string(cases) + " (graph, vertex) cases, max amplitude error " + sci(worst)};
}

CheckResult check_measurement_rules(const std::vector<std::uint32_t>& ds, std::size_t n_max, std::size_t graphs,
                                    Rng& rng) {
    double worst_state = 0, worst_prob = 0;
    std::size_t cases = 0, mismatched = 0;
    for (auto d : ds)
        for (std::size_t n = 2; n <= n_max; ++n)
            for (std::size_t t = 0; t < graphs; ++t) {
                const auto g = random_encoded_graph(n, d, rng, t % 2 == 1);
                const auto state = build_graph_state(g);
                for (std::size_t i = 0; i < n; ++i)
                    for (std::uint32_t mv = 0; mv < d; ++mv) {
                        const FieldElement m(mv, d);
                        const auto basis = MeasurementBasis::xm_z(m);
                        // A pure X power after conjugation through S has no bare-vertex rule.
                        if (!effective_bare_measurement(g.label(i).m, basis, FieldElement::zero(d))) continue;
                        const auto obs = PauliOperator::local(n, i, m, FieldElement::one(d));
                        for (std::uint32_t sv = 0; sv < d; ++sv) {
                            const FieldElement s(sv, d);
                            const auto proj = project(state, obs, s);
                            worst_prob = std::max(worst_prob, std::abs(proj.probability - 1.0 / d));
                            const auto oracle = drop_product_site(proj.state, i);
                            const auto symbolic = build_graph_state(measure_symbolic(g, i, basis, s).reduced);
                            const double diff = max_phase_aligned_difference(oracle, symbolic);
                            worst_state = std::max(worst_state, diff);
                            if (diff >= kStateTolerance) ++mismatched;
                            ++cases;
                        }
                    }
            }
    const bool pass = mismatched == 0 && worst_prob < kStateTolerance;
    return {"measurement correctness", pass,
            std::to_string(cases) + " (graph, vertex, m, s) cases, " + std::to_string(mismatched) +
                " mismatched, max state error " + sci(worst_state) + ", max |p - 1/d| " + sci(worst_prob)};
}

CheckResult check_relabelling(const std::vector<std::uint32_t>& ds, std::size_t n_max, std::size_t graphs, Rng& rng) {
    double worst = 0;
    std::size_t cases = 0;
    for (auto d : ds)
        for (std::size_t n = 1; n <= n_max; ++n)
            for (std::size_t t = 0; t < graphs; ++t) {
                const auto g = random_labelled_graph(n, d, rng);
                const auto state = build_graph_state(g);
                const std::size_t i = static_cast<std::size_t>(rng.below(n));
                const auto moved = build_graph_state(apply_stabilizer_power(g, i, random_element(d, rng)));
                worst = std::max(worst, max_phase_aligned_difference(state, moved));
                ++cases;
            }
    return {"relabelling invariance", worst < kStateTolerance,
            std::to_string(cases) + " cases, max state error " + sci(worst)};
}

CheckResult check_shuffle_is_stabilizer_power(const std::vector<std::uint32_t>& ds, std::size_t graphs, Rng& rng) {
    std::size_t cases = 0, bad = 0;
    for (auto d : ds)
        for (std::size_t t = 0; t < graphs; ++t) {
            const std::size_t n = 2 + static_cast<std::size_t>(rng.below(4));
            auto g = random_encoded_graph(n, d, rng);
            const std::size_t i = static_cast<std::size_t>(rng.below(n));
            const auto nb = g.neighbours(i);
            const std::size_t j = nb[static_cast<std::size_t>(rng.below(nb.size()))];
            const auto k = -(g.weight(i, j).inv() * g.label(i).z);
            const auto a = shuffle(g, i, j);
            if (a != apply_stabilizer_power(g, j, k) || !a.label(i).z.is_zero()) ++bad;
            ++cases;
        }
    return {"shuffle equals stabilizer power", bad == 0, std::to_string(cases) + " cases, " + std::to_string(bad) + " differ"};
}

CheckResult check_access_soundness(const std::vector<std::uint32_t>& ds, std::size_t graphs, Rng& rng) {
    std::size_t witnesses = 0, bad = 0;
    double worst = 0;
    for (auto d : ds)
        for (std::size_t t = 0; t < graphs; ++t) {
            const std::size_t n = 2 + static_cast<std::size_t>(rng.below(4));
            const auto g = random_encoded_graph(n, d, rng, t % 2 == 1);
            std::vector<std::size_t> subset;
            for (std::size_t i = 0; i < n; ++i)
                if (rng.below(2)) subset.push_back(i);
            if (subset.empty()) subset.push_back(0);
            FieldVector target(n, FieldElement::zero(d));
            for (auto& v : target) v = random_element(d, rng);
            const auto w = access_weights(g, subset, target);
            if (!w) continue;
            ++witnesses;
            const auto probs = outcome_probabilities(build_graph_state(g), stabilizer_product(g, *w));
            const auto expected = eigenvalue_exponent(g, *w);
            const double miss = std::abs(1.0 - probs[expected.value()]);
            worst = std::max(worst, miss);
            FieldElement sum = FieldElement::zero(d);
            for (std::size_t i = 0; i < n; ++i) sum += (*w)[i] * g.label(i).z;
            if (miss >= kStateTolerance || expected != -sum) ++bad;
        }
    return {"access soundness", bad == 0 && witnesses > 0,
            std::to_string(witnesses) + " witnesses, " + std::to_string(bad) + " not deterministic, max 1 - p " + sci(worst)};
}

CheckResult check_denial_soundness(const std::vector<std::uint32_t>& ds, std::size_t graphs, Rng& rng) {
    std::size_t certificates = 0, bad = 0;
    double worst = 0;
    for (auto d : ds)
        for (std::size_t t = 0; t < graphs; ++t) {
            const std::size_t n = 2 + static_cast<std::size_t>(rng.below(3));
            auto g = random_encoded_graph(n, d, rng);
            FieldVector dir(n, FieldElement::zero(d));
            for (auto& v : dir) v = random_element(d, rng);
            std::vector<std::size_t> subset;
            for (std::size_t i = 0; i < n; ++i)
                if (rng.below(2)) subset.push_back(i);
            if (subset.empty() || subset.size() == n) continue;
            if (!denial_certificate(g, subset, dir)) continue;
            ++certificates;
            std::vector<int> ids;
            for (auto i : subset) ids.push_back(g.id(i));
            std::vector<DensityMatrix> rhos;
            for (std::uint32_t s = 0; s < d; ++s) {
                auto gs = g;
                for (std::size_t i = 0; i < n; ++i) gs.set_z(i, g.label(i).z + dir[i] * s);
                rhos.push_back(reduced_density_ids(build_graph_state(gs), ids));
            }
            double td = 0;
            for (std::size_t s = 1; s < rhos.size(); ++s) td = std::max(td, trace_distance_checked(rhos[0], rhos[s]));
            worst = std::max(worst, td);
            if (td >= kStateTolerance) ++bad;
        }
    return {"denial soundness", bad == 0 && certificates > 0,
            std::to_string(certificates) + " certificates, " + std::to_string(bad) + " leaking, max trace distance " + sci(worst)};
}

// ---- field and pauli --------------------------------------------------------

CheckResult check_field_inverses(const std::vector<std::uint32_t>& ds) {
    std::size_t bad = 0, cases = 0;
    for (auto d : ds)
        for (std::uint32_t a = 0; a < d; ++a) {
            const FieldElement x(a, d);
            if (x.half() + x.half() != x) ++bad;
            if (a != 0 && x * x.inv() != FieldElement::one(d)) ++bad;
            ++cases;
        }
    return {"field inverses and halves", bad == 0, std::to_string(cases) + " elements, " + std::to_string(bad) + " bad"};
}

CheckResult check_solve_linear(const std::vector<std::uint32_t>& ds, std::size_t systems, Rng& rng) {
    std::size_t solved = 0, inconsistent = 0, bad = 0;
    for (auto d : ds)
        for (std::size_t t = 0; t < systems; ++t) {
            const std::size_t rows = 1 + static_cast<std::size_t>(rng.below(3));
            const std::size_t cols = 1 + static_cast<std::size_t>(rng.below(3));
            FieldMatrix m(rows, cols, d);
            for (std::size_t r = 0; r < rows; ++r)
                for (std::size_t c = 0; c < cols; ++c)
                    if (rng.below(3)) m(r, c) = random_element(d, rng);
            FieldVector rhs(rows, FieldElement::zero(d));
            for (auto& v : rhs) v = random_element(d, rng);
            const auto sol = solve_linear(m, rhs);
            if (sol) {
                ++solved;
                if (m * sol->particular != rhs) ++bad;
                for (const auto& k : sol->nullspace)
                    if (m * k != FieldVector(rows, FieldElement::zero(d))) ++bad;
                continue;
            }
            ++inconsistent;
            std::size_t total = 1;
            for (std::size_t c = 0; c < cols; ++c) total *= d;
            for (std::size_t idx = 0; idx < total; ++idx) {
                FieldVector w(cols, FieldElement::zero(d));
                std::size_t rem = idx;
                for (auto& v : w) {
                    v = FieldElement(static_cast<std::int64_t>(rem % d), d);
                    rem /= d;
                }
                if (m * w == rhs) {
                    ++bad;
                    break;
                }
            }
        }
    return {"linear solver", bad == 0,
            std::to_string(solved) + " solved, " + std::to_string(inconsistent) + " inconsistent (exhaustively confirmed), " +
                std::to_string(bad) + " bad"};
}

CheckResult check_pauli_group_laws(const std::vector<std::uint32_t>& ds) {
    std::size_t bad = 0, triples = 0;
    for (auto d : ds) {
        std::vector<PauliOperator> all;
        for (std::uint32_t ph = 0; ph < d; ++ph)
            for (std::uint32_t x = 0; x < d; ++x)
                for (std::uint32_t z = 0; z < d; ++z)
                    all.emplace_back(FieldElement(ph, d), make_vector({x}, d), make_vector({z}, d));
        const PauliOperator id(1, d);
        for (const auto& p : all) {
            if (multiply(p, id) != p || multiply(id, p) != p) ++bad;
            if (!power(p, static_cast<std::int64_t>(d)).is_scalar()) ++bad;
        }
        for (const auto& a : all)
            for (const auto& b : all)
                for (const auto& c : all) {
                    if (multiply(multiply(a, b), c) != multiply(a, multiply(b, c))) ++bad;
                    ++triples;
                }
    }
    return {"pauli group laws", bad == 0, std::to_string(triples) + " associativity triples, " + std::to_string(bad) + " bad"};
}

CheckResult check_pauli_matrix_product(const std::vector<std::uint32_t>& ds, std::size_t n_max, std::size_t pairs,
                                       Rng& rng) {
    double worst = 0;
    std::size_t cases = 0;
    for (auto d : ds)
        for (std::size_t n = 1; n <= n_max; ++n) {
            std::size_t dim = 1;
            for (std::size_t k = 0; k < n; ++k) dim *= d;
            for (std::size_t t = 0; t < pairs; ++t) {
                const auto p = random_pauli(n, d, rng), q = random_pauli(n, d, rng);
                const auto lhs = matmul(dense_matrix(p), dense_matrix(q), dim);
                worst = std::max(worst, max_abs_difference(lhs, dense_matrix(multiply(p, q))));
                ++cases;
            }
        }
    return {"pauli multiply vs matrices", worst < kStateTolerance,
            std::to_string(cases) + " pairs, max entry error " + sci(worst)};
}

// ---- oracle ---------------------------------------------------------------

CheckResult check_unitarity(const std::vector<std::uint32_t>& ds, Rng& rng) {
    double worst = 0;
    std::size_t cases = 0;
    auto note = [&](const DenseState& s) {
        worst = std::max(worst, std::abs(s.norm() - 1.0));
        ++cases;
    };
    for (auto d : ds) {
        const auto s = random_state(d, 3, rng);
        for (auto gate : {LocalGate::X, LocalGate::Z, LocalGate::S, LocalGate::U, LocalGate::Uinv, LocalGate::R})
            for (std::size_t site = 0; site < 3; ++site) note(apply_local(s, gate, site, 1 + static_cast<std::int64_t>(rng.below(d))));
        const FieldElement w = random_nonzero(d, rng);
        note(apply_controlled_z(s, 0, 2, w));
        note(apply_controlled_shift(s, 1, 0, w));
        note(apply_pauli(s, random_pauli(3, d, rng)));
    }
    return {"unitarity", worst < kNormTolerance, std::to_string(cases) + " applications, max |norm - 1| " + sci(worst)};
}

CheckResult check_projector_completeness(const std::vector<std::uint32_t>& ds, Rng& rng) {
    double worst = 0;
    std::size_t cases = 0;
    for (auto d : ds) {
        const auto psi = random_state(d, 2, rng);
        for (std::uint32_t x = 0; x < d; ++x)
            for (std::uint32_t z = 0; z < d; ++z) {
                if (x == 0 && z == 0) continue;
                for (std::size_t site = 0; site < 2; ++site) {
                    const auto obs = PauliOperator::local(2, site, FieldElement(x, d), FieldElement(z, d));
                    std::vector<Amplitude> sum(psi.dim());
                    for (std::uint32_t s = 0; s < d; ++s) {
                        const auto proj = project(psi, obs, FieldElement(s, d));
                        if (!proj.valid) continue;
                        const double root = std::sqrt(proj.probability);
                        for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += root * proj.state[k];
                    }
                    worst = std::max(worst, max_abs_difference(sum, psi.amplitudes()));
                    ++cases;
                }
            }
    }
    return {"projector completeness", worst < kStateTolerance,
            std::to_string(cases) + " observables, max |sum_s P_s psi - psi| " + sci(worst)};
}

CheckResult check_born_rule(const std::vector<std::uint32_t>& ds, std::size_t samples, Rng& rng) {
    double worst = 0;
    std::size_t cases = 0;
    for (auto d : ds)
        for (std::size_t t = 0; t < samples; ++t) {
            const auto psi = random_state(d, 3, rng);
            auto obs = random_pauli(3, d, rng);
            if (obs.is_scalar()) continue;
            const auto probs = outcome_probabilities(psi, obs);
            double sum = 0;
            for (double p : probs) sum += p;
            worst = std::max(worst, std::abs(sum - 1.0));
            ++cases;
        }
    return {"born rule", worst < kNormTolerance, std::to_string(cases) + " measurements, max |sum p - 1| " + sci(worst)};
}

CheckResult check_kernel_backends(const std::vector<std::uint32_t>& ds, Rng& rng) {
    const auto saved = kernel_backend();
    double worst = 0;
    std::size_t cases = 0;
    for (auto d : ds) {
        const auto g = random_labelled_graph(5, d, rng);
        const auto psi = random_state(d, 5, rng);
        const auto p = random_pauli(5, d, rng);
        std::vector<std::vector<Amplitude>> results[2];
        for (int b = 0; b < 2; ++b) {
            set_kernel_backend(b == 0 ? KernelBackend::Serial : KernelBackend::Parallel);
            auto keep = [&](const DenseState& s) {
                results[b].emplace_back(s.amplitudes().begin(), s.amplitudes().end());
            };
            keep(build_graph_state(g));
            keep(apply_pauli(psi, p));
            keep(apply_local(psi, LocalGate::U, 2));
            keep(apply_controlled_z(psi, 1, 3, FieldElement::one(d)));
            keep(apply_controlled_shift(psi, 4, 0, FieldElement::one(d)));
            results[b].push_back(reduced_density(psi, {1, 3}).entries);
        }
        for (std::size_t k = 0; k < results[0].size(); ++k) {
            worst = std::max(worst, max_abs_difference(results[0][k], results[1][k]));
            ++cases;
        }
    }
    set_kernel_backend(saved);
    return {"serial and parallel kernels agree", worst < kStateTolerance,
            std::to_string(cases) + " operations, max difference " + sci(worst)};
}

// ---- fixed fixtures ---------------------------------------------------------

LabelledGraph measured_square_fixture() {
    const std::uint32_t d = 5;
    LabelledGraph g(d, 4);
    const FieldElement two(2, d);
    g.set_weight(0, 1, two);
    g.set_weight(0, 2, two);
    g.set_weight(1, 3, two);
    g.set_weight(2, 3, two);
    for (std::size_t i = 0; i < 4; ++i) g.set_z(i, FieldElement::one(d));
    return g;
}

LabelledGraph shuffle_square_fixture() {
    const std::uint32_t d = 5;
    LabelledGraph g(d, 4);
    const FieldElement two(2, d);
    for (std::size_t i = 0; i < 4; ++i) g.set_weight(i, (i + 1) % 4, two);
    g.set_z(0, FieldElement(3, d));
    return g;
}

EdgeArbitration arbitrate_edge(const LabelledGraph& g, int vertex, const FieldElement& m, const FieldElement& outcome,
                               int a, int b) {
    const std::uint32_t d = g.modulus();
    const std::size_t i = g.index_of(vertex);
    const auto obs = PauliOperator::local(g.size(), i, m, FieldElement::one(d));
    const auto proj = project(build_graph_state(g), obs, outcome);
    const auto oracle = drop_product_site(proj.state, i);

    EdgeArbitration out{measure_symbolic(g, i, MeasurementBasis::xm_z(m), outcome).reduced, {}, proj.probability, false};
    const std::size_t ia = out.symbolic.index_of(a), ib = out.symbolic.index_of(b);
    for (std::uint32_t w = 0; w < d; ++w) {
        auto candidate = out.symbolic;
        candidate.set_weight(ia, ib, FieldElement(w, d));
        if (max_phase_aligned_difference(oracle, build_graph_state(candidate)) < kStateTolerance) {
            out.matching_weights.push_back(w);
            if (candidate == out.symbolic) out.symbolic_matches = true;
        }
    }
    return out;
}

CheckResult check_square_measurement(const LabelledGraph* golden) {
    const std::uint32_t d = 5;
    const auto arb = arbitrate_edge(measured_square_fixture(), 1, FieldElement(2, d), FieldElement(2, d), 2, 3);
    const auto& r = arb.symbolic;
    bool labels = true;
    for (int id : {2, 3}) {
        const auto& l = r.label(r.index_of(id));
        labels = labels && l.z.is_zero() && l.x.is_zero() && l.m == FieldElement(3, d);
    }
    const bool edge_one = std::find(arb.matching_weights.begin(), arb.matching_weights.end(), 1u) != arb.matching_weights.end();
    bool golden_ok = true;
    if (golden) golden_ok = golden->adjacency() == r.adjacency() && golden->z_labels() == r.z_labels() &&
                            golden->x_labels() == r.x_labels() && golden->m_labels() == r.m_labels();
    std::string weights;
    for (auto w : arb.matching_weights) weights += (weights.empty() ? "" : ",") + std::to_string(w);
    const bool pass = arb.symbolic_matches && labels && golden_ok && std::abs(arb.probability - 1.0 / d) < kStateTolerance;
    return {"weight-2 square X^2Z measurement", pass,
            "oracle edge 2-3 weight " + (weights.empty() ? std::string("none") : weights) + ", symbolic " +
                std::to_string(r.weight(r.index_of(2), r.index_of(3)).value()) + ", edge weight 1 " +
                (edge_one ? "matches" : "does not match") + " the oracle, labels of 2 and 3 (z,x,m) = (0,0,3) " +
                (labels ? "hold" : "fail") + (golden ? std::string(", golden fixture ") + (golden_ok ? "equal" : "differs") : "") +
                ", p = " + format_real(arb.probability)};
}

CheckResult check_square_shuffle() {
    const std::uint32_t d = 5;
    const auto g = shuffle(shuffle_square_fixture(), 0, 1);
    const bool pass = g.z_labels() == make_vector({0, 0, 2, 0}, d) && g.x_labels() == make_vector({0, 1, 0, 0}, d);
    std::ostringstream out;
    out << "z = (";
    for (std::size_t i = 0; i < 4; ++i) out << (i ? "," : "") << g.label(i).z;
    out << "), x = (";
    for (std::size_t i = 0; i < 4; ++i) out << (i ? "," : "") << g.label(i).x;
    out << ")";
    return {"weight-2 square shuffle 1->2", pass, out.str()};
}

// ---- suites -----------------------------------------------------------------

namespace {

CheckResult check_cc_thresholds(const std::vector<std::uint32_t>& ds) {
    std::size_t subsets = 0, bad = 0;
    double worst = 0;
    for (auto d : ds)
        for (const auto& [name, n] : std::vector<std::pair<std::string, std::size_t>>{
                 {"tree", 3}, {"tree", 4}, {"twothree", 3}, {"ring34", 4}, {"ring35", 5}}) {
            const auto scheme = make_scheme(name, d, n);
            for (const auto& sub : all_player_subsets(scheme.player_count())) {
                ++subsets;
                const bool authorized = sub.size() >= scheme.threshold;
                bool ok = true;
                for (std::uint32_t s = 0; s < d && ok; ++s) {
                    const auto rec = cc_recover(scheme, cc_encode(scheme, FieldElement(s, d)), sub, RecoveryMode::Symbolic, 0);
                    ok = rec.recovered == authorized && (!authorized || rec.secret == FieldElement(s, d)) &&
                         (authorized || rec.certificate.has_value());
                }
                if (ok && !authorized) {
                    const double td = cc_denial_distance(scheme, sub);
                    worst = std::max(worst, td);
                    ok = td < kStateTolerance;
                }
                if (!ok) ++bad;
            }
        }
    return {"cc thresholds", bad == 0,
            std::to_string(subsets) + " (scheme, subset) pairs, " + std::to_string(bad) + " wrong, max denied trace distance " + sci(worst)};
}

CheckResult check_cq(std::uint64_t seed) {
    std::ostringstream out;
    bool pass = true;
    for (const auto& name : {"tree", "twothree", "ring35"}) {
        CqConfig cfg;
        cfg.rounds = 600;
        cfg.seed = seed;
        const auto res = cq_run(make_scheme(name, 3, 3), cfg);
        const double se = std::sqrt((1.0 / 3) * (2.0 / 3) / cfg.rounds);
        const bool ok = std::abs(res.kept_fraction - 1.0 / 3) <= 5 * se && res.mismatches == 0 && res.violations == 0;
        pass = pass && ok;
        out << name << " kept " << format_real(res.kept_fraction, 3) << " mismatches " << res.mismatches << "; ";
    }
    return {"cq sifting and key agreement", pass, out.str()};
}

CheckResult check_qq(std::uint64_t seed) {
    Rng rng(seed);
    double worst_f = 1, worst_td = 0;
    for (const auto& name : {"twothree", "ring35"}) {
        const auto scheme = make_scheme(name, 3);
        const auto secret = random_secret(3, rng);
        const auto deal = qq_deal(scheme, secret, rng.next());
        for (const auto& sub : all_player_subsets(scheme.player_count())) {
            if (qq_authorized(scheme, sub)) {
                worst_f = std::min(worst_f, qq_recover(scheme, deal.corrected, sub, secret, rng.next()).fidelity);
            } else {
                worst_td = std::max(worst_td, qq_audit_denial(scheme, sub));
            }
        }
    }
    return {"qq perfect thresholds", worst_f >= 1 - kStateTolerance && worst_td < kStateTolerance,
            "min fidelity " + format_real(worst_f, 12) + ", max denied trace distance " + sci(worst_td)};
}

} // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"all", "field", "pauli", "graph", "oracle", "protocols"};
    return names;
}

VerifyReport run_suite(const std::string& suite, std::uint64_t seed) {
    const auto& names = suite_names();
    if (std::find(names.begin(), names.end(), suite) == names.end()) {
        throw DomainError("unknown suite '" + suite + "' (expected all, field, pauli, graph, oracle or protocols)");
    }
    auto want = [&](const char* s) { return suite == "all" || suite == s; };
    VerifyReport report;
    Rng rng(seed);
    if (want("field")) {
        report.checks.push_back(check_field_inverses({3, 5, 7, 11}));
        report.checks.push_back(check_solve_linear({3, 5}, 200, rng));
    }
    if (want("pauli")) {
        report.checks.push_back(check_pauli_group_laws({3, 5}));
        report.checks.push_back(check_pauli_matrix_product({3, 5}, 3, 40, rng));
        report.checks.push_back(check_stabilizer_eigen({3, 5, 7}, 2, 5, 10, rng));
    }
    if (want("graph")) {
        report.checks.push_back(check_relabelling({3, 5, 7}, 5, 10, rng));
        report.checks.push_back(check_shuffle_is_stabilizer_power({3, 5, 7}, 50, rng));
        report.checks.push_back(check_measurement_rules({3, 5}, 4, 10, rng));
        report.checks.push_back(check_access_soundness({3, 5}, 60, rng));
        report.checks.push_back(check_denial_soundness({3, 5}, 60, rng));
        report.checks.push_back(check_square_measurement());
        report.checks.push_back(check_square_shuffle());
    }
    if (want("oracle")) {
        report.checks.push_back(check_unitarity({3, 5}, rng));
        report.checks.push_back(check_projector_completeness({3, 5}, rng));
        report.checks.push_back(check_born_rule({3, 5}, 50, rng));
        report.checks.push_back(check_kernel_backends({3, 5}, rng));
    }
    if (want("protocols")) {
        report.checks.push_back(check_cc_thresholds({3}));
        report.checks.push_back(check_cq(seed));
        report.checks.push_back(check_qq(seed));
    }
    return report;
}

} // namespace qss
