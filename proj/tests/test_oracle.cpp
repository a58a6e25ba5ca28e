#include <doctest.h>

#include "qss/errors.hpp"
#include "qss/oracle.hpp"
#include "qss/verify.hpp"

#include <cmath>

using namespace qss;

namespace {

using Matrix = std::vector<Amplitude>;

Matrix mul(std::uint32_t d, const Matrix& a, const Matrix& b) {
    Matrix out(a.size());
    for (std::uint32_t r = 0; r < d; ++r)
        for (std::uint32_t c = 0; c < d; ++c)
            for (std::uint32_t k = 0; k < d; ++k) out[r * d + c] += a[r * d + k] * b[k * d + c];
    return out;
}

double distance(const Matrix& a, const Matrix& b) {
    double worst = 0;
    for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
    return worst;
}

// g M g^{-1}
Matrix conj(std::uint32_t d, LocalGate g, const Matrix& m) {
    return mul(d, local_gate_matrix(d, g), mul(d, m, local_gate_matrix(d, g, -1)));
}

} // namespace

TEST_CASE("local gate conjugation identities") {
    for (std::uint32_t d : {3u, 5u, 7u}) {
        const auto X = local_gate_matrix(d, LocalGate::X);
        const auto Z = local_gate_matrix(d, LocalGate::Z);
        const auto XZ = mul(d, X, Z);
        CHECK(distance(conj(d, LocalGate::S, X), XZ) < 1e-12);
        CHECK(distance(conj(d, LocalGate::S, Z), Z) < 1e-12);
        CHECK(distance(conj(d, LocalGate::Uinv, X), local_gate_matrix(d, LocalGate::Z, -1)) < 1e-12);
        CHECK(distance(conj(d, LocalGate::Uinv, Z), X) < 1e-12);
        CHECK(distance(conj(d, LocalGate::R, X), X) < 1e-12);
        CHECK(distance(conj(d, LocalGate::R, Z), XZ) < 1e-12);
        CHECK(distance(local_gate_matrix(d, LocalGate::X, static_cast<std::int64_t>(d)),
                       local_gate_matrix(d, LocalGate::X, 0)) < 1e-12);
        CHECK(distance(local_pauli_matrix(FieldElement(1, d), FieldElement(1, d)), XZ) < 1e-12);
    }
}

TEST_CASE("Fourier basis conventions") {
    const std::uint32_t d = 5;
    for (std::uint32_t z = 0; z < d; ++z) {
        // Z^z |0bar> = U|z>
        auto zero_bar = apply_local(DenseState::basis(d, {1}, {0}), LocalGate::U, 0);
        auto lhs = apply_local(zero_bar, LocalGate::Z, 0, z);
        auto rhs = apply_local(DenseState::basis(d, {1}, {z}), LocalGate::U, 0);
        CHECK(max_phase_aligned_difference(lhs, rhs) < 1e-12);
        CHECK(std::abs(inner_product(lhs, rhs) - Amplitude(1, 0)) < 1e-12);
        // X U|z> = w^{-z} U|z>
        auto shifted = apply_local(rhs, LocalGate::X, 0);
        const Amplitude w = std::polar(1.0, -2 * std::numbers::pi * z / d);
        CHECK(std::abs(inner_product(rhs, shifted) - w) < 1e-12);
    }
}

TEST_CASE("Bell vectors") {
    const std::uint32_t d = 3;
    const auto psi00 = bell_vector(d, FieldElement::zero(d), FieldElement::zero(d));
    for (std::uint32_t a = 0; a < d; ++a)
        for (std::uint32_t b = 0; b < d; ++b)
            CHECK(std::abs(psi00[a + b * d] - Amplitude(a == b ? 1 / std::sqrt(3.0) : 0, 0)) < 1e-12);

    // orthonormal basis
    for (std::uint32_t m = 0; m < d; ++m)
        for (std::uint32_t n = 0; n < d; ++n)
            for (std::uint32_t m2 = 0; m2 < d; ++m2)
                for (std::uint32_t n2 = 0; n2 < d; ++n2) {
                    const auto u = bell_vector(d, FieldElement(m, d), FieldElement(n, d));
                    const auto v = bell_vector(d, FieldElement(m2, d), FieldElement(n2, d));
                    Amplitude ip{};
                    for (std::size_t k = 0; k < u.size(); ++k) ip += std::conj(u[k]) * v[k];
                    CHECK(std::abs(ip - Amplitude(m == m2 && n == n2 ? 1 : 0, 0)) < 1e-12);
                }

    // each outcome of a product |0>|0> Bell measurement has probability 1/d
    const auto s = DenseState::basis(d, {1, 2, 3}, {0, 0, 0});
    for (std::uint32_t n = 0; n < d; ++n)
        CHECK(bell_project(s, 0, 1, FieldElement::zero(d), FieldElement(n, d)).probability ==
              doctest::Approx(1.0 / d));
}

TEST_CASE("zero-probability projection") {
    const std::uint32_t d = 3;
    const auto s = DenseState::basis(d, {1}, {2});
    const auto z = PauliOperator::local(1, 0, FieldElement::zero(d), FieldElement::one(d));
    const auto p = project(s, z, FieldElement(1, d));
    CHECK_FALSE(p.valid);
    CHECK(p.probability == doctest::Approx(0.0));
    const auto q = project(s, z, FieldElement(2, d));
    CHECK(q.valid);
    CHECK(q.probability == doctest::Approx(1.0));
    CHECK_THROWS_AS(measure_pauli(s, PauliOperator(1, d), 3), DomainError);
}

TEST_CASE("trace distance") {
    const std::uint32_t d = 3;
    const auto a = pure_density(DenseState::basis(d, {1}, {0}));
    const auto b = pure_density(DenseState::basis(d, {1}, {1}));
    CHECK(trace_distance(a, b) == doctest::Approx(1.0));
    CHECK(trace_distance(a, a) == doctest::Approx(0.0));
    CHECK(trace_distance(a, maximally_mixed(d, {1})) == doctest::Approx(2.0 / 3));
    CHECK(trace_distance_upper_bound(a, b) >= trace_distance(a, b) - 1e-12);
    CHECK(trace_distance_checked(a, a) < 1e-12);

    // one half of a Bell pair is maximally mixed
    const auto bell = DenseState(d, {1, 2}, bell_vector(d, FieldElement::zero(d), FieldElement::zero(d)));
    const auto half = reduced_density(bell, {0});
    CHECK(trace_distance(half, maximally_mixed(d, {1})) < 1e-12);
    CHECK(half.purity() == doctest::Approx(1.0 / d));
}

TEST_CASE("oracle self-checks") {
    Rng rng(31);
    for (const auto& r : {check_unitarity({3, 5, 7}, rng), check_projector_completeness({3, 5}, rng),
                          check_born_rule({3, 5}, 4000, rng)}) {
        INFO(r.name << ": " << r.detail);
        CHECK(r.pass);
    }
}

TEST_CASE("state size limits and id bookkeeping") {
    CHECK_THROWS_AS(DenseState::basis(3, {1, 2}, {0}), DomainError);
    const auto s = build_graph_state(shuffle_square_fixture());
    CHECK(s.ids() == std::vector<int>{1, 2, 3, 4});
    CHECK(s.site_of(3) == 2);
    const auto p = permute_sites(s, {4, 3, 2, 1});
    CHECK(p.ids() == std::vector<int>{4, 3, 2, 1});
    CHECK(fidelity(permute_sites(p, {1, 2, 3, 4}), s) == doctest::Approx(1.0));
    CHECK(s.norm() == doctest::Approx(1.0));
}
