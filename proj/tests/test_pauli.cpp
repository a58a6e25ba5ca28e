#include <doctest.h>

#include "qss/errors.hpp"
#include "qss/pauli.hpp"
#include "qss/schemes.hpp"
#include "qss/verify.hpp"

using namespace qss;

namespace {
PauliOperator single(std::int64_t phase, std::int64_t x, std::int64_t z, std::uint32_t d) {
    return PauliOperator(FieldElement(phase, d), make_vector({x}, d), make_vector({z}, d));
}
}

TEST_CASE("dense matrices are the reference for multiply") {
    Rng rng(3);
    const auto r = check_pauli_matrix_product({3, 5}, 3, 200, rng);
    INFO(r.detail);
    CHECK(r.pass);
}

TEST_CASE("single-site relations") {
    const std::uint32_t d = 5;
    CHECK(multiply(single(0, 0, 1, d), single(0, 1, 0, d)) == single(1, 1, 1, d));  // ZX = w XZ
    CHECK(multiply(single(0, d - 1, 0, d), single(0, 1, 0, d)).is_identity());
    CHECK(power(single(0, 1, 1, d), 0).is_identity());
    CHECK(power(single(0, 1, 1, d), d).is_identity());
    // (X^{-1} Z)^A = w^{-A(A-1)/2} X^{-A} Z^A
    for (std::int64_t a = 0; a < d; ++a) CHECK(power(single(0, -1, 1, d), a) == single(-a * (a - 1) / 2, -a, a, d));
    CHECK(check_pauli_group_laws({3, 5}).pass);
}

TEST_CASE("commutation exponent") {
    const std::uint32_t d = 3;
    CHECK(commutation_exponent(single(0, 0, 1, d), single(0, 1, 0, d)) == FieldElement(1, d));
    CHECK(commutation_exponent(single(0, 1, 1, d), single(0, 1, 1, d)).is_zero());
}

TEST_CASE("stabilizers of the named graphs") {
    const std::uint32_t d = 3;
    const auto star = make_scheme("twothree", d).players;
    CHECK(to_string(stabilizer_of(star, 0)) == "X1 Z2 Z3");
    const auto ext = extended_graph(make_scheme("ring35", d));
    CHECK(to_string(stabilizer_of(ext, 0), {"D", "1", "2", "3", "4", "5"}) == "XD Z1 Z2 Z3 Z4 Z5");
    const auto ring = make_scheme("ring35", d).players;
    CHECK(to_string(stabilizer_of(ring, 2)) == "Z2 X3 Z4");
    // K_2^{d-1} K_3 on the (2,3) graph
    const auto prod = stabilizer_product(star, make_vector({0, -1, 1}, d));
    CHECK(prod == PauliOperator(FieldElement::zero(d), make_vector({0, -1, 1}, d), make_vector({0, 0, 0}, d)));
}

TEST_CASE("eigenvalue exponents and decomposition") {
    const std::uint32_t d = 5;
    auto g = make_scheme("twothree", d).players;
    const FieldElement s(3, d);
    g.set_z(1, s * 2);
    g.set_z(2, s);
    CHECK(eigenvalue_exponent(g, make_vector({0, -1, 1}, d)) == s);
    CHECK(eigenvalue_exponent(g, make_vector({0, 1, 0}, d)) == -(s * 2));
    CHECK(eigenvalue_exponent(make_scheme("ring35", d).players, make_vector({1, 2, 3, 4, 0}, d)).is_zero());

    const auto w = make_vector({2, 0, 4}, d);
    const auto op = stabilizer_product(g, w).with_phase(FieldElement(1, d));
    const auto dec = decompose_in_stabilizers(g, op);
    REQUIRE(dec);
    CHECK(dec->weights == w);
    CHECK(!decompose_in_stabilizers(g, PauliOperator::local(3, 0, FieldElement::zero(d), FieldElement::one(d))));
}

TEST_CASE("stabilizer eigen-equation against the oracle") {
    Rng rng(5);
    const auto r = check_stabilizer_eigen({3, 5, 7}, 1, 5, 20, rng);
    INFO(r.detail);
    CHECK(r.pass);
}

TEST_CASE("measurement basis names") {
    CHECK(to_string(parse_measurement_basis("X2Z", 5)) == "X^2Z");
    CHECK(to_string(parse_measurement_basis("X^2Z", 5)) == "X^2Z");
    CHECK(parse_measurement_basis("Z", 5).kind == MeasurementBasis::Kind::Z);
    CHECK(local_basis_name(FieldElement(1, 3), FieldElement(2, 3)) == "XZ^2");
    CHECK(local_basis_name(FieldElement(0, 3), FieldElement(0, 3)) == "I");
    CHECK_THROWS(parse_measurement_basis("Y", 5));
}
