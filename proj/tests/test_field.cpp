#include <doctest.h>

#include "qss/errors.hpp"
#include "qss/field.hpp"
#include "qss/rng.hpp"
#include "qss/verify.hpp"

using namespace qss;

TEST_CASE("arithmetic matches modular reduction") {
    CHECK(FieldElement(3, 5) + FieldElement(4, 5) == FieldElement(2, 5));
    CHECK(FieldElement(0, 7) + FieldElement(5, 7) == FieldElement(5, 7));
    CHECK(FieldElement(1 + 4 + 4 + 6, 5).value() == 0);
    CHECK(FieldElement(2, 5) * FieldElement(3, 5) == FieldElement::one(5));
    CHECK(-FieldElement(3, 5) == FieldElement(2, 5));
    CHECK(FieldElement(2, 5) * FieldElement(4, 5) == FieldElement(3, 5));
    CHECK(FieldElement(-1, 5).value() == 4);
}

TEST_CASE("inverse and half") {
    CHECK(FieldElement(2, 5).inv() == FieldElement(3, 5));
    CHECK(FieldElement(1, 3).inv() == FieldElement(1, 3));
    CHECK(FieldElement(4, 7).inv() == FieldElement(2, 7));
    CHECK(FieldElement(4, 5).half() == FieldElement(2, 5));
    CHECK(FieldElement(2, 5).half() == FieldElement(1, 5));
    CHECK(FieldElement(0, 5).half().is_zero());
    CHECK_THROWS_AS(FieldElement::zero(5).inv(), DomainError);
    CHECK(check_field_inverses({3, 5, 7, 11}).pass);
}

TEST_CASE("moduli are validated") {
    CHECK_THROWS_AS(FieldElement(1, 2), DomainError);
    CHECK_THROWS_AS(FieldElement(1, 9), DomainError);
    CHECK_THROWS_AS(FieldElement(1, 3) + FieldElement(1, 5), ModulusError);
    CHECK(FieldElement(3, 5).centered() == -2);
}

TEST_CASE("solve_linear") {
    SUBCASE("identity system") {
        const auto v = make_vector({1, 4, 2}, 5);
        const auto sol = solve_linear(FieldMatrix::identity(3, 5), v);
        REQUIRE(sol);
        CHECK(sol->particular == v);
        CHECK(sol->nullspace.empty());
    }
    SUBCASE("5-ring access system for {1,2,4}") {
        // columns: w_1, w_2, w_4; rows: vertices 3 and 5 must see nothing, then w . z = 1
        const std::uint32_t d = 5;
        FieldMatrix m(3, 3, d);
        m(0, 1) = m(0, 2) = FieldElement::one(d);  // vertex 3 neighbours 2 and 4
        m(1, 0) = m(1, 2) = FieldElement::one(d);  // vertex 5 neighbours 1 and 4
        m(2, 0) = m(2, 1) = m(2, 2) = FieldElement::one(d);
        const auto sol = solve_linear(m, make_vector({0, 0, 1}, d));
        REQUIRE(sol);
        CHECK(sol->particular == make_vector({1, 1, -1}, d));
    }
    SUBCASE("4-ring, nonadjacent pair is inconsistent") {
        const std::uint32_t d = 5;
        FieldMatrix m(3, 2, d);
        m(0, 0) = m(0, 1) = FieldElement::one(d);
        m(1, 0) = m(1, 1) = FieldElement::one(d);
        m(2, 0) = m(2, 1) = FieldElement::one(d);
        CHECK_FALSE(solve_linear(m, make_vector({0, 0, 1}, d)));
    }
    SUBCASE("random systems against exhaustive search") {
        Rng rng(11);
        CHECK(check_solve_linear({3, 5, 7}, 150, rng).pass);
    }
}
