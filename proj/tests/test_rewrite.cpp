#include <doctest.h>

#include "qss/errors.hpp"
#include "qss/graph.hpp"
#include "qss/oracle.hpp"
#include "qss/rewrite.hpp"
#include "qss/schemes.hpp"
#include "qss/verify.hpp"

#include <algorithm>

using namespace qss;

namespace {
const std::string kFixtures = QSS_FIXTURE_DIR;

LabelledGraph twothree_cc(std::uint32_t d, std::int64_t s) {
    auto g = make_scheme("twothree", d).players;
    g.set_z(1, FieldElement(2 * s, d));
    g.set_z(2, FieldElement(s, d));
    return g;
}
}

TEST_CASE("oracle: measurement rules reproduce the post-measurement state") {
    Rng rng(17);
    const auto r = check_measurement_rules({3, 5}, 4, 15, rng);
    INFO(r.detail);
    CHECK(r.pass);
}

TEST_CASE("oracle: relabelling leaves the state unchanged") {
    Rng rng(19);
    const auto r = check_relabelling({3, 5, 7}, 5, 15, rng);
    INFO(r.detail);
    CHECK(r.pass);
}

TEST_CASE("oracle: access witnesses are deterministic and denials are s-independent") {
    Rng rng(23);
    auto a = check_access_soundness({3, 5}, 80, rng);
    INFO(a.detail);
    CHECK(a.pass);
    auto b = check_denial_soundness({3, 5}, 80, rng);
    INFO(b.detail);
    CHECK(b.pass);
}

TEST_CASE("stabilizer powers on the (2,3) graph") {
    const std::uint32_t d = 5;
    const std::int64_t s = 2;
    const auto g = twothree_cc(d, s);
    auto a = apply_stabilizer_power(g, 0, FieldElement(-2 * s, d));
    CHECK(a.label(0).x == FieldElement(-2 * s, d));
    CHECK(a.z_labels() == make_vector({0, 0, -s}, d));
    auto b = apply_stabilizer_power(g, 0, FieldElement(-s, d));
    CHECK(b.label(0).x == FieldElement(-s, d));
    CHECK(b.z_labels() == make_vector({0, s, 0}, d));
    CHECK(apply_stabilizer_power(g, 1, FieldElement::zero(d)) == g);
}

TEST_CASE("shuffle") {
    const std::uint32_t d = 5;
    SUBCASE("weight-2 cycle") {
        const auto g = shuffle(load_graph_file(kFixtures + "/shuffle_square_d5.graph"), 0, 1);
        CHECK(g.z_labels() == make_vector({0, 0, 2, 0}, d));
        CHECK(g.x_labels() == make_vector({0, 1, 0, 0}, d));
        CHECK(check_square_shuffle().pass);
    }
    SUBCASE("zero label is a no-op") {
        const auto g = make_scheme("ring35", d).players;
        CHECK(shuffle(g, 0, 1) == g);
    }
    SUBCASE("tree secret moves to player 3") {
        auto g = make_scheme("tree", d, 4).players;
        g.set_z(0, FieldElement(3, d));
        const auto h = shuffle(g, 0, 2);
        CHECK(h.z_labels() == make_vector({0, 0, 0, 0}, d));
        CHECK(h.x_labels() == make_vector({0, 0, -3, 0}, d));
    }
    SUBCASE("non-neighbours are rejected") {
        CHECK_THROWS_AS(shuffle(shuffle_square_fixture(), 0, 2), DomainError);
    }
    Rng rng(29);
    CHECK(check_shuffle_is_stabilizer_power({3, 5, 7}, 60, rng).pass);
}

TEST_CASE("square measurement: oracle decides the new edge") {
    const std::uint32_t d = 5;
    const auto golden = load_graph_file(kFixtures + "/measured_square_reduced_d5.graph");
    const auto r = check_square_measurement(&golden);
    INFO(r.detail);
    CHECK(r.pass);

    const auto arb = arbitrate_edge(measured_square_fixture(), 1, FieldElement(2, d), FieldElement(2, d), 2, 3);
    CHECK(arb.matching_weights == std::vector<std::uint32_t>{3});
    CHECK(arb.symbolic_matches);
    const auto& r2 = arb.symbolic;
    CHECK(r2.label(r2.index_of(2)) == VertexLabel{FieldElement(0, d), FieldElement(0, d), FieldElement(3, d)});
    CHECK(r2.label(r2.index_of(4)) == VertexLabel{FieldElement(1, d), FieldElement(0, d), FieldElement(0, d)});
}

TEST_CASE("dealer measurement on the extended tree") {
    const std::uint32_t d = 5;
    const auto ext = extended_graph(make_scheme("tree", d, 3));
    const auto r = measure_symbolic(ext, 0, MeasurementBasis::xm_z(FieldElement(3, d)), FieldElement(4, d)).reduced;
    CHECK(r.ids() == std::vector<int>{1, 2, 3});
    // z_1 = s + m A(A + 1)/2 with A = 1
    CHECK(r.z_labels() == make_vector({4 + 3, 0, 0}, d));
    CHECK(r.m_labels() == make_vector({3, 0, 0}, d));
    CHECK(r.adjacency() == make_scheme("tree", d, 3).players.adjacency());
}

TEST_CASE("Z measurement with outcome 0 on a leaf only drops the edge") {
    const std::uint32_t d = 3;
    auto g = make_scheme("tree", d, 3).players;
    g.set_z(0, FieldElement(1, d));
    const auto r = measure_symbolic(g, 2, MeasurementBasis::z_basis(d), FieldElement::zero(d)).reduced;
    CHECK(r.z_labels() == make_vector({1, 0}, d));
    CHECK(r.weight(0, 1) == FieldElement::one(d));
}

TEST_CASE("measurement preconditions") {
    const std::uint32_t d = 3;
    CHECK_THROWS_AS(measure_symbolic(LabelledGraph(d, 2), 0, MeasurementBasis::z_basis(d), FieldElement::zero(d)),
                    DomainError);
    auto g = make_scheme("tree", d, 2).players;
    g.set_x(0, FieldElement::one(d));
    CHECK_THROWS_AS(measure_symbolic(g, 0, MeasurementBasis::z_basis(d), FieldElement::zero(d)), DomainError);
    // S label c with 1 - c m = 0 turns X^m Z into a pure X power
    auto h = make_scheme("tree", d, 2).players;
    h.set_m(0, FieldElement(1, d));
    CHECK_THROWS_AS(measure_symbolic(h, 0, MeasurementBasis::xm_z(FieldElement(1, d)), FieldElement::zero(d)),
                    DomainError);
    CHECK_FALSE(effective_bare_measurement(FieldElement(1, d), MeasurementBasis::xm_z(FieldElement(1, d)),
                                           FieldElement::zero(d)));
}

TEST_CASE("access weights") {
    const std::uint32_t d = 5;
    // w must vanish on every column outside the subset and read the secret with coefficient 1
    auto valid = [](const LabelledGraph& g, const std::vector<std::size_t>& subset, const FieldVector& dir,
                    const FieldVector& w) {
        for (std::size_t j = 0; j < g.size(); ++j) {
            const bool inside = std::find(subset.begin(), subset.end(), j) != subset.end();
            if (!inside && !w[j].is_zero()) return false;
            if (inside) continue;
            FieldElement col = FieldElement::zero(g.modulus());
            for (std::size_t i = 0; i < g.size(); ++i) col += w[i] * g.weight(i, j);
            if (!col.is_zero()) return false;
        }
        return dot(w, dir) == FieldElement::one(g.modulus());
    };

    const auto dir23 = make_vector({0, 2, 1}, d);
    const auto g = twothree_cc(d, 3);
    auto w = access_weights(g, {1, 2}, dir23);
    REQUIRE(w);
    CHECK(valid(g, {1, 2}, dir23, *w));
    CHECK(*w == make_vector({0, 1, -1}, d));
    // -sum w_i z_i = -(2s - s)
    CHECK(eigenvalue_exponent(g, *w) == FieldElement(-3, d));

    const auto ring = make_scheme("ring35", d).players;
    const auto ones = make_vector({1, 1, 1, 1, 1}, d);
    auto wr = access_weights(ring, {0, 1, 3}, ones);
    REQUIRE(wr);
    CHECK(*wr == make_vector({1, 1, 0, -1, 0}, d));

    const auto star = make_scheme("tree", d, 4).players;
    const auto e0 = make_vector({1, 0, 0, 0}, d);
    auto wc = access_weights(star, {0, 1, 2, 3}, e0);
    REQUIRE(wc);
    CHECK(valid(star, {0, 1, 2, 3}, e0, *wc));
    CHECK_FALSE(access_weights(star, {1, 2, 3}, e0));

    CHECK_FALSE(access_weights(make_scheme("ring34", d).players, {0, 2}, make_vector({1, 1, 1, 1}, d)));
}

TEST_CASE("denial certificates") {
    const std::uint32_t d = 5;
    const auto tree = make_scheme("tree", d, 3).players;
    auto c = denial_certificate(tree, {1, 2}, make_vector({1, 0, 0}, d));
    REQUIRE(c);
    CHECK(c->empty());
    CHECK(to_string(*c) == "(none)");

    auto c1 = denial_certificate(make_scheme("twothree", d).players, {0}, make_vector({0, 2, 1}, d));
    REQUIRE(c1);
    CHECK(c1->empty());

    const auto ring = make_scheme("ring34", d).players;
    const auto dir = make_vector({1, 1, 1, 1}, d);
    auto c2 = denial_certificate(ring, {0, 2}, dir);
    REQUIRE(c2);
    CHECK(c2->size() == 1);
    const auto after = apply_certificate(ring, dir, *c2);
    CHECK(after.label(0).z.is_zero());
    CHECK(after.label(2).z.is_zero());
    CHECK(after.label(0).x.is_zero());
    CHECK(after.label(2).x.is_zero());

    CHECK_FALSE(denial_certificate(ring, {0, 1, 2}, dir));
}
