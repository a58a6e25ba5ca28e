#include <doctest.h>

#include "qss/errors.hpp"
#include "qss/graph.hpp"
#include "qss/oracle.hpp"
#include "qss/verify.hpp"

#include <string>

using namespace qss;

namespace {
const std::string kFixtures = QSS_FIXTURE_DIR;
}

TEST_CASE("from_adjacency validates") {
    const std::uint32_t d = 5;
    FieldMatrix a(2, 2, d);
    a(0, 1) = FieldElement(2, d);
    CHECK_THROWS_AS(LabelledGraph::from_adjacency(d, a), DomainError);
    a(1, 0) = FieldElement(2, d);
    CHECK(LabelledGraph::from_adjacency(d, a).weight(1, 0) == FieldElement(2, d));
    a(0, 0) = FieldElement(1, d);
    CHECK_THROWS_AS(LabelledGraph::from_adjacency(d, a), DomainError);
    CHECK_THROWS_AS(LabelledGraph::from_adjacency(3, FieldMatrix(2, 2, 5)), ModulusError);

    const auto single = LabelledGraph::from_adjacency(3, FieldMatrix(1, 1, 3));
    CHECK(single.size() == 1);
    CHECK(single.neighbours(0).empty());
}

TEST_CASE("five-vertex d=7 fixture round-trips") {
    const auto g = load_graph_file(kFixtures + "/five_vertex_d7.graph");
    CHECK(g.modulus() == 7);
    CHECK(g.size() == 5);
    const auto again = parse_graph_string(format_graph(g));
    CHECK(again == g);
    CHECK(LabelledGraph::from_adjacency(7, g.adjacency()) == g);
}

TEST_CASE("square fixtures match their builders") {
    CHECK(load_graph_file(kFixtures + "/measured_square_d5.graph") == measured_square_fixture());
    CHECK(load_graph_file(kFixtures + "/shuffle_square_d5.graph") == shuffle_square_fixture());
}

TEST_CASE("parse errors carry line numbers") {
    auto line_of = [](const std::string& text) -> std::size_t {
        try {
            parse_graph_string(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 999;
    };
    CHECK(line_of("d 5\nn 2\nedge 1 2 1\nedge 2 1 3\n") == 4);
    CHECK(line_of("d 4\nn 2\n") == 1);
    CHECK(line_of("d 5\nn 2\n# c\nedge 1 3 1\n") == 4);
    CHECK(line_of("d 5\nn 2\nlabel 1 1 x 0\n") == 3);
    CHECK(line_of("d 5\nn 2\nbogus\n") == 3);
    CHECK(line_of("n 2\n") == 0);
    CHECK_THROWS_AS(load_graph_file(kFixtures + "/missing.graph"), ParseError);
}

TEST_CASE("vertex removal keeps ids") {
    const auto g = measured_square_fixture().without_vertex(0);
    CHECK(g.ids() == std::vector<int>{2, 3, 4});
    CHECK(g.index_of(4) == 2);
    CHECK_THROWS_AS(g.index_of(1), DomainError);
}

TEST_CASE("graph states by construction") {
    const auto s = build_graph_state(LabelledGraph(5, 1));
    for (std::size_t k = 0; k < 5; ++k) CHECK(std::abs(s[k] - Amplitude(1 / std::sqrt(5.0), 0)) < 1e-12);
    CHECK(build_graph_state(load_graph_file(kFixtures + "/five_vertex_d7.graph")).dim() == 16807);
}

TEST_CASE("pretty print lists labels by id") {
    const auto text = pretty_print(shuffle_square_fixture());
    CHECK(text.find("z=(3,0,0,0) x=(0,0,0,0) m=(0,0,0,0)") != std::string::npos);
}
