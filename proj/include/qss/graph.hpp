#pragma once

// Weighted qudit graphs with per-vertex (z, x, m) labels.
//
// A LabelledGraph stands for the state S^m X^x Z^z |G>, where |G> is the graph
// state built from weighted controlled-Z gates on uniform superpositions.
// Vertices are addressed by internal index 0..n-1; every vertex also carries a
// stable external id (players keep their id when other vertices are removed).

#include "qss/field.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qss {

struct VertexLabel {
    FieldElement z;
    FieldElement x;
    FieldElement m;

    static VertexLabel zero(std::uint32_t d) {
        return {FieldElement::zero(d), FieldElement::zero(d), FieldElement::zero(d)};
    }
    friend bool operator==(const VertexLabel&, const VertexLabel&) = default;
};

class LabelledGraph {
public:
    // n isolated vertices with ids 1..n and all labels zero.
    LabelledGraph(std::uint32_t d, std::size_t n);

    // Validates symmetry, zero diagonal and moduli. Empty `labels` means all
    // zero; empty `ids` means 1..n.
    static LabelledGraph from_adjacency(std::uint32_t d, const FieldMatrix& adjacency,
                                        std::vector<VertexLabel> labels = {},
                                        std::vector<int> ids = {});

    std::uint32_t modulus() const noexcept { return d_; }
    std::size_t size() const noexcept { return ids_.size(); }

    const FieldMatrix& adjacency() const noexcept { return adj_; }
    const FieldElement& weight(std::size_t i, std::size_t j) const;
    // Sets A_ij = A_ji = w. Throws on i == j with nonzero w.
    void set_weight(std::size_t i, std::size_t j, const FieldElement& w);
    FieldVector row(std::size_t i) const;
    std::vector<std::size_t> neighbours(std::size_t i) const;

    const VertexLabel& label(std::size_t i) const;
    void set_label(std::size_t i, const VertexLabel& l);
    void set_z(std::size_t i, const FieldElement& z);
    void set_x(std::size_t i, const FieldElement& x);
    void set_m(std::size_t i, const FieldElement& m);
    FieldVector z_labels() const;
    FieldVector x_labels() const;
    FieldVector m_labels() const;

    // True when every x label is zero.
    bool is_encoded() const;

    int id(std::size_t i) const;
    const std::vector<int>& ids() const noexcept { return ids_; }
    // Throws DomainError when no vertex has this id.
    std::size_t index_of(int id) const;
    bool has_id(int id) const;

    // Drops vertex i together with its edges; other vertices keep their ids.
    LabelledGraph without_vertex(std::size_t i) const;

    // Throws DomainError when i is out of range.
    void require_vertex(std::size_t i) const;

    friend bool operator==(const LabelledGraph&, const LabelledGraph&) = default;

private:
    std::uint32_t d_;
    FieldMatrix adj_;
    std::vector<VertexLabel> labels_;
    std::vector<int> ids_;
};

// Parses the line-oriented graph description:
//   # comment
//   d <prime>
//   n <count>
//   edge <i> <j> <w>        (1-indexed, each unordered pair at most once)
//   label <i> <z> <x> <m>   (unspecified labels are zero)
// Throws ParseError with the offending line number.
LabelledGraph parse_graph(std::istream& in);
LabelledGraph parse_graph_string(const std::string& text);
LabelledGraph load_graph_file(const std::string& path);

// Writes the same format back out (edges with i < j, labels only when nonzero).
// Vertex ids are written as their internal position + 1.
std::string format_graph(const LabelledGraph& g);

// Adjacency matrix plus a (z, x, m) table keyed by vertex id.
std::string pretty_print(const LabelledGraph& g);

} // namespace qss
