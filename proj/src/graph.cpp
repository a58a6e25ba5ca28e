#include "qss/graph.hpp"

#include "qss/errors.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <utility>

namespace qss {

LabelledGraph::LabelledGraph(std::uint32_t d, std::size_t n)
    : d_(d), adj_(n, n, d), labels_(n, VertexLabel::zero(d)), ids_(n) {
    for (std::size_t i = 0; i < n; ++i) ids_[i] = static_cast<int>(i + 1);
}

LabelledGraph LabelledGraph::from_adjacency(std::uint32_t d, const FieldMatrix& adjacency,
                                            std::vector<VertexLabel> labels,
                                            std::vector<int> ids) {
    require_odd_prime(d);
    if (adjacency.rows() != adjacency.cols()) throw DomainError("adjacency matrix must be square");
    if (adjacency.modulus() != d) throw ModulusError("adjacency modulus does not match d");
    const std::size_t n = adjacency.rows();
    for (std::size_t i = 0; i < n; ++i) {
        if (!adjacency(i, i).is_zero()) {
            throw DomainError("adjacency diagonal must be zero (vertex " + std::to_string(i + 1) + ")");
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            if (adjacency(i, j) != adjacency(j, i)) {
                throw DomainError("adjacency matrix is not symmetric at (" + std::to_string(i + 1) +
                                  "," + std::to_string(j + 1) + ")");
            }
        }
    }

    LabelledGraph g(d, n);
    g.adj_ = adjacency;
    if (!labels.empty()) {
        if (labels.size() != n) throw DomainError("label count does not match vertex count");
        for (const auto& l : labels) {
            if (l.z.modulus() != d || l.x.modulus() != d || l.m.modulus() != d) {
                throw ModulusError("label modulus does not match d");
            }
        }
        g.labels_ = std::move(labels);
    }
    if (!ids.empty()) {
        if (ids.size() != n) throw DomainError("id count does not match vertex count");
        std::set<int> seen(ids.begin(), ids.end());
        if (seen.size() != ids.size()) throw DomainError("vertex ids must be distinct");
        g.ids_ = std::move(ids);
    }
    return g;
}

void LabelledGraph::require_vertex(std::size_t i) const {
    if (i >= size()) {
        throw DomainError("vertex index " + std::to_string(i) + " out of range (n = " +
                          std::to_string(size()) + ")");
    }
}

const FieldElement& LabelledGraph::weight(std::size_t i, std::size_t j) const {
    require_vertex(i);
    require_vertex(j);
    return adj_(i, j);
}

void LabelledGraph::set_weight(std::size_t i, std::size_t j, const FieldElement& w) {
    require_vertex(i);
    require_vertex(j);
    if (w.modulus() != d_) throw ModulusError("edge weight modulus does not match d");
    if (i == j) {
        if (!w.is_zero()) throw DomainError("self loops are not allowed");
        return;
    }
    adj_(i, j) = w;
    adj_(j, i) = w;
}

FieldVector LabelledGraph::row(std::size_t i) const {
    require_vertex(i);
    FieldVector r;
    r.reserve(size());
    for (std::size_t j = 0; j < size(); ++j) r.push_back(adj_(i, j));
    return r;
}

std::vector<std::size_t> LabelledGraph::neighbours(std::size_t i) const {
    require_vertex(i);
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < size(); ++j) {
        if (!adj_(i, j).is_zero()) out.push_back(j);
    }
    return out;
}

const VertexLabel& LabelledGraph::label(std::size_t i) const {
    require_vertex(i);
    return labels_[i];
}

void LabelledGraph::set_label(std::size_t i, const VertexLabel& l) {
    require_vertex(i);
    if (l.z.modulus() != d_ || l.x.modulus() != d_ || l.m.modulus() != d_) {
        throw ModulusError("label modulus does not match d");
    }
    labels_[i] = l;
}

void LabelledGraph::set_z(std::size_t i, const FieldElement& z) {
    VertexLabel l = label(i);
    l.z = z;
    set_label(i, l);
}

void LabelledGraph::set_x(std::size_t i, const FieldElement& x) {
    VertexLabel l = label(i);
    l.x = x;
    set_label(i, l);
}

void LabelledGraph::set_m(std::size_t i, const FieldElement& m) {
    VertexLabel l = label(i);
    l.m = m;
    set_label(i, l);
}

FieldVector LabelledGraph::z_labels() const {
    FieldVector v;
    for (const auto& l : labels_) v.push_back(l.z);
    return v;
}

FieldVector LabelledGraph::x_labels() const {
    FieldVector v;
    for (const auto& l : labels_) v.push_back(l.x);
    return v;
}

FieldVector LabelledGraph::m_labels() const {
    FieldVector v;
    for (const auto& l : labels_) v.push_back(l.m);
    return v;
}

bool LabelledGraph::is_encoded() const {
    return std::all_of(labels_.begin(), labels_.end(), [](const VertexLabel& l) { return l.x.is_zero(); });
}

int LabelledGraph::id(std::size_t i) const {
    require_vertex(i);
    return ids_[i];
}

std::size_t LabelledGraph::index_of(int id) const {
    auto it = std::find(ids_.begin(), ids_.end(), id);
    if (it == ids_.end()) throw DomainError("no vertex with id " + std::to_string(id));
    return static_cast<std::size_t>(it - ids_.begin());
}

bool LabelledGraph::has_id(int id) const {
    return std::find(ids_.begin(), ids_.end(), id) != ids_.end();
}

LabelledGraph LabelledGraph::without_vertex(std::size_t i) const {
    require_vertex(i);
    const std::size_t n = size();
    LabelledGraph out(d_, n - 1);
    for (std::size_t a = 0, ra = 0; a < n; ++a) {
        if (a == i) continue;
        for (std::size_t b = 0, rb = 0; b < n; ++b) {
            if (b == i) continue;
            out.adj_(ra, rb) = adj_(a, b);
            ++rb;
        }
        out.labels_[ra] = labels_[a];
        out.ids_[ra] = ids_[a];
        ++ra;
    }
    return out;
}

namespace {

std::int64_t parse_int(const std::string& tok, std::size_t line) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(tok, &used);
    } catch (const std::exception&) {
        throw ParseError(line, "expected an integer, got '" + tok + "'");
    }
    if (used != tok.size()) throw ParseError(line, "expected an integer, got '" + tok + "'");
    return v;
}

} // namespace

LabelledGraph parse_graph(std::istream& in) {
    struct EdgeLine {
        std::size_t line;
        std::int64_t i, j, w;
    };
    struct LabelLine {
        std::size_t line;
        std::int64_t i, z, x, m;
    };

    std::int64_t d = -1, n = -1;
    std::size_t d_line = 0, n_line = 0;
    std::vector<EdgeLine> edges;
    std::vector<LabelLine> labels;

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream ls(raw);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;

        const std::string& kw = tok[0];
        auto want = [&](std::size_t count) {
            if (tok.size() != count + 1) {
                throw ParseError(line_no, "'" + kw + "' expects " + std::to_string(count) + " argument(s)");
            }
        };
        if (kw == "d") {
            want(1);
            if (d != -1) throw ParseError(line_no, "duplicate 'd' line");
            d = parse_int(tok[1], line_no);
            d_line = line_no;
        } else if (kw == "n") {
            want(1);
            if (n != -1) throw ParseError(line_no, "duplicate 'n' line");
            n = parse_int(tok[1], line_no);
            n_line = line_no;
        } else if (kw == "edge") {
            want(3);
            edges.push_back({line_no, parse_int(tok[1], line_no), parse_int(tok[2], line_no),
                             parse_int(tok[3], line_no)});
        } else if (kw == "label") {
            want(4);
            labels.push_back({line_no, parse_int(tok[1], line_no), parse_int(tok[2], line_no),
                              parse_int(tok[3], line_no), parse_int(tok[4], line_no)});
        } else {
            throw ParseError(line_no, "unknown keyword '" + kw + "'");
        }
    }

    if (d == -1) throw ParseError(0, "missing 'd' line");
    if (n == -1) throw ParseError(0, "missing 'n' line");
    if (d < 3 || d > static_cast<std::int64_t>(kMaxModulus) || !is_prime(static_cast<std::uint32_t>(d))) {
        throw ParseError(d_line, "d must be an odd prime");
    }
    if (n < 1) throw ParseError(n_line, "n must be positive");

    const auto dm = static_cast<std::uint32_t>(d);
    LabelledGraph g(dm, static_cast<std::size_t>(n));
    std::set<std::pair<std::int64_t, std::int64_t>> seen;
    auto vertex = [&](std::int64_t v, std::size_t line) {
        if (v < 1 || v > n) throw ParseError(line, "vertex " + std::to_string(v) + " out of range 1.." + std::to_string(n));
        return static_cast<std::size_t>(v - 1);
    };
    for (const auto& e : edges) {
        const auto i = vertex(e.i, e.line);
        const auto j = vertex(e.j, e.line);
        if (i == j) throw ParseError(e.line, "self loop on vertex " + std::to_string(e.i));
        if (!seen.insert(std::minmax(e.i, e.j)).second) {
            throw ParseError(e.line, "duplicate edge " + std::to_string(e.i) + "-" + std::to_string(e.j));
        }
        g.set_weight(i, j, FieldElement(e.w, dm));
    }
    std::set<std::int64_t> labelled;
    for (const auto& l : labels) {
        const auto i = vertex(l.i, l.line);
        if (!labelled.insert(l.i).second) throw ParseError(l.line, "duplicate label for vertex " + std::to_string(l.i));
        g.set_label(i, {FieldElement(l.z, dm), FieldElement(l.x, dm), FieldElement(l.m, dm)});
    }
    return g;
}

LabelledGraph parse_graph_string(const std::string& text) {
    std::istringstream in(text);
    return parse_graph(in);
}

LabelledGraph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open graph file '" + path + "'");
    return parse_graph(in);
}

std::string format_graph(const LabelledGraph& g) {
    std::ostringstream os;
    os << "d " << g.modulus() << "\n";
    os << "n " << g.size() << "\n";
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = i + 1; j < g.size(); ++j) {
            if (!g.weight(i, j).is_zero()) os << "edge " << i + 1 << " " << j + 1 << " " << g.weight(i, j) << "\n";
        }
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto& l = g.label(i);
        if (l.z.is_zero() && l.x.is_zero() && l.m.is_zero()) continue;
        os << "label " << i + 1 << " " << l.z << " " << l.x << " " << l.m << "\n";
    }
    return os.str();
}

std::string pretty_print(const LabelledGraph& g) {
    std::ostringstream os;
    os << "d=" << g.modulus() << " n=" << g.size() << "\n";
    os << "adjacency:\n";
    os << "     ";
    for (std::size_t j = 0; j < g.size(); ++j) os << std::setw(4) << g.id(j);
    os << "\n";
    for (std::size_t i = 0; i < g.size(); ++i) {
        os << std::setw(4) << g.id(i) << " ";
        for (std::size_t j = 0; j < g.size(); ++j) os << std::setw(4) << g.weight(i, j);
        os << "\n";
    }
    os << "labels (z,x,m):\n";
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto& l = g.label(i);
        os << std::setw(4) << g.id(i) << " (" << l.z << "," << l.x << "," << l.m << ")\n";
    }
    auto vec = [&](const FieldVector& v) {
        std::string s = "(";
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i].value());
        return s + ")";
    };
    os << "z=" << vec(g.z_labels()) << " x=" << vec(g.x_labels()) << " m=" << vec(g.m_labels()) << "\n";
    return os.str();
}

} // namespace qss
