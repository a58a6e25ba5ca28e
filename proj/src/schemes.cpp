#include "qss/schemes.hpp"

#include "qss/errors.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace qss {

std::string to_string(SchemeKind kind) {
    switch (kind) {
    case SchemeKind::CC: return "cc";
    case SchemeKind::CQ: return "cq";
    case SchemeKind::QQ: return "qq";
    }
    return "?";
}

SchemeKind parse_scheme_kind(const std::string& text) {
    if (text == "cc") return SchemeKind::CC;
    if (text == "cq") return SchemeKind::CQ;
    if (text == "qq") return SchemeKind::QQ;
    throw DomainError("unknown protocol kind '" + text + "' (expected cc, cq or qq)");
}

bool Scheme::supports(SchemeKind kind) const {
    // No public-channel or quantum-secret variant is defined on the 4-ring.
    return kind == SchemeKind::CC || name != "ring34";
}

namespace {

LabelledGraph ring(std::uint32_t d, std::size_t n) {
    LabelledGraph g(d, n);
    const FieldElement one = FieldElement::one(d);
    for (std::size_t i = 0; i < n; ++i) g.set_weight(i, (i + 1) % n, one);
    return g;
}

LabelledGraph star(std::uint32_t d, std::size_t n) {
    LabelledGraph g(d, n);
    for (std::size_t i = 1; i < n; ++i) g.set_weight(0, i, FieldElement::one(d));
    return g;
}

} // namespace

Scheme make_scheme(const std::string& name, std::uint32_t d, std::size_t n) {
    require_odd_prime(d);
    Scheme s{name, d, 0, LabelledGraph(d, 0), {}};
    if (name == "tree") {
        if (n < 2) throw DomainError("tree scheme needs at least 2 players");
        s.players = star(d, n);
        s.threshold = n;
        s.encoding = zero_vector(n, d);
        s.encoding[0] = FieldElement::one(d);
    } else if (name == "twothree") {
        // Same star as the 3-tree; only the encoding differs.
        s.players = star(d, 3);
        s.threshold = 2;
        s.encoding = make_vector({0, 2, 1}, d);
    } else if (name == "ring34") {
        s.players = ring(d, 4);
        s.threshold = 3;
        s.encoding = make_vector({1, 1, 1, 1}, d);
    } else if (name == "ring35") {
        s.players = ring(d, 5);
        s.threshold = 3;
        s.encoding = make_vector({1, 1, 1, 1, 1}, d);
    } else {
        throw DomainError("unknown scheme '" + name + "' (expected tree, twothree, ring34 or ring35)");
    }
    return s;
}

LabelledGraph extended_graph(const Scheme& scheme) {
    const std::size_t n = scheme.player_count();
    const std::uint32_t d = scheme.d;
    FieldMatrix adj(n + 1, n + 1, d);
    for (std::size_t i = 0; i < n; ++i) {
        adj(0, i + 1) = adj(i + 1, 0) = scheme.encoding[i];
        for (std::size_t j = 0; j < n; ++j) adj(i + 1, j + 1) = scheme.players.weight(i, j);
    }
    std::vector<int> ids(n + 1);
    ids[0] = kDealerId;
    for (std::size_t i = 0; i < n; ++i) ids[i + 1] = scheme.players.id(i);
    return LabelledGraph::from_adjacency(d, adj, {}, ids);
}

std::vector<std::size_t> indices_of(const LabelledGraph& g, const std::vector<int>& ids) {
    std::set<int> seen;
    std::vector<std::size_t> out;
    out.reserve(ids.size());
    for (int id : ids) {
        if (!seen.insert(id).second) throw DomainError("vertex id " + std::to_string(id) + " listed twice");
        out.push_back(g.index_of(id));
    }
    return out;
}

std::vector<int> parse_id_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(item, &used);
        } catch (const std::exception&) {
            throw DomainError("malformed id list '" + text + "'");
        }
        if (used != item.size()) throw DomainError("malformed id list '" + text + "'");
        out.push_back(v);
    }
    if (out.empty()) throw DomainError("empty id list");
    return out;
}

std::string format_id_list(const std::vector<int>& ids) {
    std::string out;
    for (std::size_t k = 0; k < ids.size(); ++k) {
        if (k) out += ',';
        out += std::to_string(ids[k]);
    }
    return out;
}

std::vector<std::vector<int>> all_player_subsets(std::size_t n) {
    std::vector<std::vector<int>> out;
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        std::vector<int> sub;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::size_t{1} << i)) sub.push_back(static_cast<int>(i + 1));
        out.push_back(std::move(sub));
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
    return out;
}

std::optional<FieldVector> prescribed_weights(const Scheme& scheme, const std::vector<int>& subset,
                                              const FieldElement& t) {
    const std::uint32_t d = scheme.d;
    std::vector<int> sorted = subset;
    std::sort(sorted.begin(), sorted.end());
    const FieldElement one = FieldElement::one(d);
    const FieldElement two = one + one;

    if (scheme.name == "twothree") {
        FieldVector w = zero_vector(3, d);
        if (sorted == std::vector<int>{1, 2}) {
            w[0] = -(two * t);
            w[1] = one;
        } else if (sorted == std::vector<int>{1, 3}) {
            w[0] = -(two * t);
            w[2] = one;
        } else if (sorted == std::vector<int>{2, 3}) {
            w[1] = one;
            w[2] = -one;
        } else {
            return std::nullopt;
        }
        return w;
    }

    if (scheme.name == "ring35" && sorted.size() == 3) {
        // Try every rotation r: {1,2,3}+r and {1,3,4}+r.
        for (int r = 0; r < 5; ++r) {
            auto rot = [r](int v) { return (v - 1 + r) % 5 + 1; };
            std::vector<int> consecutive{rot(1), rot(2), rot(3)};
            std::vector<int> split{rot(1), rot(3), rot(4)};
            FieldVector w = zero_vector(5, d);
            auto at = [&](int id) -> FieldElement& { return w[static_cast<std::size_t>(id - 1)]; };
            std::vector<int> cs = consecutive, ss = split;
            std::sort(cs.begin(), cs.end());
            std::sort(ss.begin(), ss.end());
            if (cs == sorted) {
                at(rot(1)) = -t;
                at(rot(2)) = one + two * t;
                at(rot(3)) = -t;
                return w;
            }
            if (ss == sorted) {
                at(rot(1)) = -(one + two * t);
                at(rot(3)) = one + t;
                at(rot(4)) = one + t;
                return w;
            }
        }
    }
    return std::nullopt;
}

} // namespace qss
