#include "qss/rewrite.hpp"

#include "qss/errors.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

namespace qss {

LabelledGraph apply_stabilizer_power(const LabelledGraph& g, std::size_t i, const FieldElement& k) {
    g.require_vertex(i);
    if (k.modulus() != g.modulus()) throw ModulusError("apply_stabilizer_power: modulus mismatch");
    LabelledGraph out = g;
    if (k.is_zero()) return out;
    out.set_x(i, g.label(i).x + k);
    for (std::size_t j = 0; j < g.size(); ++j) {
        const FieldElement& a = g.weight(i, j);
        if (!a.is_zero()) out.set_z(j, g.label(j).z + k * a);
    }
    return out;
}

LabelledGraph shuffle(const LabelledGraph& g, std::size_t i, std::size_t j) {
    g.require_vertex(i);
    g.require_vertex(j);
    const FieldElement& a = g.weight(i, j);
    if (a.is_zero()) {
        throw DomainError("shuffle: vertices " + std::to_string(g.id(i)) + " and " + std::to_string(g.id(j)) +
                          " are not neighbours");
    }
    return apply_stabilizer_power(g, j, -(a.inv() * g.label(i).z));
}

std::optional<EffectiveMeasurement> effective_bare_measurement(const FieldElement& c, const MeasurementBasis& basis,
                                                               const FieldElement& s) {
    const std::uint32_t d = c.modulus();
    if (basis.m.modulus() != d || s.modulus() != d) throw ModulusError("effective_bare_measurement: modulus mismatch");
    if (c.is_zero()) return EffectiveMeasurement{basis, s};

    const FieldElement one = FieldElement::one(d);
    const FieldElement a = basis.x_exponent();
    // S^{-c} X^a Z S^c = w^{phi} X^a Z^{b'}
    const FieldElement phi = -(c * (a * (a - one)).half());
    const FieldElement b = one - c * a;
    if (b.is_zero()) return std::nullopt;
    if (a.is_zero()) return EffectiveMeasurement{MeasurementBasis::z_basis(d), s};
    // X^a Z^{b'} = w^{-a(b'-1)/2} (X^{a/b'} Z)^{b'}
    const FieldElement m_eff = a * b.inv();
    const FieldElement s_eff = (s - phi + (a * (b - one)).half()) * b.inv();
    return EffectiveMeasurement{MeasurementBasis::xm_z(m_eff), s_eff};
}

SymbolicMeasurementResult measure_symbolic(const LabelledGraph& g, std::size_t i, const MeasurementBasis& basis,
                                           const FieldElement& outcome) {
    g.require_vertex(i);
    const std::uint32_t d = g.modulus();
    if (outcome.modulus() != d || basis.m.modulus() != d) throw ModulusError("measure_symbolic: modulus mismatch");
    if (!g.is_encoded()) throw DomainError("measure_symbolic: graph must be encoded (all x labels zero)");
    const auto nbrs = g.neighbours(i);
    if (nbrs.empty()) {
        throw DomainError("measure_symbolic: vertex " + std::to_string(g.id(i)) +
                          " is isolated; use the dense oracle");
    }
    const auto eff = effective_bare_measurement(g.label(i).m, basis, outcome);
    if (!eff) {
        throw DomainError("measure_symbolic: observable conjugates to a pure X power on vertex " +
                          std::to_string(g.id(i)) + "; use the dense oracle");
    }

    const FieldElement m = eff->basis.kind == MeasurementBasis::Kind::Z ? FieldElement::zero(d) : eff->basis.m;
    const FieldElement s = eff->outcome;
    const FieldElement zi = g.label(i).z;
    LabelledGraph work = g;

    // M1
    for (std::size_t a = 0; a < nbrs.size(); ++a) {
        for (std::size_t b = a + 1; b < nbrs.size(); ++b) {
            const std::size_t j = nbrs[a], k = nbrs[b];
            work.set_weight(j, k, g.weight(j, k) + m * g.weight(i, j) * g.weight(i, k));
        }
    }
    // M2
    for (std::size_t j : nbrs) {
        const FieldElement aij = g.weight(i, j);
        const FieldElement one = FieldElement::one(d);
        VertexLabel l = g.label(j);
        l.z += aij * s + m * aij * zi + m * (aij * (aij + one)).half();
        l.m += m * aij * aij;
        work.set_label(j, l);
    }
    // M3
    return SymbolicMeasurementResult{work.without_vertex(i), outcome, basis, g.id(i)};
}

std::optional<FieldVector> access_weights(const LabelledGraph& g, const std::vector<std::size_t>& subset,
                                          const FieldVector& target) {
    const std::uint32_t d = g.modulus();
    const std::size_t n = g.size();
    if (subset.empty()) throw DomainError("access_weights: subset must be nonempty");
    if (target.size() != n) throw DomainError("access_weights: target length mismatch");
    if (!g.is_encoded()) throw DomainError("access_weights: graph must be encoded");
    std::vector<bool> inside(n, false);
    for (auto v : subset) {
        g.require_vertex(v);
        inside[v] = true;
    }

    std::vector<std::size_t> cols;
    for (std::size_t v = 0; v < n; ++v) {
        if (inside[v]) cols.push_back(v);
    }
    std::vector<std::size_t> outside_rows;
    for (std::size_t v = 0; v < n; ++v) {
        if (!inside[v]) outside_rows.push_back(v);
    }

    FieldMatrix m(outside_rows.size() + 1, cols.size(), d);
    FieldVector rhs = zero_vector(outside_rows.size() + 1, d);
    for (std::size_t r = 0; r < outside_rows.size(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) m(r, c) = g.weight(cols[c], outside_rows[r]);
    }
    for (std::size_t c = 0; c < cols.size(); ++c) m(outside_rows.size(), c) = target[cols[c]];
    rhs.back() = FieldElement::one(d);

    const auto sol = solve_linear(m, rhs);
    if (!sol) return std::nullopt;
    FieldVector w = zero_vector(n, d);
    for (std::size_t c = 0; c < cols.size(); ++c) w[cols[c]] = sol->particular[c];
    return w;
}

std::string to_string(const std::vector<ShuffleStep>& steps) {
    if (steps.empty()) return "(none)";
    std::ostringstream os;
    for (std::size_t k = 0; k < steps.size(); ++k) os << (k ? ", " : "") << steps[k].from << "->" << steps[k].to;
    return os.str();
}

namespace {

LabelledGraph coefficient_graph(const LabelledGraph& g, const FieldVector& secret_direction) {
    if (secret_direction.size() != g.size()) throw DomainError("secret direction length mismatch");
    LabelledGraph coeff = g;
    for (std::size_t i = 0; i < g.size(); ++i) {
        coeff.set_label(i, {secret_direction[i], FieldElement::zero(g.modulus()), g.label(i).m});
    }
    return coeff;
}

bool independent(const LabelledGraph& coeff, const std::vector<std::size_t>& subset) {
    return std::all_of(subset.begin(), subset.end(), [&](std::size_t v) {
        return coeff.label(v).z.is_zero() && coeff.label(v).x.is_zero();
    });
}

std::vector<std::uint32_t> key_of(const LabelledGraph& coeff) {
    std::vector<std::uint32_t> key;
    key.reserve(2 * coeff.size());
    for (std::size_t i = 0; i < coeff.size(); ++i) {
        key.push_back(coeff.label(i).z.value());
        key.push_back(coeff.label(i).x.value());
    }
    return key;
}

} // namespace

std::optional<std::vector<ShuffleStep>> denial_certificate(const LabelledGraph& g,
                                                           const std::vector<std::size_t>& subset,
                                                           const FieldVector& secret_direction, int max_depth) {
    for (auto v : subset) g.require_vertex(v);
    const int depth_limit = max_depth < 0 ? static_cast<int>(g.size()) : max_depth;

    struct Node {
        LabelledGraph coeff;
        std::vector<ShuffleStep> path;
    };
    std::deque<Node> queue;
    std::map<std::vector<std::uint32_t>, bool> seen;
    Node root{coefficient_graph(g, secret_direction), {}};
    seen[key_of(root.coeff)] = true;
    queue.push_back(std::move(root));

    while (!queue.empty()) {
        Node node = std::move(queue.front());
        queue.pop_front();
        if (independent(node.coeff, subset)) return node.path;
        if (static_cast<int>(node.path.size()) >= depth_limit) continue;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (node.coeff.label(i).z.is_zero()) continue;
            for (std::size_t j : g.neighbours(i)) {
                LabelledGraph next = shuffle(node.coeff, i, j);
                if (!seen.emplace(key_of(next), true).second) continue;
                auto path = node.path;
                path.push_back({g.id(i), g.id(j)});
                queue.push_back({std::move(next), std::move(path)});
            }
        }
    }
    return std::nullopt;
}

LabelledGraph apply_certificate(const LabelledGraph& g, const FieldVector& secret_direction,
                                const std::vector<ShuffleStep>& steps) {
    LabelledGraph coeff = coefficient_graph(g, secret_direction);
    for (const auto& st : steps) coeff = shuffle(coeff, g.index_of(st.from), g.index_of(st.to));
    return coeff;
}

} // namespace qss
