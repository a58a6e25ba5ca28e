#include "qss/oracle.hpp"

#include "qss/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace qss {

namespace {

std::atomic<KernelBackend> g_backend{KernelBackend::Parallel};

// Probabilities below this are treated as exactly zero.
constexpr double kZeroProbability = 1e-20;

bool use_parallel() { return g_backend.load(std::memory_order_relaxed) == KernelBackend::Parallel; }

std::size_t checked_dim(std::uint32_t d, std::size_t sites) {
    require_odd_prime(d);
    std::size_t dim = 1;
    for (std::size_t k = 0; k < sites; ++k) {
        dim *= d;
        if (dim > kMaxAmplitudes) {
            throw DomainError("dense state with " + std::to_string(sites) + " sites of dimension " +
                              std::to_string(d) + " exceeds the amplitude budget");
        }
    }
    return dim;
}

const std::vector<Amplitude>& omega_for(std::uint32_t d) {
    // One table per modulus; small and immutable once built.
    thread_local std::vector<std::pair<std::uint32_t, std::vector<Amplitude>>> cache;
    for (const auto& [m, table] : cache) {
        if (m == d) return table;
    }
    cache.emplace_back(d, kernels::omega_table(d));
    return cache.back().second;
}

Amplitude omega_pow(std::uint32_t d, std::int64_t k) {
    const std::int64_t r = ((k % static_cast<std::int64_t>(d)) + d) % d;
    return omega_for(d)[static_cast<std::size_t>(r)];
}

void require_site(const DenseState& s, std::size_t site) {
    if (site >= s.sites()) {
        throw DomainError("site " + std::to_string(site) + " out of range for a " + std::to_string(s.sites()) +
                          "-site state");
    }
}

std::vector<int> ids_without(const std::vector<int>& ids, std::initializer_list<std::size_t> drop) {
    std::vector<int> out;
    for (std::size_t k = 0; k < ids.size(); ++k) {
        if (std::find(drop.begin(), drop.end(), k) == drop.end()) out.push_back(ids[k]);
    }
    return out;
}

// Index in the full layout of the rest-index `rest` with the dropped sites'
// digits filled in; `dropped` must be sorted ascending.
std::size_t expand_index(const kernels::Layout& full, std::size_t rest, const std::vector<std::size_t>& dropped,
                         const std::vector<std::uint32_t>& digits) {
    std::size_t idx = 0;
    std::size_t k = 0;
    for (std::size_t s = 0; s < full.sites; ++s) {
        std::uint32_t dg;
        if (k < dropped.size() && dropped[k] == s) {
            dg = digits[k++];
        } else {
            dg = static_cast<std::uint32_t>(rest % full.d);
            rest /= full.d;
        }
        idx += dg * full.stride[s];
    }
    return idx;
}

std::vector<Amplitude> matmul(std::uint32_t d, const std::vector<Amplitude>& a, const std::vector<Amplitude>& b) {
    std::vector<Amplitude> c(static_cast<std::size_t>(d) * d);
    for (std::uint32_t r = 0; r < d; ++r) {
        for (std::uint32_t k = 0; k < d; ++k) {
            const Amplitude v = a[r * d + k];
            if (v == Amplitude{}) continue;
            for (std::uint32_t col = 0; col < d; ++col) c[r * d + col] += v * b[k * d + col];
        }
    }
    return c;
}

std::vector<Amplitude> identity_matrix(std::uint32_t d) {
    std::vector<Amplitude> m(static_cast<std::size_t>(d) * d);
    for (std::uint32_t j = 0; j < d; ++j) m[j * d + j] = 1.0;
    return m;
}

std::vector<Amplitude> base_gate(std::uint32_t d, LocalGate gate) {
    std::vector<Amplitude> m(static_cast<std::size_t>(d) * d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    switch (gate) {
    case LocalGate::X:
        for (std::uint32_t j = 0; j < d; ++j) m[((j + 1) % d) * d + j] = 1.0;
        break;
    case LocalGate::Z:
        for (std::uint32_t j = 0; j < d; ++j) m[j * d + j] = omega_pow(d, j);
        break;
    case LocalGate::S:
        for (std::uint32_t j = 0; j < d; ++j) {
            m[j * d + j] = omega_pow(d, static_cast<std::int64_t>(j) * (static_cast<std::int64_t>(j) - 1) / 2);
        }
        break;
    case LocalGate::U:
        for (std::uint32_t j = 0; j < d; ++j) {
            for (std::uint32_t k = 0; k < d; ++k) m[j * d + k] = omega_pow(d, static_cast<std::int64_t>(j) * k) * norm;
        }
        break;
    case LocalGate::Uinv:
        for (std::uint32_t j = 0; j < d; ++j) {
            for (std::uint32_t k = 0; k < d; ++k) m[j * d + k] = omega_pow(d, -static_cast<std::int64_t>(j) * k) * norm;
        }
        break;
    case LocalGate::R: {
        std::vector<Amplitude> s_inv(static_cast<std::size_t>(d) * d);
        for (std::uint32_t j = 0; j < d; ++j) {
            s_inv[j * d + j] = omega_pow(d, -static_cast<std::int64_t>(j) * (static_cast<std::int64_t>(j) - 1) / 2);
        }
        m = matmul(d, base_gate(d, LocalGate::Uinv), matmul(d, s_inv, base_gate(d, LocalGate::U)));
        break;
    }
    }
    return m;
}

DenseState with_amplitudes(const DenseState& like, std::vector<Amplitude> amps) {
    return DenseState(like.modulus(), like.ids(), std::move(amps));
}

// O^k |psi> for k = 0..d-1.
std::vector<DenseState> observable_orbit(const DenseState& s, const PauliOperator& o) {
    std::vector<DenseState> orbit;
    orbit.reserve(s.modulus());
    orbit.push_back(s);
    for (std::uint32_t k = 1; k < s.modulus(); ++k) orbit.push_back(apply_pauli(orbit.back(), o));
    return orbit;
}

// (1/d) sum_k w^{-sk} O^k |psi> from the orbit.
std::vector<Amplitude> projected_from_orbit(const std::vector<DenseState>& orbit, std::uint32_t s) {
    const std::uint32_t d = orbit.front().modulus();
    const std::size_t dim = orbit.front().dim();
    std::vector<Amplitude> acc(dim);
    for (std::uint32_t k = 0; k < d; ++k) {
        const Amplitude ph = omega_pow(d, -static_cast<std::int64_t>(s) * k) / static_cast<double>(d);
        const auto amps = orbit[k].amplitudes();
        for (std::size_t i = 0; i < dim; ++i) acc[i] += ph * amps[i];
    }
    return acc;
}

double squared_norm(std::span<const Amplitude> v) {
    double acc = 0.0;
    for (const auto& a : v) acc += std::norm(a);
    return acc;
}

void normalize_in_place(std::vector<Amplitude>& v, double prob) {
    if (prob <= kZeroProbability) {
        std::fill(v.begin(), v.end(), Amplitude{});
        return;
    }
    const double f = 1.0 / std::sqrt(prob);
    for (auto& a : v) a *= f;
}

// Index drawn from a discrete distribution; falls back to the last nonzero
// entry if rounding leaves the uniform draw past the cumulative sum.
std::size_t sample_index(const std::vector<double>& probs, Rng& rng) {
    const double u = rng.uniform();
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        if (probs[k] <= kZeroProbability) continue;
        acc += probs[k];
        last = k;
        if (u < acc) return k;
    }
    return last;
}

void require_same_shape(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.d != b.d || a.dim != b.dim) throw DomainError("density matrices have different dimensions");
}

} // namespace

KernelBackend kernel_backend() { return g_backend.load(); }
void set_kernel_backend(KernelBackend backend) { g_backend.store(backend); }

DenseState::DenseState(std::uint32_t d, std::vector<int> ids, std::vector<Amplitude> amplitudes)
    : layout_(d, ids.size()), ids_(std::move(ids)), amps_(std::move(amplitudes)) {
    checked_dim(d, ids_.size());
    if (amps_.size() != layout_.dim) {
        throw DomainError("amplitude vector has length " + std::to_string(amps_.size()) + ", expected " +
                          std::to_string(layout_.dim));
    }
    auto sorted = ids_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw DomainError("duplicate site id");
}

DenseState DenseState::basis(std::uint32_t d, std::vector<int> ids, const std::vector<std::uint32_t>& digits) {
    const std::size_t dim = checked_dim(d, ids.size());
    if (digits.size() != ids.size()) throw DomainError("basis state: one digit per site required");
    std::size_t idx = 0, stride = 1;
    for (auto dg : digits) {
        if (dg >= d) throw DomainError("basis state digit out of range");
        idx += dg * stride;
        stride *= d;
    }
    std::vector<Amplitude> amps(dim);
    amps[idx] = 1.0;
    return DenseState(d, std::move(ids), std::move(amps));
}

DenseState DenseState::single(std::uint32_t d, int id, std::vector<Amplitude> amplitudes) {
    return DenseState(d, {id}, std::move(amplitudes));
}

std::size_t DenseState::site_of(int id) const {
    const auto it = std::find(ids_.begin(), ids_.end(), id);
    if (it == ids_.end()) throw DomainError("no site with id " + std::to_string(id));
    return static_cast<std::size_t>(it - ids_.begin());
}

double DenseState::norm() const { return std::sqrt(squared_norm(amps_)); }

DenseState DenseState::normalized() const {
    const double n = norm();
    if (n <= 0.0) throw DomainError("cannot normalise the zero vector");
    return scaled(1.0 / n);
}

DenseState DenseState::scaled(Amplitude factor) const {
    auto amps = amps_;
    for (auto& a : amps) a *= factor;
    return DenseState(layout_.d, ids_, std::move(amps));
}

Amplitude DensityMatrix::trace() const {
    Amplitude t{};
    for (std::size_t k = 0; k < dim; ++k) t += (*this)(k, k);
    return t;
}

double DensityMatrix::purity() const {
    // Tr(rho^2) = sum |rho_rc|^2 for Hermitian rho.
    double acc = 0.0;
    for (const auto& e : entries) acc += std::norm(e);
    return acc;
}

DenseState tensor(const DenseState& a, const DenseState& b) {
    if (a.modulus() != b.modulus()) throw ModulusError("tensor: modulus mismatch");
    std::vector<int> ids = a.ids();
    ids.insert(ids.end(), b.ids().begin(), b.ids().end());
    checked_dim(a.modulus(), ids.size());
    std::vector<Amplitude> amps(a.dim() * b.dim());
    for (std::size_t ib = 0; ib < b.dim(); ++ib) {
        for (std::size_t ia = 0; ia < a.dim(); ++ia) amps[ia + ib * a.dim()] = a[ia] * b[ib];
    }
    return DenseState(a.modulus(), std::move(ids), std::move(amps));
}

DenseState build_graph_state(const LabelledGraph& g) {
    const std::uint32_t d = g.modulus();
    const std::size_t n = g.size();
    checked_dim(d, n);
    kernels::GraphData data;
    data.adjacency.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) data.adjacency[i * n + j] = g.weight(i, j).value();
        data.z.push_back(g.label(i).z.value());
        data.x.push_back(g.label(i).x.value());
        data.m.push_back(g.label(i).m.value());
    }
    const kernels::Layout layout(d, n);
    std::vector<Amplitude> amps(layout.dim);
    if (use_parallel()) {
        kernels::parallel::graph_state(amps, layout, data, omega_for(d));
    } else {
        kernels::serial::graph_state(amps, layout, data, omega_for(d));
    }
    return DenseState(d, g.ids(), std::move(amps));
}

std::vector<Amplitude> local_gate_matrix(std::uint32_t d, LocalGate gate, std::int64_t power) {
    require_odd_prime(d);
    // X, Z, S, R have order d; U and its inverse have order 4.
    const bool fourier = gate == LocalGate::U || gate == LocalGate::Uinv;
    const std::int64_t order = fourier ? 4 : d;
    std::int64_t k = ((power % order) + order) % order;
    const auto base = base_gate(d, gate);
    auto out = identity_matrix(d);
    for (; k > 0; --k) out = matmul(d, base, out);
    return out;
}

std::vector<Amplitude> local_pauli_matrix(const FieldElement& x, const FieldElement& z) {
    const std::uint32_t d = x.modulus();
    if (z.modulus() != d) throw ModulusError("local_pauli_matrix: modulus mismatch");
    std::vector<Amplitude> m(static_cast<std::size_t>(d) * d);
    for (std::uint32_t c = 0; c < d; ++c) {
        m[((c + x.value()) % d) * d + c] = omega_pow(d, static_cast<std::int64_t>(z.value()) * c);
    }
    return m;
}

DenseState apply_local_matrix(const DenseState& s, std::size_t site, std::span<const Amplitude> matrix) {
    require_site(s, site);
    const std::uint32_t d = s.modulus();
    if (matrix.size() != static_cast<std::size_t>(d) * d) throw DomainError("local matrix must be d x d");
    std::vector<Amplitude> out(s.dim());
    if (use_parallel()) {
        kernels::parallel::apply_site_matrix(s.amplitudes(), out, s.layout(), site, matrix);
    } else {
        kernels::serial::apply_site_matrix(s.amplitudes(), out, s.layout(), site, matrix);
    }
    return with_amplitudes(s, std::move(out));
}

DenseState apply_local(const DenseState& s, LocalGate gate, std::size_t site, std::int64_t power) {
    require_site(s, site);
    const std::uint32_t d = s.modulus();
    if (gate == LocalGate::Z || gate == LocalGate::S) {
        const auto m = local_gate_matrix(d, gate, power);
        std::vector<Amplitude> diag(d);
        for (std::uint32_t j = 0; j < d; ++j) diag[j] = m[j * d + j];
        std::vector<Amplitude> amps(s.amplitudes().begin(), s.amplitudes().end());
        if (use_parallel()) {
            kernels::parallel::apply_site_diagonal(amps, s.layout(), site, diag);
        } else {
            kernels::serial::apply_site_diagonal(amps, s.layout(), site, diag);
        }
        return with_amplitudes(s, std::move(amps));
    }
    return apply_local_matrix(s, site, local_gate_matrix(d, gate, power));
}

DenseState apply_controlled_z(const DenseState& s, std::size_t a, std::size_t b, const FieldElement& w) {
    require_site(s, a);
    require_site(s, b);
    if (a == b) throw DomainError("controlled-Z needs two distinct sites");
    if (w.modulus() != s.modulus()) throw ModulusError("apply_controlled_z: modulus mismatch");
    std::vector<Amplitude> amps(s.amplitudes().begin(), s.amplitudes().end());
    if (use_parallel()) {
        kernels::parallel::apply_pair_phase(amps, s.layout(), a, b, w.value(), omega_for(s.modulus()));
    } else {
        kernels::serial::apply_pair_phase(amps, s.layout(), a, b, w.value(), omega_for(s.modulus()));
    }
    return with_amplitudes(s, std::move(amps));
}

DenseState apply_controlled_shift(const DenseState& s, std::size_t control, std::size_t target,
                                  const FieldElement& factor) {
    require_site(s, control);
    require_site(s, target);
    if (control == target) throw DomainError("controlled shift needs two distinct sites");
    if (factor.modulus() != s.modulus()) throw ModulusError("apply_controlled_shift: modulus mismatch");
    std::vector<Amplitude> out(s.dim());
    if (use_parallel()) {
        kernels::parallel::apply_controlled_shift(s.amplitudes(), out, s.layout(), control, target, factor.value());
    } else {
        kernels::serial::apply_controlled_shift(s.amplitudes(), out, s.layout(), control, target, factor.value());
    }
    return with_amplitudes(s, std::move(out));
}

DenseState apply_pauli(const DenseState& s, const PauliOperator& p) {
    if (p.size() != s.sites()) throw DomainError("Pauli operator and state have different site counts");
    if (p.modulus() != s.modulus()) throw ModulusError("apply_pauli: modulus mismatch");
    std::vector<std::uint32_t> x(p.size()), z(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
        x[k] = p.x(k).value();
        z[k] = p.z(k).value();
    }
    std::vector<Amplitude> out(s.dim());
    if (use_parallel()) {
        kernels::parallel::apply_weyl(s.amplitudes(), out, s.layout(), x, z, p.phase().value(), omega_for(s.modulus()));
    } else {
        kernels::serial::apply_weyl(s.amplitudes(), out, s.layout(), x, z, p.phase().value(), omega_for(s.modulus()));
    }
    return with_amplitudes(s, std::move(out));
}

Projection project(const DenseState& s, const PauliOperator& observable, const FieldElement& outcome) {
    if (outcome.modulus() != s.modulus()) throw ModulusError("project: modulus mismatch");
    const auto orbit = observable_orbit(s, observable);
    auto amps = projected_from_orbit(orbit, outcome.value());
    const double prob = squared_norm(amps);
    normalize_in_place(amps, prob);
    return {with_amplitudes(s, std::move(amps)), prob, prob > kZeroProbability};
}

std::vector<double> outcome_probabilities(const DenseState& s, const PauliOperator& observable) {
    const auto orbit = observable_orbit(s, observable);
    std::vector<double> probs(s.modulus());
    for (std::uint32_t k = 0; k < s.modulus(); ++k) probs[k] = squared_norm(projected_from_orbit(orbit, k));
    return probs;
}

Measurement measure_pauli(const DenseState& s, const PauliOperator& observable, Rng& rng) {
    if (observable.is_scalar()) throw DomainError("cannot measure an observable proportional to the identity");
    const auto orbit = observable_orbit(s, observable);
    std::vector<std::vector<Amplitude>> projected;
    std::vector<double> probs;
    for (std::uint32_t k = 0; k < s.modulus(); ++k) {
        projected.push_back(projected_from_orbit(orbit, k));
        probs.push_back(squared_norm(projected.back()));
    }
    const std::size_t k = sample_index(probs, rng);
    normalize_in_place(projected[k], probs[k]);
    return {FieldElement(static_cast<std::int64_t>(k), s.modulus()), with_amplitudes(s, std::move(projected[k])),
            probs[k]};
}

Measurement measure_pauli(const DenseState& s, const PauliOperator& observable, std::uint64_t seed) {
    Rng rng(seed);
    return measure_pauli(s, observable, rng);
}

std::vector<Amplitude> local_eigenvector(const FieldElement& x, const FieldElement& z, const FieldElement& s) {
    const std::uint32_t d = x.modulus();
    if (x.is_zero() && z.is_zero()) throw DomainError("the identity has no distinguished eigenvector");
    const auto m = local_pauli_matrix(x, z);
    for (std::uint32_t start = 0; start < d; ++start) {
        std::vector<Amplitude> cur(d), acc(d);
        cur[start] = 1.0;
        for (std::uint32_t k = 0; k < d; ++k) {
            const Amplitude ph = omega_pow(d, -static_cast<std::int64_t>(s.value()) * k);
            for (std::uint32_t j = 0; j < d; ++j) acc[j] += ph * cur[j];
            std::vector<Amplitude> next(d);
            for (std::uint32_t r = 0; r < d; ++r) {
                for (std::uint32_t c = 0; c < d; ++c) next[r] += m[r * d + c] * cur[c];
            }
            cur = std::move(next);
        }
        const double nrm = squared_norm(acc);
        if (nrm > 1e-12) {
            normalize_in_place(acc, nrm);
            return acc;
        }
    }
    throw DomainError("no eigenvector found");  // unreachable for a nonidentity Pauli
}

DenseState contract_site(const DenseState& s, std::size_t site, std::span<const Amplitude> v) {
    require_site(s, site);
    const std::uint32_t d = s.modulus();
    if (v.size() != d) throw DomainError("contract_site: vector must have d entries");
    if (s.sites() < 2) throw DomainError("contract_site: cannot remove the last site");
    const kernels::Layout& full = s.layout();
    const std::size_t rest_dim = full.dim / d;
    const std::vector<std::size_t> dropped{site};
    std::vector<Amplitude> out(rest_dim);
    for (std::size_t r = 0; r < rest_dim; ++r) {
        Amplitude acc{};
        for (std::uint32_t j = 0; j < d; ++j) acc += std::conj(v[j]) * s[expand_index(full, r, dropped, {j})];
        out[r] = acc;
    }
    return DenseState(d, ids_without(s.ids(), {site}), std::move(out));
}

DenseState drop_product_site(const DenseState& s, std::size_t site) {
    require_site(s, site);
    // For a product state any fixed digit of the site gives a slice
    // proportional to the remainder; the heaviest slice is the stable choice.
    const std::uint32_t d = s.modulus();
    std::vector<double> weight(d, 0.0);
    for (std::size_t idx = 0; idx < s.dim(); ++idx) weight[s.layout().digit(idx, site)] += std::norm(s[idx]);
    const auto best = static_cast<std::uint32_t>(std::max_element(weight.begin(), weight.end()) - weight.begin());
    std::vector<Amplitude> e(d);
    e[best] = 1.0;
    return contract_site(s, site, e).normalized();
}

std::vector<Amplitude> bell_vector(std::uint32_t d, const FieldElement& m, const FieldElement& n) {
    if (m.modulus() != d || n.modulus() != d) throw ModulusError("bell_vector: modulus mismatch");
    std::vector<Amplitude> v(static_cast<std::size_t>(d) * d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::uint32_t j = 0; j < d; ++j) {
        const std::uint32_t jb = (j + m.value()) % d;
        v[j + static_cast<std::size_t>(d) * jb] = omega_pow(d, static_cast<std::int64_t>(j) * n.value()) * norm;
    }
    return v;
}

BellOutcome bell_project(const DenseState& s, std::size_t a, std::size_t b, const FieldElement& m,
                         const FieldElement& n) {
    require_site(s, a);
    require_site(s, b);
    if (a == b) throw DomainError("Bell measurement needs two distinct sites");
    if (s.sites() < 3) throw DomainError("Bell measurement must leave at least one site");
    const std::uint32_t d = s.modulus();
    const auto v = bell_vector(d, m, n);
    const kernels::Layout& full = s.layout();
    std::vector<std::size_t> dropped{std::min(a, b), std::max(a, b)};
    const std::size_t rest_dim = full.dim / (static_cast<std::size_t>(d) * d);
    std::vector<Amplitude> out(rest_dim);
    for (std::size_t r = 0; r < rest_dim; ++r) {
        Amplitude acc{};
        for (std::uint32_t ja = 0; ja < d; ++ja) {
            const std::uint32_t jb = (ja + m.value()) % d;
            const std::vector<std::uint32_t> digits = a < b ? std::vector<std::uint32_t>{ja, jb}
                                                            : std::vector<std::uint32_t>{jb, ja};
            acc += std::conj(v[ja + static_cast<std::size_t>(d) * jb]) * s[expand_index(full, r, dropped, digits)];
        }
        out[r] = acc;
    }
    const double prob = squared_norm(out);
    normalize_in_place(out, prob);
    return {m, n, DenseState(d, ids_without(s.ids(), {a, b}), std::move(out)), prob};
}

BellOutcome bell_measure(const DenseState& s, std::size_t a, std::size_t b, Rng& rng) {
    const std::uint32_t d = s.modulus();
    std::vector<BellOutcome> outcomes;
    std::vector<double> probs;
    for (std::uint32_t mm = 0; mm < d; ++mm) {
        for (std::uint32_t nn = 0; nn < d; ++nn) {
            outcomes.push_back(bell_project(s, a, b, FieldElement(mm, d), FieldElement(nn, d)));
            probs.push_back(outcomes.back().probability);
        }
    }
    return outcomes[sample_index(probs, rng)];
}

BellOutcome bell_measure(const DenseState& s, std::size_t a, std::size_t b, std::uint64_t seed) {
    Rng rng(seed);
    return bell_measure(s, a, b, rng);
}

SyndromeMeasurement measure_syndrome(const DenseState& s, const std::vector<std::size_t>& sites,
                                     const std::vector<std::vector<std::uint32_t>>& rows, Rng& rng) {
    const std::uint32_t d = s.modulus();
    for (auto site : sites) require_site(s, site);
    for (const auto& row : rows) {
        if (row.size() != sites.size()) throw DomainError("syndrome row length mismatch");
    }
    auto syndrome_of = [&](std::size_t idx) {
        std::size_t key = 0, mult = 1;
        for (const auto& row : rows) {
            std::uint64_t v = 0;
            for (std::size_t k = 0; k < sites.size(); ++k) v += static_cast<std::uint64_t>(row[k]) * s.layout().digit(idx, sites[k]);
            key += (v % d) * mult;
            mult *= d;
        }
        return key;
    };
    std::size_t count = 1;
    for (std::size_t r = 0; r < rows.size(); ++r) count *= d;
    std::vector<double> probs(count, 0.0);
    for (std::size_t idx = 0; idx < s.dim(); ++idx) probs[syndrome_of(idx)] += std::norm(s[idx]);
    const std::size_t key = sample_index(probs, rng);
    std::vector<Amplitude> amps(s.dim());
    for (std::size_t idx = 0; idx < s.dim(); ++idx) {
        if (syndrome_of(idx) == key) amps[idx] = s[idx];
    }
    normalize_in_place(amps, probs[key]);
    SyndromeMeasurement out{{}, with_amplitudes(s, std::move(amps)), probs[key]};
    std::size_t rem = key;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out.syndrome.push_back(static_cast<std::uint32_t>(rem % d));
        rem /= d;
    }
    return out;
}

DensityMatrix reduced_density(const DenseState& s, const std::vector<std::size_t>& keep) {
    if (keep.empty()) throw DomainError("reduced_density: keep at least one site");
    std::vector<bool> seen(s.sites(), false);
    DensityMatrix rho;
    rho.d = s.modulus();
    for (auto k : keep) {
        require_site(s, k);
        if (seen[k]) throw DomainError("reduced_density: repeated site");
        seen[k] = true;
        rho.ids.push_back(s.ids()[k]);
    }
    rho.dim = checked_dim(s.modulus(), keep.size());
    rho.entries.assign(rho.dim * rho.dim, Amplitude{});
    if (use_parallel()) {
        kernels::parallel::partial_trace(s.amplitudes(), s.layout(), keep, rho.entries);
    } else {
        kernels::serial::partial_trace(s.amplitudes(), s.layout(), keep, rho.entries);
    }
    return rho;
}

DensityMatrix reduced_density_ids(const DenseState& s, const std::vector<int>& keep_ids) {
    std::vector<std::size_t> keep;
    for (int id : keep_ids) keep.push_back(s.site_of(id));
    return reduced_density(s, keep);
}

DensityMatrix pure_density(const DenseState& s) {
    std::vector<std::size_t> all(s.sites());
    for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
    return reduced_density(s, all);
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.d != b.d) throw ModulusError("tensor: modulus mismatch");
    DensityMatrix out;
    out.d = a.d;
    out.ids = a.ids;
    out.ids.insert(out.ids.end(), b.ids.begin(), b.ids.end());
    out.dim = a.dim * b.dim;
    out.entries.assign(out.dim * out.dim, Amplitude{});
    for (std::size_t rb = 0; rb < b.dim; ++rb) {
        for (std::size_t ra = 0; ra < a.dim; ++ra) {
            for (std::size_t cb = 0; cb < b.dim; ++cb) {
                for (std::size_t ca = 0; ca < a.dim; ++ca) {
                    out.entries[(ra + rb * a.dim) * out.dim + (ca + cb * a.dim)] = a(ra, ca) * b(rb, cb);
                }
            }
        }
    }
    return out;
}

DensityMatrix maximally_mixed(std::uint32_t d, std::vector<int> ids) {
    DensityMatrix out;
    out.d = d;
    out.dim = checked_dim(d, ids.size());
    out.ids = std::move(ids);
    out.entries.assign(out.dim * out.dim, Amplitude{});
    for (std::size_t k = 0; k < out.dim; ++k) out.entries[k * out.dim + k] = 1.0 / static_cast<double>(out.dim);
    return out;
}

DenseState permute_sites(const DenseState& s, const std::vector<int>& ids) {
    if (ids.size() != s.sites()) throw DomainError("permute_sites: need every site exactly once");
    std::vector<std::size_t> from(ids.size());
    for (std::size_t k = 0; k < ids.size(); ++k) from[k] = s.site_of(ids[k]);
    const kernels::Layout out_layout(s.modulus(), ids.size());
    std::vector<Amplitude> amps(s.dim());
    for (std::size_t idx = 0; idx < s.dim(); ++idx) {
        std::size_t dest = 0;
        for (std::size_t k = 0; k < ids.size(); ++k) dest += s.layout().digit(idx, from[k]) * out_layout.stride[k];
        amps[dest] = s[idx];
    }
    return DenseState(s.modulus(), ids, std::move(amps));
}

Amplitude inner_product(const DenseState& a, const DenseState& b) {
    if (a.modulus() != b.modulus() || a.ids() != b.ids()) {
        throw DomainError("inner_product: states live on different sites");
    }
    Amplitude acc{};
    for (std::size_t k = 0; k < a.dim(); ++k) acc += std::conj(a[k]) * b[k];
    return acc;
}

double fidelity(const DenseState& a, const DenseState& b) {
    return std::norm(inner_product(a.normalized(), b.normalized()));
}

double max_phase_aligned_difference(const DenseState& a, const DenseState& b) {
    if (a.modulus() != b.modulus() || a.ids() != b.ids()) {
        throw DomainError("equal_up_to_global_phase: states live on different sites");
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < a.dim(); ++k) {
        if (std::abs(a[k]) > std::abs(a[best])) best = k;
    }
    Amplitude phase{1.0, 0.0};
    const double mag = std::abs(a[best]) * std::abs(b[best]);
    if (mag > 0.0) phase = b[best] * std::conj(a[best]) / mag;
    double diff = 0.0;
    for (std::size_t k = 0; k < a.dim(); ++k) diff = std::max(diff, std::abs(a[k] * phase - b[k]));
    return diff;
}

bool equal_up_to_global_phase(const DenseState& a, const DenseState& b, double tol) {
    return max_phase_aligned_difference(a, b) < tol;
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    require_same_shape(rho, sigma);
    const auto n = static_cast<Eigen::Index>(rho.dim);
    Eigen::MatrixXcd diff(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            diff(r, c) = rho(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) -
                         sigma(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
        }
    }
    // Symmetrise away rounding so the Hermitian solver sees exact input.
    const Eigen::MatrixXcd herm = 0.5 * (diff + diff.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw DomainError("trace_distance: eigensolver failed");
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double trace_distance_upper_bound(const DensityMatrix& rho, const DensityMatrix& sigma) {
    require_same_shape(rho, sigma);
    double acc = 0.0;
    for (std::size_t k = 0; k < rho.entries.size(); ++k) acc += std::norm(rho.entries[k] - sigma.entries[k]);
    return 0.5 * std::sqrt(static_cast<double>(rho.dim) * acc);
}

double trace_distance_checked(const DensityMatrix& rho, const DensityMatrix& sigma, double tol) {
    const double bound = trace_distance_upper_bound(rho, sigma);
    if (bound < tol) return bound;
    return trace_distance(rho, sigma);
}

std::string dump(const DenseState& s) {
    std::ostringstream os;
    os << std::setprecision(17);
    for (std::size_t k = 0; k < s.dim(); ++k) os << k << ' ' << s[k].real() << ' ' << s[k].imag() << '\n';
    return os.str();
}

} // namespace qss
