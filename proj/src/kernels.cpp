#include "qss/kernels.hpp"

#include <cmath>
#include <numbers>

namespace qss::kernels {

Layout::Layout(std::uint32_t d_, std::size_t sites_) : d(d_), sites(sites_), dim(1), stride(sites_) {
    for (std::size_t s = 0; s < sites; ++s) {
        stride[s] = dim;
        dim *= d;
    }
}

std::vector<Amplitude> omega_table(std::uint32_t d) {
    std::vector<Amplitude> w(d);
    for (std::uint32_t k = 0; k < d; ++k) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(d);
        w[k] = {std::cos(angle), std::sin(angle)};
    }
    return w;
}

namespace {

// Below this many amplitudes the thread fork costs more than the loop.
constexpr std::size_t kParallelThreshold = 4096;

inline Amplitude site_matrix_element(std::span<const Amplitude> in, const Layout& layout, std::size_t site,
                                     std::span<const Amplitude> matrix, std::size_t idx) {
    const std::size_t st = layout.stride[site];
    const std::uint32_t r = layout.digit(idx, site);
    const std::size_t base = idx - r * st;
    Amplitude acc{0.0, 0.0};
    for (std::uint32_t c = 0; c < layout.d; ++c) acc += matrix[r * layout.d + c] * in[base + c * st];
    return acc;
}

inline std::size_t shifted_index(const Layout& layout, std::size_t control, std::size_t target, std::uint32_t factor,
                                 std::size_t idx) {
    const std::uint32_t c = layout.digit(idx, control);
    const std::uint32_t t = layout.digit(idx, target);
    const std::uint32_t nt = static_cast<std::uint32_t>((t + static_cast<std::uint64_t>(factor) * c) % layout.d);
    return idx - t * layout.stride[target] + nt * layout.stride[target];
}

inline std::uint32_t pair_exponent(const Layout& layout, std::size_t a, std::size_t b, std::uint32_t weight,
                                   std::size_t idx) {
    const std::uint64_t ja = layout.digit(idx, a);
    const std::uint64_t jb = layout.digit(idx, b);
    return static_cast<std::uint32_t>((weight * ja % layout.d) * jb % layout.d);
}

// Destination index and phase exponent of basis vector idx under the Weyl operator.
inline std::size_t weyl_target(const Layout& layout, std::span<const std::uint32_t> x,
                               std::span<const std::uint32_t> z, std::uint32_t phase, std::size_t idx,
                               std::uint32_t& exponent) {
    const std::uint32_t d = layout.d;
    std::uint64_t e = phase;
    std::size_t dest = idx;
    for (std::size_t s = 0; s < layout.sites; ++s) {
        const std::uint32_t j = layout.digit(idx, s);
        e += static_cast<std::uint64_t>(z[s]) * j;
        const std::uint32_t nj = (j + x[s]) % d;
        dest = dest - j * layout.stride[s] + nj * layout.stride[s];
    }
    exponent = static_cast<std::uint32_t>(e % d);
    return dest;
}

inline Amplitude graph_amplitude(const Layout& layout, const GraphData& g, std::span<const Amplitude> omega,
                                 double norm, std::size_t idx) {
    const std::uint32_t d = layout.d;
    const std::size_t n = layout.sites;
    std::uint64_t e = 0;
    // digits of j and of y = j - x
    std::uint32_t jbuf[64];
    std::uint32_t ybuf[64];
    for (std::size_t s = 0; s < n; ++s) {
        const std::uint32_t j = layout.digit(idx, s);
        jbuf[s] = j;
        ybuf[s] = (j + d - g.x[s]) % d;
    }
    for (std::size_t s = 0; s < n; ++s) {
        const std::uint64_t y = ybuf[s];
        e += static_cast<std::uint64_t>(g.z[s]) * y;
        const std::uint64_t j = jbuf[s];
        e += static_cast<std::uint64_t>(g.m[s]) * ((j == 0 ? 0 : j * (j - 1) / 2) % d);
        for (std::size_t t = s + 1; t < n; ++t) {
            e += (static_cast<std::uint64_t>(g.adjacency[s * n + t]) * y % d) * ybuf[t];
        }
        e %= d;
    }
    return omega[e % d] * norm;
}

inline Amplitude trace_element(std::span<const Amplitude> amp, std::span<const std::size_t> kept_offsets,
                               std::span<const std::size_t> traced_offsets, std::size_t r, std::size_t c) {
    Amplitude acc{0.0, 0.0};
    const std::size_t orow = kept_offsets[r];
    const std::size_t ocol = kept_offsets[c];
    for (std::size_t e : traced_offsets) acc += amp[orow + e] * std::conj(amp[ocol + e]);
    return acc;
}

// Index offsets contributed by the kept and by the traced sites.
void trace_offsets(const Layout& layout, std::span<const std::size_t> keep, std::vector<std::size_t>& kept,
                   std::vector<std::size_t>& traced) {
    std::vector<bool> is_kept(layout.sites, false);
    for (auto s : keep) is_kept[s] = true;
    std::vector<std::size_t> rest;
    for (std::size_t s = 0; s < layout.sites; ++s) {
        if (!is_kept[s]) rest.push_back(s);
    }
    auto offsets = [&](const std::vector<std::size_t>& sites) {
        std::size_t count = 1;
        for (std::size_t k = 0; k < sites.size(); ++k) count *= layout.d;
        std::vector<std::size_t> out(count, 0);
        for (std::size_t a = 0; a < count; ++a) {
            std::size_t rem = a, off = 0;
            for (auto s : sites) {
                off += (rem % layout.d) * layout.stride[s];
                rem /= layout.d;
            }
            out[a] = off;
        }
        return out;
    };
    kept = offsets(std::vector<std::size_t>(keep.begin(), keep.end()));
    traced = offsets(rest);
}

} // namespace

namespace serial {

void apply_site_diagonal(std::span<Amplitude> amp, const Layout& layout, std::size_t site,
                         std::span<const Amplitude> diag) {
    for (std::size_t idx = 0; idx < layout.dim; ++idx) amp[idx] *= diag[layout.digit(idx, site)];
}

void apply_pair_phase(std::span<Amplitude> amp, const Layout& layout, std::size_t a, std::size_t b,
                      std::uint32_t weight, std::span<const Amplitude> omega) {
    for (std::size_t idx = 0; idx < layout.dim; ++idx) amp[idx] *= omega[pair_exponent(layout, a, b, weight, idx)];
}

void apply_site_matrix(std::span<const Amplitude> in, std::span<Amplitude> out, const Layout& layout,
                       std::size_t site, std::span<const Amplitude> matrix) {
    for (std::size_t idx = 0; idx < layout.dim; ++idx) out[idx] = site_matrix_element(in, layout, site, matrix, idx);
}

void apply_controlled_shift(std::span<const Amplitude> in, std::span<Amplitude> out, const Layout& layout,
                            std::size_t control, std::size_t target, std::uint32_t factor) {
    for (std::size_t idx = 0; idx < layout.dim; ++idx) out[shifted_index(layout, control, target, factor, idx)] = in[idx];
}

void apply_weyl(std::span<const Amplitude> in, std::span<Amplitude> out, const Layout& layout,
                std::span<const std::uint32_t> x, std::span<const std::uint32_t> z, std::uint32_t phase,
                std::span<const Amplitude> omega) {
    for (std::size_t idx = 0; idx < layout.dim; ++idx) {
        std::uint32_t e = 0;
        const std::size_t dest = weyl_target(layout, x, z, phase, idx, e);
        out[dest] = omega[e] * in[idx];
    }
}

void graph_state(std::span<Amplitude> out, const Layout& layout, const GraphData& graph,
                 std::span<const Amplitude> omega) {
    const double norm = 1.0 / std::sqrt(static_cast<double>(layout.dim));
    for (std::size_t idx = 0; idx < layout.dim; ++idx) out[idx] = graph_amplitude(layout, graph, omega, norm, idx);
}

void partial_trace(std::span<const Amplitude> amp, const Layout& layout, std::span<const std::size_t> keep,
                   std::span<Amplitude> rho) {
    std::vector<std::size_t> kept, traced;
    trace_offsets(layout, keep, kept, traced);
    const std::size_t kd = kept.size();
    for (std::size_t r = 0; r < kd; ++r) {
        for (std::size_t c = 0; c < kd; ++c) rho[r * kd + c] = trace_element(amp, kept, traced, r, c);
    }
}

} // namespace serial

namespace parallel {

void apply_site_diagonal(std::span<Amplitude> amp, const Layout& layout, std::size_t site,
                         std::span<const Amplitude> diag) {
    const std::size_t dim = layout.dim;
#pragma omp parallel for schedule(static) if (dim >= kParallelThreshold)
    for (std::size_t idx = 0; idx < dim; ++idx) amp[idx] *= diag[layout.digit(idx, site)];
}

void apply_pair_phase(std::span<Amplitude> amp, const Layout& layout, std::size_t a, std::size_t b,
                      std::uint32_t weight, std::span<const Amplitude> omega) {
    const std::size_t dim = layout.dim;
#pragma omp parallel for schedule(static) if (dim >= kParallelThreshold)
    for (std::size_t idx = 0; idx < dim; ++idx) amp[idx] *= omega[pair_exponent(layout, a, b, weight, idx)];
}

void apply_site_matrix(std::span<const Amplitude> in, std::span<Amplitude> out, const Layout& layout,
                       std::size_t site, std::span<const Amplitude> matrix) {
    const std::size_t dim = layout.dim;
#pragma omp parallel for schedule(static) if (dim >= kParallelThreshold)
    for (std::size_t idx = 0; idx < dim; ++idx) out[idx] = site_matrix_element(in, layout, site, matrix, idx);
}

void apply_controlled_shift(std::span<const Amplitude> in, std::span<Amplitude> out, const Layout& layout,
                            std::size_t control, std::size_t target, std::uint32_t factor) {
    const std::size_t dim = layout.dim;
#pragma omp parallel for schedule(static) if (dim >= kParallelThreshold)
    for (std::size_t idx = 0; idx < dim; ++idx) out[shifted_index(layout, control, target, factor, idx)] = in[idx];
}

void apply_weyl(std::span<const Amplitude> in, std::span<Amplitude> out, const Layout& layout,
                std::span<const std::uint32_t> x, std::span<const std::uint32_t> z, std::uint32_t phase,
                std::span<const Amplitude> omega) {
    const std::size_t dim = layout.dim;
#pragma omp parallel for schedule(static) if (dim >= kParallelThreshold)
    for (std::size_t idx = 0; idx < dim; ++idx) {
        std::uint32_t e = 0;
        const std::size_t dest = weyl_target(layout, x, z, phase, idx, e);
        out[dest] = omega[e] * in[idx];
    }
}

void graph_state(std::span<Amplitude> out, const Layout& layout, const GraphData& graph,
                 std::span<const Amplitude> omega) {
    const double norm = 1.0 / std::sqrt(static_cast<double>(layout.dim));
    const std::size_t dim = layout.dim;
#pragma omp parallel for schedule(static) if (dim >= kParallelThreshold)
    for (std::size_t idx = 0; idx < dim; ++idx) out[idx] = graph_amplitude(layout, graph, omega, norm, idx);
}

void partial_trace(std::span<const Amplitude> amp, const Layout& layout, std::span<const std::size_t> keep,
                   std::span<Amplitude> rho) {
    std::vector<std::size_t> kept, traced;
    trace_offsets(layout, keep, kept, traced);
    const std::size_t kd = kept.size();
    const std::size_t work = kd * kd * traced.size();
    // One output element per iteration; each sum runs in the serial order.
#pragma omp parallel for schedule(static) if (work >= kParallelThreshold)
    for (std::size_t rc = 0; rc < kd * kd; ++rc) {
        rho[rc] = trace_element(amp, kept, traced, rc / kd, rc % kd);
    }
}

} // namespace parallel

} // namespace qss::kernels
