#pragma once

// Amplitude-level kernels for dense qudit state vectors.
//
// Sites are little-endian: site 0 is the fastest-varying digit of the index.
// Each kernel exists twice with identical signatures: `serial` is the plain
// reference loop, `parallel` splits the same per-element computation across
// OpenMP threads. Every output element is produced by exactly the same
// floating-point operations in both, so results are bitwise identical.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qss::kernels {

using Amplitude = std::complex<double>;

struct Layout {
    std::uint32_t d = 3;
    std::size_t sites = 0;
    std::size_t dim = 1;
    std::vector<std::size_t> stride;  // stride[s] = d^s

    Layout() = default;
    Layout(std::uint32_t d, std::size_t sites);

    std::uint32_t digit(std::size_t index, std::size_t site) const {
        return static_cast<std::uint32_t>((index / stride[site]) % d);
    }
};

// omega[k] = exp(2 pi i k / d)
std::vector<Amplitude> omega_table(std::uint32_t d);

// Labelled graph state data in plain integers (all entries already reduced mod d).
struct GraphData {
    std::vector<std::uint32_t> adjacency;  // row-major sites x sites
    std::vector<std::uint32_t> z, x, m;
};

namespace serial {

// amp[idx] *= diag[digit(idx, site)]
void apply_site_diagonal(std::span<Amplitude> amp, const Layout& layout, std::size_t site,
                         std::span<const Amplitude> diag);

// amp[idx] *= omega[w * j_a * j_b mod d]
void apply_pair_phase(std::span<Amplitude> amp, const Layout& layout, std::size_t a, std::size_t b,
                      std::uint32_t weight, std::span<const Amplitude> omega);

// out = (I (x) M_site (x) I) in, with M a row-major d x d matrix.
void apply_site_matrix(std::span<const Amplitude> in, std::span<Amplitude> out, const Layout& layout,
                       std::size_t site, std::span<const Amplitude> matrix);

// out[perm(idx)] = in[idx] for |c>_control |t>_target -> |c> |t + factor c>.
void apply_controlled_shift(std::span<const Amplitude> in, std::span<Amplitude> out, const Layout& layout,
                            std::size_t control, std::size_t target, std::uint32_t factor);

// out = w^phase (x)_s X_s^{x_s} Z_s^{z_s} in, a permutation with phases.
void apply_weyl(std::span<const Amplitude> in, std::span<Amplitude> out, const Layout& layout,
                std::span<const std::uint32_t> x, std::span<const std::uint32_t> z, std::uint32_t phase,
                std::span<const Amplitude> omega);

// S^m X^x Z^z prod C_ij^{A_ij} |0bar>^n in closed form:
//   amp(j) = d^{-n/2} w^{Q(j - x) + z.(j - x) + sum_i m_i j_i (j_i - 1)/2}
void graph_state(std::span<Amplitude> out, const Layout& layout, const GraphData& graph,
                 std::span<const Amplitude> omega);

// rho = Tr_{not keep} |psi><psi|, indexed little-endian over `keep` (in the given order).
void partial_trace(std::span<const Amplitude> amp, const Layout& layout, std::span<const std::size_t> keep,
                   std::span<Amplitude> rho);

} // namespace serial

namespace parallel {

void apply_site_diagonal(std::span<Amplitude> amp, const Layout& layout, std::size_t site,
                         std::span<const Amplitude> diag);
void apply_pair_phase(std::span<Amplitude> amp, const Layout& layout, std::size_t a, std::size_t b,
                      std::uint32_t weight, std::span<const Amplitude> omega);
void apply_site_matrix(std::span<const Amplitude> in, std::span<Amplitude> out, const Layout& layout,
                       std::size_t site, std::span<const Amplitude> matrix);
void apply_controlled_shift(std::span<const Amplitude> in, std::span<Amplitude> out, const Layout& layout,
                            std::size_t control, std::size_t target, std::uint32_t factor);
void apply_weyl(std::span<const Amplitude> in, std::span<Amplitude> out, const Layout& layout,
                std::span<const std::uint32_t> x, std::span<const std::uint32_t> z, std::uint32_t phase,
                std::span<const Amplitude> omega);
void graph_state(std::span<Amplitude> out, const Layout& layout, const GraphData& graph,
                 std::span<const Amplitude> omega);
void partial_trace(std::span<const Amplitude> amp, const Layout& layout, std::span<const std::size_t> keep,
                   std::span<Amplitude> rho);

} // namespace parallel

} // namespace qss::kernels
