#pragma once

// Brute-force dense state-vector simulator over C^{d^n}; the ground truth that
// every symbolic rule and protocol outcome is checked against.
//
// Conventions:
//   X|j> = |j+1>,  Z|j> = w^j |j>,  S|j> = w^{j(j-1)/2} |j>,
//   U|k> = d^{-1/2} sum_j w^{jk} |j>,  |kbar> = U^{-1}|k>,  R = U^{-1} S^{-1} U,
//   C_ab |j>|k> = w^{jk} |j>|k>.
// Site 0 is the fastest-varying index digit. Every site carries an external
// id so states can be compared after vertices have been removed.

#include "qss/field.hpp"
#include "qss/graph.hpp"
#include "qss/kernels.hpp"
#include "qss/pauli.hpp"
#include "qss/rng.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qss {

using Amplitude = std::complex<double>;

inline constexpr double kStateTolerance = 1e-10;
inline constexpr double kNormTolerance = 1e-12;
inline constexpr std::size_t kMaxAmplitudes = 10'000'000;

enum class KernelBackend { Serial, Parallel };
// Which kernel family DenseState operations use (default Parallel).
KernelBackend kernel_backend();
void set_kernel_backend(KernelBackend backend);

class DenseState {
public:
    // Takes amplitudes as given; length must be d^ids.size().
    DenseState(std::uint32_t d, std::vector<int> ids, std::vector<Amplitude> amplitudes);

    // Computational basis state |digits>.
    static DenseState basis(std::uint32_t d, std::vector<int> ids, const std::vector<std::uint32_t>& digits);
    // One site holding the given (normalised) amplitudes.
    static DenseState single(std::uint32_t d, int id, std::vector<Amplitude> amplitudes);

    std::uint32_t modulus() const noexcept { return layout_.d; }
    std::size_t sites() const noexcept { return layout_.sites; }
    std::size_t dim() const noexcept { return layout_.dim; }
    const kernels::Layout& layout() const noexcept { return layout_; }
    const std::vector<int>& ids() const noexcept { return ids_; }
    std::span<const Amplitude> amplitudes() const noexcept { return amps_; }
    const Amplitude& operator[](std::size_t idx) const { return amps_[idx]; }

    std::size_t site_of(int id) const;
    double norm() const;
    DenseState normalized() const;
    DenseState scaled(Amplitude factor) const;

private:
    kernels::Layout layout_;
    std::vector<int> ids_;
    std::vector<Amplitude> amps_;
};

struct DensityMatrix {
    std::uint32_t d = 3;
    std::vector<int> ids;
    std::size_t dim = 1;
    std::vector<Amplitude> entries;  // row-major dim x dim

    const Amplitude& operator()(std::size_t r, std::size_t c) const { return entries[r * dim + c]; }
    Amplitude trace() const;
    double purity() const;
};

// a's sites come first (low digits), then b's. Ids must be disjoint.
DenseState tensor(const DenseState& a, const DenseState& b);

// S^m X^x Z^z prod C_ij^{A_ij} |0bar>^n, site k = vertex k.
DenseState build_graph_state(const LabelledGraph& g);

enum class LocalGate { X, Z, S, U, Uinv, R };
// d x d row-major matrix of gate^power (power may be negative).
std::vector<Amplitude> local_gate_matrix(std::uint32_t d, LocalGate gate, std::int64_t power = 1);
std::vector<Amplitude> local_pauli_matrix(const FieldElement& x, const FieldElement& z);

DenseState apply_local(const DenseState& s, LocalGate gate, std::size_t site, std::int64_t power = 1);
DenseState apply_local_matrix(const DenseState& s, std::size_t site, std::span<const Amplitude> matrix);
// C_ab^w
DenseState apply_controlled_z(const DenseState& s, std::size_t a, std::size_t b, const FieldElement& w);
// |c>_control |t>_target -> |c> |t + factor c>
DenseState apply_controlled_shift(const DenseState& s, std::size_t control, std::size_t target,
                                  const FieldElement& factor);
// Pauli site k acts on state site k.
DenseState apply_pauli(const DenseState& s, const PauliOperator& p);

struct Projection {
    DenseState state;     // renormalised; all-zero when probability is 0
    double probability;
    bool valid;           // false when the outcome has zero probability
};

// P_{O,s} = (1/d) sum_k w^{-sk} O^k applied to the state.
Projection project(const DenseState& s, const PauliOperator& observable, const FieldElement& outcome);

struct Measurement {
    FieldElement outcome;
    DenseState state;
    double probability;
};

// Born-rule sample of the eigenvalue exponent of `observable`. Throws
// DomainError for an observable proportional to the identity.
Measurement measure_pauli(const DenseState& s, const PauliOperator& observable, Rng& rng);
Measurement measure_pauli(const DenseState& s, const PauliOperator& observable, std::uint64_t seed);

// Exact outcome distribution of `observable` (index = eigenvalue exponent).
std::vector<double> outcome_probabilities(const DenseState& s, const PauliOperator& observable);

// Normalised eigenvector of X^x Z^z (not the identity) for eigenvalue w^s.
std::vector<Amplitude> local_eigenvector(const FieldElement& x, const FieldElement& z, const FieldElement& s);

// (<v|_site (x) I) |psi>, site removed; not renormalised.
DenseState contract_site(const DenseState& s, std::size_t site, std::span<const Amplitude> v);

// Removes a site that is in a product state with the rest (e.g. just
// measured), returning the renormalised remainder.
DenseState drop_product_site(const DenseState& s, std::size_t site);

struct BellOutcome {
    FieldElement m;
    FieldElement n;
    DenseState remainder;  // sites a, b removed, renormalised
    double probability;
};

// |psi_mn> = d^{-1/2} sum_j w^{jn} |j>_a |j+m>_b
std::vector<Amplitude> bell_vector(std::uint32_t d, const FieldElement& m, const FieldElement& n);
BellOutcome bell_project(const DenseState& s, std::size_t a, std::size_t b, const FieldElement& m,
                         const FieldElement& n);
BellOutcome bell_measure(const DenseState& s, std::size_t a, std::size_t b, Rng& rng);
BellOutcome bell_measure(const DenseState& s, std::size_t a, std::size_t b, std::uint64_t seed);

// Projective measurement of linear syndromes sum_k rows[r][k] j_{sites[k]} in
// the computational basis of `sites`. Returns the sampled syndrome values.
struct SyndromeMeasurement {
    std::vector<std::uint32_t> syndrome;
    DenseState state;
    double probability;
};
SyndromeMeasurement measure_syndrome(const DenseState& s, const std::vector<std::size_t>& sites,
                                     const std::vector<std::vector<std::uint32_t>>& rows, Rng& rng);

// Partial trace keeping `keep` (site positions, order preserved).
DensityMatrix reduced_density(const DenseState& s, const std::vector<std::size_t>& keep);
DensityMatrix reduced_density_ids(const DenseState& s, const std::vector<int>& keep_ids);
DensityMatrix pure_density(const DenseState& s);
// rho_a (x) rho_b with a's sites low.
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
DensityMatrix maximally_mixed(std::uint32_t d, std::vector<int> ids);

// Reorders sites so that ids come out in the requested order.
DenseState permute_sites(const DenseState& s, const std::vector<int>& ids);

Amplitude inner_product(const DenseState& a, const DenseState& b);  // <a|b>
double fidelity(const DenseState& a, const DenseState& b);         // |<a|b>|^2 of normalised states
// Aligns the phase on the largest-magnitude amplitude of a, then compares
// entries in max norm. Sites must have the same ids in the same order.
bool equal_up_to_global_phase(const DenseState& a, const DenseState& b, double tol = kStateTolerance);
double max_phase_aligned_difference(const DenseState& a, const DenseState& b);

// (1/2) ||rho - sigma||_1 from the eigenvalues of rho - sigma.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);
// sqrt(dim)/2 * ||rho - sigma||_F >= trace distance; no eigensolve.
double trace_distance_upper_bound(const DensityMatrix& rho, const DensityMatrix& sigma);
// Upper bound first, exact value only when the bound exceeds `tol`.
double trace_distance_checked(const DensityMatrix& rho, const DensityMatrix& sigma, double tol = kStateTolerance);

// `index re im` per line.
std::string dump(const DenseState& s);

} // namespace qss
