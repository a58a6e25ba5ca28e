#pragma once

// Cross-validation of the symbolic layer against the dense oracle, grouped
// into suites for `qss verify`. The individual checks take their sample sizes
// as arguments so the acceptance binary can pin them.

#include "qss/field.hpp"
#include "qss/graph.hpp"
#include "qss/oracle.hpp"
#include "qss/pauli.hpp"
#include "qss/rng.hpp"
#include "qss/schemes.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace qss {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;  // measured values
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool all_pass() const;
    // `PASS name: detail` per line.
    std::string render() const;
};

// all, field, pauli, graph, oracle, protocols. Throws DomainError otherwise.
VerifyReport run_suite(const std::string& suite, std::uint64_t seed);
const std::vector<std::string>& suite_names();

// ---- random fixtures --------------------------------------------------------

// Random weights (edge present with probability 1/2, weight nonzero) and
// random z labels; every vertex gets at least one neighbour when n >= 2.
// With `s_labels` the m labels are random too.
LabelledGraph random_encoded_graph(std::size_t n, std::uint32_t d, Rng& rng, bool s_labels = false);
// Same with random x labels as well.
LabelledGraph random_labelled_graph(std::size_t n, std::uint32_t d, Rng& rng);
DenseState random_state(std::uint32_t d, std::size_t sites, Rng& rng);
PauliOperator random_pauli(std::size_t n, std::uint32_t d, Rng& rng);

// ---- individual checks ----------------------------------------------------

// Worst |K_i|G> - w^{-z_i}|G>| entry over `graphs` random encoded graphs for
// each n in [n_min, n_max] and d in ds.
CheckResult check_stabilizer_eigen(const std::vector<std::uint32_t>& ds, std::size_t n_min, std::size_t n_max,
                                   std::size_t graphs, Rng& rng);

// Every vertex, every m, every outcome on random graphs (half of them with S
// labels): symbolic reduction vs oracle projection, and Born probability 1/d.
CheckResult check_measurement_rules(const std::vector<std::uint32_t>& ds, std::size_t n_max, std::size_t graphs,
                                    Rng& rng);

CheckResult check_relabelling(const std::vector<std::uint32_t>& ds, std::size_t n_max, std::size_t graphs, Rng& rng);
CheckResult check_shuffle_is_stabilizer_power(const std::vector<std::uint32_t>& ds, std::size_t graphs, Rng& rng);
CheckResult check_access_soundness(const std::vector<std::uint32_t>& ds, std::size_t graphs, Rng& rng);
CheckResult check_denial_soundness(const std::vector<std::uint32_t>& ds, std::size_t graphs, Rng& rng);

CheckResult check_field_inverses(const std::vector<std::uint32_t>& ds);
CheckResult check_solve_linear(const std::vector<std::uint32_t>& ds, std::size_t systems, Rng& rng);
CheckResult check_pauli_group_laws(const std::vector<std::uint32_t>& ds);
// Symbolic multiply vs product of dense operator matrices, phase included.
CheckResult check_pauli_matrix_product(const std::vector<std::uint32_t>& ds, std::size_t n_max, std::size_t pairs,
                                       Rng& rng);

CheckResult check_unitarity(const std::vector<std::uint32_t>& ds, Rng& rng);
CheckResult check_projector_completeness(const std::vector<std::uint32_t>& ds, Rng& rng);
CheckResult check_born_rule(const std::vector<std::uint32_t>& ds, std::size_t samples, Rng& rng);
CheckResult check_kernel_backends(const std::vector<std::uint32_t>& ds, Rng& rng);

// Weight-2 square in d = 5, z = 1 on every vertex, vertex 1 adjacent to 2 and 3.
LabelledGraph measured_square_fixture();
// Cycle 1-2-3-4-1 in d = 5, weight 2, z_1 = 3.
LabelledGraph shuffle_square_fixture();

// Measures `vertex` with X^m Z and the given outcome, then asks the oracle
// which weights of the new (a, b) edge reproduce the true post-measurement
// state with the symbolic labels.
struct EdgeArbitration {
    LabelledGraph symbolic;
    std::vector<std::uint32_t> matching_weights;
    double probability = 0;
    bool symbolic_matches = false;
};
EdgeArbitration arbitrate_edge(const LabelledGraph& g, int vertex, const FieldElement& m, const FieldElement& outcome,
                               int a, int b);

// Oracle verdict on the square measurement, the expected labels z = 0, m = 3
// on vertices 2 and 3, and whether the competing edge value 1 also fits.
CheckResult check_square_measurement(const LabelledGraph* golden = nullptr);
CheckResult check_square_shuffle();

} // namespace qss
