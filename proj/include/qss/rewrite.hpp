#pragma once

// Symbolic rewrite calculus on labelled graph states: stabilizer relabelling,
// label shuffling, local X^m Z / Z measurement, and the LOCC access solver.
//
// Every function returns a new graph; inputs are never modified.

#include "qss/field.hpp"
#include "qss/graph.hpp"
#include "qss/pauli.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace qss {

// Multiplying by K_i^k: x_i += k and z_j += k A_ij for every j. The physical
// state is unchanged up to a global phase.
LabelledGraph apply_stabilizer_power(const LabelledGraph& g, std::size_t i, const FieldElement& k);

// Moves z_i off vertex i using the stabilizer of its neighbour j:
// apply_stabilizer_power(g, j, -A_ij^{-1} z_i). Afterwards z_i = 0.
// Throws DomainError if A_ij = 0.
LabelledGraph shuffle(const LabelledGraph& g, std::size_t i, std::size_t j);

struct SymbolicMeasurementResult {
    LabelledGraph reduced;
    FieldElement outcome;  // eigenvalue exponent s, outcome w^s
    MeasurementBasis basis;
    int measured_vertex;   // external id
};

// Measures `basis` on vertex i of an encoded graph and post-selects outcome w^s.
//   X^m Z:  A_jk += m A_ij A_ik            (distinct neighbours j, k of i)
//           z_j  += A_ij s + m A_ij z_i + m A_ij (A_ij + 1) / 2
//           m_j  += m A_ij^2
//           then vertex i and its edges are removed.
//   Z:      the m = 0 case.
// A vertex carrying an S label (m_i = c != 0) is handled by conjugating the
// observable through S^c first: S^{-c} X^m Z S^c = w^{-c m(m-1)/2} X^m Z^{1-cm},
// which is again (a power of) X^{m'} Z unless 1 - cm = 0.
// Throws DomainError for: a non-encoded graph, an isolated vertex, or an
// observable that conjugates to pure X^m (1 - cm = 0).
SymbolicMeasurementResult measure_symbolic(const LabelledGraph& g, std::size_t i, const MeasurementBasis& basis,
                                           const FieldElement& outcome);

// Bare-vertex basis and outcome equivalent to measuring `basis` with outcome
// `s` on a vertex carrying m label `c`. std::nullopt when the conjugated
// observable is a pure X power.
struct EffectiveMeasurement {
    MeasurementBasis basis;
    FieldElement outcome;
};
std::optional<EffectiveMeasurement> effective_bare_measurement(const FieldElement& c, const MeasurementBasis& basis,
                                                               const FieldElement& s);

// Weights w supported on `subset` (internal indices) with sum_i w_i A_ij = 0
// for every j outside the subset and sum_i w_i target_i = 1. When the labels
// are z = z0 + s * target, measuring prod K_i^{w_i} reveals s. Requires an
// encoded graph; std::nullopt when no such w exists.
std::optional<FieldVector> access_weights(const LabelledGraph& g, const std::vector<std::size_t>& subset,
                                          const FieldVector& target);

struct ShuffleStep {
    int from;  // external ids
    int to;
    friend bool operator==(const ShuffleStep&, const ShuffleStep&) = default;
};

std::string to_string(const std::vector<ShuffleStep>& steps);

// Breadth-first search for a shortest shuffle sequence after which no vertex
// of `subset` carries a label depending on the secret, where the secret enters
// the labels as z = z0 + s * secret_direction. Returns the empty sequence when
// the subset is already independent; std::nullopt when no sequence of at most
// `max_depth` shuffles exists (max_depth < 0 means n).
std::optional<std::vector<ShuffleStep>> denial_certificate(const LabelledGraph& g,
                                                           const std::vector<std::size_t>& subset,
                                                           const FieldVector& secret_direction,
                                                           int max_depth = -1);

// Applies a certificate to the s-coefficient labels (z = secret_direction,
// x = 0) and returns the resulting coefficient graph.
LabelledGraph apply_certificate(const LabelledGraph& g, const FieldVector& secret_direction,
                                const std::vector<ShuffleStep>& steps);

} // namespace qss
