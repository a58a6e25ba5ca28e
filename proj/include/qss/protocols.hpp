#pragma once

// CC, CQ and QQ threshold secret sharing run end to end on the dense oracle.
//
// Parties only ever see their own qudits: every measurement is local and is
// applied to the shared dense state, and decoding uses only announced bases
// and the party's own outcomes.

#include "qss/field.hpp"
#include "qss/graph.hpp"
#include "qss/oracle.hpp"
#include "qss/pauli.hpp"
#include "qss/rewrite.hpp"
#include "qss/schemes.hpp"
#include "qss/transcript.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qss {

// Site ids outside the graph: the dealer's secret qudit and the eavesdropper.
inline constexpr int kSecretId = -1;
inline constexpr int kEveId = -2;

// ---- CC -----------------------------------------------------------------

// z = s * scheme.encoding on the player graph.
LabelledGraph cc_encode(const Scheme& scheme, const FieldElement& s);

enum class RecoveryMode { Symbolic, Oracle };

struct LocalOutcome {
    int party;            // external id
    FieldElement x, z;    // observable X^x Z^z
    FieldElement outcome; // eigenvalue exponent
};

struct CcRecovery {
    bool recovered = false;
    std::optional<FieldElement> secret;
    FieldVector weights;                                  // access witness when recovered
    std::optional<std::vector<ShuffleStep>> certificate;  // when denied
    std::vector<LocalOutcome> measurements;               // oracle mode only
};

// Symbolic: reads the eigenvalue of the access witness off the labels.
// Oracle: each party measures its local factor of prod K_i^{w_i} on the dense
// state and the outcomes are combined.
CcRecovery cc_recover(const Scheme& scheme, const LabelledGraph& encoded, const std::vector<int>& subset,
                      RecoveryMode mode, std::uint64_t seed);

// Max pairwise trace distance of the subset's reduced state over all s.
double cc_denial_distance(const Scheme& scheme, const std::vector<int>& subset);

// ---- CQ -----------------------------------------------------------------

enum class Eavesdropper { None, InterceptResend };

struct CqConfig {
    std::size_t rounds = 1000;
    std::uint64_t seed = 0;
    Eavesdropper eavesdropper = Eavesdropper::None;
    // Set that pools its measurements; empty means the scheme default
    // (all players for the tree, players 1..k otherwise).
    std::vector<int> authorized;
    double sacrifice = 0.5;  // fraction of kept rounds spent on verification
};

struct CqRound {
    std::size_t index = 0;
    std::uint32_t t_dealer = 0;
    std::uint32_t dealer_dit = 0;
    bool kept = false;
    bool sacrificed = false;
    bool decoded = false;       // players found a stabilizer decomposition
    std::uint32_t player_dit = 0;
    bool violation = false;     // sacrificed round failed its stabilizer check
    std::vector<TranscriptEvent> events;
};

struct CqResult {
    std::vector<CqRound> rounds;
    std::size_t kept = 0;
    std::size_t sacrificed = 0;
    std::size_t key_length = 0;   // kept and not sacrificed
    std::size_t mismatches = 0;   // over every kept round
    std::size_t violations = 0;   // over sacrificed rounds
    double kept_fraction = 0;
    double violation_rate = 0;
    ProtocolTranscript transcript;
};

CqResult cq_run(const Scheme& scheme, const CqConfig& config);

// The authorised set's local observables (one per site) that pool into the
// prescribed stabilizer product of the reduced graph left by a dealer
// measurement in basis X^t Z.
PauliOperator cq_player_observable(const Scheme& scheme, const std::vector<int>& authorized, const FieldElement& t);

// Players' estimate of the dealer's dit from their pooled outcome, or
// std::nullopt when the pooled observable reveals nothing.
//   reduced0: graph left by the dealer's basis with outcome 0
//   direction: d(z)/ds of that graph's labels
std::optional<FieldElement> decode_dealer_dit(const LabelledGraph& reduced0, const FieldVector& direction,
                                              const PauliOperator& pooled, const FieldElement& outcome_sum);

// Smallest a with (X^t Z)_D^a (x) pooled in the extended graph's stabilizer
// group; the check is a s + sum_e = phase. std::nullopt if none.
struct VerificationRecipe {
    FieldElement dealer_power;
    FieldElement phase;
    FieldVector weights;
};
std::optional<VerificationRecipe> verification_recipe(const LabelledGraph& extended, const FieldElement& t,
                                                      const PauliOperator& pooled_players);

// Both sides of the kept-round stabilizer identity for the default set:
//   twothree: K_D^{2t} K_1^{-2t} K_2 = w^{3t} (X^t Z)_D^2 k_1^{-2t} k_2
//   ring35:   K_D^t K_1^{-t} K_2^{1+2t} K_3^{-t} = w^t (X^t Z)_D k_1^{-t} k_2^{1+2t} k_3^{-t}
// with k_i the stabilizers of the graph left by the dealer's outcome-0
// measurement. `rhs` is the product without the stated w-power.
struct StabilizerIdentity {
    PauliOperator lhs;
    PauliOperator rhs;
    FieldElement stated_phase;
    bool holds() const { return lhs == rhs.with_phase(rhs.phase() + stated_phase); }
};
StabilizerIdentity cq_stabilizer_identity(const Scheme& scheme, const FieldElement& t);

// rho_ED vs rho_E (x) I/d on the post-verification family
//   twothree: sum_i a_i |i>_E |g_{z=(i,i,0)}>_{D,1,2}
//   ring35:   sum_ij a_ij |ij>_E |g_{z=(i+j,i,0,j)}>_{D,1,2,3}
// alpha has d (twothree) or d^2 (ring35) entries and unit norm.
struct SecurityAudit {
    double product_distance = 0;  // T(rho_ED, rho_E (x) I/d)
    double dealer_distance = 0;   // T(rho_D, I/d)
};
SecurityAudit cq_audit_security(const Scheme& scheme, std::span<const Amplitude> alpha);
std::size_t cq_audit_family_size(const Scheme& scheme);

// ---- QQ -----------------------------------------------------------------

using QuantumSecret = std::vector<Amplitude>;

// Haar-like random unit vector from Gaussian components.
QuantumSecret random_secret(std::uint32_t d, Rng& rng);
// Checks length and normalises.
QuantumSecret make_secret(std::uint32_t d, std::vector<Amplitude> amplitudes);

// sum_j a_j |g_{z = j A_D}> on the players, built directly.
DenseState encoded_quantum_secret(const Scheme& scheme, const QuantumSecret& secret);

struct QqDeal {
    FieldElement m, n;
    double probability = 0;
    DenseState corrected;
};

// Bell measurement of the dealer's pair, then U_mn = K_a^{-n/A_Da} Z^{-m A_D}.
QqDeal qq_deal(const Scheme& scheme, const QuantumSecret& secret, std::uint64_t seed);
// Same with the Bell outcome forced.
QqDeal qq_deal_outcome(const Scheme& scheme, const QuantumSecret& secret, const FieldElement& m,
                       const FieldElement& n);
PauliOperator qq_correction(const Scheme& scheme, const FieldElement& m, const FieldElement& n);

struct QqRecovery {
    int output = 0;              // id holding the secret
    QuantumSecret decoded;       // dominant pure component of the output site
    double fidelity = 0;         // <secret| rho_output |secret>
    std::string method;
    std::vector<TranscriptEvent> events;
};

bool qq_authorized(const Scheme& scheme, const std::vector<int>& subset);

// Throws DomainError for an unauthorised subset.
QqRecovery qq_recover(const Scheme& scheme, const DenseState& encoded, const std::vector<int>& subset,
                      const QuantumSecret& reference, std::uint64_t seed);

// Tree only: the other players measure and `target` ends up with the secret.
QqRecovery qq_isolate(const Scheme& scheme, const DenseState& encoded, int target, const QuantumSecret& reference,
                      std::uint64_t seed);

// Outcome-conditioned correction on the target after isolation, frozen from
// the search in tools/derive_isolation_law: apply `pre` (U^{-1} on player 1,
// nothing otherwise), then X^{shift}, then j -> -j when `negate`.
struct IsolationLaw {
    bool inverse_fourier = false;
    FieldElement shift;
    bool negate = false;
};
// centre_outcome is the X outcome of player 1 (unused when target == 1);
// z_outcomes are the Z outcomes of the remaining players.
IsolationLaw isolation_law(int target, const FieldElement& centre_outcome, const FieldVector& z_outcomes);

// d basis secrets plus every (|a> + |b>)/sqrt2.
std::vector<QuantumSecret> probe_secrets(std::uint32_t d);

// Max pairwise trace distance of the subset's reduced states over the probe
// family. Throws DomainError for an authorised subset.
double qq_audit_denial(const Scheme& scheme, const std::vector<int>& subset);

// ---- whole runs, as the CLI executes them ---------------------------------

struct RunResult {
    ProtocolTranscript transcript;
    std::string summary;
    bool ok = true;
};

RunResult run_cc(const Scheme& scheme, const FieldElement& secret, const std::vector<int>& subset, RecoveryMode mode,
                 std::uint64_t seed);
RunResult run_cq(const Scheme& scheme, const CqConfig& config);
RunResult run_qq(const Scheme& scheme, const std::optional<QuantumSecret>& secret, const std::vector<int>& subset,
                 std::uint64_t seed);

} // namespace qss
