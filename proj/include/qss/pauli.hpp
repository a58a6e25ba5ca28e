#pragma once

// Generalized Pauli operators  w^phase * (x)_i X_i^{x_i} Z_i^{z_i}  on n qudits,
// where w = exp(2 pi i / d). On every site Z acts first, then X.

#include "qss/field.hpp"
#include "qss/graph.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qss {

class PauliOperator {
public:
    // Identity on n sites.
    PauliOperator(std::size_t n, std::uint32_t d);
    PauliOperator(FieldElement phase, FieldVector x, FieldVector z);

    // X^x Z^z on one site, identity elsewhere.
    static PauliOperator local(std::size_t n, std::size_t site, const FieldElement& x, const FieldElement& z);

    std::uint32_t modulus() const noexcept { return phase_.modulus(); }
    std::size_t size() const noexcept { return x_.size(); }
    const FieldElement& phase() const noexcept { return phase_; }
    const FieldVector& x() const noexcept { return x_; }
    const FieldVector& z() const noexcept { return z_; }
    const FieldElement& x(std::size_t site) const { return x_.at(site); }
    const FieldElement& z(std::size_t site) const { return z_.at(site); }

    // Identity up to phase.
    bool is_scalar() const;
    bool is_identity() const { return is_scalar() && phase_.is_zero(); }
    std::vector<std::size_t> support() const;

    PauliOperator with_phase(const FieldElement& phase) const;
    // Restriction to one site, phase dropped.
    PauliOperator site_factor(std::size_t site) const;

    friend bool operator==(const PauliOperator&, const PauliOperator&) = default;

private:
    FieldElement phase_;
    FieldVector x_;
    FieldVector z_;
};

// p * q. Moving each Z^b of p past X^a of q costs w^{ab}.
PauliOperator multiply(const PauliOperator& p, const PauliOperator& q);
inline PauliOperator operator*(const PauliOperator& p, const PauliOperator& q) { return multiply(p, q); }

// p^k for k in F_d (negative powers are taken mod d since p^d = I for odd d).
PauliOperator power(const PauliOperator& p, const FieldElement& k);
PauliOperator power(const PauliOperator& p, std::int64_t k);

// Exponent e in  p q = w^e q p.
FieldElement commutation_exponent(const PauliOperator& p, const PauliOperator& q);

// `w^2 X1 Z2^3 X4`: phase prefix when nonzero, then per site X before Z,
// exponents printed when != 1; `I` for the identity. `labels[i]` names site i
// (defaults to 1..n).
std::string to_string(const PauliOperator& p, const std::vector<std::string>& labels = {});

// Single-site observable spelled without a site index, e.g. `X^2Z`, `Z`, `XZ^2`.
std::string local_basis_name(const FieldElement& x, const FieldElement& z);

// Local measurement families that appear in the rewrite rules.
struct MeasurementBasis {
    enum class Kind { Z, XmZ };
    Kind kind = Kind::Z;
    FieldElement m;  // only meaningful for XmZ

    static MeasurementBasis z_basis(std::uint32_t d) { return {Kind::Z, FieldElement::zero(d)}; }
    static MeasurementBasis xm_z(const FieldElement& m) { return {Kind::XmZ, m}; }

    // Exponents of the observable: Z -> (0,1); X^m Z -> (m,1).
    FieldElement x_exponent() const { return kind == Kind::Z ? FieldElement::zero(m.modulus()) : m; }
    FieldElement z_exponent() const { return FieldElement::one(m.modulus()); }

    friend bool operator==(const MeasurementBasis&, const MeasurementBasis&) = default;
};

std::string to_string(const MeasurementBasis& b);
// Accepts `Z` or `X^mZ` forms: `XZ`, `X2Z`, `X^2Z`.
MeasurementBasis parse_measurement_basis(const std::string& text, std::uint32_t d);

// Graph-state stabilizer K_i = (X Z^{m_i})_i Z^{A_i}, phase 0.
PauliOperator stabilizer_of(const LabelledGraph& g, std::size_t i);

// prod_i K_i^{w_i}. The K_i commute, so the order is immaterial.
PauliOperator stabilizer_product(const LabelledGraph& g, const FieldVector& w);

// Exponent of the eigenvalue of prod_i K_i^{w_i} on the labelled state:
//   -sum_i w_i (z_i - sum_j A_ij x_j),
// which is -sum_i w_i z_i for encoded graphs.
FieldElement eigenvalue_exponent(const LabelledGraph& g, const FieldVector& w);

// Writes `op` as w^phase * prod_i K_i^{w_i} when it lies in the stabilizer
// group up to phase; std::nullopt otherwise.
struct StabilizerDecomposition {
    FieldVector weights;
    FieldElement phase;
};
std::optional<StabilizerDecomposition> decompose_in_stabilizers(const LabelledGraph& g, const PauliOperator& op);

} // namespace qss
