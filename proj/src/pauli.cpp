#include "qss/pauli.hpp"

#include "qss/errors.hpp"

#include <cctype>
#include <sstream>

namespace qss {

PauliOperator::PauliOperator(std::size_t n, std::uint32_t d)
    : phase_(FieldElement(0, d)), x_(zero_vector(n, d)), z_(zero_vector(n, d)) {}

PauliOperator::PauliOperator(FieldElement phase, FieldVector x, FieldVector z)
    : phase_(phase), x_(std::move(x)), z_(std::move(z)) {
    if (x_.size() != z_.size()) throw DomainError("Pauli operator: x and z lengths differ");
    for (std::size_t i = 0; i < x_.size(); ++i) {
        if (x_[i].modulus() != phase_.modulus() || z_[i].modulus() != phase_.modulus()) {
            throw ModulusError("Pauli operator: exponent modulus mismatch");
        }
    }
}

PauliOperator PauliOperator::local(std::size_t n, std::size_t site, const FieldElement& x, const FieldElement& z) {
    if (site >= n) throw DomainError("Pauli operator: site out of range");
    if (x.modulus() != z.modulus()) throw ModulusError("Pauli operator: exponent modulus mismatch");
    PauliOperator p(n, x.modulus());
    p.x_[site] = x;
    p.z_[site] = z;
    return p;
}

bool PauliOperator::is_scalar() const {
    for (std::size_t i = 0; i < size(); ++i) {
        if (!x_[i].is_zero() || !z_[i].is_zero()) return false;
    }
    return true;
}

std::vector<std::size_t> PauliOperator::support() const {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < size(); ++i) {
        if (!x_[i].is_zero() || !z_[i].is_zero()) s.push_back(i);
    }
    return s;
}

PauliOperator PauliOperator::with_phase(const FieldElement& phase) const {
    return PauliOperator(phase, x_, z_);
}

PauliOperator PauliOperator::site_factor(std::size_t site) const {
    return local(size(), site, x_.at(site), z_.at(site));
}

namespace {

void require_compatible(const PauliOperator& p, const PauliOperator& q) {
    if (p.size() != q.size()) throw DomainError("Pauli operators act on different numbers of sites");
    if (p.modulus() != q.modulus()) throw ModulusError("Pauli operators have different moduli");
}

} // namespace

PauliOperator multiply(const PauliOperator& p, const PauliOperator& q) {
    require_compatible(p, q);
    FieldElement phase = p.phase() + q.phase() + dot(p.z(), q.x());
    FieldVector x = p.x();
    FieldVector z = p.z();
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] += q.x(i);
        z[i] += q.z(i);
    }
    return PauliOperator(phase, std::move(x), std::move(z));
}

PauliOperator power(const PauliOperator& p, const FieldElement& k) {
    if (k.modulus() != p.modulus()) throw ModulusError("power: exponent modulus mismatch");
    // (w^c X^a Z^b)^k = w^{kc + ab k(k-1)/2} X^{ka} Z^{kb}; k(k-1)/2 is taken
    // in F_d, which is consistent because d is odd and p^d = I.
    const FieldElement tri = (k * (k - FieldElement::one(k.modulus()))).half();
    FieldElement phase = k * p.phase() + tri * dot(p.x(), p.z());
    FieldVector x = p.x();
    FieldVector z = p.z();
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] *= k;
        z[i] *= k;
    }
    return PauliOperator(phase, std::move(x), std::move(z));
}

PauliOperator power(const PauliOperator& p, std::int64_t k) {
    return power(p, FieldElement(k, p.modulus()));
}

FieldElement commutation_exponent(const PauliOperator& p, const PauliOperator& q) {
    require_compatible(p, q);
    // pq = w^{z_p.x_q} (...), qp = w^{z_q.x_p} (...)
    return dot(p.z(), q.x()) - dot(q.z(), p.x());
}

namespace {

void append_factor(std::ostringstream& os, const char* letter, const std::string& site, const FieldElement& e) {
    if (e.is_zero()) return;
    os << letter << site;
    if (e.value() != 1) os << "^" << e.value();
}

} // namespace

std::string to_string(const PauliOperator& p, const std::vector<std::string>& labels) {
    std::ostringstream os;
    std::vector<std::string> parts;
    if (!p.phase().is_zero()) parts.push_back("w^" + std::to_string(p.phase().value()));
    for (std::size_t i = 0; i < p.size(); ++i) {
        const std::string site = i < labels.size() ? labels[i] : std::to_string(i + 1);
        std::ostringstream xs, zs;
        append_factor(xs, "X", site, p.x(i));
        append_factor(zs, "Z", site, p.z(i));
        if (!xs.str().empty()) parts.push_back(xs.str());
        if (!zs.str().empty()) parts.push_back(zs.str());
    }
    if (p.is_scalar()) parts.push_back("I");
    for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? " " : "") << parts[i];
    return os.str();
}

std::string local_basis_name(const FieldElement& x, const FieldElement& z) {
    std::ostringstream os;
    append_factor(os, "X", "", x);
    append_factor(os, "Z", "", z);
    const std::string s = os.str();
    return s.empty() ? "I" : s;
}

std::string to_string(const MeasurementBasis& b) {
    return local_basis_name(b.x_exponent(), b.z_exponent());
}

MeasurementBasis parse_measurement_basis(const std::string& text, std::uint32_t d) {
    if (text == "Z") return MeasurementBasis::z_basis(d);
    auto bad = [&] { return DomainError("unrecognised measurement basis '" + text + "' (expected Z or X^mZ)"); };
    if (text.size() < 2 || text.front() != 'X' || text.back() != 'Z') throw bad();
    std::string mid = text.substr(1, text.size() - 2);
    if (!mid.empty() && mid.front() == '^') mid.erase(0, 1);
    std::int64_t m = 1;
    if (!mid.empty()) {
        for (char c : mid) {
            if (!std::isdigit(static_cast<unsigned char>(c))) throw bad();
        }
        m = std::stoll(mid);
    }
    return MeasurementBasis::xm_z(FieldElement(m, d));
}

PauliOperator stabilizer_of(const LabelledGraph& g, std::size_t i) {
    g.require_vertex(i);
    const std::uint32_t d = g.modulus();
    FieldVector x = zero_vector(g.size(), d);
    FieldVector z = g.row(i);
    x[i] = FieldElement::one(d);
    z[i] = g.label(i).m;
    return PauliOperator(FieldElement::zero(d), std::move(x), std::move(z));
}

PauliOperator stabilizer_product(const LabelledGraph& g, const FieldVector& w) {
    if (w.size() != g.size()) throw DomainError("stabilizer_product: weight vector length mismatch");
    PauliOperator acc(g.size(), g.modulus());
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (w[i].is_zero()) continue;
        acc = acc * power(stabilizer_of(g, i), w[i]);
    }
    return acc;
}

FieldElement eigenvalue_exponent(const LabelledGraph& g, const FieldVector& w) {
    if (w.size() != g.size()) throw DomainError("eigenvalue_exponent: weight vector length mismatch");
    const FieldVector xs = g.x_labels();
    FieldElement acc = FieldElement::zero(g.modulus());
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (w[i].is_zero()) continue;
        acc += w[i] * (g.label(i).z - dot(g.row(i), xs));
    }
    return -acc;
}

std::optional<StabilizerDecomposition> decompose_in_stabilizers(const LabelledGraph& g, const PauliOperator& op) {
    if (op.size() != g.size()) throw DomainError("decompose_in_stabilizers: operator size mismatch");
    if (op.modulus() != g.modulus()) throw ModulusError("decompose_in_stabilizers: modulus mismatch");
    // K_i is the only generator with an X on site i, so the weights are the
    // X exponents of op; the Z parts must then agree.
    const FieldVector weights = op.x();
    const PauliOperator prod = stabilizer_product(g, weights);
    if (prod.z() != op.z()) return std::nullopt;
    return StabilizerDecomposition{weights, op.phase() - prod.phase()};
}

} // namespace qss
