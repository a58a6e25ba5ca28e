#include "qss/field.hpp"

#include "qss/errors.hpp"

#include <ostream>
#include <string>
#include <utility>

namespace qss {

bool is_prime(std::uint32_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint32_t k = 3; k * k <= n; k += 2) {
        if (n % k == 0) return false;
    }
    return true;
}

void require_odd_prime(std::uint32_t d) {
    if (d == 2) throw DomainError("modulus 2 is not supported: d must be an odd prime");
    if (d > kMaxModulus || !is_prime(d)) {
        throw DomainError("modulus " + std::to_string(d) + " is not an odd prime");
    }
}

FieldElement::FieldElement(std::int64_t value, std::uint32_t modulus) : modulus_(modulus) {
    require_odd_prime(modulus);
    const auto m = static_cast<std::int64_t>(modulus);
    std::int64_t r = value % m;
    if (r < 0) r += m;
    value_ = static_cast<std::uint32_t>(r);
}

void FieldElement::require_same_modulus(const FieldElement& o) const {
    if (modulus_ != o.modulus_) {
        throw ModulusError("modulus mismatch: " + std::to_string(modulus_) + " vs " +
                           std::to_string(o.modulus_));
    }
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
    require_same_modulus(o);
    std::uint32_t s = value_ + o.value_;
    if (s >= modulus_) s -= modulus_;
    return {s, modulus_, Unchecked{}};
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
    require_same_modulus(o);
    std::uint32_t s = value_ >= o.value_ ? value_ - o.value_ : value_ + modulus_ - o.value_;
    return {s, modulus_, Unchecked{}};
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
    require_same_modulus(o);
    const auto p = static_cast<std::uint64_t>(value_) * o.value_;
    return {static_cast<std::uint32_t>(p % modulus_), modulus_, Unchecked{}};
}

FieldElement FieldElement::operator-() const {
    return {value_ == 0 ? 0 : modulus_ - value_, modulus_, Unchecked{}};
}

FieldElement FieldElement::pow(std::uint64_t k) const {
    FieldElement base = *this;
    FieldElement acc = one(modulus_);
    while (k > 0) {
        if (k & 1u) acc *= base;
        base *= base;
        k >>= 1u;
    }
    return acc;
}

FieldElement FieldElement::inv() const {
    if (value_ == 0) throw DomainError("zero has no multiplicative inverse");
    // Extended Euclid on (value, modulus).
    std::int64_t r0 = modulus_, r1 = value_;
    std::int64_t t0 = 0, t1 = 1;
    while (r1 != 0) {
        const std::int64_t q = r0 / r1;
        r0 = std::exchange(r1, r0 - q * r1);
        t0 = std::exchange(t1, t0 - q * t1);
    }
    return {t0, modulus_};
}

FieldElement FieldElement::half() const {
    // 2^{-1} = (d + 1) / 2 for odd d.
    return *this * FieldElement((modulus_ + 1) / 2, modulus_, Unchecked{});
}

std::int64_t FieldElement::centered() const noexcept {
    const auto v = static_cast<std::int64_t>(value_);
    return v > static_cast<std::int64_t>(modulus_ / 2) ? v - modulus_ : v;
}

std::ostream& operator<<(std::ostream& os, const FieldElement& a) { return os << a.value(); }

FieldVector zero_vector(std::size_t n, std::uint32_t modulus) {
    return FieldVector(n, FieldElement(0, modulus));
}

FieldVector make_vector(std::initializer_list<std::int64_t> values, std::uint32_t modulus) {
    FieldVector out;
    out.reserve(values.size());
    for (auto v : values) out.emplace_back(v, modulus);
    return out;
}

FieldVector make_vector(const std::vector<std::int64_t>& values, std::uint32_t modulus) {
    FieldVector out;
    out.reserve(values.size());
    for (auto v : values) out.emplace_back(v, modulus);
    return out;
}

FieldElement dot(const FieldVector& a, const FieldVector& b) {
    if (a.size() != b.size()) throw DomainError("dot: length mismatch");
    if (a.empty()) throw DomainError("dot: empty vectors carry no modulus");
    FieldElement acc = FieldElement::zero(a.front().modulus());
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

FieldMatrix::FieldMatrix(std::size_t rows, std::size_t cols, std::uint32_t modulus)
    : rows_(rows), cols_(cols), modulus_(modulus), data_(rows * cols, FieldElement(0, modulus)) {}

FieldMatrix FieldMatrix::identity(std::size_t n, std::uint32_t modulus) {
    FieldMatrix m(n, n, modulus);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = FieldElement::one(modulus);
    return m;
}

FieldVector FieldMatrix::operator*(const FieldVector& v) const {
    if (v.size() != cols_) throw DomainError("matrix-vector: dimension mismatch");
    FieldVector out = zero_vector(rows_, modulus_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) out[r] += (*this)(r, c) * v[c];
    }
    return out;
}

std::optional<AffineSolution> solve_linear(const FieldMatrix& m, const FieldVector& rhs) {
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    const std::uint32_t d = m.modulus();
    if (rhs.size() != rows) throw DomainError("solve_linear: rhs length does not match rows");
    for (const auto& r : rhs) {
        if (r.modulus() != d) throw ModulusError("solve_linear: rhs modulus mismatch");
    }

    // Augmented matrix [M | rhs] reduced to reduced row echelon form.
    FieldMatrix aug(rows, cols + 1, d);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) aug(r, c) = m(r, c);
        aug(r, cols) = rhs[r];
    }

    std::vector<std::size_t> pivot_cols;
    std::size_t row = 0;
    for (std::size_t c = 0; c < cols && row < rows; ++c) {
        std::size_t p = row;
        while (p < rows && aug(p, c).is_zero()) ++p;
        if (p == rows) continue;
        if (p != row) {
            for (std::size_t k = 0; k <= cols; ++k) std::swap(aug(p, k), aug(row, k));
        }
        const FieldElement scale = aug(row, c).inv();
        for (std::size_t k = 0; k <= cols; ++k) aug(row, k) *= scale;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == row || aug(r, c).is_zero()) continue;
            const FieldElement f = aug(r, c);
            for (std::size_t k = 0; k <= cols; ++k) aug(r, k) -= f * aug(row, k);
        }
        pivot_cols.push_back(c);
        ++row;
    }

    for (std::size_t r = row; r < rows; ++r) {
        if (!aug(r, cols).is_zero()) return std::nullopt;
    }

    AffineSolution sol;
    sol.particular = zero_vector(cols, d);
    std::vector<bool> is_pivot(cols, false);
    for (std::size_t r = 0; r < pivot_cols.size(); ++r) {
        sol.particular[pivot_cols[r]] = aug(r, cols);
        is_pivot[pivot_cols[r]] = true;
    }
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        FieldVector v = zero_vector(cols, d);
        v[free] = FieldElement::one(d);
        for (std::size_t r = 0; r < pivot_cols.size(); ++r) v[pivot_cols[r]] = -aug(r, free);
        sol.nullspace.push_back(std::move(v));
    }
    return sol;
}

} // namespace qss
