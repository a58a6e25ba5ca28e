#pragma once

// Arithmetic in the prime field F_d for odd primes d.

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <vector>

namespace qss {

// Largest modulus accepted. Dense simulation is the real bound; this only
// keeps products of two residues far away from int64 overflow.
inline constexpr std::uint32_t kMaxModulus = 1u << 20;

bool is_prime(std::uint32_t n);

// Throws DomainError unless d is an odd prime no larger than kMaxModulus.
void require_odd_prime(std::uint32_t d);

class FieldElement {
public:
    // Reduces any integer (negative included) into [0, d). Validates d.
    FieldElement(std::int64_t value, std::uint32_t modulus);

    static FieldElement zero(std::uint32_t modulus) { return {0, modulus, Unchecked{}}; }
    static FieldElement one(std::uint32_t modulus) { return {1, modulus, Unchecked{}}; }

    std::uint32_t value() const noexcept { return value_; }
    std::uint32_t modulus() const noexcept { return modulus_; }
    bool is_zero() const noexcept { return value_ == 0; }

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator-() const;
    FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
    FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
    FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }

    // Same value with an integer: the integer is reduced with this modulus.
    FieldElement operator+(std::int64_t k) const { return *this + FieldElement(k, modulus_); }
    FieldElement operator*(std::int64_t k) const { return *this * FieldElement(k, modulus_); }

    // Throws DomainError on zero.
    FieldElement inv() const;
    // a * 2^{-1}; total because d is odd.
    FieldElement half() const;
    FieldElement pow(std::uint64_t k) const;

    // Symmetric representative in (-d/2, d/2), handy for printing.
    std::int64_t centered() const noexcept;

    friend bool operator==(const FieldElement&, const FieldElement&) = default;

private:
    struct Unchecked {};
    FieldElement(std::uint32_t value, std::uint32_t modulus, Unchecked) noexcept
        : value_(value), modulus_(modulus) {}

    void require_same_modulus(const FieldElement& o) const;

    std::uint32_t value_;
    std::uint32_t modulus_;
};

std::ostream& operator<<(std::ostream& os, const FieldElement& a);

inline FieldElement add(const FieldElement& a, const FieldElement& b) { return a + b; }
inline FieldElement sub(const FieldElement& a, const FieldElement& b) { return a - b; }
inline FieldElement mul(const FieldElement& a, const FieldElement& b) { return a * b; }
inline FieldElement neg(const FieldElement& a) { return -a; }
inline FieldElement inv(const FieldElement& a) { return a.inv(); }
inline FieldElement half(const FieldElement& a) { return a.half(); }

using FieldVector = std::vector<FieldElement>;

FieldVector zero_vector(std::size_t n, std::uint32_t modulus);
FieldVector make_vector(std::initializer_list<std::int64_t> values, std::uint32_t modulus);
FieldVector make_vector(const std::vector<std::int64_t>& values, std::uint32_t modulus);
FieldElement dot(const FieldVector& a, const FieldVector& b);

// Row-major dense matrix over F_d.
class FieldMatrix {
public:
    FieldMatrix(std::size_t rows, std::size_t cols, std::uint32_t modulus);

    static FieldMatrix identity(std::size_t n, std::uint32_t modulus);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::uint32_t modulus() const noexcept { return modulus_; }

    FieldElement& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const FieldElement& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    FieldVector operator*(const FieldVector& v) const;

    friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::uint32_t modulus_;
    std::vector<FieldElement> data_;
};

// Every solution of M w = rhs is particular + span(nullspace).
struct AffineSolution {
    FieldVector particular;
    std::vector<FieldVector> nullspace;
};

// Gaussian elimination over F_d. std::nullopt means the system is inconsistent.
std::optional<AffineSolution> solve_linear(const FieldMatrix& m, const FieldVector& rhs);

} // namespace qss
