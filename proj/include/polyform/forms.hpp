#pragma once

// Generalized m-gonal numbers P_m(x) = (m-2)(x^2-x)/2 + x, weighted m-gonal
// forms a_1 P_m(x_1) + ... + a_n P_m(x_n), and the exact shift that turns an
// m-gonal representation question into a diagonal quadratic one:
//
//   F_m(x) = N  <=>  sum a_i (2(m-2)x_i - (m-4))^2 = 8(m-2)N + (m-4)^2 sum a_i
//
// with a dyadic variant (divide the completed square by 16) when 4 | m-4.

#include <optional>
#include <span>
#include <vector>

#include "polyform/numeric.hpp"

namespace polyform {

inline constexpr int64_t kMaxPolygonality = 1'000'000'000;
inline constexpr int64_t kMaxCoefficient = 1'000'000'000;

// Weighted sum of generalized m-gonal numbers with positive integer weights.
// Primitive (gcd of weights = 1) by construction; order of weights preserved.
class MGonalForm {
public:
    MGonalForm(int64_t m, std::vector<int64_t> coeffs);

    int64_t m() const { return m_; }
    const std::vector<int64_t>& coeffs() const { return coeffs_; }
    int rank() const { return static_cast<int>(coeffs_.size()); }
    int64_t coeff_sum() const { return sum_; }

    bool operator==(const MGonalForm&) const = default;

private:
    int64_t m_;
    std::vector<int64_t> coeffs_;
    int64_t sum_;
};

// Positive-definite diagonal quadratic form <a_1,...,a_n>.  Non-primitive
// tuples are allowed here (internal shadows may be scaled); the flag records
// whether the tuple is primitive.
class DiagonalQuadraticForm {
public:
    explicit DiagonalQuadraticForm(std::vector<int64_t> coeffs);

    const std::vector<int64_t>& coeffs() const { return coeffs_; }
    int rank() const { return static_cast<int>(coeffs_.size()); }
    bool primitive() const { return primitive_; }
    BigInt discriminant() const;

    bool operator==(const DiagonalQuadraticForm&) const = default;

private:
    std::vector<int64_t> coeffs_;
    bool primitive_;
};

// The coefficient tuple of F viewed as a diagonal quadratic form.
DiagonalQuadraticForm quadratic_shadow(const MGonalForm& f);

// P_m(x); nonnegative for every integer x once m >= 3.
BigInt polygonal_number(int64_t m, const BigInt& x);
int64_t polygonal_number_ll(int64_t m, int64_t x); // caller guarantees no overflow

// Smallest-|x| (positive preferred) with P_m(x) = N, if N is m-gonal.
std::optional<BigInt> polygonal_inverse(int64_t m, const BigInt& n);

BigInt evaluate(const MGonalForm& f, std::span<const int64_t> x);

enum class ShiftKind { generic, dyadic };

// theta = scale * N + offset, the bridge integer of the shift identity.
struct ShiftedTarget {
    ShiftKind kind;
    BigInt theta;
    int64_t scale;  // 8(m-2), or (m-2)/2 for the dyadic kind
    BigInt offset;    // (m-4)^2 sum a_i, or ((m-4)/4)^2 sum a_i
};

ShiftedTarget shift(const MGonalForm& f, const BigInt& n,
                    ShiftKind kind = ShiftKind::generic);

// Inverse of x_i -> y_i = 2(m-2)x_i - (m-4); none unless every y_i lies in
// the right residue class mod 2(m-2).
std::optional<std::vector<int64_t>> unshift_solution(const MGonalForm& f,
                                                       std::span<const int64_t> y);

} // namespace polyform
