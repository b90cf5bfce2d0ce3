#include "polyform/forms.hpp"

#include <cassert>
#include <numeric>

namespace polyform {

MGonalForm::MGonalForm(int64_t m, std::vector<int64_t> coeffs)
    : m_(m), coeffs_(std::move(coeffs)) {
    if (m_ < 3) throw DomainError("MGonalForm: m must be >= 3");
    if (m_ > kMaxPolygonality) throw DomainError("MGonalForm: m too large");
    if (coeffs_.empty()) throw DomainError("MGonalForm: empty coefficient list");
    int64_t g = 0;
    sum_ = 0;
    for (int64_t a : coeffs_) {
        if (a < 1) throw DomainError("MGonalForm: coefficients must be positive");
        if (a > kMaxCoefficient) throw DomainError("MGonalForm: coefficient too large");
        g = std::gcd(g, a);
        sum_ += a;
    }
    if (g != 1) throw NonPrimitiveError("MGonalForm: coefficients have gcd > 1");
}

DiagonalQuadraticForm::DiagonalQuadraticForm(std::vector<int64_t> coeffs)
    : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw DomainError("DiagonalQuadraticForm: empty coefficient list");
    int64_t g = 0;
    for (int64_t a : coeffs_) {
        if (a < 1) throw DomainError("DiagonalQuadraticForm: coefficients must be positive");
        if (a > kMaxCoefficient) throw DomainError("DiagonalQuadraticForm: coefficient too large");
        g = std::gcd(g, a);
    }
    primitive_ = (g == 1);
}

BigInt DiagonalQuadraticForm::discriminant() const {
    BigInt d = 1;
    for (int64_t a : coeffs_) d *= a;
    return d;
}

DiagonalQuadraticForm quadratic_shadow(const MGonalForm& f) {
    return DiagonalQuadraticForm(f.coeffs());
}

BigInt polygonal_number(int64_t m, const BigInt& x) {
    if (m < 3) throw DomainError("polygonal_number: m must be >= 3");
    BigInt v = (m - 2) * (x * x - x) / 2 + x;
    assert(v >= 0);
    return v;
}

int64_t polygonal_number_ll(int64_t m, int64_t x) {
    return (m - 2) * (x * x - x) / 2 + x;
}

std::optional<BigInt> polygonal_inverse(int64_t m, const BigInt& n) {
    if (m < 3) throw DomainError("polygonal_inverse: m must be >= 3");
    if (n < 0) throw DomainError("polygonal_inverse: n must be nonnegative");
    // (2(m-2)x - (m-4))^2 = 8(m-2)N + (m-4)^2
    BigInt disc = 8 * BigInt(m - 2) * n + BigInt(m - 4) * BigInt(m - 4);
    auto root = exact_sqrt(disc);
    if (!root) return std::nullopt;
    std::optional<BigInt> best;
    for (const BigInt& y : {*root, BigInt(-*root)}) {
        BigInt num = y + (m - 4);
        BigInt den = 2 * BigInt(m - 2);
        if (num % den != 0) continue;
        BigInt x = num / den;
        if (!best) {
            best = x;
            continue;
        }
        BigInt ax = abs(x), ab = abs(*best);
        if (ax < ab || (ax == ab && x > *best)) best = x;
    }
    return best;
}

BigInt evaluate(const MGonalForm& f, std::span<const int64_t> x) {
    if (static_cast<int>(x.size()) != f.rank())
        throw DomainError("evaluate: coordinate count does not match rank");
    BigInt total = 0;
    for (int i = 0; i < f.rank(); ++i)
        total += f.coeffs()[i] * polygonal_number(f.m(), BigInt(x[i]));
    return total;
}

ShiftedTarget shift(const MGonalForm& f, const BigInt& n, ShiftKind kind) {
    const int64_t m = f.m();
    if (kind == ShiftKind::dyadic && m % 4 != 0)
        throw DomainError("shift: dyadic kind requires m == 0 (mod 4)");
    ShiftedTarget t;
    t.kind = kind;
    if (kind == ShiftKind::generic) {
        t.scale = 8 * (m - 2);
        t.offset = BigInt(m - 4) * BigInt(m - 4) * f.coeff_sum();
    } else {
        t.scale = (m - 2) / 2;
        t.offset = BigInt((m - 4) / 4) * BigInt((m - 4) / 4) * f.coeff_sum();
    }
    t.theta = t.scale * n + t.offset;
    return t;
}

std::optional<std::vector<int64_t>> unshift_solution(const MGonalForm& f,
                                                       std::span<const int64_t> y) {
    if (static_cast<int>(y.size()) != f.rank())
        throw DomainError("unshift_solution: coordinate count does not match rank");
    const int64_t m = f.m();
    const int64_t den = 2 * (m - 2);
    const int64_t residue = ((-(m - 4)) % den + den) % den;
    std::vector<int64_t> x(y.size());
    for (size_t i = 0; i < y.size(); ++i) {
        int64_t r = (y[i] % den + den) % den;
        if (r != residue) return std::nullopt;
        x[i] = (y[i] + (m - 4)) / den;
    }
    // round trip: sum a_i y_i^2 must equal theta of the recovered value
    BigInt lhs = 0;
    for (size_t i = 0; i < y.size(); ++i)
        lhs += f.coeffs()[i] * BigInt(y[i]) * BigInt(y[i]);
    assert(lhs == shift(f, evaluate(f, x)).theta);
    return x;
}

} // namespace polyform
