#pragma once

// Integer plumbing: valuations, modular arithmetic, primes, CRT.
// BigInt (GMP) carries everything that can outgrow 64 bits; the hot search
// kernels stay on int64/__int128 behind explicit bounds.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "polyform/errors.hpp"

namespace polyform {

using BigInt = mpz_class;

inline constexpr int kOrdInfinity = 1 << 26; // stand-in for ord_p(0)

int64_t mul_mod(int64_t a, int64_t b, int64_t mod);
int64_t pow_mod(int64_t base, int64_t exp, int64_t mod);

// ord_p of an int64 / BigInt; kOrdInfinity for n == 0.
int ord_of(int64_t n, int64_t p);
int ord_of(const BigInt& n, int64_t p);

// The p-free cofactor (sign preserved).  n must be nonzero.
int64_t unit_of(int64_t n, int64_t p);
BigInt unit_of(const BigInt& n, int64_t p);

// Legendre symbol (a|p) for odd prime p; a may be negative or >= p.
int legendre(int64_t a, int64_t p);
int legendre(const BigInt& a, int64_t p);

bool is_prime(int64_t n);
int64_t next_prime_after(int64_t n);

// Distinct prime factors in increasing order (Pollard rho fallback).
std::vector<int64_t> prime_factors(int64_t n);
std::vector<int64_t> odd_prime_factors(int64_t n);

int64_t euler_phi(int64_t n);

// Smallest k >= 1 with a^k == 1 (mod n); requires gcd(a, n) = 1.
int64_t multiplicative_order(int64_t a, int64_t n);

// x == r_i (mod m_i) for pairwise coprime moduli; returns x in [0, prod m_i).
BigInt crt(const std::vector<std::pair<BigInt, BigInt>>& congruences);

// Floor square root and exact-square test.
int64_t isqrt(int64_t n);
std::optional<BigInt> exact_sqrt(const BigInt& n);

// First `count` primes congruent to r (mod q).
std::vector<int64_t> primes_in_class(int64_t r, int64_t q, int count);

// Smallest product prod p^{e_p} over the given primes with every e_p >= 1
// that strictly exceeds `threshold`.
int64_t smallest_product_exceeding(const std::vector<int64_t>& primes,
                                     int64_t threshold);

} // namespace polyform
