#include "polyform/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <queue>

namespace polyform {

int64_t mul_mod(int64_t a, int64_t b, int64_t mod) {
    return static_cast<int64_t>(static_cast<__int128>(a) * b % mod);
}

int64_t pow_mod(int64_t base, int64_t exp, int64_t mod) {
    if (mod <= 0) throw DomainError("pow_mod: modulus must be positive");
    int64_t r = 1 % mod;
    base %= mod;
    if (base < 0) base += mod;
    while (exp > 0) {
        if (exp & 1) r = mul_mod(r, base, mod);
        base = mul_mod(base, base, mod);
        exp >>= 1;
    }
    return r;
}

int ord_of(int64_t n, int64_t p) {
    if (p < 2) throw DomainError("ord_of: p must be >= 2");
    if (n == 0) return kOrdInfinity;
    int o = 0;
    while (n % p == 0) { n /= p; ++o; }
    return o;
}

int ord_of(const BigInt& n, int64_t p) {
    if (p < 2) throw DomainError("ord_of: p must be >= 2");
    if (n == 0) return kOrdInfinity;
    BigInt tmp, pp(p);
    return static_cast<int>(mpz_remove(tmp.get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t()));
}

int64_t unit_of(int64_t n, int64_t p) {
    if (n == 0) throw DomainError("unit_of: n must be nonzero");
    while (n % p == 0) n /= p;
    return n;
}

BigInt unit_of(const BigInt& n, int64_t p) {
    if (n == 0) throw DomainError("unit_of: n must be nonzero");
    BigInt out, pp(p);
    mpz_remove(out.get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t());
    return out;
}

int legendre(int64_t a, int64_t p) {
    if (p == 2 || !is_prime(p)) throw DomainError("legendre: p must be an odd prime");
    a %= p;
    if (a < 0) a += p;
    if (a == 0) return 0;
    int64_t e = pow_mod(a, (p - 1) / 2, p);
    return e == 1 ? 1 : -1;
}

int legendre(const BigInt& a, int64_t p) {
    BigInt r = a % p;
    return legendre(r.get_si(), p);
}

bool is_prime(int64_t n) {
    if (n < 2) return false;
    for (int64_t q : {2LL, 3LL, 5LL, 7LL, 11LL, 13LL, 17LL, 19LL, 23LL, 29LL, 31LL, 37LL}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    // deterministic Miller-Rabin for n < 3.3e24 with these bases
    int64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (int64_t a : {2LL, 3LL, 5LL, 7LL, 11LL, 13LL, 17LL, 19LL, 23LL, 29LL, 31LL, 37LL}) {
        int64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

int64_t next_prime_after(int64_t n) {
    int64_t c = std::max<int64_t>(n + 1, 2);
    if (c == 2) return 2;
    if (c % 2 == 0) ++c;
    while (!is_prime(c)) c += 2;
    return c;
}

namespace {

int64_t pollard_rho(int64_t n) {
    if (n % 2 == 0) return 2;
    for (int64_t c = 1;; ++c) {
        auto f = [&](int64_t x) { return (mul_mod(x, x, n) + c) % n; };
        int64_t x = 2, y = 2, d = 1;
        while (d == 1) {
            x = f(x);
            y = f(f(y));
            d = std::gcd(std::abs(x - y), n);
        }
        if (d != n) return d;
    }
}

void factor_into(int64_t n, std::vector<int64_t>& out) {
    if (n == 1) return;
    if (is_prime(n)) { out.push_back(n); return; }
    for (int64_t d = 2; d * d <= n && d < 100000; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
            factor_into(n, out);
            return;
        }
    }
    int64_t d = pollard_rho(n);
    factor_into(d, out);
    int64_t rest = n;
    while (rest % d == 0) rest /= d;
    factor_into(rest, out);
}

} // namespace

std::vector<int64_t> prime_factors(int64_t n) {
    if (n < 1) throw DomainError("prime_factors: n must be positive");
    std::vector<int64_t> out;
    factor_into(n, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<int64_t> odd_prime_factors(int64_t n) {
    auto f = prime_factors(n);
    std::erase(f, 2);
    return f;
}

int64_t euler_phi(int64_t n) {
    int64_t phi = n;
    for (int64_t p : prime_factors(n)) phi -= phi / p;
    return phi;
}

int64_t multiplicative_order(int64_t a, int64_t n) {
    if (n < 1) throw DomainError("multiplicative_order: modulus must be positive");
    a %= n;
    if (a < 0) a += n;
    if (std::gcd(a, n) != 1) throw DomainError("multiplicative_order: gcd(a, n) != 1");
    if (n == 1) return 1;
    int64_t order = euler_phi(n);
    for (int64_t p : prime_factors(order)) {
        while (order % p == 0 && pow_mod(a, order / p, n) == 1) order /= p;
    }
    return order;
}

BigInt crt(const std::vector<std::pair<BigInt, BigInt>>& congruences) {
    BigInt x = 0, m = 1;
    for (const auto& [r, mod] : congruences) {
        BigInt g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(),
                   m.get_mpz_t(), mod.get_mpz_t());
        if (g != 1) throw DomainError("crt: moduli must be pairwise coprime");
        // x' = x + m * s * (r - x) mod m*mod
        BigInt total = m * mod;
        BigInt diff = (r - x) % mod;
        x = (x + m * (s * diff % mod)) % total;
        if (x < 0) x += total;
        m = total;
    }
    return x;
}

int64_t isqrt(int64_t n) {
    if (n < 0) throw DomainError("isqrt: negative argument");
    int64_t r = static_cast<int64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

std::optional<BigInt> exact_sqrt(const BigInt& n) {
    if (n < 0) return std::nullopt;
    if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return std::nullopt;
    BigInt r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

std::vector<int64_t> primes_in_class(int64_t r, int64_t q, int count) {
    std::vector<int64_t> out;
    for (int64_t c = 2; static_cast<int>(out.size()) < count; ++c) {
        if (c % q == r % q && is_prime(c)) out.push_back(c);
    }
    return out;
}

int64_t smallest_product_exceeding(const std::vector<int64_t>& primes,
                                     int64_t threshold) {
    if (primes.empty()) throw DomainError("smallest_product_exceeding: empty prime set");
    int64_t radical = 1;
    for (int64_t p : primes) {
        if (radical > (1LL << 60) / p) throw DomainError("smallest_product_exceeding: overflow");
        radical *= p;
    }
    std::priority_queue<int64_t, std::vector<int64_t>, std::greater<>> heap;
    std::vector<int64_t> seen;
    heap.push(radical);
    seen.push_back(radical);
    while (!heap.empty()) {
        int64_t v = heap.top();
        heap.pop();
        if (v > threshold) return v;
        for (int64_t p : primes) {
            if (v > (1LL << 60) / p) continue;
            int64_t w = v * p;
            if (std::find(seen.begin(), seen.end(), w) == seen.end()) {
                seen.push_back(w);
                heap.push(w);
            }
        }
    }
    throw DomainError("smallest_product_exceeding: search exhausted");
}

} // namespace polyform
