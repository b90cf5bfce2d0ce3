#include "polyform/padic.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <vector>

namespace polyform {

namespace {

void require_prime(int64_t p) {
    if (!is_prime(p)) throw DomainError("expected a prime");
}

int64_t mod2(int64_t x) { return ((x % 2) + 2) % 2; }

// p^k as __int128; caller guarantees no overflow.
__int128 ipow128(int64_t p, int k) {
    __int128 r = 1;
    while (k-- > 0) r *= p;
    return r;
}

__int128 big_mod(const BigInt& n, __int128 mod) {
    const unsigned __int128 um = static_cast<unsigned __int128>(mod);
    BigInt m = BigInt(static_cast<unsigned long>(um >> 64));
    m <<= 64;
    m += static_cast<unsigned long>(um & 0xffffffffffffffffULL);
    BigInt r = n % m;
    if (r < 0) r += m;
    BigInt hi = r >> 64;
    BigInt lo = r - (hi << 64);
    return (static_cast<__int128>(hi.get_ui()) << 64) | static_cast<__int128>(lo.get_ui());
}

BigInt big_from_i128(__int128 v) {
    bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
    BigInt out = static_cast<unsigned long>(u >> 64);
    out <<= 64;
    out += static_cast<unsigned long>(u & 0xffffffffffffffffULL);
    return neg ? BigInt(-out) : out;
}

int ord_capped(__int128 v, int64_t p, int cap) {
    if (v == 0) return cap;
    int o = 0;
    while (o < cap && v % p == 0) { v /= p; ++o; }
    return o;
}

} // namespace

ValuationSplit ord_unit(const BigInt& n, int64_t p) {
    require_prime(p);
    if (n == 0) throw DomainError("ord_unit: valuation of 0 is infinite");
    return ValuationSplit{p, ord_of(n, p), unit_of(n, p)};
}

bool is_square_unit(const BigInt& u, int64_t p) {
    require_prime(p);
    if (u % p == 0) throw DomainError("is_square_unit: u must be coprime to p");
    if (p == 2) {
        BigInt r = u % 8;
        if (r < 0) r += 8;
        return r == 1;
    }
    return legendre(u, p) == 1;
}

bool is_square_qp(const BigInt& n, int64_t p) {
    if (n == 0) throw DomainError("is_square_qp: n must be nonzero");
    if (n < 0 && p != 2) {
        // sign folds into the unit part; handled uniformly below
    }
    auto v = ord_unit(n, p);
    if (v.ord % 2 != 0) return false;
    return is_square_unit(v.unit, p);
}

int hilbert_symbol(int64_t a, int64_t b, int64_t p) {
    require_prime(p);
    if (a == 0 || b == 0) throw DomainError("hilbert_symbol: arguments must be nonzero");
    const int alpha = ord_of(a, p), beta = ord_of(b, p);
    const int64_t u = unit_of(a, p), v = unit_of(b, p);
    if (p == 2) {
        auto eps = [](int64_t x) { return mod2((x - 1) / 2); };
        auto omega = [](int64_t x) { return mod2((x * x - 1) / 8); };
        int64_t e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
        return mod2(e) ? -1 : 1;
    }
    int s = 1;
    if ((alpha % 2) && (beta % 2) && ((p - 1) / 2) % 2) s = -s;
    if (beta % 2) s *= legendre(u, p);
    if (alpha % 2) s *= legendre(v, p);
    return s;
}

int hasse_invariant(const DiagonalQuadraticForm& q, int64_t p) {
    const auto& a = q.coeffs();
    int s = 1;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = i + 1; j < a.size(); ++j)
            s *= hilbert_symbol(a[i], a[j], p);
    return s;
}

bool is_anisotropic(const DiagonalQuadraticForm& q, int64_t p) {
    require_prime(p);
    const auto& a = q.coeffs();
    switch (a.size()) {
        case 1:
            return true;
        case 2:
            return !is_square_qp(-BigInt(a[0]) * a[1], p);
        case 3:
            return hilbert_symbol(-a[0] * a[2], -a[1] * a[2], p) == -1;
        case 4:
            return is_square_qp(q.discriminant(), p) &&
                   hasse_invariant(q, p) == -hilbert_symbol(-1, -1, p);
        default:
            throw DomainError("is_anisotropic: rank must be 1..4");
    }
}

std::optional<AnisotropyWitness> match_anisotropic_pattern(
    const DiagonalQuadraticForm& q, int64_t p) {
    require_prime(p);
    if (q.rank() != 4) throw DomainError("match_anisotropic_pattern: rank must be 4");
    const auto& a = q.coeffs();
    std::array<int, 4> ords;
    std::array<int64_t, 4> units;
    for (int i = 0; i < 4; ++i) {
        ords[i] = ord_of(a[i], p);
        units[i] = unit_of(a[i], p);
    }
    std::vector<int> odd, even;
    for (int i = 0; i < 4; ++i) (ords[i] % 2 ? odd : even).push_back(i);

    AnisotropyWitness w;
    w.p = p;
    w.units = units;
    for (int i = 0; i < 4; ++i) w.exponents[i] = ords[i] / 2;

    if (p != 2) {
        if (odd.size() != 2) return std::nullopt;
        int64_t po = units[odd[0]] * units[odd[1]];
        int64_t pe = units[even[0]] * units[even[1]];
        if (legendre(-po, p) != -1 || legendre(-pe, p) != -1) return std::nullopt;
        w.kind = AnisoKind::nondyadic_pair;
        w.odd_ord_pair = {odd[0], odd[1]};
        w.even_ord_pair = {even[0], even[1]};
        auto ratio = [&](int64_t x, int64_t y) {
            int64_t inv = pow_mod(((x % p) + p) % p, p - 2, p);
            return mul_mod(((y % p) + p) % p, inv, p);
        };
        w.u = ratio(units[odd[0]], units[odd[1]]);
        w.uprime = ratio(units[even[0]], units[even[1]]);
        return w;
    }

    if (odd.empty()) {
        int64_t c = units[0] % 4;
        for (int i = 1; i < 4; ++i)
            if (units[i] % 4 != c) return std::nullopt;
        int64_t s = units[0] + units[1] + units[2] + units[3];
        if (s % 8 == 0) return std::nullopt;
        w.kind = AnisoKind::dyadic_even;
        w.odd_ord_pair = {-1, -1};
        w.even_ord_pair = {-1, -1};
        return w;
    }
    if (odd.size() == 2) {
        int64_t o1 = units[odd[0]], o2 = units[odd[1]];
        int64_t e1 = units[even[0]], e2 = units[even[1]];
        if ((o1 + o2) % 4 == 0) return std::nullopt; // half-sum lands in an ambiguous class
        int64_t h = ((o1 + o2) / 2) % 4;
        if (e1 % 4 != h || e2 % 4 != h) return std::nullopt;
        if (o1 % 4 != h || o2 % 4 != h) return std::nullopt;
        // the stated congruences pin the Hasse condition but not the square
        // class of the discriminant; without this the pattern is unsound
        if ((o1 % 8) * (o2 % 8) % 8 * (e1 % 8) % 8 * (e2 % 8) % 8 != 1)
            return std::nullopt;
        w.kind = AnisoKind::dyadic_pair;
        w.odd_ord_pair = {odd[0], odd[1]};
        w.even_ord_pair = {even[0], even[1]};
        return w;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Representation over Z_p
// ---------------------------------------------------------------------------

namespace {

// Level-by-level residue search.  Nodes at level e are solutions of
// Q(x) == n (mod p^e) stored as canonical lifts in [0, p^e)^rank; a digit of
// a coordinate is only enumerated while it can still influence Q modulo
// p^depth (everything deeper is invisible to both filters and certificates).
bool bfs_represents(std::vector<int64_t> cs, BigInt n, int64_t p,
                    int64_t node_limit) {
    const int rank = static_cast<int>(cs.size());
    const int ord2 = (p == 2) ? 1 : 0;
    int64_t nodes = 0;

    for (int round = 0;; ++round) {
        if (round > 500000) throw UndecidedError(p, node_limit);

        int gamma = kOrdInfinity;
        for (int64_t c : cs) gamma = std::min(gamma, ord_of(c, p));
        if (gamma > 0) {
            if (ord_of(n, p) < gamma) return false;
            for (int64_t& c : cs)
                for (int i = 0; i < gamma; ++i) c /= p;
            BigInt pw;
            mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(p),
                          static_cast<unsigned long>(gamma));
            n /= pw;
        }
        if (n == 0) return true;

        std::array<int, 4> aord{}, ord2a{};
        int cmax = 0;
        for (int i = 0; i < rank; ++i) {
            aord[i] = ord_of(cs[i], p);
            ord2a[i] = aord[i] + ord2;
            cmax = std::max(cmax, ord2a[i]);
        }
        const int depth = 2 * cmax + 3;
        if (std::log2(static_cast<double>(p)) * (depth + 2) > 119.0)
            throw DomainError("represents_over_zp: valuations out of supported range");

        const __int128 mod_hi = ipow128(p, depth + 2);
        const __int128 n_hi = big_mod(n, mod_hi);
        const int nu = ord_of(n, p);

        std::vector<std::array<int64_t, 4>> level{{0, 0, 0, 0}};
        int64_t pe = 1;
        bool descended = false;

        for (int e = 0; e < depth; ++e) {
            const int64_t pe1 = pe * p;
            std::vector<std::array<int64_t, 4>> next;
            bool all_zero = true;

            for (const auto& x : level) {
                // digit ranges; frozen coordinates keep digit 0
                std::array<int, 4> limit{};
                for (int i = 0; i < rank; ++i) {
                    int s = ord_of(x[i], p);
                    int64_t reach = aord[i] + std::min<int64_t>(
                        static_cast<int64_t>(ord2) + s + e, 2LL * e);
                    limit[i] = (reach >= depth) ? 1 : static_cast<int>(p);
                }
                std::array<int64_t, 4> y = x;
                // odometer over digit tuples
                std::array<int, 4> d{};
                for (;;) {
                    for (int i = 0; i < rank; ++i) y[i] = x[i] + static_cast<int64_t>(d[i]) * pe;
                    __int128 qv = 0;
                    for (int i = 0; i < rank; ++i)
                        qv += static_cast<__int128>(cs[i]) * y[i] * y[i];
                    if (++nodes > node_limit) throw UndecidedError(p, node_limit);
                    __int128 t = (qv - n_hi) % mod_hi;
                    if (t < 0) t += mod_hi;
                    if (t % pe1 == 0) {
                        int od;
                        if (t == 0) {
                            if (big_from_i128(qv) == n) return true;
                            od = depth + 2;
                        } else {
                            od = ord_capped(t, p, depth + 2);
                        }
                        int tau = INT_MAX;
                        bool nonzero_mod_p = false;
                        for (int i = 0; i < rank; ++i) {
                            if (y[i] != 0)
                                tau = std::min(tau, 2 * (ord2a[i] + ord_of(y[i], p)));
                            if (y[i] % p != 0) nonzero_mod_p = true;
                        }
                        if (od > tau) return true; // Hensel certificate
                        if (nonzero_mod_p) all_zero = false;
                        next.push_back(y);
                    }
                    int i = 0;
                    while (i < rank && ++d[i] == limit[i]) d[i++] = 0;
                    if (i == rank) break;
                }
            }

            if (next.empty()) return false;
            if (all_zero) {
                if (nu < 2) return false;
                n /= p;
                n /= p;
                descended = true;
                break;
            }
            level = std::move(next);
            pe = pe1;
        }
        if (!descended)
            throw UndecidedError(p, node_limit); // mixed survivors at depth cap
    }
}

} // namespace

bool represents_over_zp_unimodular_split(const DiagonalQuadraticForm& q,
                                         const BigInt& n, int64_t p) {
    require_prime(p);
    if (p == 2) throw DomainError("unimodular split route requires odd p");
    if (n < 0) throw DomainError("represents_over_zp: n must be nonnegative");
    if (n == 0) return true;

    std::vector<int64_t> cs = q.coeffs();
    BigInt rem = n;
    for (;;) {
        int gamma = kOrdInfinity;
        for (int64_t c : cs) gamma = std::min(gamma, ord_of(c, p));
        if (gamma > 0) {
            if (ord_of(rem, p) < gamma) return false;
            for (int64_t& c : cs)
                for (int i = 0; i < gamma; ++i) c /= p;
            for (int i = 0; i < gamma; ++i) rem /= p;
        }
        std::vector<int> u;
        for (size_t i = 0; i < cs.size(); ++i)
            if (cs[i] % p != 0) u.push_back(static_cast<int>(i));
        if (u.size() >= 3) return true; // ternary unimodular: universal
        const int nu = ord_of(rem, p);
        if (nu == 0) {
            if (u.size() >= 2) return true; // binary unimodular hits every unit
            return legendre(unit_of(rem, p), p) * legendre(cs[u[0]], p) == 1;
        }
        if (u.size() == 2 &&
            legendre(-BigInt(cs[u[0]]) * cs[u[1]], p) == 1)
            return true; // isotropic binary unimodular part
        // unit coordinates are forced divisible by p: substitute and peel one p
        for (size_t i = 0; i < cs.size(); ++i) {
            if (cs[i] % p != 0) cs[i] *= p;
            else cs[i] /= p;
        }
        rem /= p;
    }
}

bool represents_over_zp(const DiagonalQuadraticForm& q, const BigInt& n, int64_t p,
                        const PadicBudget& budget) {
    require_prime(p);
    if (n < 0) throw DomainError("represents_over_zp: n must be nonnegative");
    if (q.rank() > 4) throw DomainError("represents_over_zp: rank must be 1..4");
    if (n == 0) return true;
    if (p > 31) return represents_over_zp_unimodular_split(q, n, p);
    return bfs_represents(q.coeffs(), n, p, budget.node_limit);
}

bool is_pe_universal(const DiagonalQuadraticForm& q, int64_t p, int e,
                     const PadicBudget& budget) {
    require_prime(p);
    if (q.rank() != 4) throw DomainError("is_pe_universal: rank must be 4");
    if (!q.primitive()) throw DomainError("is_pe_universal: form must be primitive");
    if (e < 0) throw DomainError("is_pe_universal: e must be nonnegative");
    int maxord = 0;
    for (int64_t a : q.coeffs()) maxord = std::max(maxord, ord_of(a, p));
    const int window = maxord + 2 * (p == 2 ? 1 : 0) + 1;
    std::vector<int64_t> units;
    if (p == 2) {
        units = {1, 3, 5, 7};
    } else {
        int64_t r = 2;
        while (legendre(r, p) != -1) ++r;
        units = {1, r};
    }
    for (int j = e; j <= e + window; ++j) {
        BigInt pj;
        mpz_ui_pow_ui(pj.get_mpz_t(), static_cast<unsigned long>(p),
                      static_cast<unsigned long>(j));
        for (int64_t u : units)
            if (!represents_over_zp(q, u * pj, p, budget)) return false;
    }
    return true;
}

bool descent_holds(const DiagonalQuadraticForm& q, int64_t p,
                   std::span<const BigInt> x, int r) {
    require_prime(p);
    if (static_cast<int>(x.size()) != q.rank())
        throw DomainError("descent_holds: coordinate count does not match rank");
    if (r < 0) throw DomainError("descent_holds: r must be nonnegative");
    BigInt total = 0;
    for (int i = 0; i < q.rank(); ++i) total += q.coeffs()[i] * x[i] * x[i];
    const int need = r + (p == 2 ? 2 : 0);
    if (ord_of(total, p) < need) return true; // hypothesis fails, vacuously true
    for (int i = 0; i < q.rank(); ++i) {
        BigInt term = q.coeffs()[i] * x[i] * x[i];
        if (ord_of(term, p) < r) return false;
    }
    return true;
}

bool descent_holds(const DiagonalQuadraticForm& q, int64_t p,
                   std::span<const int64_t> x, int r) {
    std::vector<BigInt> big(x.begin(), x.end());
    return descent_holds(q, p, std::span<const BigInt>(big), r);
}

} // namespace polyform
