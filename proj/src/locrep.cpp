#include "polyform/locrep.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <set>

namespace polyform {

LocalRoute local_route(int64_t m, int64_t p) {
    if (p == 2)
        return (m % 4 == 0) ? LocalRoute::dyadic_m0_mod4 : LocalRoute::dyadic_m_not0_mod4;
    return ((m - 2) % p == 0) ? LocalRoute::odd_p_divides_m2 : LocalRoute::odd_p_generic;
}

LocalVerdict represents_locally_at(const MGonalForm& f, const BigInt& n, int64_t p,
                                   const PadicBudget& budget) {
    if (!is_prime(p)) throw DomainError("represents_locally_at: p must be prime");
    if (n < 0) throw DomainError("represents_locally_at: n must be nonnegative");
    LocalVerdict v;
    v.p = p;
    v.route = local_route(f.m(), p);
    switch (v.route) {
        case LocalRoute::odd_p_divides_m2:
        case LocalRoute::dyadic_m_not0_mod4:
            v.represented = true;
            return v;
        case LocalRoute::odd_p_generic: {
            v.theta = shift(f, n, ShiftKind::generic);
            assert(std::gcd(v.theta->scale, p) == 1);
            v.represented = represents_over_zp(quadratic_shadow(f), v.theta->theta, p, budget);
            return v;
        }
        case LocalRoute::dyadic_m0_mod4: {
            v.theta = shift(f, n, ShiftKind::dyadic);
            assert(v.theta->scale % 2 == 1);
            v.represented = represents_over_zp(quadratic_shadow(f), v.theta->theta, 2, budget);
            return v;
        }
    }
    throw Error("unreachable");
}

std::vector<int64_t> relevant_primes(const MGonalForm& f) {
    if (f.rank() != 3 && f.rank() != 4)
        throw DomainError("relevant_primes: rank must be 3 or 4");
    std::set<int64_t> out{2};
    if (f.m() > 2)
        for (int64_t q : odd_prime_factors(f.m() - 2)) out.insert(q);
    for (int64_t a : f.coeffs())
        for (int64_t q : odd_prime_factors(a)) out.insert(q);
    return {out.begin(), out.end()};
}

bool represents_locally(const MGonalForm& f, const BigInt& n, const PadicBudget& budget) {
    for (int64_t p : relevant_primes(f))
        if (!represents_locally_at(f, n, p, budget).represented) return false;
    return true;
}

bool is_locally_universal(const MGonalForm& f, const PadicBudget& budget) {
    if (f.rank() != 4) throw DomainError("is_locally_universal: rank must be 4");
    const auto shadow = quadratic_shadow(f);
    for (int64_t p : relevant_primes(f)) {
        switch (local_route(f.m(), p)) {
            case LocalRoute::odd_p_divides_m2:
            case LocalRoute::dyadic_m_not0_mod4:
                continue;
            default:
                break;
        }
        // theta is an affine bijection of Z_p here, so F universal <=> shadow universal
        if (!is_pe_universal(shadow, p, 0, budget)) return false;
    }
    return true;
}

} // namespace polyform
