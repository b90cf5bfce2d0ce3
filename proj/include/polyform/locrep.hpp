#pragma once

// Local representability of integers by m-gonal forms.  The four routes:
//
//  (1) odd p dividing m-2            -> F is universal over Z_p
//  (2) p = 2, m != 0 (mod 4)         -> F is universal over Z_2
//  (3) odd p not dividing m-2        -> decide via the generic shift theta
//  (4) p = 2, m == 0 (mod 4)         -> decide via the dyadic shift theta
//
// On routes 3 and 4 the shift N -> theta(N) is an affine bijection of Z_p
// (the scale is a p-adic unit there), so universality of F over Z_p reduces
// to universality of the quadratic shadow.

#include <optional>
#include <vector>

#include "polyform/forms.hpp"
#include "polyform/padic.hpp"

namespace polyform {

enum class LocalRoute {
    odd_p_divides_m2 = 1,
    dyadic_m_not0_mod4 = 2,
    odd_p_generic = 3,
    dyadic_m0_mod4 = 4,
};

LocalRoute local_route(int64_t m, int64_t p);

struct LocalVerdict {
    int64_t p;
    bool represented;
    LocalRoute route;
    std::optional<ShiftedTarget> theta; // present exactly on routes 3 and 4
};

LocalVerdict represents_locally_at(const MGonalForm& f, const BigInt& n, int64_t p,
                                   const PadicBudget& budget = {});

// {2} union odd primes dividing m-2 or any coefficient.  Outside this set
// route 3 applies with a unimodular subform of rank >= 3, hence automatic
// universality; requires rank 3 or 4.
std::vector<int64_t> relevant_primes(const MGonalForm& f);

bool represents_locally(const MGonalForm& f, const BigInt& n,
                        const PadicBudget& budget = {});

// Universal over Z_p for every prime; rank 4.
bool is_locally_universal(const MGonalForm& f, const PadicBudget& budget = {});

} // namespace polyform
