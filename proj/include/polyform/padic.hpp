#pragma once

// Local (p-adic) machinery for diagonal quadratic forms:
//
//  * valuations, unit square classes, Hilbert symbols;
//  * anisotropy over Z_p via the disc/Hasse closed form, with a structural
//    normal-form matcher (valuation-parity pairs at odd p, the two dyadic
//    congruence patterns at p = 2);
//  * integral representation over Z_p by iterative-deepening residue search
//    with Hensel certificates and N/p^2 descent;
//  * p^e-universality by finite reduction over unit square classes;
//  * the valuation-descent predicate satisfied by anisotropic forms.

#include <array>
#include <optional>
#include <span>

#include "polyform/forms.hpp"
#include "polyform/numeric.hpp"

namespace polyform {

struct ValuationSplit {
    int64_t p;
    int ord;
    BigInt unit; // coprime to p, sign preserved
};

// n = p^ord * unit with p not dividing unit; n must be nonzero.
ValuationSplit ord_unit(const BigInt& n, int64_t p);

// Is u a square in the p-adic units?  Odd p: Legendre symbol of u mod p;
// p = 2: u == 1 (mod 8).  Requires gcd(u, p) = 1.
bool is_square_unit(const BigInt& u, int64_t p);

// Is nonzero n a square in Q_p?
bool is_square_qp(const BigInt& n, int64_t p);

// Hilbert symbol (a,b)_p in {+1,-1}: +1 iff z^2 = ax^2 + by^2 has a
// nontrivial p-adic solution.  Explicit formulas, both residue characters.
int hilbert_symbol(int64_t a, int64_t b, int64_t p);

// Hasse invariant prod_{i<j} (a_i, a_j)_p.
int hasse_invariant(const DiagonalQuadraticForm& q, int64_t p);

// Anisotropy over Z_p for ranks 1..4.  Rank 4: anisotropic iff the
// discriminant is a p-adic square and the Hasse invariant equals
// -(-1,-1)_p.  Ranks 1-3 by the standard symbol criteria.
bool is_anisotropic(const DiagonalQuadraticForm& q, int64_t p);

enum class AnisoKind { nondyadic_pair, dyadic_pair, dyadic_even };

// Normal-form data of an anisotropic quaternary: coefficients split by
// valuation parity into two groups whose unit ratios are non-residues
// (odd p), or the dyadic congruence patterns (p = 2).
struct AnisotropyWitness {
    int64_t p;
    AnisoKind kind;
    std::array<int, 4> exponents;      // r_i, ord = 2 r_i (+1 on the odd-ord pair)
    std::array<int64_t, 4> units;    // p-free part of each coefficient
    std::array<int, 2> odd_ord_pair;   // indices, {-1,-1} for dyadic_even
    std::array<int, 2> even_ord_pair;
    int64_t u = 0, uprime = 0;       // unit ratios mod p (odd p only)
};

// Structural matcher for the quaternary normal forms.  Odd p: matches iff
// the form is anisotropic.  p = 2: attempted only when the congruences are
// unambiguous; abstains (returns nullopt) otherwise, so a nullopt at p = 2
// carries no isotropy information.
std::optional<AnisotropyWitness> match_anisotropic_pattern(
    const DiagonalQuadraticForm& q, int64_t p);

struct PadicBudget {
    int64_t node_limit = 20'000'000; // residue candidates examined per call
};

// Does sum a_i x_i^2 = n have a p-adic integer solution?
//
// Procedure: residue solutions modulo p, p^2, ... are expanded level by
// level; a solution certifies representability when ord_p(Q(x) - n) at an
// exact integer lift exceeds 2 ord_p(2 a_i x_i) for some i (Hensel); an
// empty level refutes it; when every surviving solution is divisible by p
// the problem descends to n / p^2.  Runs out of budget -> UndecidedError.
//
// Digit search is Theta(p^4) per level, so for p > 31 the decision is
// delegated to the unimodular-splitting route below.
bool represents_over_zp(const DiagonalQuadraticForm& q, const BigInt& n, int64_t p,
                        const PadicBudget& budget = {});

// Closed recursion for odd p: split off the unit subform, use that a
// ternary unimodular form is universal and a binary one represents every
// unit, and descend on ord_p(n).  Complete for every odd p.
bool represents_over_zp_unimodular_split(const DiagonalQuadraticForm& q,
                                         const BigInt& n, int64_t p);

// Does q represent every element of p^e Z_p?  Finite reduction: targets
// u p^j for j in [e, e + max_i ord_p(a_i) + 2 ord_p(2) + 1] and u ranging
// over unit square-class representatives ({1, non-residue} for odd p,
// {1,3,5,7} for p = 2); representability depends on the target only through
// its square class beyond that window.
bool is_pe_universal(const DiagonalQuadraticForm& q, int64_t p, int e,
                     const PadicBudget& budget = {});

// Valuation-descent predicate of anisotropic forms: if
// ord_p(Q(x)) >= r (odd p) or >= r + 2 (p = 2) then ord_p(a_i x_i^2) >= r
// for every i.  Returns whether the implication holds for this x and r.
bool descent_holds(const DiagonalQuadraticForm& q, int64_t p,
                   std::span<const BigInt> x, int r);
bool descent_holds(const DiagonalQuadraticForm& q, int64_t p,
                   std::span<const int64_t> x, int r);

} // namespace polyform
