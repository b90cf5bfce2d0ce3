#pragma once

// Executable counterexample constructions.  Given a quaternary coefficient
// tuple anisotropic at some prime (or any m >= 7), these build an m-gonal
// form together with an infinite family
//
//     N_n = (p^{2kn} theta_0 - offset) / scale,   n >= 0,
//
// of integers that are locally represented but never globally represented.
// Every "take some suitable ..." in the underlying recipes is resolved by a
// smallest-admissible policy, so constructions are deterministic; overrides
// expose the remaining freedom.

#include <array>
#include <map>
#include <optional>
#include <utility>

#include <json.hpp>

#include "polyform/search.hpp"

namespace polyform {

enum class FamilyBranch { odd_prime, dyadic };

struct CounterexampleFamily {
    MGonalForm form;
    int64_t p;         // the anisotropic prime driving the descent
    FamilyBranch branch; // odd_prime: generic shift; dyadic: p = 2, dyadic shift
    int64_t n0;
    int64_t k;         // p^k == 1 (mod 8(m-2)), resp. 2^k == 1 (mod (m-2)/2)
    BigInt theta0;
    int64_t scale;
    BigInt offset;
};

// N_n; exact, integral for every n >= 0.
BigInt family_member(const CounterexampleFamily& fam, int n);

// smallest prime at which the form is anisotropic: 2 and the odd primes
// dividing the discriminant are the only candidates.
std::optional<int64_t> find_aniso_prime(const DiagonalQuadraticForm& q);

struct Thm1Plan {
    int64_t aniso_prime;
    FamilyBranch branch;
    std::vector<int64_t> t_primes; // odd primes where the shadow is not universal
    int max_ord;
    int64_t m;
    int64_t window_lo, window_hi; // the N_0 selection window
};

// None iff the tuple is isotropic at every prime.  Otherwise picks the
// minimal admissible m, the unique N_0 in the window, and the multiplicative
// order k, then asserts N_0 is locally represented and not globally
// represented before returning the family.
std::optional<std::pair<Thm1Plan, CounterexampleFamily>>
thm1_construct(const std::array<int64_t, 4>& coeffs);

enum class Thm2Case { odd_q, power_of_two };

struct Thm2Plan {
    int64_t m;
    Thm2Case kase;
    std::vector<int64_t> t_primes; // all primes dividing m-2
    int64_t q = 0;                 // odd_q case
    int64_t product = 0;           // prod p^{r(p)} > q
    int64_t p1 = 0, p2 = 0;        // the auxiliary primes p', p''
    std::array<int64_t, 4> unit_primes{}; // power_of_two case
};

struct Thm2Options {
    std::optional<int64_t> q;       // odd prime divisor of m-4 to use
    std::optional<int64_t> product; // override for prod p^{r(p)}
    std::optional<int64_t> p1, p2;
    std::optional<std::array<int64_t, 4>> unit_primes;
};

// Always succeeds for m >= 7 (every larger choice set is infinite); throws
// ConstructionError if an override breaks an assertion.
std::pair<Thm2Plan, CounterexampleFamily> thm2_construct(int64_t m,
                                                         const Thm2Options& opt = {});

struct MemberCheck {
    int n;
    BigInt value;
    bool locally_represented;
    enum class Global { not_represented, represented, skipped } global;
    bool descent_ok;
    bool ok() const {
        return locally_represented && global != Global::represented && descent_ok;
    }
};

struct FamilyVerification {
    std::vector<MemberCheck> members;
    bool all_ok;
    int skipped;
};

// For each n <= n_max: the member must be locally represented, must not be
// globally represented when it fits under the cap (skipped otherwise), and
// sampled shifted vectors must satisfy the anisotropic descent predicate.
FamilyVerification verify_family(const CounterexampleFamily& fam, int n_max,
                                 const SearchLimits& limits = {});

// JSON round trip: {m, coeffs, p, branch, N0, k, theta0, scale, offset}
nlohmann::ordered_json family_to_json(const CounterexampleFamily& fam);
CounterexampleFamily family_from_json(const nlohmann::json& j);

} // namespace polyform
