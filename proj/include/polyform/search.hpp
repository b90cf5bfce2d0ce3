#pragma once

// Exact global representation decisions.  Complete because generalized
// m-gonal numbers are nonnegative: each coordinate obeys
// a_i P_m(x_i) <= N, which yields finite per-coordinate ranges.  Rank 4 uses
// meet-in-the-middle: one coordinate pair is enumerated into a value bitset,
// the other pair probes N - s.

#include <cstdint>
#include <vector>

#include "polyform/forms.hpp"
#include "polyform/locrep.hpp"

namespace polyform {

inline constexpr int64_t kDefaultSearchCap = 1'000'000'000;
inline constexpr int64_t kHardSearchCap = 1LL << 33;

struct SearchLimits {
    int64_t cap = kDefaultSearchCap;
    int threads = 1; // hint for the probe phase; verdicts are schedule-independent
};

struct CoordBound {
    int64_t lo, hi; // inclusive range of x_i with a_i P_m(x_i) <= N
};

struct SearchCertificate {
    bool represented;
    std::vector<int64_t> witness; // empty unless represented
    std::vector<CoordBound> bounds;
    uint64_t nodes = 0; // tuples examined
};

// Complete decision of F_m(x) = N over the integers; rank <= 4,
// 0 <= N <= limits.cap (else CapExceededError).
SearchCertificate represents_globally(const MGonalForm& f, int64_t n,
                                      const SearchLimits& limits = {});

// Ascending N <= bound that are locally represented but not globally.
std::vector<int64_t> exceptional_candidates(const MGonalForm& f, int64_t bound,
                                              const SearchLimits& limits = {});

struct RegularityReport {
    int64_t bound;
    int64_t locally_represented;
    int64_t globally_represented;
    int64_t locally_excluded; // N <= bound failing some local condition
    std::vector<int64_t> exceptions;
    bool regular_up_to_bound() const { return exceptions.empty(); }
};

RegularityReport regularity_report(const MGonalForm& f, int64_t bound,
                                   const SearchLimits& limits = {});

} // namespace polyform
