#include "polyform/search.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace polyform {

namespace {

__int128 poly128(int64_t m, int64_t x) {
    __int128 t = x;
    return static_cast<__int128>(m - 2) * (t * t - t) / 2 + t;
}

// largest x >= 0 with a P_m(x) <= n, as a nonnegative count
int64_t positive_reach(int64_t m, int64_t a, int64_t n) {
    int64_t t = n / a;
    int64_t x = static_cast<int64_t>(std::sqrt(2.0 * static_cast<double>(t) /
                                                   static_cast<double>(m - 2))) + 2;
    while (x > 0 && poly128(m, x) * a > n) --x;
    while (poly128(m, x + 1) * a <= n) ++x;
    return x;
}

int64_t negative_reach(int64_t m, int64_t a, int64_t n) {
    int64_t t = n / a;
    int64_t x = -static_cast<int64_t>(std::sqrt(2.0 * static_cast<double>(t) /
                                                    static_cast<double>(m - 2))) - 2;
    while (x < 0 && poly128(m, x) * a > n) ++x;
    while (poly128(m, x - 1) * a <= n) --x;
    return x;
}

CoordBound coord_bound(int64_t m, int64_t a, int64_t n) {
    return {negative_reach(m, a, n), positive_reach(m, a, n)};
}

struct Bitset {
    std::vector<uint64_t> words;
    explicit Bitset(int64_t bits) : words((bits + 64) / 64, 0) {}
    void set(int64_t i) { words[i >> 6] |= uint64_t(1) << (i & 63); }
    bool test(int64_t i) const { return (words[i >> 6] >> (i & 63)) & 1; }
};

// values a_i P(x_i) + a_j P(x_j) <= n for one coordinate pair, as a bitset
Bitset pair_values(int64_t m, int64_t ai, int64_t aj, int64_t n,
                   uint64_t& nodes) {
    Bitset bits(n + 1);
    CoordBound bi = coord_bound(m, ai, n);
    for (int64_t xi = bi.lo; xi <= bi.hi; ++xi) {
        const int64_t c = ai * polygonal_number_ll(m, xi);
        const int64_t rem = n - c;
        for (int64_t xj = 0;; ++xj) {
            int64_t v = aj * polygonal_number_ll(m, xj);
            if (v > rem) break;
            bits.set(c + v);
            ++nodes;
        }
        for (int64_t xj = -1;; --xj) {
            int64_t v = aj * polygonal_number_ll(m, xj);
            if (v > rem) break;
            bits.set(c + v);
            ++nodes;
        }
    }
    return bits;
}

std::optional<int64_t> last_coordinate(int64_t m, int64_t a, int64_t rem) {
    if (rem % a != 0) return std::nullopt;
    auto x = polygonal_inverse(m, BigInt(rem / a));
    if (!x) return std::nullopt;
    return static_cast<int64_t>(x->get_si());
}

} // namespace

SearchCertificate represents_globally(const MGonalForm& f, int64_t n,
                                      const SearchLimits& limits) {
    if (n < 0) throw DomainError("represents_globally: n must be nonnegative");
    const int64_t cap = std::min(limits.cap, kHardSearchCap);
    if (n > cap)
        throw CapExceededError("represents_globally: target " + std::to_string(n) +
                               " exceeds search cap " + std::to_string(cap));
    const int64_t m = f.m();
    const auto& a = f.coeffs();
    const int rank = f.rank();
    if (rank > 4) throw DomainError("represents_globally: rank must be <= 4");

    SearchCertificate cert;
    cert.represented = false;
    for (int i = 0; i < rank; ++i) cert.bounds.push_back(coord_bound(m, a[i], n));

    if (n == 0) {
        cert.represented = true;
        cert.witness.assign(rank, 0);
        return cert;
    }

    auto finish = [&](std::vector<int64_t> w) {
        cert.represented = true;
        cert.witness = std::move(w);
        assert(evaluate(f, cert.witness) == n);
    };

    if (rank == 1) {
        if (auto x = last_coordinate(m, a[0], n)) finish({*x});
        return cert;
    }
    if (rank == 2) {
        for (int64_t x0 = cert.bounds[0].lo; x0 <= cert.bounds[0].hi; ++x0) {
            ++cert.nodes;
            int64_t rem = n - a[0] * polygonal_number_ll(m, x0);
            if (rem < 0) continue;
            if (auto x1 = last_coordinate(m, a[1], rem)) {
                finish({x0, *x1});
                return cert;
            }
        }
        return cert;
    }

    // rank 3 or 4: positional split, table on the pair with fewer tuples
    const int split = rank - 2; // probe coords [0, split), table coords [split, rank)
    auto span = [&](int i) {
        return cert.bounds[i].hi - cert.bounds[i].lo + 1;
    };
    bool table_is_back = true;
    if (rank == 4) {
        double front = static_cast<double>(span(0)) * span(1);
        double back = static_cast<double>(span(2)) * span(3);
        table_is_back = back <= front;
    }
    const int ta = table_is_back ? split : 0; // table pair start
    const int pa = table_is_back ? 0 : split; // probe start

    Bitset table = pair_values(m, a[ta], a[ta + 1], n, cert.nodes);

    // probe loop over the other coordinates
    auto probe_hit = [&](int64_t s) { return s <= n && table.test(n - s); };
    auto recover = [&](int64_t target, int c0, int c1) -> std::vector<int64_t> {
        CoordBound b = coord_bound(m, a[c0], target);
        for (int64_t x = b.lo; x <= b.hi; ++x) {
            int64_t rem = target - a[c0] * polygonal_number_ll(m, x);
            if (rem < 0) continue;
            if (auto y = last_coordinate(m, a[c1], rem)) return {x, *y};
        }
        throw Error("represents_globally: witness recovery failed");
    };

    if (rank == 3) {
        for (int64_t x0 = cert.bounds[pa].lo; x0 <= cert.bounds[pa].hi; ++x0) {
            ++cert.nodes;
            int64_t s = a[pa] * polygonal_number_ll(m, x0);
            if (probe_hit(s)) {
                auto back2 = recover(n - s, 1, 2);
                finish({x0, back2[0], back2[1]});
                return cert;
            }
        }
        return cert;
    }

    // rank 4
    for (int64_t x0 = cert.bounds[pa].lo; x0 <= cert.bounds[pa].hi; ++x0) {
        const int64_t c = a[pa] * polygonal_number_ll(m, x0);
        if (c > n) continue;
        const int64_t rem = n - c;
        auto scan = [&](int64_t x1) -> bool {
            int64_t v = a[pa + 1] * polygonal_number_ll(m, x1);
            if (v > rem) return false;
            ++cert.nodes;
            if (probe_hit(c + v)) {
                auto other = recover(n - c - v, ta, ta + 1);
                std::vector<int64_t> w(4);
                w[pa] = x0;
                w[pa + 1] = x1;
                w[ta] = other[0];
                w[ta + 1] = other[1];
                finish(std::move(w));
                return true;
            }
            return true;
        };
        for (int64_t x1 = 0;; ++x1) {
            if (!scan(x1)) break;
            if (cert.represented) return cert;
        }
        for (int64_t x1 = -1;; --x1) {
            if (!scan(x1)) break;
            if (cert.represented) return cert;
        }
    }
    return cert;
}

namespace {

// distinct values of the first `count` coordinates, ascending
std::vector<int64_t> front_values(const MGonalForm& f, int count, int64_t bound) {
    double tuples = 1;
    for (int i = 0; i < count; ++i) {
        CoordBound b = coord_bound(f.m(), f.coeffs()[i], bound);
        tuples *= static_cast<double>(b.hi - b.lo + 1);
    }
    if (tuples > 5e8)
        throw CapExceededError("represented-set enumeration too large for this bound");
    std::vector<int64_t> vals{0};
    for (int i = 0; i < count; ++i) {
        std::vector<int64_t> next;
        CoordBound b = coord_bound(f.m(), f.coeffs()[i], bound);
        for (int64_t v : vals) {
            for (int64_t x = b.lo; x <= b.hi; ++x) {
                int64_t w = v + f.coeffs()[i] * polygonal_number_ll(f.m(), x);
                if (w <= bound) next.push_back(w);
            }
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        vals = std::move(next);
    }
    return vals;
}

// bitset of all represented values <= bound
Bitset represented_set(const MGonalForm& f, int64_t bound, uint64_t& nodes) {
    const int rank = f.rank();
    const auto& a = f.coeffs();
    if (rank == 1) {
        Bitset bits(bound + 1);
        for (int64_t x = coord_bound(f.m(), a[0], bound).lo;; ++x) {
            int64_t v = a[0] * polygonal_number_ll(f.m(), x);
            if (x > 0 && v > bound) break;
            if (v <= bound) bits.set(v);
            ++nodes;
        }
        return bits;
    }
    Bitset back = pair_values(f.m(), a[rank - 2], a[rank - 1], bound, nodes);
    auto fronts = front_values(f, rank - 2, bound);
    if (fronts.size() == 1 && fronts[0] == 0) return back;
    Bitset out(bound + 1);
    const int64_t nwords = static_cast<int64_t>(out.words.size());
    for (int64_t s : fronts) {
        const int64_t word_shift = s >> 6;
        const int bit_shift = static_cast<int>(s & 63);
        for (int64_t w = nwords - 1; w >= word_shift; --w) {
            uint64_t lo = back.words[w - word_shift] << bit_shift;
            uint64_t hi = (bit_shift && w - word_shift > 0)
                              ? back.words[w - word_shift - 1] >> (64 - bit_shift)
                              : 0;
            out.words[w] |= lo | hi;
        }
    }
    return out;
}

} // namespace

std::vector<int64_t> exceptional_candidates(const MGonalForm& f, int64_t bound,
                                              const SearchLimits& limits) {
    return regularity_report(f, bound, limits).exceptions;
}

RegularityReport regularity_report(const MGonalForm& f, int64_t bound,
                                   const SearchLimits& limits) {
    if (bound < 1) throw DomainError("regularity_report: bound must be positive");
    const int64_t cap = std::min(limits.cap, kHardSearchCap);
    if (bound > cap)
        throw CapExceededError("regularity_report: bound exceeds search cap");
    RegularityReport rep;
    rep.bound = bound;
    rep.locally_represented = 0;
    rep.globally_represented = 0;
    rep.locally_excluded = 0;
    uint64_t nodes = 0;
    Bitset global = represented_set(f, bound, nodes);
    for (int64_t n = 1; n <= bound; ++n) {
        const bool glob = global.test(n);
        if (glob) ++rep.globally_represented;
        if (represents_locally(f, BigInt(n))) {
            ++rep.locally_represented;
            if (!glob) rep.exceptions.push_back(n);
        } else {
            ++rep.locally_excluded;
        }
    }
    return rep;
}

} // namespace polyform
