#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "polyform/search.hpp"
#include "oracles.hpp"

using namespace polyform;

TEST_CASE("global decision: anchors") {
    auto c = represents_globally(MGonalForm(4, {1, 1, 1, 1}), 7);
    CHECK(c.represented);
    CHECK(evaluate(MGonalForm(4, {1, 1, 1, 1}), c.witness) == 7);

    CHECK(!represents_globally(MGonalForm(7, {5, 35, 6, 15}), 3).represented);
    CHECK(!represents_globally(MGonalForm(12, {1, 1, 1, 1}), 6).represented);
    CHECK(represents_globally(MGonalForm(12, {1, 1, 1, 1}), 0).represented);
}

TEST_CASE("global decision agrees with the naive search") {
    std::mt19937_64 rng(53);
    std::uniform_int_distribution<int64_t> dc(1, 9), dm(3, 14), dn(0, 5000), dr(1, 3);
    for (int trial = 0; trial < 120; ++trial) {
        const int rank = static_cast<int>(dr(rng));
        std::vector<int64_t> a;
        for (int i = 0; i < rank; ++i) a.push_back(dc(rng));
        a[0] = 1;
        const int64_t m = dm(rng);
        const int64_t n = dn(rng);
        MGonalForm f(m, a);
        INFO("m=", m, " n=", n, " rank=", rank);
        CHECK(represents_globally(f, n).represented == oracles::naive_represents(m, a, n));
    }
    // rank 4
    std::uniform_int_distribution<int64_t> dn4(0, 1500);
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<int64_t> a{1, dc(rng), dc(rng), dc(rng)};
        const int64_t m = dm(rng);
        const int64_t n = dn4(rng);
        MGonalForm f(m, a);
        INFO("m=", m, " n=", n);
        CHECK(represents_globally(f, n).represented == oracles::naive_represents(m, a, n));
    }
}

TEST_CASE("witnesses re-evaluate exactly") {
    std::mt19937_64 rng(59);
    std::uniform_int_distribution<int64_t> dc(1, 7), dm(3, 12), dn(0, 4000);
    for (int trial = 0; trial < 80; ++trial) {
        std::vector<int64_t> a{1, dc(rng), dc(rng), dc(rng)};
        MGonalForm f(dm(rng), a);
        const int64_t n = dn(rng);
        auto c = represents_globally(f, n);
        if (c.represented) {
            CHECK(c.witness.size() == 4);
            CHECK(evaluate(f, c.witness) == n);
            for (int i = 0; i < 4; ++i) {
                CHECK(c.witness[i] >= c.bounds[i].lo);
                CHECK(c.witness[i] <= c.bounds[i].hi);
            }
        }
    }
}

TEST_CASE("cap handling") {
    MGonalForm f(4, {1, 1, 1, 1});
    SearchLimits tight;
    tight.cap = 100;
    CHECK_THROWS_AS(represents_globally(f, 101, tight), CapExceededError);
    CHECK_THROWS_AS(represents_globally(f, -1, tight), DomainError);
    CHECK(represents_globally(f, 100, tight).represented);
}

TEST_CASE("exception lists: anchors") {
    CHECK(exceptional_candidates(MGonalForm(4, {1, 1, 1, 1}), 200).empty());

    auto exc = exceptional_candidates(MGonalForm(12, {1, 1, 1, 1}), 3000);
    const std::vector<int64_t> expected{5,   6,   7,   8,    16,   17,  32, 72,
                                        144, 176, 304, 560, 1200, 2352, 2864};
    CHECK(exc == expected);

    auto exc7 = exceptional_candidates(MGonalForm(7, {5, 35, 6, 15}), 1000);
    CHECK(std::find(exc7.begin(), exc7.end(), 3) != exc7.end());
    for (int64_t small : {1, 2, 3, 4})
        CHECK(std::find(exc7.begin(), exc7.end(), small) != exc7.end());
}

TEST_CASE("regularity reports: anchors") {
    auto lagrange = regularity_report(MGonalForm(4, {1, 1, 1, 1}), 1000);
    CHECK(lagrange.exceptions.empty());
    CHECK(lagrange.locally_excluded == 0);
    CHECK(lagrange.globally_represented == 1000);
    CHECK(lagrange.regular_up_to_bound());

    auto gauss = regularity_report(MGonalForm(3, {1, 1, 1}), 1000);
    CHECK(gauss.exceptions.empty());
    CHECK(gauss.globally_represented == 1000);
}

TEST_CASE("enlarging the bound never removes an exception below the old bound") {
    MGonalForm f(12, {1, 1, 1, 1});
    auto small = exceptional_candidates(f, 800);
    auto large = exceptional_candidates(f, 3000);
    std::vector<int64_t> prefix;
    for (int64_t e : large)
        if (e <= 800) prefix.push_back(e);
    CHECK(small == prefix);
}

TEST_CASE("represented set matches per-target decisions") {
    std::mt19937_64 rng(61);
    std::uniform_int_distribution<int64_t> dc(1, 6), dm(3, 12);
    for (int trial = 0; trial < 12; ++trial) {
        std::vector<int64_t> a{1, dc(rng), dc(rng), dc(rng)};
        MGonalForm f(dm(rng), a);
        auto rep = regularity_report(f, 300);
        int64_t globally = 0;
        for (int64_t n = 1; n <= 300; ++n)
            if (represents_globally(f, n).represented) ++globally;
        CHECK(rep.globally_represented == globally);
    }
}
