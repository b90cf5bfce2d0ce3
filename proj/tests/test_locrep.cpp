#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "polyform/locrep.hpp"
#include "oracles.hpp"

using namespace polyform;

TEST_CASE("exactly one route fires per (p, m)") {
    for (int64_t m = 3; m <= 40; ++m) {
        for (int64_t p : {2, 3, 5, 7, 11, 13}) {
            LocalRoute r = local_route(m, p);
            if (p == 2) {
                CHECK((r == LocalRoute::dyadic_m_not0_mod4 || r == LocalRoute::dyadic_m0_mod4));
                CHECK((r == LocalRoute::dyadic_m0_mod4) == (m % 4 == 0));
            } else {
                CHECK((r == LocalRoute::odd_p_divides_m2 || r == LocalRoute::odd_p_generic));
                CHECK((r == LocalRoute::odd_p_divides_m2) == ((m - 2) % p == 0));
            }
        }
    }
}

TEST_CASE("per-prime verdicts: anchors") {
    MGonalForm penta(5, {1, 1, 1, 1});
    auto v = represents_locally_at(penta, 123, 3);
    CHECK(v.represented);
    CHECK(v.route == LocalRoute::odd_p_divides_m2);
    CHECK(!v.theta.has_value());

    v = represents_locally_at(penta, 123, 2);
    CHECK(v.represented);
    CHECK(v.route == LocalRoute::dyadic_m_not0_mod4);

    MGonalForm hepta(7, {5, 35, 6, 15});
    v = represents_locally_at(hepta, 3, 3);
    CHECK(v.represented);
    CHECK(v.route == LocalRoute::odd_p_generic);
    REQUIRE(v.theta.has_value());
    CHECK(v.theta->theta == 669);

    MGonalForm twelve(12, {1, 1, 1, 1});
    v = represents_locally_at(twelve, 6, 2);
    CHECK(v.represented);
    CHECK(v.route == LocalRoute::dyadic_m0_mod4);
    REQUIRE(v.theta.has_value());
    CHECK(v.theta->theta == 46);
}

TEST_CASE("relevant primes") {
    CHECK(relevant_primes(MGonalForm(12, {1, 1, 1, 1})) == std::vector<int64_t>{2, 5});
    CHECK(relevant_primes(MGonalForm(7, {5, 35, 6, 15})) ==
          std::vector<int64_t>{2, 3, 5, 7});
    CHECK(relevant_primes(MGonalForm(4, {1, 1, 1, 1})) == std::vector<int64_t>{2});
    CHECK(relevant_primes(MGonalForm(3, {1, 1, 1})) == std::vector<int64_t>{2});
    CHECK_THROWS_AS(relevant_primes(MGonalForm(5, {1, 2})), DomainError);
}

TEST_CASE("primes outside the relevant set never exclude") {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int64_t> dc(1, 20), dm(3, 25), dn(0, 400);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<int64_t> a{dc(rng), dc(rng), dc(rng), dc(rng)};
        a[trial % 4] = 1;
        MGonalForm f(dm(rng), a);
        auto rel = relevant_primes(f);
        for (int64_t p : {3, 5, 7, 11, 13, 17, 19, 23}) {
            if (std::find(rel.begin(), rel.end(), p) != rel.end()) continue;
            CHECK(represents_locally_at(f, dn(rng), p).represented);
        }
    }
}

TEST_CASE("local representability: anchors") {
    CHECK(represents_locally(MGonalForm(4, {1, 1, 1, 1}), 7));
    CHECK(represents_locally(MGonalForm(12, {1, 1, 1, 1}), 6));
    CHECK(represents_locally(MGonalForm(7, {5, 35, 6, 15}), 3));
}

TEST_CASE("local universality: anchors") {
    CHECK(is_locally_universal(MGonalForm(7, {5, 35, 6, 15})));
    CHECK(is_locally_universal(MGonalForm(12, {1, 1, 1, 1})));
    CHECK(is_locally_universal(MGonalForm(3, {2, 2, 2, 3})));
    // route 3 fires at 3 for m = 7 and <1,3,3,3> misses non-residues there
    CHECK(!is_locally_universal(MGonalForm(7, {1, 3, 3, 3})));
}

TEST_CASE("congruence consistency of the local decision") {
    std::mt19937_64 rng(43);
    std::uniform_int_distribution<int64_t> dc(1, 9), dm(3, 16), dn(1, 120);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<int64_t> a{1, dc(rng) * 2 - 1, dc(rng) * 2 - 1,
                               dc(rng) * 2 - 1}; // odd, keeps refutation depth small
        MGonalForm f(dm(rng), a);
        const int64_t n = dn(rng);
        for (int64_t p : relevant_primes(f)) {
            if (p > 3) continue;
            const bool rep = represents_locally_at(f, n, p).represented;
            const int emax = p == 2 ? 11 : 7;
            bool refuted = false;
            int64_t mod = p;
            for (int e = 1; e <= emax; ++e, mod *= p) {
                const bool sol = oracles::mgonal_congruence_solvable(f.m(), a, n, mod);
                if (rep) {
                    INFO("m=", f.m(), " n=", n, " p=", p, " e=", e);
                    CHECK(sol);
                } else if (!sol) {
                    refuted = true;
                    break;
                }
            }
            if (!rep) {
                INFO("m=", f.m(), " n=", n, " p=", p, " never refuted");
                CHECK(refuted);
            }
        }
    }
}

TEST_CASE("routes 3 and 4 carry a unit scale") {
    std::mt19937_64 rng(47);
    std::uniform_int_distribution<int64_t> dc(1, 30), dm(3, 40);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<int64_t> a{1, dc(rng), dc(rng), dc(rng)};
        MGonalForm f(dm(rng), a);
        for (int64_t p : relevant_primes(f)) {
            auto v = represents_locally_at(f, 17, p);
            if (v.theta) CHECK(std::gcd(v.theta->scale, p) == 1);
        }
    }
}
