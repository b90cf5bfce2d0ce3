#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "polyform/padic.hpp"
#include "oracles.hpp"

using namespace polyform;

TEST_CASE("ord_unit") {
    auto v = ord_unit(12, 2);
    CHECK(v.ord == 2);
    CHECK(v.unit == 3);
    v = ord_unit(7, 3);
    CHECK(v.ord == 0);
    CHECK(v.unit == 7);
    v = ord_unit(-45, 3);
    CHECK(v.ord == 2);
    CHECK(v.unit == -5);
    CHECK_THROWS_AS(ord_unit(0, 3), DomainError);
    CHECK_THROWS_AS(ord_unit(4, 4), DomainError);
}

TEST_CASE("unit squares") {
    for (int64_t p : {2, 3, 5, 7, 11}) CHECK(is_square_unit(1, p));
    CHECK(is_square_unit(17, 2)); // 17 == 1 (mod 8)
    CHECK(!is_square_unit(2, 3));
    CHECK(!is_square_unit(7, 2));
    CHECK(!is_square_unit(-1, 2)); // -1 == 7 (mod 8)
    CHECK(is_square_unit(-1, 5));
    CHECK_THROWS_AS(is_square_unit(6, 3), DomainError);
}

TEST_CASE("hilbert symbol anchors") {
    for (int64_t p : {2, 3, 5, 13})
        for (int64_t b : {1, 2, 3, 5, -7, 10})
            CHECK(hilbert_symbol(1, b, p) == 1);
    CHECK(hilbert_symbol(-1, -1, 2) == -1);
    CHECK(hilbert_symbol(-1, -1, 5) == 1);
    CHECK(hilbert_symbol(2, 3, 2) == -1);
    CHECK_THROWS_AS(hilbert_symbol(0, 1, 3), DomainError);
}

TEST_CASE("hilbert symbol vs ternary solvability brute force") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int64_t> dv(-30, 30);
    int checked = 0;
    while (checked < 250) {
        int64_t a = dv(rng), b = dv(rng);
        if (a == 0 || b == 0) continue;
        for (int64_t p : {2, 3, 5, 7}) {
            CHECK(hilbert_symbol(a, b, p) == oracles::hilbert_oracle(a, b, p));
        }
        ++checked;
    }
}

TEST_CASE("hilbert symbol bilinearity") {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int64_t> dv(-40, 40);
    int checked = 0;
    while (checked < 400) {
        int64_t a = dv(rng), b = dv(rng), c = dv(rng);
        if (a == 0 || b == 0 || c == 0) continue;
        for (int64_t p : {2, 3, 5, 7, 11}) {
            CHECK(hilbert_symbol(a * b, c, p) ==
                  hilbert_symbol(a, c, p) * hilbert_symbol(b, c, p));
        }
        ++checked;
    }
}

TEST_CASE("anisotropy anchors") {
    CHECK(is_anisotropic(DiagonalQuadraticForm({1, 1, 1, 1}), 2));
    CHECK(!is_anisotropic(DiagonalQuadraticForm({1, 1, 1, 1}), 3));
    CHECK(is_anisotropic(DiagonalQuadraticForm({5, 35, 6, 15}), 3));
    CHECK(is_anisotropic(DiagonalQuadraticForm({1, 1, 3, 3}), 3));
    CHECK(is_anisotropic(DiagonalQuadraticForm({1, 1, 2, 2}), 2));
    CHECK(is_anisotropic(DiagonalQuadraticForm({17, 41, 73, 89}), 2));
    // rank 1-3
    CHECK(is_anisotropic(DiagonalQuadraticForm({5}), 3));
    CHECK(is_anisotropic(DiagonalQuadraticForm({1, 1}), 3));  // -1 is a non-residue
    CHECK(!is_anisotropic(DiagonalQuadraticForm({1, 1}), 5));
    CHECK(!is_anisotropic(DiagonalQuadraticForm({1, 1, 1}), 3));
    CHECK_THROWS_AS(is_anisotropic(DiagonalQuadraticForm({1, 1, 1, 1, 1}), 3), DomainError);
}

TEST_CASE("anisotropy agrees with the congruence oracle on a sampled corpus") {
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int64_t> dc(1, 20);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<int64_t> a{dc(rng), dc(rng), dc(rng), dc(rng)};
        DiagonalQuadraticForm q(a);
        for (int64_t p : {2, 3, 5, 7}) {
            INFO("form ", a[0], ",", a[1], ",", a[2], ",", a[3], " p=", p);
            CHECK(is_anisotropic(q, p) == !oracles::oracle_isotropic(a, p));
        }
    }
}

TEST_CASE("normal-form matcher: anchors") {
    auto w = match_anisotropic_pattern(DiagonalQuadraticForm({1, 1, 3, 3}), 3);
    REQUIRE(w.has_value());
    CHECK(w->kind == AnisoKind::nondyadic_pair);
    CHECK(w->odd_ord_pair == std::array<int, 2>{2, 3});
    CHECK(w->even_ord_pair == std::array<int, 2>{0, 1});
    CHECK(w->u == 1);
    CHECK(w->uprime == 1);

    CHECK(!match_anisotropic_pattern(DiagonalQuadraticForm({1, 1, 1, 1}), 3).has_value());
    CHECK(!match_anisotropic_pattern(DiagonalQuadraticForm({1, 2, 3, 6}), 5).has_value());

    auto w2 = match_anisotropic_pattern(DiagonalQuadraticForm({1, 1, 1, 1}), 2);
    REQUIRE(w2.has_value());
    CHECK(w2->kind == AnisoKind::dyadic_even);

    auto w3 = match_anisotropic_pattern(DiagonalQuadraticForm({1, 1, 2, 2}), 2);
    REQUIRE(w3.has_value());
    CHECK(w3->kind == AnisoKind::dyadic_pair);
}

TEST_CASE("normal-form matcher: equivalence at odd p, soundness at 2") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int64_t> dc(1, 20);
    for (int trial = 0; trial < 600; ++trial) {
        std::vector<int64_t> a{dc(rng), dc(rng), dc(rng), dc(rng)};
        DiagonalQuadraticForm q(a);
        for (int64_t p : {3, 5, 7}) {
            INFO("form ", a[0], ",", a[1], ",", a[2], ",", a[3], " p=", p);
            CHECK(match_anisotropic_pattern(q, p).has_value() == is_anisotropic(q, p));
        }
        if (match_anisotropic_pattern(q, 2).has_value()) {
            INFO("dyadic form ", a[0], ",", a[1], ",", a[2], ",", a[3]);
            CHECK(is_anisotropic(q, 2));
        }
    }
}

TEST_CASE("represents_over_zp: anchors") {
    CHECK(represents_over_zp(DiagonalQuadraticForm({1, 1, 1, 1}), 7, 2));
    CHECK(!represents_over_zp(DiagonalQuadraticForm({1, 1}), 3, 3));
    CHECK(represents_over_zp(DiagonalQuadraticForm({5, 35, 6, 15}), 669, 3));
    CHECK(represents_over_zp(DiagonalQuadraticForm({1, 1}), 18, 3)); // 9 + 9
    CHECK(represents_over_zp(DiagonalQuadraticForm({1}), 9, 3));
    CHECK(!represents_over_zp(DiagonalQuadraticForm({1}), 2, 2));
    CHECK(represents_over_zp(DiagonalQuadraticForm({2, 2}), 4, 2));
    CHECK(!represents_over_zp(DiagonalQuadraticForm({2, 2}), 1, 2));
    for (int64_t n = 0; n <= 40; ++n)
        CHECK(represents_over_zp(DiagonalQuadraticForm({1, 1, 1, 1}), n, 2));
}

TEST_CASE("represents_over_zp: congruence consistency") {
    // positive answers must be solvable at every depth; negative answers must
    // hit an unsolvable depth
    std::mt19937_64 rng(19);
    std::uniform_int_distribution<int64_t> dc(1, 15), dn(1, 200), dr(2, 4);
    for (int trial = 0; trial < 60; ++trial) {
        const int rank = static_cast<int>(dr(rng));
        std::vector<int64_t> a;
        for (int i = 0; i < rank; ++i) a.push_back(dc(rng) * 2 - 1); // odd coefficients
        const int64_t n = dn(rng);
        DiagonalQuadraticForm q(a);
        for (int64_t p : {2, 3}) {
            const bool rep = represents_over_zp(q, n, p);
            const int emax = p == 2 ? 12 : 7;
            bool refuted = false;
            int64_t mod = p;
            for (int e = 1; e <= emax; ++e, mod *= p) {
                const bool sol = oracles::quad_congruence_solvable(a, n, mod);
                if (rep) {
                    INFO("rep but unsolvable: n=", n, " p=", p, " e=", e);
                    CHECK(sol);
                } else if (!sol) {
                    refuted = true;
                    break;
                }
            }
            if (!rep) {
                INFO("not represented but never refuted: n=", n, " p=", p);
                CHECK(refuted);
            }
        }
    }
}

TEST_CASE("residue search agrees with the unimodular-splitting route at odd p") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int64_t> dc(1, 200), dn(0, 1000000), dr(1, 4);
    for (int trial = 0; trial < 300; ++trial) {
        const int rank = static_cast<int>(dr(rng));
        std::vector<int64_t> a;
        for (int i = 0; i < rank; ++i) a.push_back(dc(rng));
        DiagonalQuadraticForm q(a);
        for (int64_t p : {3, 5, 7, 11, 13, 31}) {
            BigInt n = dn(rng);
            INFO("trial ", trial, " p=", p, " n=", n.get_str());
            CHECK(represents_over_zp(q, n, p) ==
                  represents_over_zp_unimodular_split(q, n, p));
        }
    }
}

TEST_CASE("square-class invariance of representability") {
    std::mt19937_64 rng(29);
    std::uniform_int_distribution<int64_t> dc(1, 30), dn(1, 500), dt(1, 12);
    for (int trial = 0; trial < 150; ++trial) {
        std::vector<int64_t> a{dc(rng), dc(rng), dc(rng), dc(rng)};
        DiagonalQuadraticForm q(a);
        for (int64_t p : {2, 3, 5}) {
            int64_t n = dn(rng);
            int64_t t = dt(rng);
            if (t % p == 0) ++t;
            CHECK(represents_over_zp(q, n, p) ==
                  represents_over_zp(q, BigInt(n) * t * t, p));
        }
    }
}

TEST_CASE("p^e-universality anchors") {
    CHECK(is_pe_universal(DiagonalQuadraticForm({1, 1, 1, 1}), 3, 0));
    CHECK(is_pe_universal(DiagonalQuadraticForm({1, 1, 2, 2}), 2, 0));
    CHECK(is_pe_universal(DiagonalQuadraticForm({5, 35, 6, 15}), 3, 1));
    CHECK(is_pe_universal(DiagonalQuadraticForm({1, 1, 1, 1}), 2, 0));
    // unit part too small to hit non-residues / 7 mod 8
    CHECK(!is_pe_universal(DiagonalQuadraticForm({1, 3, 3, 3}), 3, 0));
    CHECK(!is_pe_universal(DiagonalQuadraticForm({2, 3, 3, 3}), 3, 0));
    CHECK(!is_pe_universal(DiagonalQuadraticForm({1, 1, 1, 8}), 2, 0));
    CHECK_THROWS_AS(is_pe_universal(DiagonalQuadraticForm({2, 4}), 2, 0), DomainError);
}

TEST_CASE("every primitive quaternary is p^maxord-universal (sampled)") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int64_t> dc(1, 60);
    int done = 0;
    while (done < 40) {
        std::vector<int64_t> a{dc(rng), dc(rng), dc(rng), dc(rng)};
        int64_t g = std::gcd(std::gcd(a[0], a[1]), std::gcd(a[2], a[3]));
        if (g != 1) continue;
        DiagonalQuadraticForm q(a);
        for (int64_t p : {2, 3, 5}) {
            int maxord = 0;
            for (int64_t c : a) maxord = std::max(maxord, ord_of(c, p));
            INFO("form ", a[0], ",", a[1], ",", a[2], ",", a[3], " p=", p);
            CHECK(is_pe_universal(q, p, maxord));
        }
        ++done;
    }
}

TEST_CASE("descent predicate anchors") {
    DiagonalQuadraticForm squares({1, 1, 1, 1});
    std::vector<int64_t> zero(4, 0);
    CHECK(descent_holds(squares, 2, std::span<const int64_t>(zero), 3));
    std::vector<int64_t> twos(4, 2);
    CHECK(descent_holds(squares, 2, std::span<const int64_t>(twos), 2));
    DiagonalQuadraticForm hepta({5, 35, 6, 15});
    std::vector<int64_t> threes(4, 3);
    CHECK(descent_holds(hepta, 3, std::span<const int64_t>(threes), 2));
}

TEST_CASE("descent holds for anisotropic forms on random vectors") {
    std::mt19937_64 rng(37);
    std::uniform_int_distribution<int64_t> dc(1, 20);
    int done = 0;
    while (done < 60) {
        std::vector<int64_t> a{dc(rng), dc(rng), dc(rng), dc(rng)};
        DiagonalQuadraticForm q(a);
        for (int64_t p : {2, 3, 5, 7}) {
            if (!is_anisotropic(q, p)) continue;
            std::uniform_int_distribution<int64_t> dx(-p * p * p, p * p * p);
            for (int t = 0; t < 400; ++t) {
                std::vector<int64_t> x{dx(rng), dx(rng), dx(rng), dx(rng)};
                for (int r = 0; r <= 4; ++r) {
                    INFO("p=", p, " r=", r);
                    CHECK(descent_holds(q, p, std::span<const int64_t>(x), r));
                }
            }
            ++done;
        }
    }
}

TEST_CASE("budget exhaustion surfaces as UndecidedError") {
    PadicBudget tiny;
    tiny.node_limit = 1;
    CHECK_THROWS_AS(
        represents_over_zp(DiagonalQuadraticForm({1, 1, 1, 1}), 123, 2, tiny),
        UndecidedError);
}
