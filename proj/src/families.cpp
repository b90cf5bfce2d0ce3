#include "polyform/families.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <random>
#include <set>

namespace polyform {

namespace {

BigInt pow_big(int64_t base, unsigned long exp) {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), exp);
    return r;
}

// smallest x >= lower with x == r_i (mod m_i)
int64_t minimal_solution(const std::vector<std::pair<int64_t, int64_t>>& congs,
                           int64_t lower) {
    std::vector<std::pair<BigInt, BigInt>> cs;
    BigInt modulus = 1;
    for (const auto& [r, m] : congs) {
        cs.emplace_back(BigInt(r), BigInt(m));
        modulus *= m;
    }
    BigInt base = crt(cs);
    BigInt diff = BigInt(lower) - base;
    BigInt quo;
    mpz_cdiv_q(quo.get_mpz_t(), diff.get_mpz_t(), modulus.get_mpz_t());
    BigInt x = base + quo * modulus;
    if (!x.fits_slong_p()) throw ConstructionError("minimal m does not fit in 64 bits");
    return x.get_si();
}

// smallest N >= lo with scale*N + offset == 0 (mod mod); scale a unit mod mod
int64_t affine_root(int64_t scale, const BigInt& offset, int64_t mod, int64_t lo) {
    BigInt s = BigInt(scale) % mod;
    if (s < 0) s += mod;
    BigInt inv, mm(mod);
    if (mpz_invert(inv.get_mpz_t(), s.get_mpz_t(), mm.get_mpz_t()) == 0)
        throw ConstructionError("shift scale is not invertible modulo the target");
    BigInt r0 = ((-offset) % mod + mod) % mod * inv % mod;
    int64_t r = r0.get_si();
    return lo + (((r - lo) % mod + mod) % mod);
}

void check_member_zero(const CounterexampleFamily& fam) {
    if (family_member(fam, 0) != fam.n0)
        throw ConstructionError("family closed form does not collapse to N0 at n = 0");
}

void assert_exceptional(const MGonalForm& form, int64_t n0,
                        const CounterexampleFamily& fam) {
    if (n0 > kHardSearchCap)
        throw ConstructionError("N0 is beyond the exhaustive-search range");
    SearchLimits wide;
    wide.cap = kHardSearchCap;
    if (represents_globally(form, n0, wide).represented)
        throw ConstructionError("recipe assertion failed: N0 is globally represented");
    if (!represents_locally(form, BigInt(n0)))
        throw ConstructionError("recipe assertion failed: N0 is not locally represented");
    const int maxord = [&] {
        int mo = 0;
        for (int64_t a : form.coeffs()) mo = std::max(mo, ord_of(a, fam.p));
        return mo;
    }();
    const int need = (fam.branch == FamilyBranch::dyadic) ? maxord + 1 : maxord;
    if (ord_of(fam.theta0, fam.p) < need)
        throw ConstructionError("recipe assertion failed: theta0 lacks the p-power");
    check_member_zero(fam);
}

} // namespace

BigInt family_member(const CounterexampleFamily& fam, int n) {
    if (n < 0) throw DomainError("family_member: n must be nonnegative");
    BigInt growth = pow_big(fam.p, static_cast<unsigned long>(2 * fam.k));
    BigInt power;
    mpz_pow_ui(power.get_mpz_t(), growth.get_mpz_t(), static_cast<unsigned long>(n));
    BigInt num = power * fam.theta0 - fam.offset;
    if (num % fam.scale != 0)
        throw ConstructionError("family member is not integral");
    return num / fam.scale;
}

std::optional<int64_t> find_aniso_prime(const DiagonalQuadraticForm& q) {
    if (q.rank() != 4) throw DomainError("find_aniso_prime: rank must be 4");
    if (!q.primitive()) throw NonPrimitiveError("find_aniso_prime: form must be primitive");
    std::set<int64_t> cand{2};
    for (int64_t a : q.coeffs())
        for (int64_t p : odd_prime_factors(a)) cand.insert(p);
    for (int64_t p : cand)
        if (is_anisotropic(q, p)) return p;
    return std::nullopt;
}

namespace {

std::vector<int64_t> not_universal_odd_primes(const DiagonalQuadraticForm& shadow) {
    std::set<int64_t> probe;
    for (int64_t a : shadow.coeffs())
        for (int64_t p : odd_prime_factors(a)) probe.insert(p);
    std::vector<int64_t> t;
    for (int64_t p : probe)
        if (!is_pe_universal(shadow, p, 0)) t.push_back(p);
    return t;
}

} // namespace

std::optional<std::pair<Thm1Plan, CounterexampleFamily>>
thm1_construct(const std::array<int64_t, 4>& coeffs) {
    std::vector<int64_t> cv(coeffs.begin(), coeffs.end());
    DiagonalQuadraticForm shadow(cv);
    if (!shadow.primitive())
        throw NonPrimitiveError("thm1_construct: tuple must be primitive");

    std::set<int64_t> cand{2};
    for (int64_t a : cv)
        for (int64_t p : odd_prime_factors(a)) cand.insert(p);
    std::vector<int64_t> aniso;
    for (int64_t p : cand)
        if (is_anisotropic(shadow, p)) aniso.push_back(p);
    if (aniso.empty()) return std::nullopt;

    std::vector<int64_t> odd_aniso;
    for (int64_t p : aniso)
        if (p != 2) odd_aniso.push_back(p);

    const std::vector<int64_t> t = not_universal_odd_primes(shadow);
    const int64_t s = std::accumulate(cv.begin(), cv.end(), 0LL);

    Thm1Plan plan;
    plan.t_primes = t;

    int64_t m, n0, k, scale, p;
    BigInt offset;
    FamilyBranch branch;

    if (!odd_aniso.empty()) {
        p = odd_aniso.front();
        branch = FamilyBranch::odd_prime;
        int maxord = 0;
        for (int64_t a : cv) maxord = std::max(maxord, ord_of(a, p));
        int64_t pe = 1;
        for (int i = 0; i < maxord; ++i) pe *= p;
        std::vector<std::pair<int64_t, int64_t>> congs{{1, 2}, {4 % p, p}};
        for (int64_t q : t)
            if (q != p) congs.emplace_back(2 % q, q);
        m = minimal_solution(congs, s + pe + 4);
        scale = 8 * (m - 2);
        offset = BigInt(m - 4) * BigInt(m - 4) * s;
        n0 = affine_root(scale, offset, pe, s + 1);
        k = multiplicative_order(p, scale);
        plan.max_ord = maxord;
        plan.window_lo = s + 1;
        plan.window_hi = s + pe;
    } else {
        p = 2;
        branch = FamilyBranch::dyadic;
        int maxord = 0;
        for (int64_t a : cv) maxord = std::max(maxord, ord_of(a, 2));
        const int64_t m2 = 1LL << (maxord + 1);
        std::vector<std::pair<int64_t, int64_t>> congs{{0, 4}};
        for (int64_t q : t) congs.emplace_back(2 % q, q);
        m = minimal_solution(congs, s + m2 + 4);
        scale = (m - 2) / 2;
        offset = BigInt((m - 4) / 4) * BigInt((m - 4) / 4) * s;
        n0 = affine_root(scale, offset, m2, s + 1);
        k = multiplicative_order(2, scale);
        plan.max_ord = maxord;
        plan.window_lo = s + 1;
        plan.window_hi = s + m2;
    }

    plan.aniso_prime = p;
    plan.branch = branch;
    plan.m = m;

    MGonalForm form(m, cv);
    CounterexampleFamily fam{form, p, branch, n0, k,
                             BigInt(scale) * n0 + offset, scale, offset};
    assert_exceptional(form, n0, fam);
    return std::make_pair(plan, fam);
}

namespace {

bool thm2_candidate_ok(int64_t m, const std::vector<int64_t>& cv, int64_t q) {
    for (int64_t a : cv)
        if (a > kMaxCoefficient) return false;
    int64_t g = 0;
    for (int64_t a : cv) g = std::gcd(g, a);
    if (g != 1) return false;
    DiagonalQuadraticForm shadow(cv);
    if (!is_anisotropic(shadow, q)) return false;
    MGonalForm form(m, cv);
    return is_locally_universal(form);
}

} // namespace

std::pair<Thm2Plan, CounterexampleFamily> thm2_construct(int64_t m,
                                                         const Thm2Options& opt) {
    if (m < 7) throw DomainError("thm2_construct: m must be >= 7");
    Thm2Plan plan;
    plan.m = m;
    plan.t_primes = prime_factors(m - 2);
    const auto odd_divs = odd_prime_factors(m - 4);

    std::vector<int64_t> cv;
    int64_t p, n0, k, scale;
    BigInt offset;
    FamilyBranch branch;

    if (!odd_divs.empty() || opt.q) {
        plan.kase = Thm2Case::odd_q;
        int64_t q = opt.q.value_or(odd_divs.empty() ? 0 : odd_divs.front());
        if (std::find(odd_divs.begin(), odd_divs.end(), q) == odd_divs.end())
            throw DomainError("thm2_construct: q must be an odd prime dividing m-4");
        int64_t product =
            opt.product.value_or(smallest_product_exceeding(plan.t_primes, q));
        if (product <= q) throw DomainError("thm2_construct: product must exceed q");
        for (int64_t tp : plan.t_primes)
            if (product % tp != 0)
                throw DomainError("thm2_construct: product must use every prime of T");
        plan.q = q;
        plan.product = product;

        // -(unit ratio) must be a non-residue mod q in each valuation-parity pair
        auto base_ok1 = [&](int64_t c) {
            return c % 2 == 1 && c != q && is_prime(c) && legendre(-c, q) == -1;
        };
        auto base_ok2 = [&](int64_t c) {
            return c % 2 == 1 && c != q && is_prime(c) && legendre(-2 * c, q) == -1;
        };
        if (opt.p1 && !base_ok1(*opt.p1))
            throw DomainError("thm2_construct: p1 override inadmissible");
        if (opt.p2 && !base_ok2(*opt.p2))
            throw DomainError("thm2_construct: p2 override inadmissible");

        auto pool = [&](const std::optional<int64_t>& fixed, auto ok) {
            std::vector<int64_t> v;
            if (fixed) {
                v.push_back(*fixed);
                return v;
            }
            for (int64_t c = 3; v.size() < 80 && c < 2'000'000; c = next_prime_after(c))
                if (ok(c)) v.push_back(c);
            return v;
        };

        auto try_pair = [&](int64_t c1, int64_t c2) {
            if (static_cast<__int128>(c1) * product > kMaxCoefficient) return false;
            if (static_cast<__int128>(c2) * q > kMaxCoefficient) return false;
            std::vector<int64_t> cand{product, c1 * product, 2 * q, c2 * q};
            if (!thm2_candidate_ok(m, cand, q)) return false;
            cv = cand;
            plan.p1 = c1;
            plan.p2 = c2;
            return true;
        };

        bool built = false;
        for (int64_t c1 : pool(opt.p1, base_ok1)) {
            for (int64_t c2 : pool(opt.p2, base_ok2)) {
                if (c2 == c1) continue;
                if (try_pair(c1, c2)) { built = true; break; }
            }
            if (built) break;
        }
        if (!built)
            throw ConstructionError("thm2_construct: no admissible (p', p'') found");

        p = q;
        branch = FamilyBranch::odd_prime;
        scale = 8 * (m - 2);
        int64_t cs = std::accumulate(cv.begin(), cv.end(), 0LL);
        offset = BigInt(m - 4) * BigInt(m - 4) * cs;
        n0 = affine_root(scale, offset, q, 1);
        k = multiplicative_order(q, scale);
    } else {
        plan.kase = Thm2Case::power_of_two;
        const int t2 = ord_of(m - 4, 2);
        if ((1LL << t2) != m - 4 || t2 < 2)
            throw DomainError("thm2_construct: m-4 must be an odd-prime multiple or a power of 2");
        std::array<int64_t, 4> ps{};
        if (opt.unit_primes) {
            ps = *opt.unit_primes;
            std::set<int64_t> distinct(ps.begin(), ps.end());
            if (distinct.size() != 4)
                throw DomainError("thm2_construct: unit primes must be distinct");
            for (int64_t v : ps)
                if (!is_prime(v) || v % 8 != 1)
                    throw DomainError("thm2_construct: unit primes must be 1 (mod 8)");
        } else {
            auto found = primes_in_class(1, 8, 4);
            std::copy(found.begin(), found.end(), ps.begin());
        }
        plan.unit_primes = ps;
        cv.assign(ps.begin(), ps.end());

        DiagonalQuadraticForm shadow(cv);
        if (!is_anisotropic(shadow, 2))
            throw ConstructionError("thm2_construct: dyadic form fails anisotropy");
        MGonalForm probe(m, cv);
        if (!is_locally_universal(probe))
            throw ConstructionError("thm2_construct: dyadic form fails local universality");

        p = 2;
        branch = FamilyBranch::dyadic;
        scale = (m - 2) / 2;
        int64_t cs = std::accumulate(cv.begin(), cv.end(), 0LL);
        offset = BigInt((m - 4) / 4) * BigInt((m - 4) / 4) * cs;
        n0 = affine_root(scale, offset, 4, 1);
        k = multiplicative_order(2, scale);
    }

    MGonalForm form(m, cv);
    CounterexampleFamily fam{form, p, branch, n0, k,
                             BigInt(scale) * n0 + offset, scale, offset};
    assert_exceptional(form, n0, fam);
    return {plan, fam};
}

FamilyVerification verify_family(const CounterexampleFamily& fam, int n_max,
                                 const SearchLimits& limits) {
    if (n_max < 0) throw DomainError("verify_family: n_max must be nonnegative");
    const auto shadow = quadratic_shadow(fam.form);
    if (!is_anisotropic(shadow, fam.p))
        throw ConstructionError("verify_family: family form is not anisotropic at p");

    FamilyVerification out;
    out.skipped = 0;
    const int base_ord = ord_of(fam.theta0, fam.p);

    for (int n = 0; n <= n_max; ++n) {
        MemberCheck mc;
        mc.n = n;
        mc.value = family_member(fam, n);
        mc.locally_represented = represents_locally(fam.form, mc.value);

        if (mc.value <= limits.cap) {
            auto cert = represents_globally(fam.form, mc.value.get_si(), limits);
            mc.global = cert.represented ? MemberCheck::Global::represented
                                         : MemberCheck::Global::not_represented;
        } else {
            mc.global = MemberCheck::Global::skipped;
            ++out.skipped;
        }

        // structural descent spot check: theta grows by exactly p^{2k} per step,
        // and the descent implication holds on sampled shifted vectors
        const BigInt theta_n = fam.scale * mc.value + fam.offset;
        mc.descent_ok = (ord_of(theta_n, fam.p) ==
                         2 * static_cast<int64_t>(fam.k) * n + base_ord);
        std::mt19937_64 rng(0x706f6c79ull + static_cast<uint64_t>(n));
        const int64_t reach = std::min<int64_t>(fam.p, 97);
        std::uniform_int_distribution<int64_t> small(-reach * reach * reach,
                                                       reach * reach * reach);
        for (int trial = 0; trial < 60 && mc.descent_ok; ++trial) {
            std::vector<BigInt> y(4);
            const int lift = trial % 5;
            BigInt pl = pow_big(fam.p, lift);
            for (auto& c : y) c = pl * small(rng);
            for (int r = 0; r <= 8; ++r)
                if (!descent_holds(shadow, fam.p, std::span<const BigInt>(y), r)) {
                    mc.descent_ok = false;
                    break;
                }
        }
        out.members.push_back(std::move(mc));
    }
    out.all_ok = std::all_of(out.members.begin(), out.members.end(),
                             [](const MemberCheck& m) { return m.ok(); });
    return out;
}

nlohmann::ordered_json family_to_json(const CounterexampleFamily& fam) {
    nlohmann::ordered_json j;
    j["m"] = fam.form.m();
    j["coeffs"] = fam.form.coeffs();
    j["p"] = fam.p;
    j["branch"] = fam.branch == FamilyBranch::odd_prime ? "odd-prime" : "dyadic";
    j["N0"] = fam.n0;
    j["k"] = fam.k;
    j["theta0"] = fam.theta0.get_str();
    j["scale"] = fam.scale;
    j["offset"] = fam.offset.get_str();
    return j;
}

CounterexampleFamily family_from_json(const nlohmann::json& j) {
    auto big_field = [&](const char* key) {
        const auto& v = j.at(key);
        if (v.is_string()) return BigInt(v.get<std::string>());
        return BigInt(v.get<int64_t>());
    };
    MGonalForm form(j.at("m").get<int64_t>(),
                    j.at("coeffs").get<std::vector<int64_t>>());
    const std::string branch = j.at("branch").get<std::string>();
    if (branch != "odd-prime" && branch != "dyadic")
        throw DomainError("family_from_json: unknown branch");
    CounterexampleFamily fam{form,
                             j.at("p").get<int64_t>(),
                             branch == "odd-prime" ? FamilyBranch::odd_prime
                                                   : FamilyBranch::dyadic,
                             j.at("N0").get<int64_t>(),
                             j.at("k").get<int64_t>(),
                             big_field("theta0"),
                             j.at("scale").get<int64_t>(),
                             big_field("offset")};
    if (!is_prime(fam.p)) throw DomainError("family_from_json: p must be prime");
    if (fam.branch == FamilyBranch::dyadic && fam.p != 2)
        throw DomainError("family_from_json: dyadic branch requires p = 2");
    if (fam.k < 1) throw DomainError("family_from_json: k must be positive");
    if (fam.theta0 != BigInt(fam.scale) * fam.n0 + fam.offset)
        throw DomainError("family_from_json: theta0 does not match scale*N0 + offset");
    return fam;
}

} // namespace polyform
