// polyform: decide representability of integers by m-gonal forms, locally and
// globally, classify p-adic anisotropy, and build/verify the counterexample
// families of non-almost-regular quaternary forms.
//
// Exit codes: 0 computed; 1 computed with a negative verdict; 2 usage or
// domain error; 3 undecided at the search budget.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "polyform/families.hpp"

using nlohmann::ordered_json;
using namespace polyform;

namespace {

struct Output {
    bool json = false;
    ordered_json env;
    std::ostringstream text;
};

std::string route_name(LocalRoute r) {
    switch (r) {
        case LocalRoute::odd_p_divides_m2: return "case1-odd-p-divides-m2";
        case LocalRoute::dyadic_m_not0_mod4: return "case2-dyadic-m-not-0-mod4";
        case LocalRoute::odd_p_generic: return "case3-odd-generic";
        case LocalRoute::dyadic_m0_mod4: return "case4-dyadic-m-0-mod4";
    }
    return "?";
}

ordered_json theta_json(const ShiftedTarget& t) {
    ordered_json j;
    j["kind"] = t.kind == ShiftKind::generic ? "generic" : "dyadic";
    j["theta"] = t.theta.get_str();
    j["scale"] = t.scale;
    j["offset"] = t.offset.get_str();
    return j;
}

ordered_json witness_json(const AnisotropyWitness& w) {
    ordered_json j;
    switch (w.kind) {
        case AnisoKind::nondyadic_pair: j["kind"] = "nondyadic-2+2"; break;
        case AnisoKind::dyadic_pair: j["kind"] = "dyadic-2+2"; break;
        case AnisoKind::dyadic_even: j["kind"] = "dyadic-4even"; break;
    }
    j["exponents"] = w.exponents;
    j["units"] = w.units;
    if (w.kind != AnisoKind::dyadic_even) {
        j["odd_ord_pair"] = w.odd_ord_pair;
        j["even_ord_pair"] = w.even_ord_pair;
    }
    if (w.kind == AnisoKind::nondyadic_pair) {
        j["u"] = w.u;
        j["uprime"] = w.uprime;
    }
    return j;
}

ordered_json verdict_json(const LocalVerdict& v) {
    ordered_json j;
    j["p"] = v.p;
    j["represented"] = v.represented;
    j["route"] = route_name(v.route);
    if (v.theta) j["theta"] = theta_json(*v.theta);
    return j;
}

ordered_json thm1_plan_json(const Thm1Plan& p) {
    ordered_json j;
    j["aniso_prime"] = p.aniso_prime;
    j["branch"] = p.branch == FamilyBranch::odd_prime ? "odd-prime" : "dyadic";
    j["t_primes"] = p.t_primes;
    j["max_ord"] = p.max_ord;
    j["m"] = p.m;
    j["window"] = {p.window_lo, p.window_hi};
    return j;
}

ordered_json thm2_plan_json(const Thm2Plan& p) {
    ordered_json j;
    j["m"] = p.m;
    j["case"] = p.kase == Thm2Case::odd_q ? "odd-q" : "power-of-2";
    j["t_primes"] = p.t_primes;
    if (p.kase == Thm2Case::odd_q) {
        j["q"] = p.q;
        j["product"] = p.product;
        j["p_prime"] = p.p1;
        j["p_dprime"] = p.p2;
    } else {
        j["unit_primes"] = p.unit_primes;
    }
    return j;
}

std::string global_name(MemberCheck::Global g) {
    switch (g) {
        case MemberCheck::Global::not_represented: return "not-represented";
        case MemberCheck::Global::represented: return "represented";
        case MemberCheck::Global::skipped: return "skipped";
    }
    return "?";
}

ordered_json verification_json(const FamilyVerification& v) {
    ordered_json j;
    j["all_ok"] = v.all_ok;
    j["skipped"] = v.skipped;
    ordered_json members = ordered_json::array();
    for (const auto& mc : v.members) {
        ordered_json e;
        e["n"] = mc.n;
        e["N"] = mc.value.get_str();
        e["locally_represented"] = mc.locally_represented;
        e["global"] = global_name(mc.global);
        e["descent_ok"] = mc.descent_ok;
        members.push_back(e);
    }
    j["members"] = members;
    return j;
}

BigInt parse_big(const std::string& s) {
    try {
        return BigInt(s);
    } catch (const std::invalid_argument&) {
        throw DomainError("not an integer: " + s);
    }
}

int64_t env_cap() {
    if (const char* v = std::getenv("POLYFORM_CAP")) {
        try {
            return std::stoll(v);
        } catch (...) {
            throw DomainError("POLYFORM_CAP is not an integer");
        }
    }
    return kDefaultSearchCap;
}

std::string coeff_str(const std::vector<int64_t>& a) {
    std::string s = "<";
    for (size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a[i]);
    return s + ">";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"m-gonal form representability toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    bool json = false;
    int threads = 1;
    int64_t cap = -1; // resolved against POLYFORM_CAP after parse
    int64_t node_budget = PadicBudget{}.node_limit;
    app.add_flag("--json", json, "machine-readable output (single JSON object)");
    app.add_option("--threads", threads, "worker hint for search partitioning");
    app.add_option("--cap", cap, "exhaustive-search cap (default 1e9; env POLYFORM_CAP)");
    app.add_option("--node-budget", node_budget, "p-adic residue search budget")
        ->group(""); // hidden

    int64_t m = 0, n_ll = 0, p = 0, bound = 0, nmax = 0;
    std::string n_str, family_path;
    std::vector<int64_t> coeffs, xs;
    std::string out_path;

    auto add_m = [&](CLI::App* c) { c->add_option("-m", m, "polygonality")->required(); };
    auto add_a = [&](CLI::App* c) {
        c->add_option("-a", coeffs, "coefficients, comma separated")
            ->required()
            ->delimiter(',');
    };

    auto* c_eval = app.add_subcommand("eval", "evaluate an m-gonal form");
    add_m(c_eval);
    add_a(c_eval);
    c_eval->add_option("-x", xs, "arguments, comma separated")->required()->delimiter(',');

    auto* c_poly = app.add_subcommand("poly", "invert the m-gonal number map");
    add_m(c_poly);
    c_poly->add_option("-N", n_str, "target")->required();

    auto* c_rep = app.add_subcommand("rep", "decide global representability");
    add_m(c_rep);
    add_a(c_rep);
    c_rep->add_option("-N", n_str, "target")->required();

    auto* c_local = app.add_subcommand("local", "decide local representability");
    add_m(c_local);
    add_a(c_local);
    c_local->add_option("-N", n_str, "target")->required();
    c_local->add_option("-p", p, "restrict to one prime");

    auto* c_aniso = app.add_subcommand("aniso", "p-adic anisotropy of a diagonal form");
    add_a(c_aniso);
    c_aniso->add_option("-p", p, "prime")->required();

    auto* c_univ = app.add_subcommand("universal", "local universality, prime by prime");
    add_m(c_univ);
    add_a(c_univ);

    auto* c_scan = app.add_subcommand("scan", "regularity scan up to a bound");
    add_m(c_scan);
    add_a(c_scan);
    c_scan->add_option("-B", bound, "scan bound")->required();

    auto* c_thm1 = app.add_subcommand("thm1", "counterexample family from a coefficient tuple");
    add_a(c_thm1);
    c_thm1->add_option("--out", out_path, "write the family JSON to a file");

    auto* c_thm2 = app.add_subcommand("thm2", "counterexample family for a given m");
    add_m(c_thm2);
    c_thm2->add_option("--out", out_path, "write the family JSON to a file");
    int64_t ov_q = 0, ov_p1 = 0, ov_p2 = 0, ov_product = 0;
    std::vector<int64_t> ov_primes;
    c_thm2->add_option("--q", ov_q, "odd prime divisor of m-4 to use");
    c_thm2->add_option("--product", ov_product, "override prod p^r(p)");
    c_thm2->add_option("--p1", ov_p1, "override p'");
    c_thm2->add_option("--p2", ov_p2, "override p''");
    c_thm2->add_option("--primes", ov_primes, "four primes == 1 (mod 8)")->delimiter(',');

    auto* c_verify = app.add_subcommand("verify", "verify a family member by member");
    c_verify->add_option("--family", family_path, "family JSON file, or - for stdin")
        ->required();
    c_verify->add_option("--nmax", nmax, "largest member index")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    Output out;
    out.json = json;
    int exit_code = 0;
    const auto t0 = std::chrono::steady_clock::now();

    try {
        if (cap < 0) cap = env_cap();
        SearchLimits limits;
        limits.cap = cap;
        limits.threads = threads;
        PadicBudget budget;
        budget.node_limit = node_budget;

        if (*c_eval) {
            MGonalForm f(m, coeffs);
            BigInt v = evaluate(f, xs);
            out.env["command"] = "eval";
            out.env["params"] = {{"m", m}, {"coeffs", coeffs}, {"x", xs}};
            out.env["result"] = {{"value", v.get_str()}};
            out.text << v.get_str() << "\n";
        } else if (*c_poly) {
            BigInt n = parse_big(n_str);
            auto x = polygonal_inverse(m, n);
            out.env["command"] = "poly";
            out.env["params"] = {{"m", m}, {"N", n.get_str()}};
            out.env["result"] = {{"x", x ? ordered_json(x->get_str()) : ordered_json(nullptr)}};
            if (x)
                out.text << "x = " << x->get_str() << "\n";
            else
                out.text << "none\n";
            exit_code = x ? 0 : 1;
        } else if (*c_rep) {
            MGonalForm f(m, coeffs);
            BigInt n = parse_big(n_str);
            if (n > limits.cap)
                throw CapExceededError("target exceeds search cap " +
                                       std::to_string(limits.cap));
            auto cert = represents_globally(f, n.get_si(), limits);
            out.env["command"] = "rep";
            out.env["params"] = {{"m", m}, {"coeffs", coeffs}, {"N", n.get_str()},
                                 {"cap", limits.cap}};
            ordered_json bounds = ordered_json::array();
            for (auto& b : cert.bounds) bounds.push_back({b.lo, b.hi});
            out.env["result"] = {
                {"represented", cert.represented},
                {"witness", cert.represented ? ordered_json(cert.witness) : ordered_json(nullptr)}};
            out.env["audit"] = {{"bounds", bounds}, {"nodes", cert.nodes}};
            if (cert.represented) {
                out.text << "represented: x = (";
                for (size_t i = 0; i < cert.witness.size(); ++i)
                    out.text << (i ? "," : "") << cert.witness[i];
                out.text << ")\n";
            } else {
                out.text << "not represented (searched " << cert.nodes << " nodes)\n";
            }
            exit_code = cert.represented ? 0 : 1;
        } else if (*c_local) {
            MGonalForm f(m, coeffs);
            BigInt n = parse_big(n_str);
            out.env["command"] = "local";
            out.env["params"] = {{"m", m}, {"coeffs", coeffs}, {"N", n.get_str()}};
            ordered_json verdicts = ordered_json::array();
            bool all = true;
            std::vector<int64_t> primes =
                p > 0 ? std::vector<int64_t>{p} : relevant_primes(f);
            if (p > 0) out.env["params"]["p"] = p;
            for (int64_t q : primes) {
                auto v = represents_locally_at(f, n, q, budget);
                all = all && v.represented;
                verdicts.push_back(verdict_json(v));
                out.text << "p=" << q << ": " << (v.represented ? "represented" : "excluded")
                         << " via " << route_name(v.route);
                if (v.theta) out.text << " (theta=" << v.theta->theta.get_str() << ")";
                out.text << "\n";
            }
            out.env["result"] = {{"represented", all}, {"verdicts", verdicts}};
            out.text << (all ? "locally represented" : "locally excluded") << "\n";
            exit_code = all ? 0 : 1;
        } else if (*c_aniso) {
            DiagonalQuadraticForm q(coeffs);
            bool aniso = is_anisotropic(q, p);
            std::optional<AnisotropyWitness> w;
            if (q.rank() == 4) w = match_anisotropic_pattern(q, p);
            out.env["command"] = "aniso";
            out.env["params"] = {{"coeffs", coeffs}, {"p", p}};
            out.env["result"] = {
                {"anisotropic", aniso},
                {"witness", w ? witness_json(*w) : ordered_json(nullptr)}};
            out.text << coeff_str(coeffs) << " over Z_" << p << ": "
                     << (aniso ? "anisotropic" : "isotropic") << "\n";
            if (w) out.text << "witness: " << witness_json(*w).dump() << "\n";
            exit_code = aniso ? 0 : 1;
        } else if (*c_univ) {
            MGonalForm f(m, coeffs);
            out.env["command"] = "universal";
            out.env["params"] = {{"m", m}, {"coeffs", coeffs}};
            ordered_json per = ordered_json::array();
            bool all = true;
            const auto shadow = quadratic_shadow(f);
            for (int64_t q : relevant_primes(f)) {
                LocalRoute r = local_route(f.m(), q);
                bool u = (r == LocalRoute::odd_p_divides_m2 ||
                          r == LocalRoute::dyadic_m_not0_mod4)
                             ? true
                             : is_pe_universal(shadow, q, 0, budget);
                all = all && u;
                per.push_back({{"p", q}, {"route", route_name(r)}, {"universal", u}});
                out.text << "p=" << q << ": " << (u ? "universal" : "not universal")
                         << " (" << route_name(r) << ")\n";
            }
            out.env["result"] = {{"locally_universal", all}, {"primes", per}};
            out.text << (all ? "locally universal" : "not locally universal") << "\n";
            exit_code = all ? 0 : 1;
        } else if (*c_scan) {
            MGonalForm f(m, coeffs);
            auto rep = regularity_report(f, bound, limits);
            out.env["command"] = "scan";
            out.env["params"] = {{"m", m}, {"coeffs", coeffs}, {"B", bound},
                                 {"cap", limits.cap}};
            out.env["result"] = {{"bound", rep.bound},
                                 {"locally_represented", rep.locally_represented},
                                 {"globally_represented", rep.globally_represented},
                                 {"locally_excluded", rep.locally_excluded},
                                 {"exception_count", rep.exceptions.size()},
                                 {"exceptions", rep.exceptions},
                                 {"verdict", rep.regular_up_to_bound()
                                                 ? "regular up to bound"
                                                 : "exception set up to bound"}};
            out.text << "N <= " << rep.bound << ": locally represented "
                     << rep.locally_represented << ", globally represented "
                     << rep.globally_represented << ", locally excluded "
                     << rep.locally_excluded << "\n";
            if (rep.exceptions.empty()) {
                out.text << "regular up to " << rep.bound << ", 0 exceptions\n";
            } else {
                out.text << rep.exceptions.size() << " exceptions:";
                for (int64_t e : rep.exceptions) out.text << " " << e;
                out.text << "\n";
            }
        } else if (*c_thm1) {
            if (coeffs.size() != 4) throw DomainError("thm1 needs exactly 4 coefficients");
            std::array<int64_t, 4> a{coeffs[0], coeffs[1], coeffs[2], coeffs[3]};
            auto r = thm1_construct(a);
            out.env["command"] = "thm1";
            out.env["params"] = {{"coeffs", coeffs}};
            if (!r) {
                out.env["result"] = {{"found", false},
                                     {"plan", nullptr},
                                     {"family", nullptr}};
                out.text << "no anisotropic prime: " << coeff_str(coeffs)
                         << " is isotropic at every prime\n";
                exit_code = 1;
            } else {
                auto fam_json = family_to_json(r->second);
                out.env["result"] = {{"found", true},
                                     {"plan", thm1_plan_json(r->first)},
                                     {"family", fam_json}};
                out.text << "family: " << fam_json.dump() << "\n";
                out.text << "members: N_0 = " << family_member(r->second, 0).get_str()
                         << ", N_1 = " << family_member(r->second, 1).get_str()
                         << ", N_2 = " << family_member(r->second, 2).get_str() << "\n";
                if (!out_path.empty()) std::ofstream(out_path) << fam_json.dump(2) << "\n";
            }
        } else if (*c_thm2) {
            Thm2Options opt;
            if (ov_q) opt.q = ov_q;
            if (ov_product) opt.product = ov_product;
            if (ov_p1) opt.p1 = ov_p1;
            if (ov_p2) opt.p2 = ov_p2;
            if (!ov_primes.empty()) {
                if (ov_primes.size() != 4) throw DomainError("--primes needs 4 entries");
                opt.unit_primes = std::array<int64_t, 4>{ov_primes[0], ov_primes[1],
                                                         ov_primes[2], ov_primes[3]};
            }
            auto [plan, fam] = thm2_construct(m, opt);
            auto fam_json = family_to_json(fam);
            out.env["command"] = "thm2";
            out.env["params"] = {{"m", m}};
            out.env["result"] = {{"plan", thm2_plan_json(plan)}, {"family", fam_json}};
            out.text << "plan: " << thm2_plan_json(plan).dump() << "\n";
            out.text << "family: " << fam_json.dump() << "\n";
            out.text << "members: N_0 = " << family_member(fam, 0).get_str()
                     << ", N_1 = " << family_member(fam, 1).get_str() << "\n";
            if (!out_path.empty()) std::ofstream(out_path) << fam_json.dump(2) << "\n";
        } else if (*c_verify) {
            ordered_json doc;
            if (family_path == "-") {
                doc = ordered_json::parse(std::cin);
            } else {
                std::ifstream in(family_path);
                if (!in) throw DomainError("cannot open " + family_path);
                doc = ordered_json::parse(in);
            }
            if (doc.contains("result") && doc["result"].is_object() &&
                doc["result"].contains("family"))
                doc = doc["result"]["family"];
            else if (doc.contains("family"))
                doc = doc["family"];
            if (doc.is_null()) throw DomainError("input carries no family");
            auto fam = family_from_json(doc);
            auto v = verify_family(fam, static_cast<int>(nmax), limits);
            out.env["command"] = "verify";
            out.env["params"] = {{"family", family_to_json(fam)},
                                 {"nmax", nmax},
                                 {"cap", limits.cap}};
            out.env["result"] = verification_json(v);
            for (const auto& mc : v.members) {
                out.text << "n=" << mc.n << ": N = " << mc.value.get_str() << " | local "
                         << (mc.locally_represented ? "yes" : "NO") << " | global "
                         << global_name(mc.global) << " | descent "
                         << (mc.descent_ok ? "ok" : "FAIL") << "\n";
            }
            out.text << (v.all_ok ? "family verified" : "family verification FAILED")
                     << " (" << v.skipped << " member(s) above cap skipped)\n";
            exit_code = v.all_ok ? 0 : 1;
        }
    } catch (const UndecidedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    const auto t1 = std::chrono::steady_clock::now();
    if (out.json) {
        out.env["timing_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
        std::cout << out.env.dump(2) << "\n";
    } else {
        std::cout << out.text.str();
    }
    return exit_code;
}
