// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include "kinkforge/algebra/upoly.hpp"
#include "kinkforge/catalog/catalog.hpp"
#include "kinkforge/errors.hpp"
#include "kinkforge/painleve/painleve.hpp"
#include "kinkforge/simulate/simulate.hpp"
#include "kinkforge/solve/solve.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

using namespace kinkforge;
using algebra::MultiPoly;
using algebra::parse_poly;
using algebra::parse_ratfunc;
using algebra::Rational;
using algebra::RatFunc;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(const std::string& id, const std::string& title, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::ostringstream line;
    line.precision(3);
    line << (o.pass ? "PASS " : "FAIL ") << id << " " << title << " [" << secs << " s] " << o.detail;
    std::cout << line.str() << std::endl;
}

const painleve::BranchAnalysis& principal_branch(const std::vector<painleve::BranchAnalysis>& all, int q1, int q2) {
    for (const auto& b : all)
        if (b.expansion.branch.q1 == q1 && b.expansion.branch.q2 == q2 && b.principal) return b;
    throw InternalInconsistency("no principal branch (" + std::to_string(q1) + "," + std::to_string(q2) + ")");
}

bool all_zero(const std::vector<MultiPoly>& v) {
    return std::all_of(v.begin(), v.end(), [](const MultiPoly& p) { return p.is_zero(); });
}

// ---- AC1
Outcome ac1() {
    const auto sys = system::builtin_system("bz", std::nullopt);
    const auto all = painleve::analyze(sys);
    const auto& br = principal_branch(all, 2, 2);
    if (!br.relation || br.relation->conditions.empty()) return {false, "no compatibility condition"};
    const MultiPoly c = br.relation->conditions.front().condition;
    const auto q1 = algebra::try_divexact(c, parse_poly("2*B - 1"));
    if (!q1) return {false, "not divisible by 2B-1: " + c.to_string()};
    const auto q2 = algebra::try_divexact(*q1, parse_poly("36*p^4 - 625*B^2"));
    if (!q2) return {false, "not divisible by 36p^4-625B^2"};
    if (!q2->is_constant() || q2->is_zero()) return {false, "cofactor " + q2->to_string()};
    return {true, "condition " + c.to_string() + " = (2B-1)(36p^4-625B^2) * " + q2->to_string()};
}

// ---- AC2
// Printed table. Three entries disagree with the recurrence they come from:
// b2 has the wrong overall sign, a5 drops a factor p, a6 has p^4 where p^6
// belongs. Those are checked by back-substitution: the printed value leaves a
// nonzero residual in its own row while the computed value leaves none.
Outcome ac2() {
    const auto sys = system::builtin_system("bz", std::nullopt);
    const auto all = painleve::analyze(sys);
    auto exp = principal_branch(all, 2, 2).expansion;
    if (exp.last_order() < 6) return {false, "expansion stopped at order " + std::to_string(exp.last_order())};

    struct Entry {
        char side;
        int k;
        const char* printed;
        const char* corrected;  // null when the printed value is expected to match
    };
    const std::vector<Entry> table = {
        {'a', 0, "6/B", nullptr},
        {'a', 1, "6*p/(5*B)", nullptr},
        {'a', 2, "(25*B - p^2)/(50*B)", nullptr},
        {'a', 3, "p^3/(250*B)", nullptr},
        {'a', 4, "(125*B^2 - 7*p^4)/(5000*B)", nullptr},
        {'a', 5, "-(1375*B^2 - 79*p^4)/(75000*B)", "p*(79*p^4 - 1375*B^2)/(75000*B)"},
        {'a', 6, "(37500*b6 - 625*B^2*p^2 + 36*p^4)/(37500*(B - 1))",
         "(37500*b6 - 625*B^2*p^2 + 36*p^6)/(37500*(B - 1))"},
        {'b', 0, "6*(B - 1)/B", nullptr},
        {'b', 1, "6*p*(B - 1)/(5*B)", nullptr},
        {'b', 2, "-(1 - B)*(p^2 + 25*B)/(50*B)", "(1 - B)*(p^2 + 25*B)/(50*B)"},
        {'b', 3, "p^3*(B - 1)/(250*B)", nullptr},
        {'b', 4, "(B - 1)*(125*B^2 - 7*p^4)/(5000*B)", nullptr},
        {'b', 5, "p*(1 - B)*(1375*B^2 - 79*p^4)/(75000*B)", nullptr},
    };

    // Rows of the series identity up to the order where coefficient k enters.
    // At the resonance order (k = 6) only the U row is solved for a6; the
    // theta row there is the compatibility condition itself.
    auto rows_vanish = [&](const painleve::LaurentExpansion& e, int k) {
        const int lo = -(std::max(e.branch.q1, e.branch.q2) + 2);
        for (int order = lo; order <= lo + k; ++order)
            for (int row = 0; row < 2; ++row) {
                if (k == 6 && order == lo + k && row == 1) continue;
                if (!painleve::series_residual(sys, e, row, order).is_zero()) return false;
            }
        return true;
    };

    int matched = 0;
    std::vector<std::string> corrected;
    for (const auto& en : table) {
        const RatFunc printed = parse_ratfunc(en.printed);
        RatFunc& slot = (en.side == 'a' ? exp.a : exp.b)[en.k];
        const std::string name = std::string(1, en.side) + std::to_string(en.k);
        if (!en.corrected) {
            if (!algebra::ratfunc_equal(slot, printed)) return {false, name + " = " + slot.to_string() + " differs from printed"};
            ++matched;
            continue;
        }
        if (algebra::ratfunc_equal(slot, printed)) {
            ++matched;
            continue;
        }
        if (!algebra::ratfunc_equal(slot, parse_ratfunc(en.corrected)))
            return {false, name + " = " + slot.to_string() + " matches neither printed nor corrected form"};
        if (!rows_vanish(exp, en.k)) return {false, name + ": computed value fails back-substitution"};
        const RatFunc mine = slot;
        slot = printed;
        const bool printed_ok = rows_vanish(exp, en.k);
        slot = mine;
        if (printed_ok) return {false, name + ": printed value also satisfies the recurrence"};
        corrected.push_back(name);
    }
    std::string detail = std::to_string(matched) + "/13 match the printed table exactly";
    if (!corrected.empty()) {
        detail += "; printed ";
        for (std::size_t i = 0; i < corrected.size(); ++i) detail += (i ? "," : "") + corrected[i];
        detail += " fail back-substitution and the computed values equal their corrected forms";
    }
    return {true, detail};
}

// ---- AC3
Outcome ac3() {
    const double v = 5.0 / std::sqrt(6.0);
    const auto bz1 = painleve::sliced_velocities(system::builtin_system("bz", std::nullopt), Rational(1));
    std::vector<double> got = bz1.velocities;
    std::sort(got.begin(), got.end());
    if (got.size() != 2 || std::abs(got[0] + v) > 1e-10 || std::abs(got[1] - v) > 1e-10) {
        std::ostringstream o;
        o << "bz B=1 velocities:";
        for (double x : got) o << " " << x;
        return {false, o.str()};
    }

    const auto kb = system::builtin_system("kinetics-b", std::nullopt);
    const auto all = painleve::analyze(kb);
    const auto& br = principal_branch(all, 1, 1);
    if (!br.relation) return {false, "kinetics-b: no relation"};
    MultiPoly c = br.relation->conditions.front().condition;
    const auto f1 = algebra::try_divexact(c, parse_poly("2*p^2 - B"));
    const auto f2 = f1 ? algebra::try_divexact(*f1, parse_poly("p^2 - 2*B")) : std::nullopt;
    if (!f2) return {false, "kinetics-b condition lacks 2p^2-B or p^2-2B: " + c.to_string()};
    // what is left may repeat those factors and carry (3B-1), nothing else in p
    MultiPoly cof = *f2;
    int deg_factor = 0;
    for (const char* f : {"2*p^2 - B", "p^2 - 2*B", "3*B - 1"})
        while (auto q = algebra::try_divexact(cof, parse_poly(f))) {
            cof = *q;
            if (std::string(f) == "3*B - 1") ++deg_factor;
        }
    if (!cof.is_constant()) return {false, "kinetics-b condition has an extra factor " + cof.to_string()};
    if (deg_factor == 0) return {false, "kinetics-b condition carries no (3B-1) factor"};
    const auto kb_deg = painleve::sliced_velocities(kb, Rational(1, 3));
    if (!kb_deg.degenerate) return {false, "kinetics-b B=1/3 not flagged degenerate"};

    const auto bz_half = painleve::sliced_velocities(system::builtin_system("bz", std::nullopt), Rational(1, 2));
    if (!bz_half.degenerate) return {false, "bz B=1/2 not flagged degenerate"};
    return {true, "bz B=1: +-5/sqrt(6); kinetics-b: (2p^2-B)(p^2-2B) up to multiplicity, times (3B-1)^" +
                      std::to_string(deg_factor) +
                      "; degenerate at kinetics-b B=1/3 and bz B=1/2"};
}

// ---- AC4
Outcome ac4() {
    const auto t0 = std::chrono::steady_clock::now();
    int n = 0, with_rejected = 0;
    double worst = 0;
    for (const auto& sol : catalog::catalog_list()) {
        const auto r = catalog::verify_closed_form(sol);
        if (!r.symbolic_ok) return {false, sol.id + " symbolic residual: " + r.first_nonzero};
        if (!r.numeric_ok || r.max_residual >= 1e-10) return {false, sol.id + " numeric residual " + std::to_string(r.max_residual)};
        if (!r.ok()) return {false, sol.id + " variant or rejected reading misbehaves"};
        if (r.points + r.skipped != sol.grid.nx * sol.grid.nt || sol.grid.nx != 41 || sol.grid.nt != 11)
            return {false, sol.id + " grid is not 41x11"};
        if (!sol.rejected.empty()) {
            if (sol.notes.empty()) return {false, sol.id + " has rejected readings but no note"};
            ++with_rejected;
        }
        worst = std::max(worst, r.max_residual);
        ++n;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (n != 10) return {false, std::to_string(n) + " entries"};
    if (secs >= 30) return {false, "too slow"};
    std::ostringstream o;
    o << "10 entries, max numeric residual " << worst << ", " << with_rejected
      << " entries with ambiguous printed forms resolve to a single reading";
    return {true, o.str()};
}

// ---- AC5
std::set<std::string> solve_strings(const std::string& alias, const Rational& B, const std::string& spec) {
    solve::SolveConfig cfg;
    cfg.seed = 42;
    std::set<std::string> out;
    for (const auto& r : solve::solve_ansatz(system::builtin_system(alias, B), ansatz::parse_ansatz_spec(spec), cfg)) {
        if (!r.verdict.ok || !r.exact.free.empty()) continue;
        out.insert(r.exact.to_string());
    }
    return out;
}

Outcome ac5() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string kink =
        R"({"phases": [{"a": "a", "b": "b"}], "U": {"num": "1", "den": "1+E1"},
            "theta": {"num": "E1", "den": "1+E1"}, "unknowns": ["a", "b"]})";
    const auto k1 = solve_strings("kinetics-a", Rational(2), kink);
    const std::set<std::string> want_kink = {"a = 1, b = -1", "a = -1, b = -1"};
    if (k1 != want_kink) {
        std::string s;
        for (const auto& x : k1) s += "{" + x + "} ";
        return {false, "kink template gave " + s};
    }
    const std::string two =
        R"({"phases": [{"a": "a1", "b": "b1"}, {"a": "a2", "b": "b2"}],
            "U": {"num": "1-E1", "den": "1+E1+E2"}, "theta": {"num": "E2", "den": "1+E1+E2"},
            "unknowns": ["a1", "b1", "a2", "b2"]})";
    const auto t1 = solve_strings("kinetics-c", Rational(1), two);
    const std::string want = "a1 = sqrt2, a2 = 1/2 * sqrt2, b1 = 0, b2 = -1/2";
    if (!t1.count(want)) return {false, "two-phase template missed " + want};
    // determinism
    if (solve_strings("kinetics-a", Rational(2), kink) != k1 || solve_strings("kinetics-c", Rational(1), two) != t1)
        return {false, "nondeterministic at seed 42"};
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= 60) return {false, "too slow"};
    return {true, "(a,b) in {(1,-1),(-1,-1)}; two-phase (sqrt2, 0, sqrt2/2, -1/2), " + std::to_string(t1.size()) +
                      " exact solutions incl. the mirror"};
}

// ---- AC6
double simulated_speed(const catalog::ClosedFormSolution& sol, const simulate::Grid1D& g) {
    simulate::SimConfig cfg;
    cfg.system = sol.pde();
    cfg.dt = 1e-3;
    cfg.t_end = 5;
    cfg.boundary = simulate::Boundary::exact_dirichlet;
    cfg.exact = sol;
    cfg.record_every = 50;
    const auto traj = simulate::run_simulation(simulate::init_from_exact(sol, g, 0), g, cfg);
    return std::abs(simulate::measure_front_velocity(traj, g, 0, simulate::front_level(sol, 0)));
}

Outcome ac6() {
    const double v1 = simulated_speed(catalog::catalog_get("thm2_kink"), simulate::Grid1D(-20, 20, 801));
    const auto thm1 = catalog::specialize(catalog::catalog_get("thm1_real"), Rational(6));
    const double v2 = simulated_speed(thm1, simulate::Grid1D(-10, 40, 1001));
    std::ostringstream o;
    o.precision(6);
    o << "thm2_kink " << v1 << " (|p|=1), thm1_real B=6 " << v2 << " (|p|=5)";
    return {std::abs(v1 - 1) < 0.01 && std::abs(v2 - 5) < 0.05, o.str()};
}

// ---- AC7
Outcome ac7() {
    const auto st = simulate::convergence_order(catalog::catalog_get("thm2_kink"), simulate::Grid1D(-20, 20, 101), 0.04, 1.0, 3);
    std::ostringstream o;
    o << "order " << st.order << " over dx";
    for (double d : st.dx) o << " " << d;
    return {st.dx.size() == 4 && st.order >= 1.8 && st.order <= 2.2, o.str()};
}

// ---- AC8
Outcome ac8() {
    const auto& sol = catalog::catalog_get("prop4_twophase");
    const simulate::Grid1D g(-25, 25, 1001);
    simulate::SimConfig cfg;
    cfg.system = sol.pde();
    cfg.dt = 1e-3;
    cfg.t_end = 10;
    cfg.boundary = simulate::Boundary::exact_dirichlet;
    cfg.exact = sol;
    cfg.record_every = 100;
    const auto traj = simulate::run_simulation(simulate::init_from_exact(sol, g, 0), g, cfg);
    const auto ev = sol.evaluator();
    double worst = 0;
    std::optional<double> t_exact, t_sim;
    for (const auto& f : traj) {
        double mth = -1e300, mex = -1e300;
        for (int i = 0; i < g.nx; ++i) {
            const double e = ev.at(1, g.x(i), f.t).u;
            mth = std::max(mth, f.theta[i]);
            mex = std::max(mex, e);
            worst = std::max(worst, std::abs(e - f.theta[i]));
        }
        if (!t_exact && mex < 0.1) t_exact = f.t;
        if (!t_sim && mth < 0.1) t_sim = f.t;
    }
    std::ostringstream o;
    o << "max theta < 0.1 from t=" << (t_exact ? *t_exact : -1) << " (exact), t=" << (t_sim ? *t_sim : -1)
      << " (simulated); L-inf theta deviation " << worst;
    return {t_exact && t_sim && worst <= 2e-2, o.str()};
}

// ---- AC9
Outcome ac9() {
    std::vector<double> sol_v;
    for (const char* id : {"thm2_kink", "thm2_pole"}) {
        const auto& s = catalog::catalog_get(id);
        for (const auto& p : s.velocities()) {
            const double v = std::abs(p.evaluate(s.sample));
            if (std::find_if(sol_v.begin(), sol_v.end(), [&](double w) { return std::abs(w - v) < 1e-12; }) == sol_v.end())
                sol_v.push_back(v);
        }
    }
    std::sort(sol_v.begin(), sol_v.end());
    const auto pl = painleve::sliced_velocities(system::builtin_system("kinetics-a", std::nullopt), Rational(2));
    double dist = 1e300;
    for (double a : sol_v)
        for (double b : pl.velocities) dist = std::min(dist, std::abs(a - std::abs(b)));
    std::ostringstream o;
    o << "solution speeds {";
    for (std::size_t i = 0; i < sol_v.size(); ++i) o << (i ? ", " : "") << sol_v[i];
    o << "}, slice roots {";
    for (std::size_t i = 0; i < pl.velocities.size(); ++i) o << (i ? ", " : "") << pl.velocities[i];
    o << "}, distance " << dist;
    const bool ok = sol_v.size() == 2 && std::abs(sol_v[0] - 1) < 1e-12 && std::abs(sol_v[1] - 2) < 1e-12 &&
                    !pl.velocities.empty() && dist > 0.2;
    return {ok, o.str()};
}

// ---- AC10
Outcome ac10() {
    const auto s = catalog::specialize(catalog::catalog_get("thm1_real"), Rational(1));
    if (s.components.components.size() != 2) return {false, "expected two components"};
    if (!s.components.components[1].num.is_zero()) return {false, "theta numerator " + s.components.components[1].num.to_string()};
    auto scalar = s.components;
    scalar.components.resize(1);
    const auto res = ansatz::residual_numerator(system::kpp_system(), scalar);
    if (!all_zero(res)) return {false, "scalar residual " + res.front().to_string()};
    return {true, "theta == 0 and U solves U_t - U_xx = U(1-U)"};
}

}  // namespace

int main() {
    report("AC1", "dispersion polynomial factors", ac1);
    report("AC2", "Laurent coefficient table", ac2);
    report("AC3", "velocity sets and degeneracies", ac3);
    report("AC4", "catalog verification", ac4);
    report("AC5", "ansatz round-trip", ac5);
    report("AC6", "simulated kink velocity", ac6);
    report("AC7", "spatial convergence order", ac7);
    report("AC8", "two-phase annihilation", ac8);
    report("AC9", "velocity discontinuity", ac9);
    report("AC10", "KPP limit", ac10);
    return failures == 0 ? 0 : 1;
}
