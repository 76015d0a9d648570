#include "kinkforge/catalog/catalog.hpp"

#include "kinkforge/errors.hpp"
#include "kinkforge/solve/solve.hpp"

#include <cmath>

namespace kinkforge::catalog {

namespace {

AnsatzExpr form(const std::string& json) { return ansatz::parse_ansatz_spec(json); }

std::vector<ClosedFormSolution> build() {
    std::vector<ClosedFormSolution> c;
    // Pole entries: the shifted window keeps rational pole lines off the sample
    // points, and the smaller window bounds exp(tau) so that double rounding
    // in the quotient derivatives stays under the numeric tolerance.
    SampleGrid off_grid;
    off_grid.x0 = -4.9713;
    off_grid.x1 = 5.0287;
    off_grid.t1 = 2;
    off_grid.min_denominator = 0.1;

    {
        ClosedFormSolution s;
        s.id = "thm1_real";
        s.system = "bz";
        s.provenance = "Theorem 1, real branch";
        const std::string body =
            R"("U": {"num": "1", "den": "(1+E1)^2"},
               "theta": {"num": "(1-B)*(2+E1)*E1", "den": "(1+E1)^2"},
               "surds": {"s": "B/6"}})";
        s.components = form(R"({"phases": [{"a": "s", "b": "-5/6*B"}], )" + body);
        s.variants = {{"a = -sqrt(B/6)", form(R"({"phases": [{"a": "-s", "b": "-5/6*B"}], )" + body)}};
        s.sample = {{"B", 7.0 / 3.0}};
        s.notes = {"printed theta numerator has an unclosed parenthesis; read as (1-B)(2E+E^2)",
                   "real for B > 0; (b/a)^2 = 25B/6"};
        c.push_back(std::move(s));
    }
    {
        ClosedFormSolution s;
        s.id = "thm1_complex";
        s.system = "bz";
        s.provenance = "Theorem 1, complex branch";
        const std::string theta = R"("theta": {"num": "(1-B)*E1^2", "den": "(1+E1)^2"}, "surds": {"s": "-B/6"}})";
        const std::string phase = R"({"phases": [{"a": "s", "b": "-5/6*B"}], )";
        s.components = form(phase + R"("U": {"num": "1+2*E1", "den": "(1+E1)^2"}, )" + theta);
        s.variants = {{"a = -sqrt(-B/6)", form(R"({"phases": [{"a": "-s", "b": "-5/6*B"}], )"
                                               R"("U": {"num": "1+2*E1", "den": "(1+E1)^2"}, )" +
                                               theta)}};
        s.rejected = {{"printed U numerator 1 - 2E", form(phase + R"("U": {"num": "1-2*E1", "den": "(1+E1)^2"}, )" + theta)}};
        s.sample = {{"B", -7.0 / 3.0}};
        s.notes = {"U numerator printed as 1-2E with a stray parenthesis; only 1+2E passes the residual gate",
                   "real for B < 0"};
        c.push_back(std::move(s));
    }
    {
        ClosedFormSolution s;
        s.id = "thm2_kink";
        s.system = "kinetics-a";
        s.B = Rational(2);
        s.provenance = "Theorem 2, kink";
        auto kink = [](const std::string& a, const std::string& su, const std::string& st) {
            return form(R"({"phases": [{"a": ")" + a + R"(", "b": "-1"}],
                "U": {"num": ")" + su + R"(1", "den": "1+E1"},
                "theta": {"num": ")" + st + R"(E1", "den": "1+E1"}})");
        };
        s.components = kink("1", "", "");
        s.variants = {{"a = -1", kink("-1", "", "")},
                      {"-U", kink("1", "-", "")},
                      {"-theta", kink("1", "", "-")},
                      {"-U, -theta", kink("1", "-", "-")}};
        s.sample = {};
        s.notes = {"the four sign choices of U and theta and both signs of a pass independently"};
        c.push_back(std::move(s));
    }
    {
        ClosedFormSolution s;
        s.id = "thm2_pole";
        s.system = "kinetics-a";
        s.B = Rational(2);
        s.provenance = "Theorem 2, moving pole";
        const std::string head = R"({"phases": [{"a": "a", "b": "2*a"}], "U": {"num": "-a", "den": "a-T1"}, )";
        s.components = form(head + R"("theta": {"num": "T1", "den": "a-T1"}})");
        s.variants = {{"-theta", form(head + R"("theta": {"num": "-T1", "den": "a-T1"}})")}};
        s.rejected = {{"printed theta = exp(tau)/(1+exp(tau))", form(head + R"("theta": {"num": "E1", "den": "1+E1"}})")}};
        s.free_parameters = {"a"};
        s.sample = {{"a", 1.0}};
        s.grid = off_grid;
        s.pole = true;
        s.notes = {"printed theta is the kink profile; the residual gate admits theta = +-tau/(a - tau)"};
        c.push_back(std::move(s));
    }
    {
        ClosedFormSolution s;
        s.id = "prop1_twophase";
        s.system = "kinetics-a";
        s.B = Rational(2);
        s.provenance = "Proposition 1";
        const std::string head = R"({"phases": [{"a": "a1", "b": "-2*a1"}, {"a": "1", "b": "1"}],
            "U": {"num": "a1+E2", "den": "a1+T1+E2"}, )";
        s.components = form(head + R"("theta": {"num": "T1", "den": "a1+T1+E2"}})");
        s.variants = {{"-theta", form(head + R"("theta": {"num": "-T1", "den": "a1+T1+E2"}})")}};
        s.free_parameters = {"a1"};
        s.sample = {{"a1", 1.0}};
        s.grid = off_grid;
        s.pole = true;
        c.push_back(std::move(s));
    }
    {
        ClosedFormSolution s;
        s.id = "thm3_kink";
        s.system = "kinetics-b";
        s.provenance = "Theorem 3, kink";
        const std::string body = R"("U": {"num": "c1", "den": "c1+c2*E1"},
            "theta": {"num": "(1-B)*c2*E1", "den": "c1+c2*E1"}, "surds": {"s": "B/2"}})";
        s.components = form(R"({"phases": [{"a": "s", "b": "-1/2*B"}], )" + body);
        s.variants = {{"a = -sqrt(B/2)", form(R"({"phases": [{"a": "-s", "b": "-1/2*B"}], )" + body)}};
        s.rejected = {{"printed U = c1/(a1 + a2 E), theta over c1 + a2 E",
                       form(R"({"phases": [{"a": "s", "b": "-1/2*B"}],
                            "U": {"num": "c1", "den": "a1+a2*E1"},
                            "theta": {"num": "(1-B)*a2*E1", "den": "c1+a2*E1"}, "surds": {"s": "B/2"}})")}};
        s.free_parameters = {"c1", "c2"};
        s.sample = {{"B", 1.5}, {"c1", 1.0}, {"c2", 2.0}};
        s.notes = {"printed denominators mix a1, a2 and c1 while the text names c1, c2 as the constants; "
                   "only the reading with both denominators c1 + c2 E passes"};
        c.push_back(std::move(s));
    }
    {
        ClosedFormSolution s;
        s.id = "thm3_pole";
        s.system = "kinetics-b";
        s.provenance = "Theorem 3, moving pole";
        s.components = form(R"({"phases": [{"a": "a", "b": "-a*sqrt2*sqrtB"}],
            "U": {"num": "a*sqrt2", "den": "T1*sqrtB+a*sqrt2"},
            "theta": {"num": "sqrtB*(1-B)*T1", "den": "T1*sqrtB+a*sqrt2"},
            "surds": {"sqrtB": "B", "sqrt2": "2"}})");
        s.free_parameters = {"a"};
        s.sample = {{"B", 1.5}, {"a", 1.0}};
        s.grid = off_grid;
        s.pole = true;
        c.push_back(std::move(s));
    }
    {
        ClosedFormSolution s;
        s.id = "prop2_twophase";
        s.system = "kinetics-b";
        s.provenance = "Proposition 2";
        const std::string head = R"({"phases": [{"a": "a1", "b": "-2*a1*s"}, {"a": "s", "b": "1/2*B"}],
            "U": {"num": "a1+s*E2", "den": ")";
        const std::string mid = R"("}, "theta": {"num": "s*(1-B)*T1", "den": ")";
        const std::string tail = R"("}, "surds": {"s": "B/2"}})";
        const std::string den_a = "a1+s*(T1+E2)", den_b = "(a1+s)*T1+E2";
        s.components = form(head + den_a + mid + den_a + tail);
        s.rejected = {{"denominator (a1 + a2) tau1 + exp(tau2)", form(head + den_b + mid + den_b + tail)}};
        s.free_parameters = {"a1"};
        s.sample = {{"B", 1.5}, {"a1", 1.0}};
        s.grid = off_grid;
        s.pole = true;
        s.notes = {"printed denominator has an unclosed parenthesis; a1 + a2 (tau1 + exp(tau2)) passes, "
                   "(a1 + a2) tau1 + exp(tau2) does not"};
        c.push_back(std::move(s));
    }
    {
        ClosedFormSolution s;
        s.id = "prop3_kink";
        s.system = "kinetics-c";
        s.B = Rational(1);
        s.provenance = "Proposition 3";
        auto kink = [](const std::string& a, const std::string& su) {
            return form(R"({"phases": [{"a": ")" + a + R"(", "b": "-1/2"}],
                "U": {"num": ")" + su + R"(1", "den": "1+E1"},
                "theta": {"num": "E1", "den": "1+E1"}, "surds": {"s": "1/2"}})");
        };
        s.components = kink("s", "");
        s.variants = {{"-U", kink("s", "-")}, {"a = -1/sqrt(2)", kink("-s", "")}};
        s.rejected = {{"printed two-phase theta = exp(tau1)/(1 + exp(tau2))",
                       form(R"({"phases": [{"a": "s", "b": "-1/2"}, {"a": "a2", "b": "b2"}],
                            "U": {"num": "1", "den": "1+E1"},
                            "theta": {"num": "E1", "den": "1+E2"}, "surds": {"s": "1/2"}})")}};
        s.notes = {"printed theta carries phase indices 1 and 2 with a single tau defined; "
                   "the single-phase reading passes, the two-phase one does not"};
        c.push_back(std::move(s));
    }
    {
        ClosedFormSolution s;
        s.id = "prop4_twophase";
        s.system = "kinetics-c";
        s.B = Rational(1);
        s.provenance = "Proposition 4";
        const std::string body = R"("U": {"num": "1-E1", "den": "1+E1+E2"},
            "theta": {"num": "E2", "den": "1+E1+E2"}, "surds": {"sqrt2": "2"}})";
        s.components = form(R"({"phases": [{"a": "sqrt2", "b": "0"}, {"a": "1/2*sqrt2", "b": "-1/2"}], )" + body);
        s.variants = {{"x -> -x", form(R"({"phases": [{"a": "-sqrt2", "b": "0"}, {"a": "-1/2*sqrt2", "b": "-1/2"}], )" +
                                      body)}};
        c.push_back(std::move(s));
    }
    return c;
}

std::size_t exponent(const MultiPoly& mono, const std::string& var) {
    return mono.coefficients_in(var).size() - 1;
}

RatFunc one_limit(const ClosedFormSolution& sol, const ansatz::Component& comp, double dir,
                  const std::vector<double>& rates) {
    const auto& z = sol.components;
    const auto gens = z.generators();
    auto dominant = [&](const MultiPoly& p) {
        double best = -INFINITY;
        std::vector<std::pair<MultiPoly, MultiPoly>> top;
        for (auto& [mono, coef] : p.collect(gens)) {
            double r = 0;
            for (std::size_t i = 0; i < z.phases.size(); ++i) {
                if (exponent(mono, AnsatzExpr::T(i)) > 0) throw Unbounded(sol.id + ": polynomial phase in the profile");
                r += dir * rates[i] * static_cast<double>(exponent(mono, AnsatzExpr::E(i)));
            }
            if (r > best + 1e-12) {
                best = r;
                top.clear();
            }
            if (std::abs(r - best) <= 1e-12) top.emplace_back(mono, coef);
        }
        if (top.size() != 1) throw InvalidParameter(sol.id + ": limit depends on t (tied exponential rates)");
        return std::make_pair(best, top.front().second);
    };
    if (comp.num.is_zero()) return RatFunc();
    const auto [rn, cn] = dominant(comp.num);
    const auto [rd, cd] = dominant(comp.den);
    if (rn < rd - 1e-12) return RatFunc();
    if (rn > rd + 1e-12) throw Unbounded(sol.id + ": component grows without bound");
    return z.surds.reduce(RatFunc(cn, cd));
}

}  // namespace

PdeSystem ClosedFormSolution::pde() const { return system::builtin_system(system, B); }

std::vector<RatFunc> ClosedFormSolution::velocities() const {
    std::vector<RatFunc> v;
    for (const auto& ph : components.phases) {
        if (ph.a.is_zero()) throw InvalidParameter(id + ": phase with a = 0");
        v.push_back(components.surds.reduce(RatFunc(ph.b) / RatFunc(ph.a)));
    }
    return v;
}

const std::vector<ClosedFormSolution>& catalog_list() {
    static const std::vector<ClosedFormSolution> entries = build();
    return entries;
}

const ClosedFormSolution& catalog_get(const std::string& id) {
    for (const auto& s : catalog_list())
        if (s.id == id) return s;
    throw UnknownEntry("no catalog entry '" + id + "'");
}

ClosedFormSolution specialize(const ClosedFormSolution& sol, const Rational& B) {
    if (sol.B) {
        if (*sol.B != B) throw InvalidParameter(sol.id + " is bound to B = " + sol.B->to_string());
        return sol;
    }
    const std::map<std::string, MultiPoly> val{{system::kB, MultiPoly(B)}};
    const algebra::Assignment num{{system::kB, B}};
    auto bind = [&](const AnsatzExpr& z) {
        AnsatzExpr w = ansatz::substitute(z, val);
        w.surds = z.surds.substitute(num);
        return w;
    };
    ClosedFormSolution s = sol;
    s.B = B;
    s.components = bind(sol.components);
    for (auto& r : s.variants) r.expr = bind(r.expr);
    for (auto& r : s.rejected) r.expr = bind(r.expr);
    s.sample.erase(system::kB);
    return s;
}

bool VerifyReport::ok() const {
    if (!symbolic_ok || !numeric_ok) return false;
    for (const auto& v : variants)
        if (!v.residual_zero) return false;
    for (const auto& r : rejected)
        if (r.residual_zero) return false;
    return true;
}

ReadingCheck check_reading(const PdeSystem& sys, const Reading& r) {
    const auto rep = solve::verify_candidate_exact(sys, r.expr, solve::ExactCandidate{});
    return {r.label, rep.ok, rep.first_nonzero};
}

VerifyReport verify_closed_form(const ClosedFormSolution& sol, const std::optional<SampleGrid>& grid) {
    constexpr double singular_tol = 1e-6;
    constexpr double numeric_tol = 1e-10;

    VerifyReport rep;
    rep.id = sol.id;
    const PdeSystem sys = sol.pde();
    const auto main = check_reading(sys, {"main", sol.components});
    rep.symbolic_ok = main.residual_zero;
    rep.first_nonzero = main.first_nonzero;
    for (const auto& v : sol.variants) rep.variants.push_back(check_reading(sys, v));
    for (const auto& r : sol.rejected) rep.rejected.push_back(check_reading(sys, r));

    const SampleGrid g = grid.value_or(sol.grid);
    if (g.nx < 2 || g.nt < 1) throw InvalidParameter("sample grid needs nx >= 2 and nt >= 1");
    const auto ev = sol.evaluator();
    for (int j = 0; j < g.nt; ++j) {
        const double t = g.nt == 1 ? g.t0 : g.t0 + (g.t1 - g.t0) * j / (g.nt - 1);
        for (int i = 0; i < g.nx; ++i) {
            const double x = g.x0 + (g.x1 - g.x0) * i / (g.nx - 1);
            const double d = ev.min_abs_denominator(x, t);
            if (d < singular_tol)
                throw SingularSample(sol.id + ": sample (" + std::to_string(x) + ", " + std::to_string(t) +
                                     ") is on a denominator zero");
            if (d < g.min_denominator) {
                ++rep.skipped;
                continue;
            }
            ++rep.points;
            for (double r : ev.pde_residual(sys, x, t)) rep.max_residual = std::max(rep.max_residual, std::abs(r));
        }
    }
    rep.numeric_ok = rep.points > 0 && rep.max_residual < numeric_tol;
    return rep;
}

BoundaryLimits boundary_limits(const ClosedFormSolution& sol) {
    if (sol.pole) throw Unbounded(sol.id + " has a moving pole");
    const auto ev = sol.evaluator();
    std::vector<double> rates;
    for (const auto& ph : sol.components.phases) rates.push_back(ph.a.evaluate(ev.params()));
    BoundaryLimits out;
    for (const auto& comp : sol.components.components) {
        out.plus.push_back(one_limit(sol, comp, 1.0, rates));
        out.minus.push_back(one_limit(sol, comp, -1.0, rates));
    }
    return out;
}

std::vector<std::pair<double, double>> boundary_values(const ClosedFormSolution& sol) {
    const auto lim = boundary_limits(sol);
    const auto params = sol.evaluator().params();
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < lim.plus.size(); ++i)
        out.emplace_back(lim.minus[i].evaluate(params), lim.plus[i].evaluate(params));
    return out;
}

}  // namespace kinkforge::catalog
