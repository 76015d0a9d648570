#include "doctest.h"

#include "kinkforge/ansatz/ansatz.hpp"
#include "kinkforge/catalog/catalog.hpp"
#include "kinkforge/errors.hpp"

#include <cmath>
#include <random>

using namespace kinkforge;
using namespace kinkforge::ansatz;
using algebra::parse_poly;

namespace {

bool all_zero(const std::vector<MultiPoly>& v) {
    for (const auto& p : v)
        if (!p.is_zero()) return false;
    return true;
}

const char* kThm1 = R"js({"phases": [{"a": "s", "b": "-5/6*B"}],
    "U": {"num": "1", "den": "(1+E1)^2"},
    "theta": {"num": "(1-B)*(2*E1+E1^2)", "den": "(1+E1)^2"},
    "surds": {"s": "B/6"}})js";

const char* kKink = R"js({"phases": [{"a": "a", "b": "b"}],
    "U": {"num": "1", "den": "1+E1"}, "theta": {"num": "E1", "den": "1+E1"},
    "unknowns": ["a", "b"]})js";

// Random rational-function ansatz with a positive denominator over one T and
// one E generator, with numeric phase constants and a bound B.
AnsatzExpr random_ansatz(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> c(-3, 3), pos(1, 3);
    auto coef = [&] { return std::to_string(c(rng)); };
    AnsatzExpr z;
    z.phases.push_back({MultiPoly(Rational(c(rng) == 0 ? 1 : c(rng), 2)), MultiPoly(Rational(c(rng), 3))});
    z.phases.push_back({MultiPoly(Rational(pos(rng), 4)), MultiPoly(Rational(c(rng), 2))});
    const MultiPoly den = parse_poly(std::to_string(pos(rng)) + " + " + std::to_string(pos(rng)) + "*E1 + " +
                                     std::to_string(pos(rng)) + "*E1^2 + T2^2");
    for (int k = 0; k < 2; ++k)
        z.components.push_back({parse_poly(coef() + " + " + coef() + "*E1 + " + coef() + "*T2 + " + coef() + "*T2*E1"), den});
    return z;
}

std::map<std::string, double> generator_values(const AnsatzExpr& z, double x, double t,
                                               const std::map<std::string, double>& params) {
    std::map<std::string, double> v = params;
    for (std::size_t i = 0; i < z.phases.size(); ++i) {
        const double tau = z.phases[i].a.evaluate(params) * x + z.phases[i].b.evaluate(params) * t;
        v[AnsatzExpr::T(i)] = tau;
        v[AnsatzExpr::E(i)] = std::exp(tau);
    }
    return v;
}

}  // namespace

TEST_CASE("residual numerators of known solutions vanish") {
    const auto bz = system::builtin_system("bz", std::nullopt);
    CHECK(all_zero(residual_numerator(bz, parse_ansatz_spec(kThm1))));

    const auto kpp = parse_ansatz_spec(R"js({"phases": [{"a": "s", "b": "-5/6"}],
        "U": {"num": "1", "den": "(1+E1)^2"}, "surds": {"s": "1/6"}})js");
    CHECK(all_zero(residual_numerator(system::kpp_system(), kpp)));
}

TEST_CASE("kink ansatz with symbolic a, b yields the equations for a = +-1, b = -1") {
    const auto sys = system::builtin_system("kinetics-a", Rational(2));
    const auto z = parse_ansatz_spec(kKink);
    const auto res = residual_numerator(sys, z);
    CHECK(!all_zero(res));
    const auto alg = algebraic_system(sys, z);
    CHECK(!alg.equations.empty());
    auto solves = [&](int a, int b) {
        for (const auto& e : alg.equations)
            if (!e.substitute(std::map<std::string, Rational>{{"a", Rational(a)}, {"b", Rational(b)}}).is_zero())
                return false;
        return true;
    };
    CHECK(solves(1, -1));
    CHECK(solves(-1, -1));
    CHECK(!solves(1, 1));
    CHECK(!solves(2, -1));
}

TEST_CASE("symbolic (a, b, B) system encodes a^2 = B/6 and b = -5B/6") {
    const auto sys = system::builtin_system("bz", std::nullopt);
    auto z = parse_ansatz_spec(R"js({"phases": [{"a": "a", "b": "b"}],
        "U": {"num": "1", "den": "(1+E1)^2"},
        "theta": {"num": "(1-B)*(2*E1+E1^2)", "den": "(1+E1)^2"}, "unknowns": ["a", "b"]})js");
    const auto alg = algebraic_system(sys, z);
    REQUIRE(!alg.equations.empty());
    algebra::SurdContext rel;
    rel.add("a", algebra::parse_ratfunc("B/6"));
    for (const auto& e : alg.equations) {
        const auto sub = e.substitute("b", parse_poly("-5/6*B"));
        CHECK(rel.is_zero(RatFunc(sub)));
    }
    // the equations do constrain b
    bool constrains_b = false;
    for (const auto& e : alg.equations)
        if (!rel.is_zero(RatFunc(e.substitute("b", parse_poly("-B"))))) constrains_b = true;
    CHECK(constrains_b);
}

TEST_CASE("extract_algebraic_system") {
    CHECK(extract_algebraic_system({MultiPoly(), MultiPoly()}, {"E1"}, {"a"}).equations.empty());
    // duplicates up to scaling merge
    const auto s = extract_algebraic_system({parse_poly("(a - 1)*E1 + (2*a - 2)*E1^2"), parse_poly("(b + a)*T1")},
                                            {"E1", "T1"}, {"a", "b"});
    CHECK(s.equations.size() == 2);
}

TEST_CASE("zero denominators are rejected") {
    AnsatzExpr z = parse_ansatz_spec(kKink);
    z.components[0].den = MultiPoly();
    CHECK_THROWS_AS(residual_numerator(system::builtin_system("bz", Rational(1)), z), ZeroDenominator);
}

TEST_CASE("every catalog entry has an empty algebraic system") {
    for (const auto& sol : catalog::catalog_list()) {
        INFO(sol.id);
        const auto alg = extract_algebraic_system(residual_numerator(sol.pde(), sol.components),
                                                  sol.components.generators(), sol.components.unknowns);
        CHECK(alg.equations.empty());
    }
}

TEST_CASE("the derivations commute") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        auto z = random_ansatz(rng);
        z.phases[0] = {parse_poly("a1"), parse_poly("b1")};
        for (const auto& c : z.components) {
            CHECK(dx(z, dt(z, c.num)) == dt(z, dx(z, c.num)));
            CHECK(dx(z, dx(z, c.den * c.num)) == dx(z, dx(z, c.den)) * c.num +
                                                      MultiPoly(2) * dx(z, c.den) * dx(z, c.num) +
                                                      c.den * dx(z, dx(z, c.num)));
        }
    }
}

TEST_CASE("evaluator derivatives match finite differences") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> pt(-2, 2);
    const double h = 1e-5;
    for (int trial = 0; trial < 20; ++trial) {
        const auto z = random_ansatz(rng);
        const Evaluator ev(z, {});
        const double x = pt(rng), t = pt(rng);
        for (std::size_t c = 0; c < 2; ++c) {
            const auto v = ev.at(c, x, t);
            const double fx = (ev.at(c, x + h, t).u - ev.at(c, x - h, t).u) / (2 * h);
            const double ft = (ev.at(c, x, t + h).u - ev.at(c, x, t - h).u) / (2 * h);
            const double fxx = (ev.at(c, x + h, t).ux - ev.at(c, x - h, t).ux) / (2 * h);
            auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
            CHECK(rel(fx, v.ux) < 1e-6);
            CHECK(rel(ft, v.ut) < 1e-6);
            CHECK(rel(fxx, v.uxx) < 1e-6);
        }
    }
}

TEST_CASE("residual numerator agrees with direct numeric substitution") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> pt(-1.5, 1.5);
    const auto sys = system::builtin_system("kinetics-b", Rational(3, 2));  // cubic rhs: D^3
    for (int trial = 0; trial < 20; ++trial) {
        const auto z = random_ansatz(rng);
        const auto res = residual_numerator(sys, z);
        const Evaluator ev(z, {});
        const double x = pt(rng), t = pt(rng);
        const auto direct = ev.pde_residual(sys, x, t);
        const auto vals = generator_values(z, x, t, {});
        const double D = z.components[0].den.evaluate(vals);
        for (std::size_t c = 0; c < 2; ++c) {
            const double sym = res[c].evaluate(vals);
            const double ref = direct[c] * std::pow(D, 3);
            CHECK(std::abs(sym - ref) <= 1e-9 * std::max(1.0, std::abs(ref)));
        }
    }
}

TEST_CASE("ansatz spec round-trip") {
    for (const char* text : {kThm1, kKink}) {
        const auto z = parse_ansatz_spec(text);
        const auto again = parse_ansatz_spec(emit_ansatz_spec(z));
        CHECK(emit_ansatz_spec(again) == emit_ansatz_spec(z));
    }
    CHECK_THROWS_AS(parse_ansatz_spec("[1, 2]"), ParseError);
    CHECK_THROWS_AS(parse_ansatz_spec(R"js({"phases": [], "U": {"num": "1 +"}})js"), ParseError);
}

TEST_CASE("two-phase templates") {
    const auto pt = two_phase_template(TemplateKind::poly_times_exp);
    CHECK(pt.components.size() == 2);
    CHECK(pt.components[0].den == parse_poly("T1 + E2"));
    const auto de = two_phase_template(TemplateKind::double_exp, true);
    CHECK(de.components.size() == 1);
    CHECK(de.components[0].den == parse_poly("1 + E1 + E2"));

    // known two-phase solutions sit inside the templates
    const auto sys = system::builtin_system("kinetics-a", Rational(2));
    const auto alg = algebraic_system(sys, pt);
    // U = (a1 + E2)/(a1 + T1 + E2) after the shift T1 -> T1 - a1, here with a1 = 3/2
    const std::map<std::string, Rational> prop1 = {{"g0", Rational(3, 2)}, {"g1", Rational(0)}, {"g2", Rational(1)},
                                                   {"g3", Rational(-3, 2)}, {"g4", Rational(1)}, {"g5", Rational(0)},
                                                   {"a1", Rational(3, 2)}, {"b1", Rational(-3)}, {"a2", Rational(1)},
                                                   {"b2", Rational(1)}};
    for (const auto& e : alg.equations) CHECK(e.substitute(prop1).is_zero());
}
