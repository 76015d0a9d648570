#include "kinkforge/ansatz/ansatz.hpp"

#include "kinkforge/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <set>

namespace kinkforge::ansatz {

using nlohmann::json;

std::vector<std::string> AnsatzExpr::generators() const {
    std::vector<std::string> g;
    for (std::size_t i = 0; i < phases.size(); ++i) {
        g.push_back(T(i));
        g.push_back(E(i));
    }
    return g;
}

namespace {

MultiPoly derive(const AnsatzExpr& z, const MultiPoly& f, bool in_x) {
    MultiPoly acc;
    for (std::size_t i = 0; i < z.phases.size(); ++i) {
        const MultiPoly& c = in_x ? z.phases[i].a : z.phases[i].b;
        if (c.is_zero()) continue;
        const std::string e = AnsatzExpr::E(i);
        acc += c * (f.derivative(AnsatzExpr::T(i)) + MultiPoly::variable(e) * f.derivative(e));
    }
    return acc;
}

}  // namespace

MultiPoly dx(const AnsatzExpr& z, const MultiPoly& f) { return derive(z, f, true); }
MultiPoly dt(const AnsatzExpr& z, const MultiPoly& f) { return derive(z, f, false); }

std::vector<MultiPoly> residual_numerator(const PdeSystem& sys, const AnsatzExpr& z) {
    const int n = sys.components();
    if (static_cast<int>(z.components.size()) != n)
        throw InvalidParameter("ansatz has " + std::to_string(z.components.size()) + " components, system has " +
                               std::to_string(n));
    for (const auto& c : z.components)
        if (c.den.is_zero()) throw ZeroDenominator("ansatz component with zero denominator");

    const bool shared = n == 1 || z.components[0].den == z.components[1].den;
    std::vector<MultiPoly> out;
    for (int i = 0; i < n; ++i) {
        const Component& me = z.components[static_cast<std::size_t>(i)];
        const MultiPoly& N = me.num;
        const MultiPoly& D = me.den;
        const MultiPoly Nx = dx(z, N), Dx = dx(z, D);
        const MultiPoly own_t = dt(z, N) * D - N * dt(z, D);
        const MultiPoly own_xx = (dx(z, Nx) * D - N * dx(z, Dx)) * D - MultiPoly(2) * Dx * (Nx * D - N * Dx);
        const auto terms = sys.rhs_bound(i).collect({system::kU, system::kTheta});

        std::array<unsigned, 2> e{0, 0};  // powers of D1, D2 (just D when shared)
        unsigned max_total = 0;
        for (const auto& [mono, coef] : terms) {
            e[0] = std::max(e[0], mono.degree(system::kU));
            e[1] = std::max(e[1], mono.degree(system::kTheta));
            max_total = std::max(max_total, mono.degree(system::kU) + mono.degree(system::kTheta));
        }
        MultiPoly res;
        if (shared) {
            const unsigned M = std::max(3U, max_total);
            res = own_t * D.pow(M - 2) - own_xx * D.pow(M - 3);
            for (const auto& [mono, coef] : terms) {
                const unsigned al = mono.degree(system::kU), be = mono.degree(system::kTheta);
                MultiPoly m = coef * z.components[0].num.pow(al) * D.pow(M - al - be);
                if (be) m *= z.components[1].num.pow(be);
                res -= m;
            }
        } else {
            e[static_cast<std::size_t>(i)] = std::max(e[static_cast<std::size_t>(i)], 3U);
            const MultiPoly& D1 = z.components[0].den;
            const MultiPoly& D2 = z.components[1].den;
            const MultiPoly other = i == 0 ? D2.pow(e[1]) : D1.pow(e[0]);
            const unsigned ei = e[static_cast<std::size_t>(i)];
            res = (own_t * D.pow(ei - 2) - own_xx * D.pow(ei - 3)) * other;
            for (const auto& [mono, coef] : terms) {
                const unsigned al = mono.degree(system::kU), be = mono.degree(system::kTheta);
                res -= coef * z.components[0].num.pow(al) * z.components[1].num.pow(be) * D1.pow(e[0] - al) *
                       D2.pow(e[1] - be);
            }
        }
        out.push_back(z.surds.empty() ? res : z.surds.reduce(RatFunc(res)).num());
    }
    return out;
}

AlgebraicSystem extract_algebraic_system(const std::vector<MultiPoly>& residuals,
                                         const std::vector<std::string>& generators,
                                         const std::vector<std::string>& unknowns) {
    AlgebraicSystem sys;
    sys.unknowns = unknowns;
    std::set<std::string> seen;
    for (const auto& r : residuals) {
        for (const auto& [mono, coef] : r.collect(generators)) {
            if (coef.is_zero()) continue;
            MultiPoly eq = coef.primitive();
            if (seen.insert(eq.to_string()).second) sys.equations.push_back(std::move(eq));
        }
    }
    return sys;
}

AnsatzExpr substitute(const AnsatzExpr& z, const std::map<std::string, MultiPoly>& values) {
    AnsatzExpr out = z;
    for (auto& ph : out.phases) {
        ph.a = ph.a.substitute(values);
        ph.b = ph.b.substitute(values);
    }
    for (auto& c : out.components) {
        c.num = c.num.substitute(values);
        c.den = c.den.substitute(values);
    }
    out.unknowns.clear();
    for (const auto& u : z.unknowns)
        if (!values.count(u)) out.unknowns.push_back(u);
    return out;
}

AnsatzExpr two_phase_template(TemplateKind kind, bool scalar) {
    AnsatzExpr z;
    auto sym = [&](int i) {
        const std::string name = "g" + std::to_string(i);
        z.unknowns.push_back(name);
        return MultiPoly::variable(name);
    };
    for (int i = 1; i <= 2; ++i) {
        const std::string a = "a" + std::to_string(i), b = "b" + std::to_string(i);
        z.phases.push_back({MultiPoly::variable(a), MultiPoly::variable(b)});
    }
    const MultiPoly T1 = MultiPoly::variable("T1"), E1 = MultiPoly::variable("E1"), E2 = MultiPoly::variable("E2");
    int next = 0;
    const int ncomp = scalar ? 1 : 2;
    if (kind == TemplateKind::poly_times_exp) {
        // scaling tau1 and the shifts of tau1, tau2 reduce the denominator to T1 + E2
        const MultiPoly den = T1 + E2;
        for (int c = 0; c < ncomp; ++c) {
            const MultiPoly g0 = sym(next++), g1 = sym(next++), g2 = sym(next++);
            z.components.push_back({g0 + g1 * T1 + g2 * E2, den});
        }
    } else {
        const MultiPoly den = MultiPoly(1) + E1 + E2;
        for (int c = 0; c < ncomp; ++c) {
            const MultiPoly g0 = sym(next++), g1 = sym(next++), g2 = sym(next++);
            z.components.push_back({g0 + g1 * E1 + g2 * E2, den});
        }
    }
    for (const char* u : {"a1", "b1", "a2", "b2"}) z.unknowns.emplace_back(u);
    return z;
}

AnsatzExpr parse_ansatz_spec(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("ansatz spec: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("ansatz spec must be an object");
    for (const auto& [key, _] : j.items())
        if (key != "phases" && key != "U" && key != "theta" && key != "unknowns" && key != "surds")
            throw ParseError("ansatz spec: unknown field '" + key + "'");
    auto str = [](const json& v, const std::string& where) {
        if (!v.is_string()) throw ParseError("ansatz spec: '" + where + "' must be a string");
        return v.get<std::string>();
    };
    AnsatzExpr z;
    if (!j.contains("phases") || !j.at("phases").is_array() || j.at("phases").empty())
        throw ParseError("ansatz spec: 'phases' must be a nonempty array");
    for (const auto& ph : j.at("phases"))
        z.phases.push_back({algebra::parse_poly(str(ph.at("a"), "phases.a")),
                            algebra::parse_poly(str(ph.at("b"), "phases.b"))});
    for (const char* name : {"U", "theta"}) {
        if (!j.contains(name)) continue;
        const auto& c = j.at(name);
        Component comp;
        comp.num = algebra::parse_poly(str(c.at("num"), std::string(name) + ".num"));
        comp.den = c.contains("den") ? algebra::parse_poly(str(c.at("den"), std::string(name) + ".den")) : MultiPoly(1);
        z.components.push_back(std::move(comp));
    }
    if (z.components.empty()) throw ParseError("ansatz spec: field 'U' is missing");
    if (j.contains("unknowns"))
        for (const auto& u : j.at("unknowns")) z.unknowns.push_back(str(u, "unknowns"));
    if (j.contains("surds"))
        for (const auto& [name, sq] : j.at("surds").items()) z.surds.add(name, algebra::parse_ratfunc(str(sq, name)));
    return z;
}

std::string emit_ansatz_spec(const AnsatzExpr& z) {
    json j;
    j["phases"] = json::array();
    for (const auto& ph : z.phases) j["phases"].push_back({{"a", ph.a.to_string()}, {"b", ph.b.to_string()}});
    const char* names[] = {"U", "theta"};
    for (std::size_t i = 0; i < z.components.size(); ++i)
        j[names[i]] = {{"num", z.components[i].num.to_string()}, {"den", z.components[i].den.to_string()}};
    j["unknowns"] = z.unknowns;
    if (!z.surds.empty()) {
        j["surds"] = json::object();
        for (const auto& r : z.surds.relations()) j["surds"][r.name] = r.square.to_string();
    }
    return j.dump();
}

Evaluator::Evaluator(const AnsatzExpr& z, std::map<std::string, double> params)
    : phases_(z.phases), params_(std::move(params)) {
    for (const auto& r : z.surds.relations()) {
        if (params_.count(r.name)) continue;
        const double sq = r.square.evaluate(params_);
        if (!(sq >= 0)) throw InvalidParameter("surd " + r.name + " has a negative square at these parameters");
        params_[r.name] = std::sqrt(sq);
    }
    for (const auto& c : z.components) {
        Compiled k;
        k.n = c.num;
        k.d = c.den;
        k.nx = dx(z, c.num);
        k.dx = dx(z, c.den);
        k.nxx = dx(z, k.nx);
        k.dxx = dx(z, k.dx);
        k.nt = dt(z, c.num);
        k.dt = dt(z, c.den);
        comps_.push_back(std::move(k));
    }
    for (const auto& ph : phases_) {
        phase_a_.push_back(ph.a.evaluate(params_));
        phase_b_.push_back(ph.b.evaluate(params_));
    }
}

std::map<std::string, double> Evaluator::point(double x, double t) const {
    std::map<std::string, double> v = params_;
    for (std::size_t i = 0; i < phases_.size(); ++i) {
        const double tau = phase_a_[i] * x + phase_b_[i] * t;
        v[AnsatzExpr::T(i)] = tau;
        v[AnsatzExpr::E(i)] = std::exp(tau);
    }
    return v;
}

PointValue Evaluator::at(std::size_t component, double x, double t) const {
    const auto v = point(x, t);
    const Compiled& k = comps_.at(component);
    const double n = k.n.evaluate(v), d = k.d.evaluate(v);
    const double nx = k.nx.evaluate(v), dxv = k.dx.evaluate(v);
    const double nxx = k.nxx.evaluate(v), dxx = k.dxx.evaluate(v);
    const double nt = k.nt.evaluate(v), dtv = k.dt.evaluate(v);
    PointValue p;
    p.u = n / d;
    p.ux = (nx * d - n * dxv) / (d * d);
    p.ut = (nt * d - n * dtv) / (d * d);
    p.uxx = ((nxx * d - n * dxx) * d - 2 * dxv * (nx * d - n * dxv)) / (d * d * d);
    return p;
}

std::vector<double> Evaluator::pde_residual(const PdeSystem& sys, double x, double t) const {
    std::vector<PointValue> pv;
    for (std::size_t c = 0; c < comps_.size(); ++c) pv.push_back(at(c, x, t));
    std::map<std::string, double> vals = params_;
    vals[system::kU] = pv[0].u;
    vals[system::kTheta] = pv.size() > 1 ? pv[1].u : 0.0;
    std::vector<double> out;
    for (int i = 0; i < sys.components(); ++i) {
        const auto& p = pv[static_cast<std::size_t>(i)];
        out.push_back(p.ut - p.uxx - sys.rhs_bound(i).evaluate(vals));
    }
    return out;
}

double Evaluator::min_abs_denominator(double x, double t) const {
    double m = INFINITY;
    for (double d : denominators(x, t)) m = std::min(m, std::abs(d));
    return m;
}

std::vector<double> Evaluator::denominators(double x, double t) const {
    const auto v = point(x, t);
    std::vector<double> out;
    for (const auto& k : comps_) out.push_back(k.d.evaluate(v));
    return out;
}

}  // namespace kinkforge::ansatz
