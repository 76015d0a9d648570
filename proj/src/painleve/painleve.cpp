#include "kinkforge/painleve/painleve.hpp"

#include "kinkforge/algebra/upoly.hpp"
#include "kinkforge/errors.hpp"
#include "series.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace kinkforge::painleve {

using detail::RhsTerm;
using detail::Series;

std::string BalanceBranch::label() const {
    std::ostringstream os;
    os << "(" << q1 << "," << q2 << ") a0 = " << a0.to_string() << ", b0 = " << b0.to_string();
    for (const auto& s : surds.relations()) os << ", " << s.name << "^2 = " << s.square.to_string();
    if (B_binding) os << ", B = " << B_binding->to_string();
    return os.str();
}

namespace {

// ---------------------------------------------------------------- balance

int monomial_order(const RhsTerm& t, int q1, int q2) {
    return -static_cast<int>(t.alpha) * q1 - static_cast<int>(t.beta) * q2;
}

// Empty string when the row balances, otherwise the reason it does not.
std::string row_dominance(const std::vector<RhsTerm>& terms, int q_row, int q1, int q2) {
    const int target = -q_row - 2;
    bool attained = false;
    for (const auto& t : terms) {
        const int o = monomial_order(t, q1, q2);
        if (o < target) return "a right-hand-side term is more singular than the second derivative";
        if (o == target) attained = true;
    }
    if (q_row >= 1 && !attained) return "nothing balances the second derivative";
    return {};
}

struct Lead {
    std::map<std::string, RatFunc> values;
    SurdContext surds;
    std::optional<Rational> B;
    std::vector<MultiPoly> constraints;
};

struct LeadProblem {
    std::vector<RatFunc> equations;
    std::vector<std::string> unknowns;
    std::set<std::string> nonzero;
    int surd_counter = 0;
};

RatFunc apply(const Lead& st, RatFunc e) {
    for (std::size_t pass = 0; pass <= st.values.size(); ++pass) {
        bool any = false;
        for (const auto& [k, _] : st.values) any = any || e.has_variable(k);
        if (!any) break;
        e = e.substitute(st.values);
    }
    if (st.B) e = e.substitute(algebra::Assignment{{system::kB, *st.B}});
    return st.surds.reduce(e);
}

std::vector<std::string> unknowns_in(const MultiPoly& e, const LeadProblem& pb, const Lead& st) {
    std::vector<std::string> out;
    for (const auto& u : pb.unknowns)
        if (!st.values.count(u) && e.has_variable(u)) out.push_back(u);
    return out;
}

bool has_any(const MultiPoly& e, const std::vector<std::string>& names) {
    return std::any_of(names.begin(), names.end(), [&](const std::string& n) { return e.has_variable(n); });
}

bool has_surd(const RatFunc& f, const SurdContext& surds) {
    for (const auto& r : surds.relations())
        if (f.has_variable(r.name)) return true;
    return false;
}

void solve_leading(LeadProblem& pb, Lead st, std::vector<Lead>& out);

// Rational roots of a univariate polynomial with rational coefficients.
std::vector<Rational> rational_roots(const MultiPoly& e, const std::string& var) {
    std::vector<Rational> out;
    const algebra::UPoly f = algebra::UPoly::from_multipoly(e, var);
    for (double r : algebra::real_roots(f, 1e-14)) {
        for (long den : {1L, 1000000L}) {
            const Rational q = Rational::approximate(r, den);
            if (f.eval(q).is_zero() && std::find(out.begin(), out.end(), q) == out.end()) out.push_back(q);
        }
    }
    return out;
}

void solve_leading(LeadProblem& pb, Lead st, std::vector<Lead>& out) {
    std::vector<MultiPoly> eqs;
    for (const auto& e : pb.equations) {
        const RatFunc r = apply(st, e);
        if (!r.is_zero()) eqs.push_back(r.num());
    }
    // powers of unknowns: required nonzero ones are divided out, the others split
    for (auto& e : eqs) {
        const MultiPoly mg = e.monomial_gcd();
        for (const auto& u : pb.unknowns) {
            const auto d = mg.degree(u);
            if (d == 0 || st.values.count(u)) continue;
            if (!pb.nonzero.count(u)) {
                Lead z = st;
                z.values[u] = RatFunc();
                solve_leading(pb, z, out);
            }
            e = algebra::divexact(e, MultiPoly::variable(u).pow(d));
        }
    }
    if (eqs.empty()) {
        out.push_back(std::move(st));
        return;
    }
    // unknown-free equations constrain B
    for (const auto& e : eqs) {
        if (!unknowns_in(e, pb, st).empty()) continue;
        const MultiPoly n = st.surds.norm(e);
        if (n.is_constant()) return;  // inconsistent
        if (n.variables().size() == 1 && n.has_variable(system::kB) && !st.B) {
            for (const Rational& root : rational_roots(n, system::kB)) {
                if (root.is_zero()) continue;
                Lead b = st;
                b.B = root;
                b.constraints.push_back(n.primitive());
                b.surds = st.surds.substitute({{system::kB, root}});
                solve_leading(pb, b, out);
            }
        }
        return;
    }
    // linear with an unknown-free coefficient
    for (const auto& e : eqs) {
        for (const auto& u : unknowns_in(e, pb, st)) {
            const auto cs = e.coefficients_in(u);
            if (cs.size() != 2 || has_any(cs[1], pb.unknowns)) continue;
            st.values[u] = -RatFunc(cs[0]) / RatFunc(cs[1]);
            solve_leading(pb, std::move(st), out);
            return;
        }
    }
    // univariate polynomial in one unknown
    for (const auto& e : eqs) {
        const auto us = unknowns_in(e, pb, st);
        if (us.size() != 1) continue;
        const std::string& u = us.front();
        const auto cs = e.coefficients_in(u);
        if (cs.size() == 3) {
            const RatFunc al(cs[2]), be(cs[1]), ga(cs[0]);
            const RatFunc disc = st.surds.reduce(be * be - RatFunc(4) * al * ga);
            if (has_surd(disc, st.surds)) continue;
            const RatFunc centre = st.surds.reduce(-be / (RatFunc(2) * al));
            if (disc.is_constant()) {
                const Rational d = disc.constant_value();
                if (d.sign() < 0) return;
                if (auto r = d.sqrt()) {
                    for (int sgn : {1, -1}) {
                        if (r->is_zero() && sgn < 0) continue;
                        Lead b = st;
                        b.values[u] = st.surds.reduce(centre + RatFunc(*r * Rational(sgn)) / (RatFunc(2) * al));
                        solve_leading(pb, b, out);
                    }
                    return;
                }
            }
            // one symbol covers both signs of the square root
            const RatFunc square = st.surds.reduce(disc / (RatFunc(4) * al * al));
            if (has_surd(square, st.surds)) continue;
            const std::string name = "s" + std::to_string(++pb.surd_counter);
            st.surds.add(name, square);
            st.values[u] = centre + RatFunc::variable(name);
            solve_leading(pb, std::move(st), out);
            return;
        }
        if (cs.size() > 3 && e.variables().size() == 1) {
            for (const Rational& r : rational_roots(e, u)) {
                Lead b = st;
                b.values[u] = RatFunc(r);
                solve_leading(pb, b, out);
            }
            return;
        }
    }
    // linear with a coefficient involving other unknowns (assumed nonzero)
    for (const auto& e : eqs) {
        for (const auto& u : unknowns_in(e, pb, st)) {
            const auto cs = e.coefficients_in(u);
            if (cs.size() != 2) continue;
            st.values[u] = -RatFunc(cs[0]) / RatFunc(cs[1]);
            solve_leading(pb, std::move(st), out);
            return;
        }
    }
}

std::vector<RhsTerm> terms_for(const PdeSystem& sys, int row) { return detail::rhs_terms(sys, row); }

Series series_of(const std::vector<RatFunc>& c, int q) { return Series{-q, c}; }

PdeSystem effective_system(const PdeSystem& sys, const BalanceBranch& br) {
    return br.B_binding && !sys.B ? system::with_B(sys, br.B_binding) : sys;
}

}  // namespace

std::vector<BalanceBranch> dominant_balance(const PdeSystem& sys, int q_max) {
    const bool scalar = sys.scalar;
    const auto tU = terms_for(sys, 0);
    const auto tT = scalar ? std::vector<RhsTerm>{} : terms_for(sys, 1);
    std::vector<BalanceBranch> out;
    std::set<std::string> seen;
    for (int q1 = 0; q1 <= q_max; ++q1) {
        for (int q2 = 0; q2 <= (scalar ? 0 : q_max); ++q2) {
            if (q1 == 0 && q2 == 0) continue;
            if (!row_dominance(tU, q1, q1, q2).empty()) continue;
            if (!scalar && !row_dominance(tT, q2, q1, q2).empty()) continue;

            const Series u{-q1, {RatFunc::variable("a0")}};
            const Series th = scalar ? Series{} : Series{-q2, {RatFunc::variable("b0")}};
            LeadProblem pb;
            pb.equations.push_back(detail::row_coefficient(tU, u, u, th, -q1 - 2));
            pb.unknowns.push_back("a0");
            if (q1 >= 1) pb.nonzero.insert("a0");
            if (!scalar) {
                pb.equations.push_back(detail::row_coefficient(tT, th, u, th, -q2 - 2));
                pb.unknowns.push_back("b0");
                if (q2 >= 1) pb.nonzero.insert("b0");
            }
            std::vector<Lead> sols;
            solve_leading(pb, Lead{}, sols);

            for (auto& st : sols) {
                BalanceBranch br;
                br.q1 = q1;
                br.q2 = q2;
                br.surds = st.surds;
                br.constraints = st.constraints;
                if (st.B) br.B_binding = st.B;
                auto value = [&](const std::string& u) -> RatFunc {
                    if (st.values.count(u)) return apply(st, st.values.at(u));
                    br.free_symbols.push_back(u);
                    return RatFunc::variable(u);
                };
                br.a0 = value("a0");
                br.b0 = scalar ? RatFunc() : value("b0");
                if (q1 >= 1 && br.a0.is_zero()) continue;
                if (q2 >= 1 && br.b0.is_zero()) continue;
                // leading order checked once more against the final values
                bool ok = true;
                for (const auto& e : pb.equations) {
                    RatFunc r = e.substitute(std::map<std::string, RatFunc>{{"a0", br.a0}, {"b0", br.b0}});
                    if (br.B_binding) r = r.substitute(algebra::Assignment{{system::kB, *br.B_binding}});
                    ok = ok && br.surds.is_zero(r);
                }
                if (!ok) continue;
                if (seen.insert(br.label()).second) out.push_back(std::move(br));
            }
        }
    }
    if (out.empty()) throw NoBalance("no pole order up to " + std::to_string(q_max) + " balances");
    return out;
}

namespace {

constexpr std::size_t kMaxFree = 1;

struct Expander {
    PdeSystem sys;
    const SurdContext& surds;
    int q1, q2;
    std::vector<RhsTerm> tU, tT;
    Series u, th;

    std::array<RatFunc, 2> rows(int k) const {
        std::array<RatFunc, 2> r;
        r[0] = surds.reduce(detail::row_coefficient(tU, u, u, th, k - q1 - 2));
        if (!sys.scalar) r[1] = surds.reduce(detail::row_coefficient(tT, th, u, th, k - q2 - 2));
        return r;
    }
    std::array<RatFunc, 2> at(int k, const RatFunc& ak, const RatFunc& bk) {
        u.c[static_cast<std::size_t>(k)] = ak;
        if (!sys.scalar) th.c[static_cast<std::size_t>(k)] = bk;
        return rows(k);
    }
};

}  // namespace

LaurentExpansion laurent_expand(const PdeSystem& sys_in, const BalanceBranch& branch, int K) {
    if (K < 1) throw InvalidParameter("K must be positive");
    const PdeSystem sys = effective_system(sys_in, branch);
    LaurentExpansion exp;
    exp.branch = branch;
    exp.K = K;
    exp.free_symbols = branch.free_symbols;

    Expander ex{sys, branch.surds, branch.q1, branch.q2, terms_for(sys, 0),
                sys.scalar ? std::vector<RhsTerm>{} : terms_for(sys, 1), {}, {}};
    if (auto why = row_dominance(ex.tU, branch.q1, branch.q1, branch.q2); !why.empty())
        throw InternalInconsistency("U row: " + why);
    if (!sys.scalar)
        if (auto why = row_dominance(ex.tT, branch.q2, branch.q1, branch.q2); !why.empty())
            throw InternalInconsistency("theta row: " + why);

    ex.u = series_of({branch.a0}, branch.q1);
    ex.th = sys.scalar ? Series{} : series_of({branch.b0}, branch.q2);
    const SurdContext& S = branch.surds;

    for (int k = 1; k <= K; ++k) {
        ex.u.c.emplace_back();
        if (!sys.scalar) ex.th.c.emplace_back();
        const auto f0 = ex.at(k, RatFunc(), RatFunc());
        const auto fa = ex.at(k, RatFunc(1), RatFunc());
        const auto fb = ex.at(k, RatFunc(), RatFunc(1));
        const int n = sys.components();
        RatFunc J[2][2];
        for (int r = 0; r < n; ++r) {
            J[r][0] = S.reduce(fa[static_cast<std::size_t>(r)] - f0[static_cast<std::size_t>(r)]);
            J[r][1] = S.reduce(fb[static_cast<std::size_t>(r)] - f0[static_cast<std::size_t>(r)]);
        }
        std::array<RatFunc, 2> x;
        Resonance res;
        res.k = k;
        bool resonant = false;

        if (n == 1) {
            if (!S.is_zero(J[0][0])) {
                x[0] = S.reduce(-f0[0] / J[0][0]);
            } else {
                resonant = true;
                res.free_symbol = "a" + std::to_string(k);
                x[0] = RatFunc::variable(res.free_symbol);
                if (!S.is_zero(f0[0])) res.obstruction = S.reduce(f0[0]);
            }
        } else {
            const RatFunc det = S.reduce(J[0][0] * J[1][1] - J[0][1] * J[1][0]);
            if (!S.is_zero(det)) {
                x[0] = S.reduce((J[0][1] * f0[1] - J[1][1] * f0[0]) / det);
                x[1] = S.reduce((J[1][0] * f0[0] - J[0][0] * f0[1]) / det);
            } else {
                resonant = true;
                int pr = -1, pc = -1;
                for (int c : {0, 1}) {
                    for (int r : {0, 1})
                        if (pr < 0 && !S.is_zero(J[r][c])) {
                            pr = r;
                            pc = c;
                        }
                }
                if (pr < 0) {
                    // both coefficients undetermined at this order
                    for (int r : {0, 1})
                        if (!S.is_zero(f0[static_cast<std::size_t>(r)])) {
                            exp.compatibility.push_back(S.reduce(f0[static_cast<std::size_t>(r)]));
                            exp.compatibility_orders.push_back(k);
                        }
                    res.free_symbol = "a" + std::to_string(k) + ",b" + std::to_string(k);
                    exp.resonances.push_back(res);
                    exp.stopped = "two undetermined coefficients at order " + std::to_string(k);
                    ex.u.c.pop_back();
                    ex.th.c.pop_back();
                    break;
                }
                const int po = 1 - pc;
                res.free_symbol = (po == 0 ? "a" : "b") + std::to_string(k);
                const RatFunc F = RatFunc::variable(res.free_symbol);
                x[static_cast<std::size_t>(po)] = F;
                x[static_cast<std::size_t>(pc)] =
                    S.reduce(-(J[pr][po] * F + f0[static_cast<std::size_t>(pr)]) / J[pr][pc]);
                const int other = 1 - pr;
                const RatFunc obs = S.reduce(J[other][pc] * x[static_cast<std::size_t>(pc)] + J[other][po] * F +
                                             f0[static_cast<std::size_t>(other)]);
                if (obs.has_variable(res.free_symbol))
                    throw InternalInconsistency("obstruction depends on the free coefficient at order " +
                                                std::to_string(k));
                if (!obs.is_zero()) res.obstruction = obs;
            }
        }
        ex.at(k, x[0], x[1]);
        if (resonant) {
            exp.resonances.push_back(res);
            if (res.obstruction) {
                exp.compatibility.push_back(*res.obstruction);
                exp.compatibility_orders.push_back(k);
                exp.stopped = "compatibility condition at order " + std::to_string(k);
                break;
            }
            exp.free_symbols.push_back(res.free_symbol);
            if (exp.free_symbols.size() > kMaxFree) {
                exp.stopped = "more than one free coefficient (" + std::to_string(exp.free_symbols.size()) +
                              ") by order " + std::to_string(k);
                break;
            }
        }
    }
    exp.a = ex.u.c;
    exp.b = sys.scalar ? std::vector<RatFunc>(exp.a.size()) : ex.th.c;
    return exp;
}

RatFunc series_residual(const PdeSystem& sys_in, const LaurentExpansion& exp, int row, int order) {
    const PdeSystem sys = effective_system(sys_in, exp.branch);
    const auto terms = terms_for(sys, row);
    const Series u = series_of(exp.a, exp.branch.q1);
    const Series th = sys.scalar ? Series{} : series_of(exp.b, exp.branch.q2);
    return exp.branch.surds.reduce(detail::row_coefficient(terms, row == 0 ? u : th, u, th, order));
}

DispersionRelation dispersion_relation(const LaurentExpansion& exp) {
    if (exp.compatibility.empty())
        throw NoResonance("no compatibility condition up to order " + std::to_string(exp.last_order()) +
                          "; raise K");
    DispersionRelation dr;
    dr.B_binding = exp.branch.B_binding;
    for (std::size_t i = 0; i < exp.compatibility.size(); ++i) {
        DispersionCondition c;
        c.raw = exp.compatibility[i].num();
        c.source_order = exp.compatibility_orders[i];
        const MultiPoly n = exp.branch.surds.norm(c.raw);
        c.stripped_monomial = n.monomial_gcd();
        c.condition = algebra::divexact(n, c.stripped_monomial).primitive();
        dr.conditions.push_back(std::move(c));
    }
    return dr;
}

namespace {

void merge_sorted(std::vector<double>& acc, const std::vector<double>& more, double tol) {
    acc.insert(acc.end(), more.begin(), more.end());
    std::sort(acc.begin(), acc.end());
    std::vector<double> out;
    for (double v : acc)
        if (out.empty() || std::abs(v - out.back()) > tol) out.push_back(v);
    acc = std::move(out);
}

}  // namespace

VelocityResult admissible_velocities(const DispersionRelation& dr, const std::optional<Rational>& B_value,
                                     double tol) {
    VelocityResult res;
    if (dr.B_binding && B_value && *dr.B_binding != *B_value) return res;  // branch exists only at its own B
    for (std::size_t i = 0; i < dr.conditions.size(); ++i) {
        MultiPoly c = dr.conditions[i].condition;
        if (B_value) c = c.substitute(algebra::Assignment{{system::kB, *B_value}});
        if (c.is_zero()) {
            res.degenerate = true;
            res.degenerate_conditions.push_back(i);
            continue;
        }
        if (c.is_constant()) continue;
        if (c.variables().size() != 1 || !c.has_variable(kP)) {
            res.parametric_conditions.push_back(i);
            continue;
        }
        merge_sorted(res.velocities, algebra::real_roots_univariate(c, kP, {}, tol), tol);
    }
    return res;
}

std::vector<BranchAnalysis> analyze(const PdeSystem& sys, std::optional<int> K) {
    std::vector<BranchAnalysis> out;
    for (const auto& br : dominant_balance(sys)) {
        BranchAnalysis a;
        a.expansion = laurent_expand(sys, br, K ? *K : default_K(br));
        if (!a.expansion.compatibility.empty()) a.relation = dispersion_relation(a.expansion);
        a.principal = br.q1 >= 1 && (sys.components() == 1 || br.q2 >= 1);
        out.push_back(std::move(a));
    }
    return out;
}

VelocityResult union_velocities(const std::vector<BranchAnalysis>& analyses, const std::optional<Rational>& B_value,
                                double tol) {
    VelocityResult res;
    for (const auto& a : analyses) {
        if (!a.relation || !a.principal) continue;
        const VelocityResult v = admissible_velocities(*a.relation, B_value, tol);
        merge_sorted(res.velocities, v.velocities, tol);
        res.degenerate = res.degenerate || v.degenerate;
    }
    return res;
}

VelocityResult sliced_velocities(const PdeSystem& sys, const Rational& B, std::optional<int> K, double tol) {
    return union_velocities(analyze(system::with_B(sys, std::nullopt), K), B, tol);
}

}  // namespace kinkforge::painleve
