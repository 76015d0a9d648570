#include "kinkforge/solve/solve.hpp"

#include "kinkforge/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

namespace kinkforge::solve {

CompiledPoly::CompiledPoly(const MultiPoly& p, const std::vector<std::string>& vars) {
    std::vector<std::size_t> index;
    for (const auto& v : p.variables()) {
        const auto it = std::find(vars.begin(), vars.end(), v);
        if (it == vars.end()) throw InvalidParameter("polynomial variable '" + v + "' is not an unknown");
        index.push_back(static_cast<std::size_t>(it - vars.begin()));
    }
    for (const auto& t : p.terms()) {
        Mono m{t.coef.to_double(), {}};
        for (std::size_t i = 0; i < t.exps.size(); ++i)
            if (t.exps[i] > 0) m.factors.emplace_back(index[i], t.exps[i]);
        monos_.push_back(std::move(m));
    }
}

double CompiledPoly::operator()(const std::vector<double>& x) const {
    double acc = 0.0;
    for (const auto& m : monos_) {
        double v = m.coef;
        for (const auto& [i, e] : m.factors)
            for (unsigned k = 0; k < e; ++k) v *= x[i];
        acc += v;
    }
    return acc;
}

namespace {

struct Compiled {
    std::vector<CompiledPoly> f;
    std::vector<std::vector<CompiledPoly>> jac;

    explicit Compiled(const AlgebraicSystem& sys) {
        for (const auto& e : sys.equations) {
            f.emplace_back(e, sys.unknowns);
            std::vector<CompiledPoly> row;
            for (const auto& u : sys.unknowns) row.emplace_back(e.derivative(u), sys.unknowns);
            jac.push_back(std::move(row));
        }
    }
    Eigen::VectorXd F(const std::vector<double>& x) const {
        Eigen::VectorXd v(static_cast<Eigen::Index>(f.size()));
        for (std::size_t i = 0; i < f.size(); ++i) v(static_cast<Eigen::Index>(i)) = f[i](x);
        return v;
    }
    Eigen::MatrixXd J(const std::vector<double>& x) const {
        const auto m = static_cast<Eigen::Index>(f.size());
        const auto n = static_cast<Eigen::Index>(x.size());
        Eigen::MatrixXd M(m, n);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                M(i, j) = jac[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)](x);
        return M;
    }
};

double smallest_singular(const Eigen::MatrixXd& J, Eigen::VectorXd* null_vector = nullptr) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const Eigen::Index n = J.cols();
    if (null_vector) *null_vector = svd.matrixV().col(n - 1);
    if (J.rows() < n) return 0.0;
    return s.size() ? s(s.size() - 1) : 0.0;
}

std::optional<NumericSolution> run(const Compiled& c, std::vector<double> x, const SolveConfig& cfg,
                                   std::vector<double>* trace) {
    Eigen::VectorXd F = c.F(x);
    double f2 = F.squaredNorm();
    for (int it = 0; it < cfg.max_iter; ++it) {
        if (F.lpNorm<Eigen::Infinity>() < cfg.residual_tol) break;
        const Eigen::MatrixXd J = c.J(x);
        const Eigen::VectorXd step = J.completeOrthogonalDecomposition().solve(-F);
        if (!step.allFinite()) return std::nullopt;
        double t = 1.0;
        bool accepted = false;
        for (int k = 0; k < 40; ++k) {
            std::vector<double> xn = x;
            for (std::size_t i = 0; i < xn.size(); ++i) xn[i] += t * step(static_cast<Eigen::Index>(i));
            const Eigen::VectorXd Fn = c.F(xn);
            const double n2 = Fn.squaredNorm();
            if (std::isfinite(n2) && n2 < f2) {
                x = std::move(xn);
                F = Fn;
                f2 = n2;
                accepted = true;
                if (trace) trace->push_back(f2);
                break;
            }
            t *= cfg.damping;
        }
        if (!accepted) break;
        for (double v : x)
            if (std::abs(v) > 1e6) return std::nullopt;
    }
    if (!(F.lpNorm<Eigen::Infinity>() < cfg.residual_tol)) return std::nullopt;
    NumericSolution s;
    s.x = std::move(x);
    s.residual = F.lpNorm<Eigen::Infinity>();
    s.min_singular = smallest_singular(c.J(s.x));
    return s;
}

bool lex_less(const std::vector<double>& a, const std::vector<double>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

double dist_inf(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

AlgebraicSystem pin(const AlgebraicSystem& sys, const std::string& name, const Rational& value) {
    AlgebraicSystem out;
    for (const auto& u : sys.unknowns)
        if (u != name) out.unknowns.push_back(u);
    std::set<std::string> seen;
    for (const auto& e : sys.equations) {
        const MultiPoly s = e.substitute(algebra::Assignment{{name, value}});
        if (s.is_zero()) continue;
        if (s.is_constant()) {
            out.equations.push_back(s);  // inconsistent pin; Newton will fail
            continue;
        }
        MultiPoly p = s.primitive();
        if (seen.insert(p.to_string()).second) out.equations.push_back(std::move(p));
    }
    return out;
}

std::vector<double> drop(const std::vector<double>& x, std::size_t j) {
    std::vector<double> out;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (i != j) out.push_back(x[i]);
    return out;
}

}  // namespace

std::optional<NumericSolution> newton_from(const AlgebraicSystem& sys, std::vector<double> x0, const SolveConfig& cfg,
                                           std::vector<double>* trace) {
    if (x0.size() != sys.unknowns.size()) throw InvalidParameter("start point has the wrong dimension");
    return run(Compiled(sys), std::move(x0), cfg, trace);
}

std::vector<NumericSolution> newton_solve_multistart(const AlgebraicSystem& sys, const SolveConfig& cfg) {
    if (cfg.starts < 1) throw InvalidParameter("starts must be at least 1");
    if (!(cfg.residual_tol > 0)) throw InvalidParameter("residual_tol must be positive");
    if (sys.unknowns.empty()) throw InvalidParameter("system has no unknowns");
    const Compiled c(sys);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> box(cfg.box_lo, cfg.box_hi);
    std::vector<NumericSolution> found;
    for (int s = 0; s < cfg.starts; ++s) {
        std::vector<double> x0(sys.unknowns.size());
        for (double& v : x0) v = box(rng);
        if (auto r = run(c, std::move(x0), cfg, nullptr)) found.push_back(std::move(*r));
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return lex_less(a.x, b.x); });
    std::vector<NumericSolution> out;
    for (auto& s : found) {
        const bool dup = std::any_of(out.begin(), out.end(),
                                     [&](const NumericSolution& o) { return dist_inf(o.x, s.x) < cfg.dedup_tol; });
        if (!dup) out.push_back(std::move(s));
    }
    return out;
}

std::optional<MultiPoly> reconstruct_value(double v, long q_max, SurdContext& surds) {
    constexpr double tol = 1e-9;
    const Rational q = Rational::approximate(v, q_max);
    if (std::abs(q.to_double() - v) < tol) return MultiPoly(q);
    const Rational q2 = Rational::approximate(v * v, q_max);
    if (q2.sign() <= 0) return std::nullopt;
    // sqrt(n/d) = k sqrt(m) / d with m square-free
    mpz_class N = q2.numerator() * q2.denominator();
    if (N > mpz_class("1000000000000")) return std::nullopt;
    unsigned long n = N.get_ui();
    unsigned long k = 1, m = 1;
    for (unsigned long f = 2; f * f <= n; ++f) {
        while (n % (f * f) == 0) {
            n /= f * f;
            k *= f;
        }
        if (n % f == 0) {
            n /= f;
            m *= f;
        }
    }
    m *= n;
    if (m == 1) return std::nullopt;
    const Rational r = Rational(mpz_class(k), q2.denominator()) * Rational(v < 0 ? -1 : 1);
    if (std::abs(r.to_double() * std::sqrt(static_cast<double>(m)) - v) >= tol) return std::nullopt;
    const std::string name = "sqrt" + std::to_string(m);
    if (!surds.is_surd(name)) surds.add(name, algebra::RatFunc(Rational(static_cast<long>(m))));
    return MultiPoly(r) * MultiPoly::variable(name);
}

std::string ExactCandidate::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : values) {
        os << (first ? "" : ", ") << k << " = " << v.to_string();
        first = false;
    }
    for (const auto& u : unreconstructed) os << (first ? "" : ", ") << u << " = ?", first = false;
    return os.str();
}

ExactCandidate rationalize_candidate(const std::vector<double>& v, const std::vector<std::string>& unknowns,
                                     long q_max, bool strict) {
    if (q_max < 1) throw InvalidParameter("q_max must be at least 1");
    ExactCandidate c;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (auto e = reconstruct_value(v[i], q_max, c.surds))
            c.values[unknowns[i]] = *e;
        else
            c.unreconstructed.push_back(unknowns[i]);
    }
    if (strict && !c.complete()) throw ReconstructionFailed("no exact form for " + c.unreconstructed.front());
    return c;
}

VerifyReport verify_candidate_exact(const PdeSystem& sys, const AnsatzExpr& z, const ExactCandidate& cand) {
    VerifyReport rep;
    if (!cand.complete()) {
        rep.first_nonzero = "unreconstructed " + cand.unreconstructed.front();
        return rep;
    }
    AnsatzExpr w = ansatz::substitute(z, cand.values);
    for (const auto& r : cand.surds.relations())
        if (!w.surds.is_surd(r.name)) w.surds.add(r.name, r.square);
    const auto res = ansatz::residual_numerator(sys, w);
    const char* names[] = {"U", "theta"};
    for (std::size_t i = 0; i < res.size(); ++i) {
        if (res[i].is_zero()) continue;
        const auto groups = res[i].collect(w.generators());
        rep.first_nonzero = std::string(names[i]) + ": [" + groups.front().first.to_string() + "] " +
                            groups.front().second.to_string();
        return rep;
    }
    rep.ok = true;
    return rep;
}

ExactCandidate reconstruct(const AlgebraicSystem& sys, const NumericSolution& sol, const SolveConfig& cfg,
                           const std::function<bool(const ExactCandidate&)>& verify) {
    if (sol.min_singular >= cfg.null_tol || sys.unknowns.size() < 2)
        return rationalize_candidate(sol.x, sys.unknowns, cfg.q_max);

    Eigen::VectorXd nv;
    smallest_singular(Compiled(sys).J(sol.x), &nv);
    Eigen::Index j = 0;
    nv.cwiseAbs().maxCoeff(&j);
    const auto ju = static_cast<std::size_t>(j);
    const std::string f = sys.unknowns[ju];

    Rational t1 = Rational::approximate(sol.x[ju], 4);
    if (t1.is_zero()) t1 = Rational(1);
    const Rational t2 = t1 + Rational(t1.sign() > 0 ? 1 : -1, 2);  // both pins stay nonzero
    const AlgebraicSystem s1 = pin(sys, f, t1);
    const AlgebraicSystem s2 = pin(sys, f, t2);
    const auto r1 = newton_from(s1, drop(sol.x, ju), cfg);
    if (!r1) {
        ExactCandidate c = rationalize_candidate(sol.x, sys.unknowns, cfg.q_max);
        return c;
    }
    // predictor step along the null direction keeps the second solve on the same branch
    std::vector<double> guess = r1->x;
    const double dt_pin = (t2 - t1).to_double();
    for (std::size_t i = 0, k = 0; i < sys.unknowns.size(); ++i) {
        if (i == ju) continue;
        guess[k++] += dt_pin * nv(static_cast<Eigen::Index>(i)) / nv(j);
    }
    const auto r2 = newton_from(s2, guess, cfg);

    // pinned candidate: the free coordinate fixed at t1
    auto pinned = [&]() {
        if (r1->min_singular < cfg.null_tol) {
            NumericSolution inner = *r1;
            ExactCandidate c = reconstruct(s1, inner, cfg, {});
            c.values[f] = MultiPoly(t1);
            return c;
        }
        ExactCandidate c = rationalize_candidate(r1->x, s1.unknowns, cfg.q_max);
        c.values[f] = MultiPoly(t1);
        return c;
    };

    if (r2 && r1->min_singular >= cfg.null_tol) {
        ExactCandidate c;
        const MultiPoly fv = MultiPoly::variable(f);
        const double dtv = (t2 - t1).to_double();
        bool ok = true;
        for (std::size_t i = 0; i < s1.unknowns.size(); ++i) {
            const double slope = (r2->x[i] - r1->x[i]) / dtv;
            const double icpt = r1->x[i] - slope * t1.to_double();
            const auto es = reconstruct_value(slope, cfg.q_max, c.surds);
            const auto ei = reconstruct_value(icpt, cfg.q_max, c.surds);
            if (!es || !ei) {
                ok = false;
                break;
            }
            c.values[s1.unknowns[i]] = *ei + *es * fv;
        }
        if (ok) {
            c.values[f] = fv;
            c.free.push_back(f);
            if (!verify || verify(c)) return c;
        }
    }
    return pinned();
}

std::vector<SolveResult> solve_ansatz(const PdeSystem& sys, const AnsatzExpr& z, const SolveConfig& cfg) {
    const AlgebraicSystem alg = ansatz::algebraic_system(sys, z);
    std::vector<SolveResult> out;
    if (alg.equations.empty()) return out;
    std::set<std::string> seen;
    auto verifier = [&](const ExactCandidate& c) { return verify_candidate_exact(sys, z, c).ok; };
    for (const auto& s : newton_solve_multistart(alg, cfg)) {
        SolveResult r;
        r.numeric = s;
        r.exact = reconstruct(alg, s, cfg, verifier);
        if (!seen.insert(r.exact.to_string()).second) continue;
        r.verdict = verify_candidate_exact(sys, z, r.exact);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace kinkforge::solve
