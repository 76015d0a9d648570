#include "kinkforge/simulate/simulate.hpp"

#include "kinkforge/errors.hpp"
#include "kinkforge/solve/solve.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>

namespace kinkforge::simulate {

namespace {

const std::vector<std::string> kFields{system::kU, system::kTheta};

// Reaction terms and their Jacobian entries, compiled over (U, theta).
struct Reaction {
    std::vector<solve::CompiledPoly> f;
    std::vector<solve::CompiledPoly> jac;

    explicit Reaction(const PdeSystem& sys) {
        for (int i = 0; i < sys.components(); ++i) {
            const auto& r = sys.rhs_bound(i);
            f.emplace_back(r, kFields);
            for (const auto& v : kFields) jac.emplace_back(r.derivative(v), kFields);
        }
    }
};

// Solves the constant-coefficient tridiagonal system with sub/super diagonal
// `lo`/`up` and diagonal `diag` in place of d (Thomas algorithm). The first and
// last rows may override their off-diagonal entry.
void thomas(std::vector<double>& d, double lo, double diag, double up, double up0, double lo_last) {
    const std::size_t n = d.size();
    std::vector<double> c(n);
    double beta = diag;
    c[0] = up0 / beta;
    d[0] /= beta;
    for (std::size_t i = 1; i < n; ++i) {
        const double l = i + 1 == n ? lo_last : lo;
        const double u = up;
        beta = diag - l * c[i - 1];
        c[i] = u / beta;
        d[i] = (d[i] - l * d[i - 1]) / beta;
    }
    for (std::size_t i = n - 1; i-- > 0;) d[i] -= c[i] * d[i + 1];
}

bool finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

Grid1D::Grid1D(double a, double b, int n) : x0(a), x1(b), nx(n) {
    if (n < 16) throw InvalidParameter("grid needs at least 16 points");
    if (!(b > a)) throw InvalidParameter("grid needs x1 > x0");
}

FieldState init_from_exact(const ClosedFormSolution& sol, const Grid1D& grid, double t0, std::optional<double> t_end) {
    const auto ev = sol.evaluator();
    const double t1 = t_end.value_or(t0);
    const int samples = t1 > t0 ? 50 : 1;
    for (int k = 0; k < samples; ++k) {
        const double t = samples == 1 ? t0 : t0 + (t1 - t0) * k / (samples - 1);
        std::vector<double> first;
        for (int i = 0; i < grid.nx; ++i) {
            const auto d = ev.denominators(grid.x(i), t);
            if (i == 0) first = d;
            for (std::size_t c = 0; c < d.size(); ++c)
                if (std::abs(d[c]) < 1e-6 || (d[c] > 0) != (first[c] > 0))
                    throw SingularOnGrid(sol.id + ": denominator vanishes in the window at t = " + std::to_string(t));
        }
    }
    FieldState s;
    s.t = t0;
    const std::size_t nc = sol.components.components.size();
    for (int i = 0; i < grid.nx; ++i) {
        s.U.push_back(ev.at(0, grid.x(i), t0).u);
        if (nc > 1) s.theta.push_back(ev.at(1, grid.x(i), t0).u);
    }
    return s;
}

double reaction_lipschitz(const PdeSystem& sys, const FieldState& s) {
    const Reaction r(sys);
    double L = 0;
    std::vector<double> v(2, 0.0);
    for (std::size_t i = 0; i < s.U.size(); ++i) {
        v[0] = s.U[i];
        v[1] = s.theta.empty() ? 0.0 : s.theta[i];
        for (const auto& j : r.jac) L = std::max(L, std::abs(j(v)));
    }
    return L;
}

std::vector<FieldState> run_simulation(const FieldState& state, const Grid1D& grid, const SimConfig& cfg) {
    if (!(cfg.dt > 0)) throw InvalidParameter("dt must be positive");
    if (cfg.record_every < 1) throw InvalidParameter("record_every must be at least 1");
    if (cfg.boundary == Boundary::exact_dirichlet && !cfg.exact)
        throw InvalidParameter("exact Dirichlet boundaries need a closed-form solution");
    const int nc = cfg.system.components();
    const auto n = static_cast<std::size_t>(grid.nx);
    for (int c = 0; c < nc; ++c)
        if (state.field(c).size() != n) throw InvalidParameter("field length does not match the grid");

    const Reaction reaction(cfg.system);
    const int steps = std::max(1, static_cast<int>(std::ceil((cfg.t_end - state.t) / cfg.dt - 1e-9)));
    const double dt = (cfg.t_end - state.t) / steps;
    const double h2 = grid.dx() * grid.dx();
    const double alpha = dt / (2 * h2);
    const bool dirichlet = cfg.boundary == Boundary::exact_dirichlet;
    std::optional<ansatz::Evaluator> exact;
    if (dirichlet) exact.emplace(cfg.exact->evaluator());

    auto check_stability = [&](const FieldState& s, int step) {
        if (!cfg.reaction) return;
        const double L = reaction_lipschitz(cfg.system, s);
        if (L > 0 && dt > 0.2 / L)
            throw StabilityViolation("dt = " + std::to_string(dt) + " exceeds 0.2/L = " + std::to_string(0.2 / L) +
                                     " at step " + std::to_string(step));
    };

    // f(u) per component
    auto react = [&](const FieldState& s, std::vector<std::vector<double>>& out) {
        std::vector<double> v(2, 0.0);
        for (int c = 0; c < nc; ++c) out[static_cast<std::size_t>(c)].assign(n, 0.0);
        if (!cfg.reaction) return;
        for (std::size_t i = 0; i < n; ++i) {
            v[0] = s.U[i];
            v[1] = s.theta.empty() ? 0.0 : s.theta[i];
            for (int c = 0; c < nc; ++c) out[static_cast<std::size_t>(c)][i] = reaction.f[static_cast<std::size_t>(c)](v);
        }
    };
    // u + dt/2 L u, boundary rows included for Neumann
    auto explicit_half = [&](const std::vector<double>& u) {
        std::vector<double> r(n);
        for (std::size_t i = 1; i + 1 < n; ++i) r[i] = u[i] + alpha * (u[i - 1] - 2 * u[i] + u[i + 1]);
        r[0] = u[0] + 2 * alpha * (u[1] - u[0]);
        r[n - 1] = u[n - 1] + 2 * alpha * (u[n - 2] - u[n - 1]);
        return r;
    };
    // (I - dt/2 L) u = r with the boundary condition at time t
    auto implicit_solve = [&](std::vector<double> r, int c, double t) {
        if (!dirichlet) {
            thomas(r, -alpha, 1 + 2 * alpha, -alpha, -2 * alpha, -2 * alpha);
            return r;
        }
        const double g0 = exact->at(static_cast<std::size_t>(c), grid.x0, t).u;
        const double g1 = exact->at(static_cast<std::size_t>(c), grid.x1, t).u;
        std::vector<double> in(r.begin() + 1, r.end() - 1);
        in.front() += alpha * g0;
        in.back() += alpha * g1;
        thomas(in, -alpha, 1 + 2 * alpha, -alpha, -alpha, -alpha);
        std::vector<double> u(n);
        u[0] = g0;
        u[n - 1] = g1;
        std::copy(in.begin(), in.end(), u.begin() + 1);
        return u;
    };

    std::vector<FieldState> traj{state};
    FieldState cur = state;
    if (nc == 1) cur.theta.clear();
    check_stability(cur, 0);
    std::vector<std::vector<double>> f0(static_cast<std::size_t>(nc)), f1(static_cast<std::size_t>(nc));
    for (int step = 1; step <= steps; ++step) {
        const double t1 = state.t + dt * step;
        react(cur, f0);
        FieldState pred = cur;
        std::vector<std::vector<double>> base(static_cast<std::size_t>(nc));
        for (int c = 0; c < nc; ++c) {
            const auto cs = static_cast<std::size_t>(c);
            base[cs] = explicit_half(cur.field(c));
            std::vector<double> r = base[cs];
            for (std::size_t i = 0; i < n; ++i) r[i] += dt * f0[cs][i];
            pred.field(c) = implicit_solve(std::move(r), c, t1);
        }
        react(pred, f1);
        for (int c = 0; c < nc; ++c) {
            const auto cs = static_cast<std::size_t>(c);
            std::vector<double> r = base[cs];
            for (std::size_t i = 0; i < n; ++i) r[i] += 0.5 * dt * (f0[cs][i] + f1[cs][i]);
            cur.field(c) = implicit_solve(std::move(r), c, t1);
            if (!finite(cur.field(c))) throw Blowup("non-finite field at step " + std::to_string(step));
        }
        cur.t = t1;
        if (step % 100 == 0) check_stability(cur, step);
        if (step % cfg.record_every == 0 || step == steps) traj.push_back(cur);
    }
    return traj;
}

double crossing_position(const FieldState& s, const Grid1D& grid, int component, double level) {
    const auto& u = s.field(component);
    int found = 0;
    double pos = 0;
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
        const double a = u[i] - level, b = u[i + 1] - level;
        if ((a < 0) != (b < 0)) {
            ++found;
            pos = grid.x(static_cast<int>(i)) + grid.dx() * a / (a - b);
        }
    }
    if (found == 0) throw NoCrossing("no crossing of level " + std::to_string(level) + " at t = " + std::to_string(s.t));
    if (found > 1)
        throw MultipleCrossings(std::to_string(found) + " crossings of level " + std::to_string(level) +
                                " at t = " + std::to_string(s.t));
    return pos;
}

double measure_front_velocity(const std::vector<FieldState>& traj, const Grid1D& grid, int component, double level) {
    const std::size_t skip = traj.size() / 10;
    if (traj.size() - skip < 2) throw InvalidParameter("too few frames for a velocity fit");
    double st = 0, sx = 0, stt = 0, stx = 0;
    double m = 0;
    for (std::size_t k = skip; k < traj.size(); ++k) {
        const double t = traj[k].t, x = crossing_position(traj[k], grid, component, level);
        st += t;
        sx += x;
        stt += t * t;
        stx += t * x;
        m += 1;
    }
    return (m * stx - st * sx) / (m * stt - st * st);
}

double front_level(const ClosedFormSolution& sol, int component) {
    const auto v = catalog::boundary_values(sol).at(static_cast<std::size_t>(component));
    return 0.5 * (v.first + v.second);
}

double linf_error(const FieldState& s, const Grid1D& grid, const ClosedFormSolution& sol) {
    const auto ev = sol.evaluator();
    double e = 0;
    const int nc = s.theta.empty() ? 1 : 2;
    for (int i = 0; i < grid.nx; ++i)
        for (int c = 0; c < nc; ++c)
            e = std::max(e, std::abs(s.field(c)[static_cast<std::size_t>(i)] -
                                     ev.at(static_cast<std::size_t>(c), grid.x(i), s.t).u));
    return e;
}

ConvergenceStudy convergence_order(const ClosedFormSolution& sol, const Grid1D& grid, double dt, double t_end,
                                   int refinements) {
    if (refinements < 1) throw InvalidParameter("need at least one refinement");
    ConvergenceStudy out;
    Grid1D g = grid;
    SimConfig cfg;
    cfg.boundary = Boundary::exact_dirichlet;
    cfg.exact = sol;
    cfg.system = sol.pde();
    cfg.t_end = t_end;
    cfg.dt = dt;
    cfg.record_every = 1 << 30;
    for (int r = 0; r <= refinements; ++r) {
        const auto traj = run_simulation(init_from_exact(sol, g, 0.0, t_end), g, cfg);
        out.dx.push_back(g.dx());
        out.error.push_back(linf_error(traj.back(), g, sol));
        g = Grid1D(g.x0, g.x1, 2 * g.nx - 1);
        cfg.dt /= 2;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(out.dx.size());
    for (std::size_t i = 0; i < out.dx.size(); ++i) {
        const double x = std::log(out.dx[i]), y = std::log(out.error[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    out.order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return out;
}

int count_fronts(const FieldState& s, const Grid1D& grid, int component, double floor) {
    const auto& u = s.field(component);
    std::vector<double> g(u.size(), 0.0);
    for (std::size_t i = 1; i + 1 < u.size(); ++i) g[i] = std::abs(u[i + 1] - u[i - 1]) / (2 * grid.dx());
    double top = 0;
    for (double v : g) top = std::max(top, v);
    int count = 0;
    for (std::size_t i = 2; i + 2 < g.size(); ++i)
        if (g[i] > floor * top && g[i] > g[i - 1] && g[i] >= g[i + 1]) ++count;
    return count;
}

void write_csv(const std::string& path, const std::vector<FieldState>& traj, const Grid1D& grid) {
    std::ofstream out(path);
    if (!out) throw InvalidParameter("cannot write " + path);
    out << "t,x,U,theta\n" << std::setprecision(12);
    for (const auto& s : traj)
        for (int i = 0; i < grid.nx; ++i) {
            const auto k = static_cast<std::size_t>(i);
            out << s.t << ',' << grid.x(i) << ',' << s.U[k] << ',' << (s.theta.empty() ? 0.0 : s.theta[k]) << '\n';
        }
}

void write_plot_script(const std::string& path, const std::string& csv_name, double level) {
    std::ofstream out(path);
    if (!out) throw InvalidParameter("cannot write " + path);
    out << "import csv, os\n"
           "import matplotlib\n"
           "matplotlib.use('Agg')\n"
           "import matplotlib.pyplot as plt\n"
           "import numpy as np\n\n"
           "here = os.path.dirname(os.path.abspath(__file__))\n"
           "rows = list(csv.DictReader(open(os.path.join(here, '"
        << csv_name
        << "'))))\n"
           "ts = sorted({float(r['t']) for r in rows})\n"
           "xs = sorted({float(r['x']) for r in rows})\n"
           "U = np.array([float(r['U']) for r in rows]).reshape(len(ts), len(xs))\n"
           "th = np.array([float(r['theta']) for r in rows]).reshape(len(ts), len(xs))\n"
           "level = "
        << level
        << "\n"
           "fig, ax = plt.subplots(1, 3, figsize=(15, 4))\n"
           "for a, f, name in ((ax[0], U, 'U'), (ax[1], th, 'theta')):\n"
           "    im = a.imshow(f, aspect='auto', origin='lower', extent=[xs[0], xs[-1], ts[0], ts[-1]])\n"
           "    a.set_xlabel('x'); a.set_ylabel('t'); a.set_title(name); fig.colorbar(im, ax=a)\n"
           "front = []\n"
           "for row in U:\n"
           "    s = np.sign(row - level)\n"
           "    i = np.nonzero(s[:-1] != s[1:])[0]\n"
           "    front.append(xs[i[0]] if len(i) else np.nan)\n"
           "ax[2].plot(ts, front); ax[2].set_xlabel('t'); ax[2].set_ylabel('front x')\n"
           "fig.tight_layout()\n"
           "fig.savefig(os.path.join(here, 'fields.png'), dpi=120)\n";
}

}  // namespace kinkforge::simulate
