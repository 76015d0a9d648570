#include "doctest.h"

#include "kinkforge/errors.hpp"
#include "kinkforge/simulate/simulate.hpp"

#include <algorithm>
#include <cmath>

using namespace kinkforge;
using namespace kinkforge::simulate;
using algebra::Rational;

namespace {

SimConfig exact_config(const catalog::ClosedFormSolution& sol, double dt, double t_end, int record_every) {
    SimConfig cfg;
    cfg.system = sol.pde();
    cfg.dt = dt;
    cfg.t_end = t_end;
    cfg.boundary = Boundary::exact_dirichlet;
    cfg.exact = sol;
    cfg.record_every = record_every;
    return cfg;
}

double max_abs(const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(Grid1D(0, 1, 10), InvalidParameter);
    CHECK_THROWS_AS(Grid1D(1, 0, 100), InvalidParameter);
    const Grid1D g(-1, 1, 21);
    CHECK(g.dx() == doctest::Approx(0.1));
    CHECK(g.x(20) == doctest::Approx(1));
}

TEST_CASE("initial data from closed forms") {
    SUBCASE("kink is monotone between its limits") {
        const Grid1D g(-20, 20, 401);
        const auto s = init_from_exact(catalog::catalog_get("thm2_kink"), g, 0);
        CHECK(s.U.front() == doctest::Approx(1).epsilon(1e-6));
        CHECK(s.U.back() == doctest::Approx(0).epsilon(1e-6));
        CHECK(s.theta.front() == doctest::Approx(0).epsilon(1e-6));
        CHECK(s.theta.back() == doctest::Approx(1).epsilon(1e-6));
        for (int i = 1; i < g.nx; ++i) {
            CHECK(s.U[i] < s.U[i - 1]);
            CHECK(s.theta[i] > s.theta[i - 1]);
        }
    }
    SUBCASE("theta vanishes at B = 1") {
        const auto sol = catalog::specialize(catalog::catalog_get("thm1_real"), Rational(1));
        const auto s = init_from_exact(sol, Grid1D(-10, 10, 101), 0);
        CHECK(max_abs(s.theta) == 0);
    }
    SUBCASE("a pole inside the window is refused") {
        CHECK_THROWS_AS(init_from_exact(catalog::catalog_get("thm2_pole"), Grid1D(-20, 20, 401), 0), SingularOnGrid);
        // pole at x = 1 - 2t: enters [-20, -2] after t = 1.5
        CHECK_THROWS_AS(init_from_exact(catalog::catalog_get("thm2_pole"), Grid1D(-20, -2, 401), 0, 2.0), SingularOnGrid);
        CHECK_NOTHROW(init_from_exact(catalog::catalog_get("thm2_pole"), Grid1D(-20, -2, 401), 0, 1.0));
    }
}

TEST_CASE("zero data stays zero with Neumann boundaries") {
    const Grid1D g(-10, 10, 101);
    FieldState s;
    s.U.assign(g.nx, 0.0);
    s.theta.assign(g.nx, 0.0);
    SimConfig cfg;
    cfg.system = system::builtin_system("bz", Rational(1));
    cfg.dt = 0.01;
    cfg.t_end = 2;
    for (const auto& f : run_simulation(s, g, cfg)) {
        CHECK(max_abs(f.U) == 0);
        CHECK(max_abs(f.theta) == 0);
    }
}

TEST_CASE("the (1, 0) equilibrium is stationary") {
    const Grid1D g(-10, 10, 101);
    FieldState s;
    s.U.assign(g.nx, 1.0);
    s.theta.assign(g.nx, 0.0);
    SimConfig cfg;
    cfg.system = system::builtin_system("bz", std::nullopt);
    cfg.system = system::with_B(cfg.system, Rational(3, 2));
    cfg.dt = 0.01;
    cfg.t_end = 1;
    cfg.record_every = 1;
    const auto traj = run_simulation(s, g, cfg);
    CHECK(traj.size() == 101);
    for (std::size_t k = 1; k < traj.size(); ++k)
        for (int i = 0; i < g.nx; ++i) {
            CHECK(std::abs(traj[k].U[i] - traj[k - 1].U[i]) <= 1e-12);
            CHECK(std::abs(traj[k].theta[i]) <= 1e-12);
        }
    CHECK_THROWS_AS(crossing_position(traj.back(), g, 0, 0.5), NoCrossing);
    CHECK_THROWS_AS(measure_front_velocity(traj, g, 0, 0.5), NoCrossing);
}

TEST_CASE("crossings") {
    const Grid1D g(0, 1, 101);
    FieldState s;
    s.U.resize(g.nx);
    for (int i = 0; i < g.nx; ++i) s.U[i] = g.x(i);
    CHECK(crossing_position(s, g, 0, 0.255) == doctest::Approx(0.255));
    for (int i = 0; i < g.nx; ++i) s.U[i] = std::sin(6 * g.x(i));
    CHECK_THROWS_AS(crossing_position(s, g, 0, 0.5), MultipleCrossings);
}

TEST_CASE("no reaction: discrete maximum principle") {
    const Grid1D g(-5, 5, 201);
    FieldState s;
    s.U.resize(g.nx);
    s.theta.resize(g.nx);
    for (int i = 0; i < g.nx; ++i) {
        const double x = g.x(i);
        s.U[i] = std::exp(-x * x) * std::cos(3 * x);
        s.theta[i] = x > 0 ? 1.0 : -0.5;
    }
    SimConfig cfg;
    cfg.system = system::builtin_system("bz", Rational(2));
    cfg.reaction = false;
    cfg.dt = 0.005;
    cfg.t_end = 2;
    cfg.record_every = 1;
    const auto traj = run_simulation(s, g, cfg);
    for (std::size_t k = 1; k < traj.size(); ++k) {
        CHECK(max_abs(traj[k].U) <= max_abs(traj[k - 1].U) + 1e-14);
        CHECK(max_abs(traj[k].theta) <= max_abs(traj[k - 1].theta) + 1e-14);
    }
}

TEST_CASE("reaction stability bound") {
    const Grid1D g(-10, 10, 101);
    FieldState s;
    s.U.assign(g.nx, 1.0);
    s.theta.assign(g.nx, 0.0);
    SimConfig cfg;
    cfg.system = system::builtin_system("bz", Rational(1));
    cfg.dt = 0.5;
    cfg.t_end = 1;
    CHECK(reaction_lipschitz(cfg.system, s) >= 1);
    CHECK_THROWS_AS(run_simulation(s, g, cfg), StabilityViolation);

    cfg.dt = 0.01;
    cfg.boundary = Boundary::exact_dirichlet;
    CHECK_THROWS_AS(run_simulation(s, g, cfg), InvalidParameter);
}

TEST_CASE("resampling the exact solution has zero error") {
    const Grid1D g(-20, 20, 401);
    for (const char* id : {"thm2_kink", "prop4_twophase"}) {
        const auto& sol = catalog::catalog_get(id);
        CHECK(linf_error(init_from_exact(sol, g, 1.3), g, sol) == 0);
    }
}

TEST_CASE("kink run tracks the exact solution") {
    const auto& sol = catalog::catalog_get("thm2_kink");
    const Grid1D g(-20, 20, 801);
    const auto traj = run_simulation(init_from_exact(sol, g, 0), g, exact_config(sol, 1e-3, 5, 250));
    CHECK(traj.back().t == doctest::Approx(5));
    CHECK(linf_error(traj.back(), g, sol) < 1e-3);
    CHECK(measure_front_velocity(traj, g, 0, front_level(sol, 0)) == doctest::Approx(1).epsilon(0.01));

    // error grows at most linearly in t
    double slope = 0;
    for (const auto& f : traj)
        if (f.t >= 0.5) slope = std::max(slope, linf_error(f, g, sol) / f.t);
    const double first = linf_error(traj[2], g, sol) / traj[2].t;
    CHECK(slope <= 2 * first);
}

TEST_CASE("spatial convergence is second order") {
    SUBCASE("kink") {
        const auto st = convergence_order(catalog::catalog_get("thm2_kink"), Grid1D(-20, 20, 101), 0.04, 1.0, 3);
        CHECK(st.order >= 1.8);
        CHECK(st.order <= 2.2);
    }
    SUBCASE("first solution at B = 2") {
        const auto sol = catalog::specialize(catalog::catalog_get("thm1_real"), Rational(2));
        const auto st = convergence_order(sol, Grid1D(-20, 20, 101), 0.04, 1.0, 3);
        CHECK(st.order >= 1.8);
        CHECK(st.order <= 2.2);
    }
}

TEST_CASE("two-phase solution: annihilation of theta and merging of U") {
    const auto& sol = catalog::catalog_get("prop4_twophase");
    const Grid1D g(-25, 25, 1001);
    const double t0 = -8;
    const auto traj = run_simulation(init_from_exact(sol, g, t0), g, exact_config(sol, 1e-3, 10, 500));
    const auto ev = sol.evaluator();

    std::vector<double> sim_max, exact_max;
    for (const auto& f : traj) {
        double ms = -1e300, me = -1e300;
        for (int i = 0; i < g.nx; ++i) {
            ms = std::max(ms, f.theta[i]);
            me = std::max(me, ev.at(1, g.x(i), f.t).u);
        }
        sim_max.push_back(ms);
        exact_max.push_back(me);
        CHECK(linf_error(f, g, sol) < 2e-2);
    }
    // eventually decreasing, and below 0.1 at the end
    const auto peak = std::max_element(sim_max.begin(), sim_max.end()) - sim_max.begin();
    for (std::size_t k = peak + 1; k < sim_max.size(); ++k) CHECK(sim_max[k] <= sim_max[k - 1]);
    CHECK(sim_max.back() < 0.1);
    CHECK(exact_max.back() < 0.1);

    CHECK(count_fronts(traj.front(), g, 0) == 2);
    CHECK(count_fronts(traj.back(), g, 0) == 1);
}
