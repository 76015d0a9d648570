#pragma once

#include "kinkforge/catalog/catalog.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kinkforge::simulate {

using catalog::ClosedFormSolution;
using system::PdeSystem;

struct Grid1D {
    double x0 = -25, x1 = 25;
    int nx = 1001;

    Grid1D() = default;
    /// Throws InvalidParameter unless nx >= 16 and x1 > x0.
    Grid1D(double x0, double x1, int nx);
    double dx() const { return (x1 - x0) / (nx - 1); }
    double x(int i) const { return x0 + dx() * i; }
};

/// theta is empty for scalar systems.
struct FieldState {
    double t = 0;
    std::vector<double> U, theta;

    std::vector<double>& field(int c) { return c == 0 ? U : theta; }
    const std::vector<double>& field(int c) const { return c == 0 ? U : theta; }
};

enum class Boundary { exact_dirichlet, neumann_zero };

struct SimConfig {
    double dt = 1e-3;
    double t_end = 5;
    Boundary boundary = Boundary::neumann_zero;
    PdeSystem system;
    int record_every = 100;
    std::optional<ClosedFormSolution> exact;  // required by exact_dirichlet
    bool reaction = true;                     // false drops rhs (pure diffusion)
};

/// Pointwise evaluation of the closed form. For pole entries the window must
/// stay clear of the singularity for t in [t0, t_end]. Throws SingularOnGrid.
FieldState init_from_exact(const ClosedFormSolution& sol, const Grid1D& grid, double t0,
                           std::optional<double> t_end = std::nullopt);

/// Crank-Nicolson diffusion with Heun predictor-corrector reaction, advanced
/// from state.t to cfg.t_end. Records the initial state, every record_every
/// steps, and the final state. Throws StabilityViolation and Blowup.
std::vector<FieldState> run_simulation(const FieldState& state, const Grid1D& grid, const SimConfig& cfg);

/// Crude Lipschitz bound of the reaction terms over the current field.
double reaction_lipschitz(const PdeSystem& sys, const FieldState& s);

/// Level-crossing position per frame (linear interpolation). Throws
/// NoCrossing and MultipleCrossings.
double crossing_position(const FieldState& s, const Grid1D& grid, int component, double level);

/// Least-squares slope of the crossing position against time over the frames
/// after the first 10%.
double measure_front_velocity(const std::vector<FieldState>& traj, const Grid1D& grid, int component, double level);

/// Midpoint of the two boundary limits of a component.
double front_level(const ClosedFormSolution& sol, int component);

/// max over grid and components of |numeric - exact|.
double linf_error(const FieldState& s, const Grid1D& grid, const ClosedFormSolution& sol);

struct ConvergenceStudy {
    std::vector<double> dx, error;
    double order = 0;  // least-squares slope of log(error) against log(dx)
};

/// Runs on `grid` and `refinements` successive halvings of dx with dt halved
/// alongside, exact Dirichlet boundaries, comparing at t_end.
ConvergenceStudy convergence_order(const ClosedFormSolution& sol, const Grid1D& grid, double dt, double t_end,
                                   int refinements = 3);

/// Number of local maxima of |dU/dx| above `floor` times its maximum.
int count_fronts(const FieldState& s, const Grid1D& grid, int component, double floor = 0.05);

/// CSV with header t,x,U,theta; one row per recorded (t, x).
void write_csv(const std::string& path, const std::vector<FieldState>& traj, const Grid1D& grid);
/// Python/matplotlib script drawing a space-time heatmap and the front
/// position against time from the CSV next to it.
void write_plot_script(const std::string& path, const std::string& csv_name, double level);

}  // namespace kinkforge::simulate
