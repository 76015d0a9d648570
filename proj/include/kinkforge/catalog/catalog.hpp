#pragma once

#include "kinkforge/ansatz/ansatz.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kinkforge::catalog {

using algebra::MultiPoly;
using algebra::Rational;
using algebra::RatFunc;
using ansatz::AnsatzExpr;
using system::PdeSystem;

/// An alternative form of an entry: a sign variant that must pass the
/// residual gate, or a rejected reading of a printed formula that must not.
struct Reading {
    std::string label;
    AnsatzExpr expr;
};

struct SampleGrid {
    double x0 = -10, x1 = 10;
    int nx = 41;
    double t0 = 0, t1 = 5;
    int nt = 11;
    /// Points with a smaller |denominator| are ill-conditioned and skipped.
    double min_denominator = 1e-2;
};

struct ClosedFormSolution {
    std::string id;
    std::string system;         // builtin alias
    std::optional<Rational> B;  // nullopt: B stays symbolic
    AnsatzExpr components;      // constants bound; may keep B, surds and free parameters
    std::vector<std::string> free_parameters;
    std::string provenance;
    std::vector<std::string> notes;
    std::vector<Reading> variants;
    std::vector<Reading> rejected;
    std::map<std::string, double> sample;  // values of B and free parameters for numeric checks
    SampleGrid grid;
    bool pole = false;  // carries a moving singularity along a line or curve

    PdeSystem pde() const;
    /// b_i / a_i per phase, reduced modulo the surd relations.
    std::vector<RatFunc> velocities() const;
    ansatz::Evaluator evaluator(const AnsatzExpr& form) const { return ansatz::Evaluator(form, sample); }
    ansatz::Evaluator evaluator() const { return evaluator(components); }
};

const std::vector<ClosedFormSolution>& catalog_list();
/// Throws UnknownEntry.
const ClosedFormSolution& catalog_get(const std::string& id);

/// Binds B (components, surd relations and system). Throws InvalidParameter
/// when the entry already has a different binding.
ClosedFormSolution specialize(const ClosedFormSolution& sol, const Rational& B);

struct ReadingCheck {
    std::string label;
    bool residual_zero = false;
    std::string first_nonzero;
};

struct VerifyReport {
    std::string id;
    bool symbolic_ok = false;
    std::string first_nonzero;
    double max_residual = 0;  // over well-conditioned grid points
    int points = 0;
    int skipped = 0;  // points with a denominator below the conditioning floor
    bool numeric_ok = false;
    std::vector<ReadingCheck> variants;
    std::vector<ReadingCheck> rejected;

    /// Symbolic and numeric checks pass, every variant passes, every rejected
    /// reading fails.
    bool ok() const;
};

ReadingCheck check_reading(const PdeSystem& sys, const Reading& r);

/// Symbolic residual gate plus numeric residual on the grid. Throws
/// SingularSample when a grid point is within 1e-6 of a denominator zero.
VerifyReport verify_closed_form(const ClosedFormSolution& sol, const std::optional<SampleGrid>& grid = std::nullopt);

struct BoundaryLimits {
    std::vector<RatFunc> plus;   // x -> +inf, per component
    std::vector<RatFunc> minus;  // x -> -inf
};

/// Exact limits at fixed t from exponential dominance; the sign of each a_i
/// is taken at the sample parameters. Throws Unbounded for pole entries.
BoundaryLimits boundary_limits(const ClosedFormSolution& sol);

/// (x -> -inf, x -> +inf) per component at the sample parameters.
std::vector<std::pair<double, double>> boundary_values(const ClosedFormSolution& sol);

}  // namespace kinkforge::catalog
