#pragma once

#include "kinkforge/ansatz/ansatz.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kinkforge::solve {

using algebra::MultiPoly;
using algebra::Rational;
using algebra::SurdContext;
using ansatz::AlgebraicSystem;
using ansatz::AnsatzExpr;
using system::PdeSystem;

struct SolveConfig {
    int starts = 200;
    double box_lo = -3.0;
    double box_hi = 3.0;
    double damping = 0.5;
    int max_iter = 100;
    double residual_tol = 1e-11;
    double dedup_tol = 1e-7;
    long q_max = 1000;
    std::uint64_t seed = 42;
    double null_tol = 1e-8;
};

/// Polynomial compiled for fast double evaluation over a fixed variable order.
class CompiledPoly {
public:
    CompiledPoly() = default;
    CompiledPoly(const MultiPoly& p, const std::vector<std::string>& vars);
    double operator()(const std::vector<double>& x) const;

private:
    struct Mono {
        double coef;
        std::vector<std::pair<std::size_t, unsigned>> factors;
    };
    std::vector<Mono> monos_;
};

struct NumericSolution {
    std::vector<double> x;
    double residual = 0;        // max |equation|
    double min_singular = 0;    // smallest singular value of the Jacobian
};

/// Gauss-Newton with backtracking from `starts` uniform random points in the box.
/// Sorted lexicographically and deduplicated within dedup_tol.
std::vector<NumericSolution> newton_solve_multistart(const AlgebraicSystem& sys, const SolveConfig& cfg);

/// Damped Gauss-Newton from one start; empty when it does not converge.
/// `trace`, when given, receives ||F||^2 after every accepted step.
std::optional<NumericSolution> newton_from(const AlgebraicSystem& sys, std::vector<double> x0, const SolveConfig& cfg,
                                           std::vector<double>* trace = nullptr);

/// Exact values as polynomials in surd symbols sqrtN (N square-free) and free
/// parameters; e.g. a1 -> sqrt2, b1 -> -2 * a1.
struct ExactCandidate {
    std::map<std::string, MultiPoly> values;
    SurdContext surds;
    std::vector<std::string> free;
    std::vector<std::string> unreconstructed;

    bool complete() const { return unreconstructed.empty(); }
    std::string to_string() const;
};

/// Rational p/q with q <= q_max within 1e-9, otherwise r * sqrt(s) from v^2.
/// Throws ReconstructionFailed in strict mode when a coordinate fits neither.
ExactCandidate rationalize_candidate(const std::vector<double>& v, const std::vector<std::string>& unknowns,
                                     long q_max, bool strict = false);

/// Exact value r * sqrt(m) with m square-free, written into `cand`.
std::optional<MultiPoly> reconstruct_value(double v, long q_max, SurdContext& surds);

struct VerifyReport {
    bool ok = false;
    std::string first_nonzero;  // component and generator monomial of the first nonzero coefficient
};

VerifyReport verify_candidate_exact(const PdeSystem& sys, const AnsatzExpr& z, const ExactCandidate& cand);

/// Numeric solution to exact candidate: null directions of the Jacobian are
/// treated as free parameters (pinned at two rationals, the other coordinates
/// reconstructed as affine functions of the parameter and checked exactly).
ExactCandidate reconstruct(const AlgebraicSystem& sys, const NumericSolution& sol, const SolveConfig& cfg,
                           const std::function<bool(const ExactCandidate&)>& verify = {});

struct SolveResult {
    NumericSolution numeric;
    ExactCandidate exact;
    VerifyReport verdict;
};

/// Full pipeline: residuals, algebraic system, multistart Newton,
/// reconstruction and exact verification of each distinct solution.
std::vector<SolveResult> solve_ansatz(const PdeSystem& sys, const AnsatzExpr& z, const SolveConfig& cfg);

}  // namespace kinkforge::solve
