#pragma once

#include "kinkforge/algebra/surd.hpp"
#include "kinkforge/system/system.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kinkforge::painleve {

using algebra::MultiPoly;
using algebra::Rational;
using algebra::RatFunc;
using algebra::SurdContext;
using system::PdeSystem;

inline constexpr const char* kP = "p";

/// Pole orders and leading coefficients of one singular branch.
/// q2 is 0 and b0 is zero for scalar systems. A component with pole order 0
/// is analytic at the singularity.
struct BalanceBranch {
    int q1 = 0;
    int q2 = 0;
    RatFunc a0;
    RatFunc b0;
    std::vector<MultiPoly> constraints;  // polynomials in B that must vanish
    std::optional<Rational> B_binding;   // set when a constraint fixes B
    SurdContext surds;                   // square roots introduced by the leading system
    std::vector<std::string> free_symbols;

    std::string label() const;
};

/// Pole orders (q1, q2) in [0, q_max]^2, not both zero, whose most singular
/// terms balance, with every real solution of the leading system.
/// Throws NoBalance when nothing balances.
std::vector<BalanceBranch> dominant_balance(const PdeSystem& sys, int q_max = 4);

struct Resonance {
    int k = 0;
    std::string free_symbol;           // coefficient left undetermined
    std::optional<RatFunc> obstruction;  // nonzero when the step is inconsistent
};

/// U = sum_k a_k tau^(k - q1), theta = sum_k b_k tau^(k - q2), tau = x + p t.
struct LaurentExpansion {
    BalanceBranch branch;
    int K = 0;
    std::vector<RatFunc> a;
    std::vector<RatFunc> b;
    std::vector<Resonance> resonances;
    std::vector<RatFunc> compatibility;  // obstructions that must vanish
    std::vector<int> compatibility_orders;
    std::vector<std::string> free_symbols;  // branch free symbols plus resonance ones
    std::string stopped;  // why the recursion ended before K, empty otherwise

    int last_order() const { return static_cast<int>(a.size()) - 1; }
};

inline int default_K(const BalanceBranch& br) { return br.q1 + br.q2 + 8; }

/// Throws InternalInconsistency when a non-resonant step is singular or a
/// dominance assumption fails.
LaurentExpansion laurent_expand(const PdeSystem& sys, const BalanceBranch& branch, int K);

/// Coefficient of tau^order in component `row` of p chi' - chi'' - rhs(chi)
/// for the truncated series; used for back-substitution checks.
RatFunc series_residual(const PdeSystem& sys, const LaurentExpansion& exp, int row, int order);

struct DispersionCondition {
    MultiPoly condition;  // primitive, free of surds
    MultiPoly stripped_monomial;
    MultiPoly raw;  // numerator of the obstruction before norm and stripping
    int source_order = 0;
};

struct DispersionRelation {
    std::vector<DispersionCondition> conditions;
    std::optional<Rational> B_binding;
};

/// Throws NoResonance when the expansion produced no compatibility condition.
DispersionRelation dispersion_relation(const LaurentExpansion& exp);

struct VelocityResult {
    std::vector<double> velocities;
    bool degenerate = false;
    std::vector<std::size_t> degenerate_conditions;
    std::vector<std::size_t> parametric_conditions;  // still depend on a free coefficient
};

VelocityResult admissible_velocities(const DispersionRelation& dr, const std::optional<Rational>& B_value,
                                     double tol = 1e-12);

/// Every branch expanded, with its dispersion relation when one exists.
struct BranchAnalysis {
    LaurentExpansion expansion;
    std::optional<DispersionRelation> relation;
    bool principal = false;  // every component singular (scalar: q1 >= 1)
};
std::vector<BranchAnalysis> analyze(const PdeSystem& sys, std::optional<int> K = std::nullopt);

/// Union of velocities over the principal branches at B_value. Branches with
/// an analytic component are reported by analyze but left out here.
VelocityResult union_velocities(const std::vector<BranchAnalysis>& analyses,
                                const std::optional<Rational>& B_value, double tol = 1e-12);

/// Velocities at B read off the relation computed with B symbolic (the slice
/// of the symbolic dispersion relation), which survives values of B where a
/// leading coefficient of the bound expansion vanishes.
VelocityResult sliced_velocities(const PdeSystem& sys, const Rational& B, std::optional<int> K = std::nullopt,
                                 double tol = 1e-12);

}  // namespace kinkforge::painleve
