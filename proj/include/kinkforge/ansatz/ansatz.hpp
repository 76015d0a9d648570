#pragma once

#include "kinkforge/algebra/surd.hpp"
#include "kinkforge/system/system.hpp"

#include <map>
#include <string>
#include <vector>

namespace kinkforge::ansatz {

using algebra::MultiPoly;
using algebra::Rational;
using algebra::RatFunc;
using algebra::SurdContext;
using system::PdeSystem;

/// tau_i = a_i x + b_i t. a_i, b_i are polynomials in unknowns, B and surd symbols.
struct PhaseVar {
    MultiPoly a;
    MultiPoly b;
};

/// num / den over the generators T_i (= tau_i) and E_i (= exp(tau_i)).
struct Component {
    MultiPoly num;
    MultiPoly den{1};
};

struct AnsatzExpr {
    std::vector<PhaseVar> phases;
    std::vector<Component> components;  // U, theta (theta absent for scalar systems)
    std::vector<std::string> unknowns;
    SurdContext surds;  // relations among coefficient symbols, e.g. a^2 = B/6

    static std::string T(std::size_t i) { return "T" + std::to_string(i + 1); }
    static std::string E(std::size_t i) { return "E" + std::to_string(i + 1); }
    std::vector<std::string> generators() const;
};

/// Total derivatives: d/dx T_i = a_i, d/dx E_i = a_i E_i, and likewise in t with b_i.
MultiPoly dx(const AnsatzExpr& z, const MultiPoly& f);
MultiPoly dt(const AnsatzExpr& z, const MultiPoly& f);

/// Numerator of component_t - component_xx - rhs over the common denominator
/// power, reduced modulo the surd relations. Throws ZeroDenominator.
std::vector<MultiPoly> residual_numerator(const PdeSystem& sys, const AnsatzExpr& z);

struct AlgebraicSystem {
    std::vector<std::string> unknowns;
    std::vector<MultiPoly> equations;
};

/// One equation per generator monomial, primitive and deduplicated.
AlgebraicSystem extract_algebraic_system(const std::vector<MultiPoly>& residuals,
                                         const std::vector<std::string>& generators,
                                         const std::vector<std::string>& unknowns);

inline AlgebraicSystem algebraic_system(const PdeSystem& sys, const AnsatzExpr& z) {
    return extract_algebraic_system(residual_numerator(sys, z), z.generators(), z.unknowns);
}

/// Substitutes values (polynomials, possibly in surd symbols) for symbols in
/// phases and components; substituted names leave the unknown list.
AnsatzExpr substitute(const AnsatzExpr& z, const std::map<std::string, MultiPoly>& values);

enum class TemplateKind { poly_times_exp, double_exp };

/// poly_times_exp: num affine in T1, E2 over den T1 + E2 (scale and shifts fixed).
/// double_exp: num and den affine in E1, E2 (den 1 + E1 + E2 after the phase shifts).
/// Coefficient symbols are g0, g1, ...; phase constants a1, b1, a2, b2.
AnsatzExpr two_phase_template(TemplateKind kind, bool scalar = false);

/// JSON: {"phases": [{"a": "a1", "b": "b1"}], "U": {"num": .., "den": ..},
/// "theta": {..}, "unknowns": [..], "surds": {"s": "B/6"}}.
AnsatzExpr parse_ansatz_spec(const std::string& text);
std::string emit_ansatz_spec(const AnsatzExpr& z);

struct PointValue {
    double u = 0, ux = 0, uxx = 0, ut = 0;
};

/// Double-precision evaluation with every symbol bound. Surd symbols missing
/// from `params` take the positive square root of their relation.
class Evaluator {
public:
    Evaluator(const AnsatzExpr& z, std::map<std::string, double> params);

    PointValue at(std::size_t component, double x, double t) const;
    /// component_t - component_xx - rhs for each component.
    std::vector<double> pde_residual(const PdeSystem& sys, double x, double t) const;
    double min_abs_denominator(double x, double t) const;
    std::vector<double> denominators(double x, double t) const;
    const std::map<std::string, double>& params() const noexcept { return params_; }

private:
    struct Compiled {
        MultiPoly n, nx, nxx, nt, d, dx, dxx, dt;
    };
    std::vector<PhaseVar> phases_;
    std::vector<Compiled> comps_;
    std::map<std::string, double> params_;
    std::vector<double> phase_a_, phase_b_;

    std::map<std::string, double> point(double x, double t) const;
};

}  // namespace kinkforge::ansatz
