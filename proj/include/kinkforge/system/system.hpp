#pragma once

#include "kinkforge/algebra/ratfunc.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace kinkforge::system {

using algebra::MultiPoly;
using algebra::Rational;
using algebra::RatFunc;

inline constexpr const char* kU = "U";
inline constexpr const char* kTheta = "theta";
inline constexpr const char* kB = "B";

struct Exponents5 {
    unsigned l, m, n, k, q;
    friend bool operator==(const Exponents5&, const Exponents5&) = default;
};

/// U_t - U_xx = rhs[0],  theta_t - theta_xx = rhs[1]; polynomials in U, theta, B.
/// With `scalar` set the theta component is absent and rhs[1] is zero.
struct PdeSystem {
    std::string name;
    bool scalar = false;
    std::array<MultiPoly, 2> rhs;
    std::optional<Rational> B;  // empty: symbolic
    std::optional<Exponents5> exponents;

    int components() const noexcept { return scalar ? 1 : 2; }
    /// rhs[i] with B substituted when bound.
    MultiPoly rhs_bound(int i) const;
};

/// U^l (1 - U^m - theta^n) and -B U^k theta^q. Throws InvalidParameter for a
/// zero exponent or B = 0.
PdeSystem make_system(const Exponents5& e, std::optional<Rational> B, std::string name = {});

/// Scalar U_t - U_xx = U (1 - U).
PdeSystem kpp_system();

/// bz, kinetics-a, kinetics-b, kinetics-c, kpp. Throws InvalidParameter.
PdeSystem builtin_system(const std::string& alias, std::optional<Rational> B);
std::vector<std::string> builtin_aliases();

/// Copy with B bound (or unbound when empty).
PdeSystem with_B(const PdeSystem& sys, std::optional<Rational> B);

/// JSON spec: {"family": {"l":..,"q":..}, "B": "sym" | "p/q", "name": ..}
/// or {"builtin": "bz", "B": ...}. Throws ParseError / InvalidParameter.
PdeSystem parse_system_spec(const std::string& text);
std::string emit_system_spec(const PdeSystem& sys);

/// Alias name or path to a spec file; `B` ("sym" or rational) overrides the spec.
PdeSystem resolve_system(const std::string& alias_or_path, const std::optional<std::string>& B);
std::optional<Rational> parse_B(const std::string& text);

struct PhaseConstants {
    RatFunc a;
    RatFunc b;
    Rational c;
    /// b / a; throws InvalidParameter when a = 0.
    RatFunc p() const;
};

/// b chi' - a^2 chi'' - rhs(chi) = 0 per component, as polynomials in
/// chi<i>, chi<i>_1, chi<i>_2 (value, first and second derivative in tau).
struct TravelingOde {
    std::vector<RatFunc> equations;
    static std::string value(int i) { return "chi" + std::to_string(i + 1); }
    static std::string d1(int i) { return value(i) + "_1"; }
    static std::string d2(int i) { return value(i) + "_2"; }
};

TravelingOde reduce_to_traveling_ode(const PdeSystem& sys, const PhaseConstants& phase);

}  // namespace kinkforge::system
