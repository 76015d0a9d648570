#pragma once

#include "kinkforge/algebra/multipoly.hpp"
#include "kinkforge/algebra/rational.hpp"

#include <map>
#include <string>
#include <vector>

namespace kinkforge::algebra {

/// Dense univariate polynomial; coeffs[i] multiplies x^i. No trailing zeros.
class UPoly {
public:
    UPoly() = default;
    explicit UPoly(std::vector<Rational> coeffs);

    /// Throws InvalidParameter when `p` involves variables other than `var`.
    static UPoly from_multipoly(const MultiPoly& p, const std::string& var);
    MultiPoly to_multipoly(const std::string& var) const;

    const std::vector<Rational>& coeffs() const noexcept { return c_; }
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    bool is_zero() const noexcept { return c_.empty(); }
    const Rational& leading() const { return c_.back(); }

    UPoly operator-() const;
    friend UPoly operator+(const UPoly& a, const UPoly& b);
    friend UPoly operator-(const UPoly& a, const UPoly& b);
    friend UPoly operator*(const UPoly& a, const UPoly& b);
    UPoly scaled(const Rational& c) const;
    UPoly monic() const;
    UPoly derivative() const;

    /// Euclidean division; throws DivisionByZero.
    std::pair<UPoly, UPoly> divmod(const UPoly& d) const;

    Rational eval(const Rational& x) const;
    double eval(double x) const;
    int sign_at(const Rational& x) const { return eval(x).sign(); }

    friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

private:
    std::vector<Rational> c_;
    void trim();
};

/// Monic greatest common divisor (zero when both are zero).
UPoly gcd(UPoly a, UPoly b);

/// f / gcd(f, f'), monic.
UPoly square_free_part(const UPoly& f);

/// Upper bound on the absolute value of every root (Cauchy).
Rational cauchy_bound(const UPoly& f);

/// Real roots of a nonzero polynomial, ascending and deduplicated, each
/// located to absolute accuracy `tol` by Sturm isolation plus exact bisection.
std::vector<double> real_roots(const UPoly& f, double tol = 1e-12);

/// Real roots in `var` of `f` after substituting `assignment`.
/// Throws IdenticallyZero when the substituted polynomial vanishes and
/// InvalidParameter when other variables remain.
std::vector<double> real_roots_univariate(const MultiPoly& f, const std::string& var,
                                          const std::map<std::string, Rational>& assignment,
                                          double tol = 1e-12);

}  // namespace kinkforge::algebra
