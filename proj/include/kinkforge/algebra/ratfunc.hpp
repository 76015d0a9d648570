#pragma once

#include "kinkforge/algebra/multipoly.hpp"

#include <map>
#include <string>
#include <string_view>

namespace kinkforge::algebra {

/// Quotient of two multivariate polynomials.
///
/// Not fully canonical: equality is decided by cross-multiplication. After
/// every operation the denominator is made primitive with a positive leading
/// coefficient, shared monomial factors are cancelled, and when either side
/// is univariate the common factor is removed with a univariate gcd.
class RatFunc {
public:
    RatFunc() : den_(1) {}
    RatFunc(const Rational& c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
    RatFunc(long c) : RatFunc(Rational(c)) {}         // NOLINT(google-explicit-constructor)
    RatFunc(int c) : RatFunc(Rational(c)) {}          // NOLINT(google-explicit-constructor)
    RatFunc(MultiPoly num);                           // NOLINT(google-explicit-constructor)
    RatFunc(MultiPoly num, MultiPoly den);

    static RatFunc variable(const std::string& name) { return RatFunc(MultiPoly::variable(name)); }

    const MultiPoly& num() const noexcept { return num_; }
    const MultiPoly& den() const noexcept { return den_; }

    bool is_zero() const noexcept { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_constant(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    Rational constant_value() const;
    bool has_variable(std::string_view v) const { return num_.has_variable(v) || den_.has_variable(v); }

    RatFunc operator-() const;
    friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
    RatFunc inverse() const;
    RatFunc pow(unsigned e) const;

    RatFunc derivative(std::string_view var) const;

    /// Throws DivisionByZero when the denominator vanishes.
    RatFunc substitute(const std::map<std::string, Rational>& values) const;
    RatFunc substitute(const std::map<std::string, RatFunc>& values) const;
    double evaluate(const std::map<std::string, double>& values) const;

    std::string to_string() const;

private:
    MultiPoly num_;
    MultiPoly den_;
    void normalize();
};

/// f == g  iff  f.num * g.den - g.num * f.den == 0.
bool ratfunc_equal(const RatFunc& f, const RatFunc& g);
inline bool operator==(const RatFunc& f, const RatFunc& g) { return ratfunc_equal(f, g); }

/// Parses expressions with general division, e.g. "(25*B - p^2) / (50*B)".
RatFunc parse_ratfunc(std::string_view text);

}  // namespace kinkforge::algebra
