#pragma once

#include "kinkforge/algebra/rational.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kinkforge::algebra {

using Exponents = std::vector<std::uint32_t>;
using Assignment = std::map<std::string, Rational>;

struct Term {
    Exponents exps;
    Rational coef;
};

/// Sparse multivariate polynomial over the rationals.
///
/// Canonical form: the variable list is sorted by name and holds exactly the
/// variables that occur; terms are stored in descending graded-lexicographic
/// order with no zero coefficients. Equal polynomials therefore have
/// identical representations, and binary operations align variable lists
/// automatically.
class MultiPoly {
public:
    MultiPoly() = default;
    MultiPoly(const Rational& c);  // NOLINT(google-explicit-constructor)
    MultiPoly(long c) : MultiPoly(Rational(c)) {}  // NOLINT(google-explicit-constructor)
    MultiPoly(int c) : MultiPoly(Rational(c)) {}   // NOLINT(google-explicit-constructor)

    static MultiPoly variable(const std::string& name);
    static MultiPoly from_terms(std::vector<std::string> vars, std::vector<Term> terms);

    const std::vector<std::string>& variables() const noexcept { return vars_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }

    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const noexcept { return vars_.empty(); }
    /// Value of a constant polynomial; throws InvalidParameter otherwise.
    Rational constant_value() const;
    bool has_variable(std::string_view name) const;

    std::uint32_t total_degree() const;
    std::uint32_t degree(std::string_view var) const;
    const Rational& leading_coefficient() const;

    MultiPoly operator-() const;
    MultiPoly& operator+=(const MultiPoly& o);
    MultiPoly& operator-=(const MultiPoly& o);
    MultiPoly& operator*=(const MultiPoly& o);
    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
    MultiPoly scaled(const Rational& c) const;
    MultiPoly pow(unsigned e) const;

    MultiPoly derivative(std::string_view var) const;

    MultiPoly substitute(const std::map<std::string, Rational>& values) const;
    /// Simultaneous substitution of polynomials for variables.
    MultiPoly substitute(const std::map<std::string, MultiPoly>& values) const;
    MultiPoly substitute(const std::string& var, const MultiPoly& value) const;

    /// Numeric evaluation; every variable must be assigned.
    double evaluate(const std::map<std::string, double>& values) const;

    /// Groups terms by their exponents in `vars`. Each entry is
    /// (monomial in `vars` with coefficient 1, coefficient polynomial free of `vars`).
    std::vector<std::pair<MultiPoly, MultiPoly>> collect(const std::vector<std::string>& vars) const;

    /// Coefficients of the powers of `var`: result[j] multiplies var^j.
    std::vector<MultiPoly> coefficients_in(const std::string& var) const;

    /// Positive rational c such that this/c has coprime integer coefficients
    /// with a positive leading coefficient (sign folded into the returned value).
    Rational content() const;
    MultiPoly primitive() const;

    /// Largest monomial dividing every term (coefficient 1).
    MultiPoly monomial_gcd() const;

    std::string to_string() const;

    friend bool operator==(const MultiPoly& a, const MultiPoly& b);

private:
    std::vector<std::string> vars_;
    std::vector<Term> terms_;

    void normalize();
    MultiPoly remapped(const std::vector<std::string>& vars) const;
    friend std::pair<MultiPoly, MultiPoly> align(const MultiPoly& a, const MultiPoly& b);
    friend std::optional<MultiPoly> try_divexact(const MultiPoly& a, const MultiPoly& b);
};

/// Exact quotient a / b; throws DivisionByZero or NotDivisible.
MultiPoly divexact(const MultiPoly& a, const MultiPoly& b);
std::optional<MultiPoly> try_divexact(const MultiPoly& a, const MultiPoly& b);

/// Parses the text form emitted by MultiPoly::to_string, and more generally
/// any expression in + - * ^ ( ) over rationals and identifiers, with
/// division allowed by constants only. Throws ParseError.
MultiPoly parse_poly(std::string_view text);

bool grlex_greater(const Exponents& a, const Exponents& b);

}  // namespace kinkforge::algebra
