#include "kinkforge/algebra/ratfunc.hpp"

#include "kinkforge/algebra/detail/expr_parser.hpp"
#include "kinkforge/algebra/upoly.hpp"
#include "kinkforge/errors.hpp"

#include <algorithm>

namespace kinkforge::algebra {

namespace {

// gcd in Q[v] of a univariate `u` and every coefficient of `p` viewed as a
// polynomial in its other variables.
UPoly univariate_common_factor(const UPoly& u, const std::string& v, const MultiPoly& p) {
    std::vector<std::string> others;
    for (const auto& x : p.variables())
        if (x != v) others.push_back(x);
    UPoly g = u;
    for (const auto& [mono, coef] : p.collect(others)) {
        g = gcd(g, UPoly::from_multipoly(coef, v));
        if (g.degree() <= 0) break;
    }
    return g;
}

}  // namespace

RatFunc::RatFunc(MultiPoly num) : num_(std::move(num)), den_(1) {}

RatFunc::RatFunc(MultiPoly num, MultiPoly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

void RatFunc::normalize() {
    if (den_.is_zero()) throw DivisionByZero("rational function with zero denominator");
    if (num_.is_zero()) {
        den_ = MultiPoly(1);
        return;
    }
    if (!den_.is_constant()) {
        // shared monomial factor
        const MultiPoly mn = num_.monomial_gcd();
        const MultiPoly md = den_.monomial_gcd();
        if (!mn.is_constant() && !md.is_constant()) {
            std::vector<Term> g{Term{Exponents(mn.variables().size() + md.variables().size()), Rational(1)}};
            std::map<std::string, std::uint32_t> ex;
            for (std::size_t i = 0; i < mn.variables().size(); ++i)
                ex[mn.variables()[i]] = mn.terms().front().exps[i];
            std::vector<std::string> vars;
            Exponents e;
            for (std::size_t i = 0; i < md.variables().size(); ++i) {
                const auto it = ex.find(md.variables()[i]);
                if (it == ex.end()) continue;
                vars.push_back(md.variables()[i]);
                e.push_back(std::min(it->second, md.terms().front().exps[i]));
            }
            if (!vars.empty()) {
                const MultiPoly m = MultiPoly::from_terms(vars, {Term{e, Rational(1)}});
                num_ = divexact(num_, m);
                den_ = divexact(den_, m);
            }
        }
    }
    if (!den_.is_constant()) {
        if (den_.variables().size() == 1) {
            const std::string& v = den_.variables().front();
            const UPoly g = univariate_common_factor(UPoly::from_multipoly(den_, v), v, num_);
            if (g.degree() > 0) {
                const MultiPoly gp = g.to_multipoly(v);
                num_ = divexact(num_, gp);
                den_ = divexact(den_, gp);
            }
        } else if (num_.variables().size() == 1) {
            const std::string& v = num_.variables().front();
            const UPoly g = univariate_common_factor(UPoly::from_multipoly(num_, v), v, den_);
            if (g.degree() > 0) {
                const MultiPoly gp = g.to_multipoly(v);
                num_ = divexact(num_, gp);
                den_ = divexact(den_, gp);
            }
        } else if (num_.total_degree() >= den_.total_degree()) {
            if (auto q = try_divexact(num_, den_)) {
                num_ = std::move(*q);
                den_ = MultiPoly(1);
            }
        }
    }
    const Rational c = den_.content();
    if (!c.is_one()) {
        const Rational inv = c.inverse();
        num_ = num_.scaled(inv);
        den_ = den_.scaled(inv);
    }
}

Rational RatFunc::constant_value() const {
    if (!is_constant()) throw InvalidParameter("rational function is not constant: " + to_string());
    return num_.constant_value() / den_.constant_value();
}

RatFunc RatFunc::operator-() const {
    RatFunc r = *this;
    r.num_ = -r.num_;
    return r;
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
    if (b.den_.is_constant())
        return RatFunc(a.num_ + b.num_ * a.den_.scaled(b.den_.constant_value().inverse()), a.den_);
    if (a.den_.is_constant())
        return RatFunc(b.num_ + a.num_ * b.den_.scaled(a.den_.constant_value().inverse()), b.den_);
    return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero() || b.is_zero()) return RatFunc();
    if (a.den_.is_constant() && b.den_.is_constant())
        return RatFunc((a.num_ * b.num_).scaled((a.den_.constant_value() * b.den_.constant_value()).inverse()));
    return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.inverse(); }

RatFunc RatFunc::inverse() const {
    if (is_zero()) throw DivisionByZero("inverse of zero rational function");
    return RatFunc(den_, num_);
}

RatFunc RatFunc::pow(unsigned e) const {
    RatFunc result(1);
    RatFunc base = *this;
    while (e > 0) {
        if (e & 1U) result *= base;
        e >>= 1U;
        if (e > 0) base = base * base;
    }
    return result;
}

RatFunc RatFunc::derivative(std::string_view var) const {
    const std::string v(var);
    return RatFunc(num_.derivative(v) * den_ - num_ * den_.derivative(v), den_ * den_);
}

RatFunc RatFunc::substitute(const std::map<std::string, Rational>& values) const {
    MultiPoly d = den_.substitute(values);
    if (d.is_zero()) throw DivisionByZero("denominator vanishes after substitution: " + den_.to_string());
    return RatFunc(num_.substitute(values), std::move(d));
}

RatFunc RatFunc::substitute(const std::map<std::string, RatFunc>& values) const {
    auto sub = [&](const MultiPoly& p) {
        RatFunc acc;
        for (const auto& t : p.terms()) {
            RatFunc m(t.coef);
            for (std::size_t i = 0; i < p.variables().size(); ++i) {
                if (t.exps[i] == 0) continue;
                const auto it = values.find(p.variables()[i]);
                RatFunc base = it != values.end() ? it->second : RatFunc::variable(p.variables()[i]);
                m *= base.pow(t.exps[i]);
            }
            acc += m;
        }
        return acc;
    };
    RatFunc d = sub(den_);
    if (d.is_zero()) throw DivisionByZero("denominator vanishes after substitution: " + den_.to_string());
    return sub(num_) / d;
}

double RatFunc::evaluate(const std::map<std::string, double>& values) const {
    return num_.evaluate(values) / den_.evaluate(values);
}

std::string RatFunc::to_string() const {
    if (den_.is_constant() && den_.constant_value().is_one()) return num_.to_string();
    const std::string n = num_.size() > 1 ? "(" + num_.to_string() + ")" : num_.to_string();
    const std::string d = den_.size() > 1 || !den_.is_constant() ? "(" + den_.to_string() + ")" : den_.to_string();
    return n + " / " + d;
}

bool ratfunc_equal(const RatFunc& f, const RatFunc& g) {
    return (f.num() * g.den() - g.num() * f.den()).is_zero();
}

RatFunc parse_ratfunc(std::string_view text) {
    return detail::ExprParser<RatFunc>(text, [](const RatFunc& a, const RatFunc& d, const auto& fail) {
               if (d.is_zero()) fail("division by zero");
               return a / d;
           }).parse();
}

}  // namespace kinkforge::algebra
