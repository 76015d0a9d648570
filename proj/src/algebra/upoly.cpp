#include "kinkforge/algebra/upoly.hpp"

#include "kinkforge/errors.hpp"

#include <algorithm>
#include <cmath>

namespace kinkforge::algebra {

UPoly::UPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

void UPoly::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

UPoly UPoly::from_multipoly(const MultiPoly& p, const std::string& var) {
    for (const auto& v : p.variables())
        if (v != var) throw InvalidParameter("polynomial is not univariate in '" + var + "': " + p.to_string());
    std::vector<Rational> c(p.degree(var) + 1);
    for (const auto& t : p.terms()) c[t.exps.empty() ? 0 : t.exps[0]] = t.coef;
    return UPoly(std::move(c));
}

MultiPoly UPoly::to_multipoly(const std::string& var) const {
    std::vector<Term> terms;
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (!c_[i].is_zero()) terms.push_back(Term{{static_cast<std::uint32_t>(i)}, c_[i]});
    return MultiPoly::from_terms({var}, std::move(terms));
}

UPoly UPoly::operator-() const { return scaled(Rational(-1)); }

UPoly operator+(const UPoly& a, const UPoly& b) {
    std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return UPoly(std::move(c));
}

UPoly operator-(const UPoly& a, const UPoly& b) { return a + (-b); }

UPoly operator*(const UPoly& a, const UPoly& b) {
    if (a.is_zero() || b.is_zero()) return UPoly();
    std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return UPoly(std::move(c));
}

UPoly UPoly::scaled(const Rational& k) const {
    std::vector<Rational> c = c_;
    for (auto& x : c) x *= k;
    return UPoly(std::move(c));
}

UPoly UPoly::monic() const { return is_zero() ? *this : scaled(leading().inverse()); }

UPoly UPoly::derivative() const {
    if (c_.size() <= 1) return UPoly();
    std::vector<Rational> c(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) c[i - 1] = c_[i] * Rational(static_cast<long>(i));
    return UPoly(std::move(c));
}

std::pair<UPoly, UPoly> UPoly::divmod(const UPoly& d) const {
    if (d.is_zero()) throw DivisionByZero("univariate division by zero");
    std::vector<Rational> r = c_;
    if (degree() < d.degree()) return {UPoly(), *this};
    std::vector<Rational> q(c_.size() - d.c_.size() + 1);
    const Rational inv = d.leading().inverse();
    for (int i = degree(); i >= d.degree(); --i) {
        const Rational f = r[static_cast<std::size_t>(i)] * inv;
        const auto shift = static_cast<std::size_t>(i - d.degree());
        q[shift] = f;
        if (f.is_zero()) continue;
        for (std::size_t j = 0; j < d.c_.size(); ++j) r[shift + j] -= f * d.c_[j];
    }
    return {UPoly(std::move(q)), UPoly(std::move(r))};
}

Rational UPoly::eval(const Rational& x) const {
    Rational acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double UPoly::eval(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + it->to_double();
    return acc;
}

UPoly gcd(UPoly a, UPoly b) {
    while (!b.is_zero()) {
        UPoly r = a.divmod(b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

UPoly square_free_part(const UPoly& f) {
    if (f.degree() <= 0) return f.monic();
    const UPoly g = gcd(f, f.derivative());
    return f.divmod(g).first.monic();
}

Rational cauchy_bound(const UPoly& f) {
    if (f.degree() <= 0) return Rational(1);
    Rational m(0);
    const Rational lead = f.leading().abs();
    for (int i = 0; i < f.degree(); ++i) m = std::max(m, f.coeffs()[static_cast<std::size_t>(i)].abs() / lead);
    return Rational(1) + m;
}

namespace {

std::vector<UPoly> sturm_sequence(const UPoly& f) {
    std::vector<UPoly> seq{f, f.derivative()};
    while (!seq.back().is_zero()) {
        UPoly r = seq[seq.size() - 2].divmod(seq.back()).second;
        if (r.is_zero()) break;
        seq.push_back(-r);
    }
    return seq;
}

int sign_variations(const std::vector<UPoly>& seq, const Rational& x) {
    int count = 0;
    int prev = 0;
    for (const auto& p : seq) {
        const int s = p.sign_at(x);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++count;
        prev = s;
    }
    return count;
}

// roots in (lo, hi]
int count_roots(const std::vector<UPoly>& seq, const Rational& lo, const Rational& hi) {
    return sign_variations(seq, lo) - sign_variations(seq, hi);
}

}  // namespace

std::vector<double> real_roots(const UPoly& f_in, double tol) {
    if (f_in.is_zero()) throw IdenticallyZero("polynomial vanishes identically");
    const UPoly f = square_free_part(f_in);
    if (f.degree() <= 0) return {};
    const auto seq = sturm_sequence(f);
    const Rational bound = cauchy_bound(f);
    const Rational tol_q{mpq_class(tol)};
    const Rational half(1, 2);

    std::vector<double> roots;
    std::vector<std::pair<Rational, Rational>> stack{{-bound, bound}};
    while (!stack.empty()) {
        auto [lo, hi] = stack.back();
        stack.pop_back();
        const int n = count_roots(seq, lo, hi);
        if (n == 0) continue;
        if (n > 1) {
            const Rational mid = (lo + hi) * half;
            stack.emplace_back(lo, mid);
            stack.emplace_back(mid, hi);
            continue;
        }
        while (hi - lo > tol_q) {
            const Rational mid = (lo + hi) * half;
            if (f.sign_at(mid) == 0) {
                lo = hi = mid;
                break;
            }
            if (count_roots(seq, lo, mid) == 1)
                hi = mid;
            else
                lo = mid;
        }
        roots.push_back(((lo + hi) * half).to_double());
    }
    std::sort(roots.begin(), roots.end());
    std::vector<double> out;
    for (double r : roots)
        if (out.empty() || std::abs(r - out.back()) > tol) out.push_back(r);
    return out;
}

std::vector<double> real_roots_univariate(const MultiPoly& f, const std::string& var,
                                          const std::map<std::string, Rational>& assignment, double tol) {
    const MultiPoly g = f.substitute(assignment);
    if (g.is_zero()) throw IdenticallyZero("polynomial vanishes identically after substitution: " + f.to_string());
    return real_roots(UPoly::from_multipoly(g, var), tol);
}

}  // namespace kinkforge::algebra
