#include "kinkforge/algebra/rational.hpp"

#include "kinkforge/errors.hpp"

#include <cctype>
#include <cmath>

namespace kinkforge::algebra {

Rational::Rational(long n, long d) {
    if (d == 0) throw DivisionByZero("rational with zero denominator");
    v_ = mpq_class(n, d);
    v_.canonicalize();
}

Rational::Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

Rational::Rational(const mpz_class& n, const mpz_class& d) {
    if (d == 0) throw DivisionByZero("rational with zero denominator");
    v_ = mpq_class(n, d);
    v_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
    std::string s(text);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::size_t start = 0;
    while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
    s = s.substr(start);
    if (s.empty()) throw ParseError("empty rational");
    const auto slash = s.find('/');
    auto valid_int = [](const std::string& t) {
        std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
        if (i >= t.size()) return false;
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    };
    auto strip_plus = [](std::string t) { return (!t.empty() && t[0] == '+') ? t.substr(1) : t; };
    if (slash == std::string::npos) {
        if (!valid_int(s)) throw ParseError("not a rational: '" + s + "'");
        return Rational(mpq_class(mpz_class(strip_plus(s))));
    }
    const std::string n = s.substr(0, slash);
    const std::string d = s.substr(slash + 1);
    if (!valid_int(n) || !valid_int(d) || d[0] == '-')
        throw ParseError("not a rational: '" + s + "'");
    return Rational(mpz_class(strip_plus(n)), mpz_class(strip_plus(d)));
}

Rational Rational::abs() const { return Rational(mpq_class(::abs(v_))); }

Rational Rational::inverse() const {
    if (is_zero()) throw DivisionByZero("inverse of zero");
    return Rational(mpq_class(1) / v_);
}

Rational Rational::pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), v_.get_num_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(d.get_mpz_t(), v_.get_den_mpz_t(), static_cast<unsigned long>(e));
    return Rational(n, d);
}

std::optional<Rational> Rational::sqrt() const {
    if (sign() < 0) return std::nullopt;
    if (!mpz_perfect_square_p(v_.get_num_mpz_t()) || !mpz_perfect_square_p(v_.get_den_mpz_t())) return std::nullopt;
    mpz_class n, d;
    mpz_sqrt(n.get_mpz_t(), v_.get_num_mpz_t());
    mpz_sqrt(d.get_mpz_t(), v_.get_den_mpz_t());
    return Rational(n, d);
}

Rational Rational::approximate(double x, long max_den) {
    if (!std::isfinite(x)) throw InvalidParameter("cannot approximate a non-finite value");
    if (max_den < 1) throw InvalidParameter("max_den must be positive");
    // convergents h/k of the continued fraction of x
    mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double r = x;
    for (int iter = 0; iter < 64; ++iter) {
        const double fl = std::floor(r);
        const mpz_class a(fl);
        const mpz_class h2 = a * h1 + h0;
        const mpz_class k2 = a * k1 + k0;
        if (k2 > max_den) break;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        const double frac = r - fl;
        if (frac < 1e-15 || std::abs(x - mpq_class(h1, k1).get_d()) == 0.0) break;
        r = 1.0 / frac;
        if (!std::isfinite(r) || std::abs(r) > 1e18) break;
    }
    if (k1 == 0) return Rational(std::lround(x));
    return Rational(h1, k1);
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw DivisionByZero("rational division by zero");
    v_ /= o.v_;
    return *this;
}

}  // namespace kinkforge::algebra
