#include "kinkforge/algebra/multipoly.hpp"

#include "kinkforge/algebra/detail/expr_parser.hpp"
#include "kinkforge/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

namespace kinkforge::algebra {

namespace {

std::uint32_t exps_degree(const Exponents& e) {
    return std::accumulate(e.begin(), e.end(), std::uint32_t{0});
}

bool divides(const Exponents& d, const Exponents& e) {
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] > e[i]) return false;
    return true;
}

std::vector<std::string> union_vars(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<std::string> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace

bool grlex_greater(const Exponents& a, const Exponents& b) {
    const auto da = exps_degree(a);
    const auto db = exps_degree(b);
    if (da != db) return da > db;
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

MultiPoly::MultiPoly(const Rational& c) {
    if (!c.is_zero()) terms_.push_back(Term{{}, c});
}

MultiPoly MultiPoly::variable(const std::string& name) {
    MultiPoly p;
    p.vars_ = {name};
    p.terms_.push_back(Term{{1}, Rational(1)});
    return p;
}

MultiPoly MultiPoly::from_terms(std::vector<std::string> vars, std::vector<Term> terms) {
    // sort variables, permuting exponent vectors accordingly
    std::vector<std::size_t> order(vars.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return vars[i] < vars[j]; });
    MultiPoly p;
    for (std::size_t i : order) {
        if (!p.vars_.empty() && p.vars_.back() == vars[i])
            throw InvalidParameter("duplicate variable '" + vars[i] + "'");
        p.vars_.push_back(vars[i]);
    }
    p.terms_.reserve(terms.size());
    for (auto& t : terms) {
        if (t.exps.size() != vars.size()) throw InvalidParameter("exponent vector length mismatch");
        Exponents e(vars.size());
        for (std::size_t k = 0; k < order.size(); ++k) e[k] = t.exps[order[k]];
        p.terms_.push_back(Term{std::move(e), std::move(t.coef)});
    }
    p.normalize();
    return p;
}

void MultiPoly::normalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return grlex_greater(a.exps, b.exps); });
    std::vector<Term> merged;
    merged.reserve(terms_.size());
    for (auto& t : terms_) {
        if (!merged.empty() && merged.back().exps == t.exps) {
            merged.back().coef += t.coef;
        } else {
            if (!merged.empty() && merged.back().coef.is_zero()) merged.pop_back();
            merged.push_back(std::move(t));
        }
    }
    if (!merged.empty() && merged.back().coef.is_zero()) merged.pop_back();
    terms_ = std::move(merged);

    std::vector<bool> used(vars_.size(), false);
    for (const auto& t : terms_)
        for (std::size_t i = 0; i < t.exps.size(); ++i)
            if (t.exps[i] != 0) used[i] = true;
    if (std::all_of(used.begin(), used.end(), [](bool u) { return u; })) return;
    std::vector<std::string> nv;
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (used[i]) nv.push_back(vars_[i]);
    for (auto& t : terms_) {
        Exponents e;
        e.reserve(nv.size());
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (used[i]) e.push_back(t.exps[i]);
        t.exps = std::move(e);
    }
    vars_ = std::move(nv);
}

MultiPoly MultiPoly::remapped(const std::vector<std::string>& vars) const {
    if (vars == vars_) return *this;
    std::vector<std::size_t> pos(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i)
        pos[i] = static_cast<std::size_t>(std::lower_bound(vars.begin(), vars.end(), vars_[i]) - vars.begin());
    MultiPoly out;
    out.vars_ = vars;
    out.terms_.reserve(terms_.size());
    for (const auto& t : terms_) {
        Exponents e(vars.size(), 0);
        for (std::size_t i = 0; i < t.exps.size(); ++i) e[pos[i]] = t.exps[i];
        out.terms_.push_back(Term{std::move(e), t.coef});
    }
    return out;
}

std::pair<MultiPoly, MultiPoly> align(const MultiPoly& a, const MultiPoly& b) {
    if (a.vars_ == b.vars_) return {a, b};
    const auto vars = union_vars(a.vars_, b.vars_);
    return {a.remapped(vars), b.remapped(vars)};
}

Rational MultiPoly::constant_value() const {
    if (!is_constant()) throw InvalidParameter("polynomial is not constant: " + to_string());
    return terms_.empty() ? Rational(0) : terms_.front().coef;
}

bool MultiPoly::has_variable(std::string_view name) const {
    return std::binary_search(vars_.begin(), vars_.end(), name,
                              [](const auto& x, const auto& y) { return std::string_view(x) < std::string_view(y); });
}

std::uint32_t MultiPoly::total_degree() const {
    return terms_.empty() ? 0 : exps_degree(terms_.front().exps);
}

std::uint32_t MultiPoly::degree(std::string_view var) const {
    const auto it = std::find(vars_.begin(), vars_.end(), var);
    if (it == vars_.end()) return 0;
    const auto i = static_cast<std::size_t>(it - vars_.begin());
    std::uint32_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.exps[i]);
    return d;
}

const Rational& MultiPoly::leading_coefficient() const {
    static const Rational zero(0);
    return terms_.empty() ? zero : terms_.front().coef;
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly out = *this;
    for (auto& t : out.terms_) t.coef = -t.coef;
    return out;
}

namespace {

// Merge two aligned, sorted term lists with sign for the second.
std::vector<Term> merge_terms(const std::vector<Term>& a, const std::vector<Term>& b, bool subtract) {
    std::vector<Term> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && grlex_greater(a[i].exps, b[j].exps))) {
            out.push_back(a[i++]);
        } else if (i == a.size() || grlex_greater(b[j].exps, a[i].exps)) {
            out.push_back(Term{b[j].exps, subtract ? -b[j].coef : b[j].coef});
            ++j;
        } else {
            Rational c = subtract ? a[i].coef - b[j].coef : a[i].coef + b[j].coef;
            if (!c.is_zero()) out.push_back(Term{a[i].exps, std::move(c)});
            ++i;
            ++j;
        }
    }
    return out;
}

}  // namespace

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    auto [a, b] = align(*this, o);
    a.terms_ = merge_terms(a.terms_, b.terms_, false);
    a.normalize();
    return *this = std::move(a);
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
    if (o.is_zero()) return *this;
    auto [a, b] = align(*this, o);
    a.terms_ = merge_terms(a.terms_, b.terms_, true);
    a.normalize();
    return *this = std::move(a);
}

MultiPoly operator*(const MultiPoly& x, const MultiPoly& y) {
    if (x.is_zero() || y.is_zero()) return MultiPoly();
    if (x.is_constant()) return y.scaled(x.terms_.front().coef);
    if (y.is_constant()) return x.scaled(y.terms_.front().coef);
    auto [a, b] = align(x, y);
    const std::size_t n = a.vars_.size();
    MultiPoly out;
    out.vars_ = a.vars_;
    out.terms_.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& s : a.terms_) {
        for (const auto& t : b.terms_) {
            Exponents e(n);
            for (std::size_t k = 0; k < n; ++k) e[k] = s.exps[k] + t.exps[k];
            out.terms_.push_back(Term{std::move(e), s.coef * t.coef});
        }
    }
    out.normalize();
    return out;
}

MultiPoly& MultiPoly::operator*=(const MultiPoly& o) { return *this = *this * o; }

MultiPoly MultiPoly::scaled(const Rational& c) const {
    if (c.is_zero()) return MultiPoly();
    MultiPoly out = *this;
    for (auto& t : out.terms_) t.coef *= c;
    return out;
}

MultiPoly MultiPoly::pow(unsigned e) const {
    MultiPoly result(1);
    MultiPoly base = *this;
    while (e > 0) {
        if (e & 1U) result *= base;
        e >>= 1U;
        if (e > 0) base = base * base;
    }
    return result;
}

MultiPoly MultiPoly::derivative(std::string_view var) const {
    const auto it = std::find(vars_.begin(), vars_.end(), var);
    if (it == vars_.end()) return MultiPoly();
    const auto i = static_cast<std::size_t>(it - vars_.begin());
    MultiPoly out;
    out.vars_ = vars_;
    for (const auto& t : terms_) {
        if (t.exps[i] == 0) continue;
        Term d{t.exps, t.coef * Rational(static_cast<long>(t.exps[i]))};
        d.exps[i] -= 1;
        out.terms_.push_back(std::move(d));
    }
    out.normalize();
    return out;
}

MultiPoly MultiPoly::substitute(const std::map<std::string, Rational>& values) const {
    std::vector<int> hit(vars_.size(), 0);
    std::vector<const Rational*> val(vars_.size(), nullptr);
    bool any = false;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        const auto it = values.find(vars_[i]);
        if (it != values.end()) {
            hit[i] = 1;
            val[i] = &it->second;
            any = true;
        }
    }
    if (!any) return *this;
    MultiPoly out;
    out.vars_ = vars_;
    for (const auto& t : terms_) {
        Term nt{t.exps, t.coef};
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (hit[i] && nt.exps[i] != 0) {
                nt.coef *= val[i]->pow(static_cast<int>(nt.exps[i]));
                nt.exps[i] = 0;
            }
        }
        if (!nt.coef.is_zero()) out.terms_.push_back(std::move(nt));
    }
    out.normalize();
    return out;
}

MultiPoly MultiPoly::substitute(const std::map<std::string, MultiPoly>& values) const {
    std::vector<const MultiPoly*> val(vars_.size(), nullptr);
    bool any = false;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        const auto it = values.find(vars_[i]);
        if (it != values.end()) {
            val[i] = &it->second;
            any = true;
        }
    }
    if (!any) return *this;
    std::vector<std::vector<MultiPoly>> powers(vars_.size());
    auto power = [&](std::size_t i, std::uint32_t e) -> const MultiPoly& {
        auto& cache = powers[i];
        if (cache.empty()) cache.push_back(MultiPoly(1));
        while (cache.size() <= e) cache.push_back(cache.back() * *val[i]);
        return cache[e];
    };
    // group terms by their kept part to reduce the number of products
    MultiPoly out;
    for (const auto& t : terms_) {
        MultiPoly kept;
        kept.vars_ = vars_;
        Term k{t.exps, t.coef};
        MultiPoly factor(1);
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (val[i] && k.exps[i] != 0) {
                factor = factor * power(i, k.exps[i]);
                k.exps[i] = 0;
            }
        }
        kept.terms_.push_back(std::move(k));
        kept.normalize();
        out += kept * factor;
    }
    return out;
}

MultiPoly MultiPoly::substitute(const std::string& var, const MultiPoly& value) const {
    return substitute(std::map<std::string, MultiPoly>{{var, value}});
}

double MultiPoly::evaluate(const std::map<std::string, double>& values) const {
    std::vector<double> v(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        const auto it = values.find(vars_[i]);
        if (it == values.end()) throw InvalidParameter("no value for variable '" + vars_[i] + "'");
        v[i] = it->second;
    }
    double sum = 0.0;
    for (const auto& t : terms_) {
        double m = t.coef.to_double();
        for (std::size_t i = 0; i < v.size(); ++i)
            for (std::uint32_t e = 0; e < t.exps[i]; ++e) m *= v[i];
        sum += m;
    }
    return sum;
}

std::vector<std::pair<MultiPoly, MultiPoly>> MultiPoly::collect(const std::vector<std::string>& vars) const {
    std::vector<int> sel(vars_.size(), -1);
    std::vector<std::string> chosen;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (std::find(vars.begin(), vars.end(), vars_[i]) != vars.end()) {
            sel[i] = static_cast<int>(chosen.size());
            chosen.push_back(vars_[i]);
        }
    }
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (sel[i] < 0) rest.push_back(vars_[i]);

    std::map<Exponents, std::vector<Term>, decltype(&grlex_greater)> groups(&grlex_greater);
    for (const auto& t : terms_) {
        Exponents key(chosen.size());
        Exponents other;
        other.reserve(rest.size());
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (sel[i] >= 0)
                key[static_cast<std::size_t>(sel[i])] = t.exps[i];
            else
                other.push_back(t.exps[i]);
        }
        groups[key].push_back(Term{std::move(other), t.coef});
    }
    std::vector<std::pair<MultiPoly, MultiPoly>> out;
    out.reserve(groups.size());
    for (auto& [key, terms] : groups) {
        MultiPoly mono = from_terms(chosen, {Term{key, Rational(1)}});
        MultiPoly coef = from_terms(rest, std::move(terms));
        out.emplace_back(std::move(mono), std::move(coef));
    }
    return out;
}

std::vector<MultiPoly> MultiPoly::coefficients_in(const std::string& var) const {
    std::vector<MultiPoly> out(degree(var) + 1);
    for (auto& [mono, coef] : collect({var})) out[mono.total_degree()] = std::move(coef);
    return out;
}

Rational MultiPoly::content() const {
    if (terms_.empty()) return Rational(1);
    mpz_class g = 0;
    mpz_class l = 1;
    for (const auto& t : terms_) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coef.value().get_num_mpz_t());
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coef.value().get_den_mpz_t());
    }
    g = abs(g);
    Rational c(g, l);
    return terms_.front().coef.sign() < 0 ? -c : c;
}

MultiPoly MultiPoly::primitive() const {
    if (is_zero()) return *this;
    return scaled(content().inverse());
}

MultiPoly MultiPoly::monomial_gcd() const {
    if (terms_.empty()) return MultiPoly(1);
    Exponents m = terms_.front().exps;
    for (const auto& t : terms_)
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::min(m[i], t.exps[i]);
    return from_terms(vars_, {Term{m, Rational(1)}});
}

std::string MultiPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        const bool neg = t.coef.sign() < 0;
        if (first) {
            if (neg) os << '-';
        } else {
            os << (neg ? " - " : " + ");
        }
        first = false;
        const Rational c = t.coef.abs();
        bool wrote = false;
        if (!c.is_one() || exps_degree(t.exps) == 0) {
            os << c.to_string();
            wrote = true;
        }
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (t.exps[i] == 0) continue;
            if (wrote) os << " * ";
            os << vars_[i];
            if (t.exps[i] > 1) os << '^' << t.exps[i];
            wrote = true;
        }
    }
    return os.str();
}

bool operator==(const MultiPoly& a, const MultiPoly& b) {
    if (a.vars_ != b.vars_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
        if (a.terms_[i].exps != b.terms_[i].exps || !(a.terms_[i].coef == b.terms_[i].coef)) return false;
    return true;
}

std::optional<MultiPoly> try_divexact(const MultiPoly& a, const MultiPoly& b) {
    if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
    if (a.is_zero()) return MultiPoly();
    if (b.is_constant()) return a.scaled(b.constant_value().inverse());
    for (const auto& v : b.variables())
        if (!a.has_variable(v)) return std::nullopt;
    const auto& vars = a.vars_;
    const MultiPoly d = b.remapped(vars);
    const Term& dlead = d.terms_.front();
    const Rational lead_inv = dlead.coef.inverse();
    MultiPoly r = a;
    std::vector<Term> quotient;
    while (!r.is_zero()) {
        MultiPoly rr = r.remapped(vars);
        const Term& lt = rr.terms_.front();
        if (!divides(dlead.exps, lt.exps)) return std::nullopt;
        Exponents qe(vars.size());
        for (std::size_t i = 0; i < qe.size(); ++i) qe[i] = lt.exps[i] - dlead.exps[i];
        const Rational qc = lt.coef * lead_inv;
        // multiplying by a monomial preserves the term order
        std::vector<Term> prod;
        prod.reserve(d.terms_.size());
        for (const auto& t : d.terms_) {
            Exponents e(vars.size());
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = t.exps[i] + qe[i];
            prod.push_back(Term{std::move(e), t.coef * qc});
        }
        rr.terms_ = merge_terms(rr.terms_, prod, true);
        rr.normalize();
        r = std::move(rr);
        quotient.push_back(Term{std::move(qe), qc});
    }
    return MultiPoly::from_terms(vars, std::move(quotient));
}

MultiPoly divexact(const MultiPoly& a, const MultiPoly& b) {
    auto q = try_divexact(a, b);
    if (!q) throw NotDivisible("(" + a.to_string() + ") is not divisible by (" + b.to_string() + ")");
    return *q;
}

MultiPoly parse_poly(std::string_view text) {
    return detail::ExprParser<MultiPoly>(text, [](const MultiPoly& a, const MultiPoly& d, const auto& fail) {
               if (!d.is_constant()) fail("division by a non-constant polynomial");
               if (d.is_zero()) fail("division by zero");
               return a.scaled(d.constant_value().inverse());
           }).parse();
}

}  // namespace kinkforge::algebra
