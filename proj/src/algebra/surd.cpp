#include "kinkforge/algebra/surd.hpp"

namespace kinkforge::algebra {

bool SurdContext::is_surd(std::string_view name) const {
    for (const auto& r : rel_)
        if (r.name == name) return true;
    return false;
}

RatFunc SurdContext::reduce_poly(const MultiPoly& p) const {
    RatFunc acc(p);
    for (const auto& r : rel_) {
        if (!acc.num().has_variable(r.name)) continue;
        const auto cs = acc.num().coefficients_in(r.name);
        const RatFunc s = RatFunc::variable(r.name);
        RatFunc even;
        RatFunc odd;
        RatFunc power(1);
        for (std::size_t j = 0; j < cs.size(); ++j) {
            if (j >= 2 && j % 2 == 0) power *= r.square;
            if (cs[j].is_zero()) continue;
            if (j % 2 == 0)
                even += RatFunc(cs[j]) * power;
            else
                odd += RatFunc(cs[j]) * power;
        }
        acc = (even + odd * s) / RatFunc(acc.den());
    }
    return acc;
}

RatFunc SurdContext::reduce(const RatFunc& f) const {
    if (rel_.empty() || f.is_zero()) return f;
    RatFunc q = reduce_poly(f.num()) / reduce_poly(f.den());
    for (const auto& r : rel_) {
        if (!q.den().has_variable(r.name)) continue;
        const auto cs = reduce_poly(q.den()).num().coefficients_in(r.name);
        const MultiPoly conj = cs[0] - (cs.size() > 1 ? cs[1] * MultiPoly::variable(r.name) : MultiPoly());
        q = reduce_poly(q.num() * conj) / reduce_poly(q.den() * conj);
    }
    return reduce_poly(q.num()) / RatFunc(q.den());
}

MultiPoly SurdContext::norm(const MultiPoly& p) const {
    MultiPoly acc = p;
    for (const auto& r : rel_) {
        if (!acc.has_variable(r.name)) continue;
        const RatFunc red = reduce_poly(acc);
        const auto cs = red.num().coefficients_in(r.name);
        const RatFunc a(cs[0]);
        const RatFunc b = cs.size() > 1 ? RatFunc(cs[1]) : RatFunc();
        acc = (a * a - b * b * r.square).num();
    }
    return acc;
}

SurdContext SurdContext::substitute(const std::map<std::string, Rational>& values) const {
    SurdContext out;
    for (const auto& r : rel_) out.add(r.name, r.square.substitute(values));
    return out;
}

}  // namespace kinkforge::algebra
