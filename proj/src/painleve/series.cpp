#include "series.hpp"

#include "kinkforge/painleve/painleve.hpp"

#include <algorithm>

namespace kinkforge::painleve::detail {

std::vector<RhsTerm> rhs_terms(const system::PdeSystem& sys, int row) {
    std::vector<RhsTerm> out;
    for (const auto& [mono, coef] : sys.rhs_bound(row).collect({system::kU, system::kTheta}))
        out.push_back({mono.degree(system::kU), mono.degree(system::kTheta), RatFunc(coef)});
    return out;
}

namespace {

Series multiply(const Series& a, const Series& b, int max_order) {
    Series out;
    out.low = a.low + b.low;
    if (a.c.empty() || b.c.empty()) return out;
    const int high = std::min(a.high() + b.high(), max_order);
    for (int o = out.low; o <= high; ++o) {
        RatFunc acc;
        for (int i = std::max(a.low, o - b.high()); i <= std::min(a.high(), o - b.low); ++i) {
            const RatFunc x = a.at(i);
            if (x.is_zero()) continue;
            const RatFunc y = b.at(o - i);
            if (!y.is_zero()) acc += x * y;
        }
        out.c.push_back(acc);
    }
    return out;
}

RatFunc product_coefficient(const std::vector<const Series*>& factors, int order) {
    if (factors.empty()) return order == 0 ? RatFunc(1) : RatFunc();
    int rest_low = 0;
    for (const auto* f : factors) rest_low += f->low;
    Series acc = *factors.front();
    rest_low -= acc.low;
    for (std::size_t i = 1; i < factors.size(); ++i) {
        rest_low -= factors[i]->low;
        acc = multiply(acc, *factors[i], order - rest_low);
    }
    return acc.at(order);
}

}  // namespace

RatFunc row_coefficient(const std::vector<RhsTerm>& terms, const Series& own, const Series& u, const Series& th,
                        int order) {
    const RatFunc p = RatFunc::variable(kP);
    RatFunc val = p * RatFunc(order + 1) * own.at(order + 1) - RatFunc((order + 2) * (order + 1)) * own.at(order + 2);
    for (const auto& t : terms) {
        std::vector<const Series*> fs;
        for (unsigned i = 0; i < t.alpha; ++i) fs.push_back(&u);
        for (unsigned i = 0; i < t.beta; ++i) fs.push_back(&th);
        const RatFunc c = product_coefficient(fs, order);
        if (!c.is_zero()) val -= t.coef * c;
    }
    return val;
}

}  // namespace kinkforge::painleve::detail
