#pragma once

#include "kinkforge/algebra/ratfunc.hpp"

#include <string>
#include <vector>

namespace kinkforge::algebra {

/// A square-root symbol `name` with name^2 = square. The square must be free
/// of every surd symbol.
struct SurdRelation {
    std::string name;
    RatFunc square;
};

/// Arithmetic in Q(vars)[s1, ..., sn] / (si^2 - di). Surd symbols are plain
/// variables of RatFunc; `reduce` brings numerators to degree <= 1 in each
/// surd and clears surds from the denominator by multiplying by conjugates.
class SurdContext {
public:
    SurdContext() = default;
    explicit SurdContext(std::vector<SurdRelation> relations) : rel_(std::move(relations)) {}

    void add(std::string name, RatFunc square) { rel_.push_back({std::move(name), std::move(square)}); }
    const std::vector<SurdRelation>& relations() const noexcept { return rel_; }
    bool empty() const noexcept { return rel_.empty(); }
    bool is_surd(std::string_view name) const;

    RatFunc reduce(const RatFunc& f) const;
    bool is_zero(const RatFunc& f) const { return reduce(f).is_zero(); }
    bool equal(const RatFunc& f, const RatFunc& g) const { return is_zero(f - g); }

    /// Numerator of the product of `p` over all sign conjugates; free of surds.
    MultiPoly norm(const MultiPoly& p) const;

    /// Every relation after substituting values for ordinary variables.
    SurdContext substitute(const std::map<std::string, Rational>& values) const;

private:
    std::vector<SurdRelation> rel_;
    RatFunc reduce_poly(const MultiPoly& p) const;
};

}  // namespace kinkforge::algebra
