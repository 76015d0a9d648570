#pragma once

#include "kinkforge/algebra/ratfunc.hpp"
#include "kinkforge/system/system.hpp"

#include <vector>

namespace kinkforge::painleve::detail {

using algebra::RatFunc;

/// Truncated Laurent series: c[j] multiplies tau^(low + j).
struct Series {
    int low = 0;
    std::vector<RatFunc> c;

    int high() const { return low + static_cast<int>(c.size()) - 1; }
    RatFunc at(int order) const {
        const int j = order - low;
        return j >= 0 && j < static_cast<int>(c.size()) ? c[static_cast<std::size_t>(j)] : RatFunc();
    }
};

struct RhsTerm {
    unsigned alpha = 0;  // power of U
    unsigned beta = 0;   // power of theta
    RatFunc coef;
};

std::vector<RhsTerm> rhs_terms(const system::PdeSystem& sys, int row);

/// Coefficient of tau^order in p chi_row' - chi_row'' - rhs_row(U, theta).
RatFunc row_coefficient(const std::vector<RhsTerm>& terms, const Series& own, const Series& u, const Series& th,
                        int order);

}  // namespace kinkforge::painleve::detail
