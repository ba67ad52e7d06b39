#pragma once

#include <algorithm>
#include <cmath>

#include "surge/core/types.hpp"

namespace surge::testing {

/// Steady census per unit daily admission: sum_k P(L > k), from the pmf tail.
inline double census_per_daily_admission(const LosPmf& pmf) {
    double total = 0.0;
    for (std::size_t k = 0; k < pmf.size(); ++k) {
        double tail = 0.0;
        for (std::size_t j = k + 1; j < pmf.size(); ++j) tail += pmf[j];
        total += tail;
    }
    return total;
}

/// Largest weekly admission count whose steady census fits, by linear scan.
inline int scan_target(const LosPmf& pmf, double usable, int max_weekly) {
    const double per = census_per_daily_admission(pmf);
    const double limit = usable + 1e-9 * std::max(1.0, std::abs(usable));
    int best = 0;
    for (int a = 0; a <= max_weekly; ++a)
        if (static_cast<double>(a) / 7.0 * per <= limit) best = a;
    return best;
}

}  // namespace surge::testing
