#pragma once

#include <cmath>

#include "generators.hpp"
#include "surge/uncertainty/uncertainty.hpp"

namespace surge::testing {

/// Random uncertainty spec with some flat nominal stretches.
inline uncertainty::UncertaintySpec random_spec(Rng& rng, std::size_t days) {
    uncertainty::UncertaintySpec s;
    double level = uniform(rng, 2.0, 25.0);
    for (std::size_t t = 0; t < days; ++t) {
        if (t > 0 && uniform(rng, 0.0, 1.0) >= 0.3) level = std::max(0.0, level + uniform(rng, -4.0, 4.0));
        s.nominal.push_back(std::round(level * 4.0) / 4.0);
        s.lower.push_back(uniform(rng, 0.0, 4.0));
        s.upper.push_back(uniform(rng, 0.0, 4.0));
    }
    s.gamma1 = uniform(rng, 0.0, 0.4);
    s.gamma2 = uniform(rng, 1.0, 3.0);
    return s;
}

/// Candidate near the spec: nominal plus noise on a random subset of days.
inline std::vector<double> random_candidate(Rng& rng, const uncertainty::UncertaintySpec& s) {
    std::vector<double> c = s.nominal;
    const double spread = uniform(rng, 0.0, 1.5);
    for (std::size_t t = 0; t < c.size(); ++t)
        if (uniform(rng, 0.0, 1.0) < 0.5) c[t] = std::max(0.0, c[t] + spread * uniform(rng, -s.lower[t], s.upper[t]) * 1.2);
    return c;
}

}  // namespace surge::testing
