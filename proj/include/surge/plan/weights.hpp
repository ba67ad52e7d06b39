#pragma once

#include <vector>

#include "surge/plan/inputs.hpp"
#include "surge/plan/request.hpp"

namespace surge::plan {

inline constexpr double kDefaultTransferCost = 5.0;
inline constexpr double kTiebreak = 1e-3;
inline constexpr double kDefaultAvailabilityFactor = 0.1;
inline constexpr double kDefaultConversionFactor = 1.0;

/// Objective weights. The simplified model prices levels per hospital-day
/// (`level`); the complete model prices surge beds per day (`capacity_day`)
/// plus unit availability and conversions.
struct CostWeights {
    std::vector<std::vector<double>> level;           // [h][l]
    std::vector<std::vector<double>> transfer;        // [h][g]
    std::vector<std::vector<double>> capacity_day;    // [h][t]
    std::vector<std::vector<double>> unit_available;  // [h][k]
    std::vector<std::vector<double>> unit_converted;  // [h][k]
    /// Minimize the peak occupancy ratio instead of pricing capacity.
    bool balance_load = false;

    /// Non-negative entries and zero baseline cost.
    void validate() const;
    /// True when level costs never decrease along the ladder for hospital h.
    bool levels_monotone(std::size_t h) const;
};

/// Min-cost weights: r_h (b_l - b_0) per level-day unless overridden, a flat
/// transfer cost, and r_h-scaled unit costs for the complete model.
CostWeights default_weights(const PlanRequest& request, const PlanData& data);

/// Rewrites weights for min-surge and balance-load; min-cost passes through.
CostWeights apply_objective_mode(const PlanRequest& request, const PlanData& data, CostWeights weights);

inline CostWeights make_weights(const PlanRequest& request, const PlanData& data) {
    return apply_objective_mode(request, data, default_weights(request, data));
}

}  // namespace surge::plan
