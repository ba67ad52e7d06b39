#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "surge/core/date.hpp"
#include "surge/core/types.hpp"

namespace surge::plan {

enum class CapacityType { total, icu, general };
enum class RecommendationType { capacity_and_transfers, capacity_only, transfers_only, none };
enum class ObjectiveMode { min_cost, min_surge, balance_load };
enum class SurgeCapacityType { discrete, continuous };
enum class ModelComplexity { fast, complete };

inline constexpr std::array<std::string_view, 6> kPopulations{
    "all", "adult", "pediatric", "covid", "adult_covid", "pediatric_covid"};

std::string_view to_string(CapacityType v);
std::string_view to_string(RecommendationType v);
std::string_view to_string(ObjectiveMode v);
std::string_view to_string(SurgeCapacityType v);
std::string_view to_string(ModelComplexity v);

// Each parser throws ValidationError naming `field` on an unknown token.
CapacityType parse_capacity_type(std::string_view text, const std::string& field = "capacity_type");
RecommendationType parse_recommendation_type(std::string_view text,
                                             const std::string& field = "recommendation_type");
ObjectiveMode parse_objective_mode(std::string_view text, const std::string& field = "objective");
SurgeCapacityType parse_surge_capacity_type(std::string_view text,
                                            const std::string& field = "surge_capacity_type");
ModelComplexity parse_model_complexity(std::string_view text, const std::string& field = "model_complexity");

/// Optional replacements for the default objective weights.
struct CostOverrides {
    /// Per hospital, one cost per surge level (before r_h scaling).
    std::map<std::string, std::vector<double>> level_costs;
    /// Cost per transferred patient.
    std::optional<double> transfer_cost;
    /// Complete model: cost per surge bed-day, per hospital.
    std::map<std::string, double> capacity_costs;
    /// Complete model: availability cost per unit-day as a multiple of r_h * beds.
    std::optional<double> availability_factor;
    /// Complete model: one-off conversion cost as a multiple of r_h * beds.
    std::optional<double> conversion_factor;

    friend bool operator==(const CostOverrides&, const CostOverrides&) = default;
};

inline constexpr double kDefaultRelativeSurgeCost = 0.5;
inline constexpr double kMaxTimeoutSeconds = 120.0;

/// Everything a planner can set for one solve.
struct PlanRequest {
    Date start_date{std::chrono::sys_days{std::chrono::year{2021} / 12 / 15}};
    Date end_date{std::chrono::sys_days{std::chrono::year{2022} / 2 / 15}};
    std::string population = "all";
    CapacityType capacity_type = CapacityType::total;
    std::string scenario = "moderate";
    RecommendationType recommendation = RecommendationType::capacity_and_transfers;
    ObjectiveMode objective = ObjectiveMode::min_cost;
    SurgeCapacityType surge_capacity = SurgeCapacityType::discrete;
    ModelComplexity complexity = ModelComplexity::fast;
    /// S_h in patients per day, by hospital id. Absent means unlimited.
    std::map<std::string, double> transfer_budget;
    /// S in patients per day across the system. Absent means unlimited.
    std::optional<double> total_transfer_budget;
    /// r_h in [0, 1], by hospital id; absent hospitals use the default.
    std::map<std::string, double> relative_surge_cost;
    /// z in (0, 1].
    double max_utilization = 1.0;
    /// z' in beds.
    std::optional<double> headroom;
    /// Level names used by transfers-only mode; absent hospitals sit at baseline.
    std::map<std::string, std::string> current_level;
    /// Solver wall-clock limit in seconds, at most kMaxTimeoutSeconds.
    std::optional<double> timeout_s;
    CostOverrides weights;

    Horizon horizon() const { return {start_date, end_date}; }
    Utilization utilization() const { return {max_utilization, headroom}; }
    std::optional<double> budget_for(const std::string& hospital) const;
    double surge_cost_for(const std::string& hospital) const;
    bool transfers_enabled() const;

    /// Throws ValidationError naming the offending field.
    void validate() const;

    friend bool operator==(const PlanRequest&, const PlanRequest&) = default;
};

}  // namespace surge::plan
