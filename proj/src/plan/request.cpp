#include "surge/plan/request.hpp"

#include <algorithm>
#include <cmath>

namespace surge::plan {

namespace {

template <typename E, std::size_t N>
E parse_token(std::string_view text, const std::array<std::pair<std::string_view, E>, N>& table,
              const std::string& field) {
    for (const auto& [name, value] : table)
        if (name == text) return value;
    std::string allowed;
    for (const auto& [name, value] : table) {
        if (!allowed.empty()) allowed += ", ";
        allowed += name;
    }
    throw ValidationError(field, "unknown value '" + std::string(text) + "' (expected one of " + allowed + ")");
}

constexpr std::array<std::pair<std::string_view, CapacityType>, 3> kCapacityTypes{
    {{"total", CapacityType::total}, {"icu", CapacityType::icu}, {"general", CapacityType::general}}};
constexpr std::array<std::pair<std::string_view, RecommendationType>, 4> kRecommendations{
    {{"capacity_and_transfers", RecommendationType::capacity_and_transfers},
     {"capacity_only", RecommendationType::capacity_only},
     {"transfers_only", RecommendationType::transfers_only},
     {"none", RecommendationType::none}}};
constexpr std::array<std::pair<std::string_view, ObjectiveMode>, 3> kObjectives{
    {{"min_cost", ObjectiveMode::min_cost},
     {"min_surge", ObjectiveMode::min_surge},
     {"balance_load", ObjectiveMode::balance_load}}};
constexpr std::array<std::pair<std::string_view, SurgeCapacityType>, 2> kSurgeTypes{
    {{"discrete", SurgeCapacityType::discrete}, {"continuous", SurgeCapacityType::continuous}}};
constexpr std::array<std::pair<std::string_view, ModelComplexity>, 2> kComplexities{
    {{"fast", ModelComplexity::fast}, {"complete", ModelComplexity::complete}}};

template <typename E, std::size_t N>
std::string_view name_of(E value, const std::array<std::pair<std::string_view, E>, N>& table) {
    for (const auto& [name, v] : table)
        if (v == value) return name;
    return "unknown";
}

void require_finite_nonnegative(double v, const std::string& field) {
    if (!std::isfinite(v) || v < 0.0) throw ValidationError(field, "must be a finite number >= 0");
}

}  // namespace

std::string_view to_string(CapacityType v) { return name_of(v, kCapacityTypes); }
std::string_view to_string(RecommendationType v) { return name_of(v, kRecommendations); }
std::string_view to_string(ObjectiveMode v) { return name_of(v, kObjectives); }
std::string_view to_string(SurgeCapacityType v) { return name_of(v, kSurgeTypes); }
std::string_view to_string(ModelComplexity v) { return name_of(v, kComplexities); }

CapacityType parse_capacity_type(std::string_view text, const std::string& field) {
    return parse_token(text, kCapacityTypes, field);
}
RecommendationType parse_recommendation_type(std::string_view text, const std::string& field) {
    return parse_token(text, kRecommendations, field);
}
ObjectiveMode parse_objective_mode(std::string_view text, const std::string& field) {
    return parse_token(text, kObjectives, field);
}
SurgeCapacityType parse_surge_capacity_type(std::string_view text, const std::string& field) {
    return parse_token(text, kSurgeTypes, field);
}
ModelComplexity parse_model_complexity(std::string_view text, const std::string& field) {
    return parse_token(text, kComplexities, field);
}

std::optional<double> PlanRequest::budget_for(const std::string& hospital) const {
    auto it = transfer_budget.find(hospital);
    if (it == transfer_budget.end()) return std::nullopt;
    return it->second;
}

double PlanRequest::surge_cost_for(const std::string& hospital) const {
    auto it = relative_surge_cost.find(hospital);
    return it == relative_surge_cost.end() ? kDefaultRelativeSurgeCost : it->second;
}

bool PlanRequest::transfers_enabled() const {
    if (recommendation == RecommendationType::capacity_only || recommendation == RecommendationType::none)
        return false;
    return !(total_transfer_budget && *total_transfer_budget == 0.0);
}

void PlanRequest::validate() const {
    if (start_date > end_date) throw ValidationError("end_date", "end_date is before start_date");
    if (std::find(kPopulations.begin(), kPopulations.end(), population) == kPopulations.end())
        throw ValidationError("population", "unknown population '" + population + "'");
    if (scenario.empty()) throw ValidationError("scenario", "must not be empty");
    for (const auto& [id, budget] : transfer_budget) require_finite_nonnegative(budget, "transfer_budget");
    if (total_transfer_budget) require_finite_nonnegative(*total_transfer_budget, "total_transfer_budget");
    for (const auto& [id, r] : relative_surge_cost)
        if (!(r >= 0.0 && r <= 1.0)) throw ValidationError("relative_surge_cost", "values must lie in [0, 1]");
    if (!(max_utilization > 0.0 && max_utilization <= 1.0))
        throw ValidationError("max_utilization", "must lie in (0, 1]");
    if (headroom) require_finite_nonnegative(*headroom, "headroom");
    const auto ladder = SurgeLevelLadder::standard();
    for (const auto& [id, level] : current_level)
        if (!ladder.index_of(level)) throw ValidationError("current_level", "unknown level '" + level + "'");
    if (timeout_s && !(*timeout_s > 0.0 && *timeout_s <= kMaxTimeoutSeconds))
        throw ValidationError("timeout_s", "must lie in (0, 120]");
    for (const auto& [id, costs] : weights.level_costs)
        for (double c : costs) require_finite_nonnegative(c, "weights.level_costs");
    if (weights.transfer_cost) require_finite_nonnegative(*weights.transfer_cost, "weights.transfer_cost");
    for (const auto& [id, c] : weights.capacity_costs) require_finite_nonnegative(c, "weights.capacity_costs");
    if (weights.availability_factor)
        require_finite_nonnegative(*weights.availability_factor, "weights.availability_factor");
    if (weights.conversion_factor)
        require_finite_nonnegative(*weights.conversion_factor, "weights.conversion_factor");
}

}  // namespace surge::plan
