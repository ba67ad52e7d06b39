#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"
#include "surge/analytics/analytics.hpp"
#include "surge/gateway/plan_data.hpp"
#include "surge/plan/inputs.hpp"
#include "surge/plan/plan.hpp"
#include "surge/uncertainty/uncertainty.hpp"

namespace surge::api {

inline constexpr std::string_view kVersion = "0.1.0";

/// Sorted keys, no whitespace, shortest round-trip numbers.
std::string canonical(const nlohmann::json& doc);

/// 64-bit FNV-1a as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

nlohmann::json grid_to_json(const DailyGrid& grid);

/// Decoded plan without timings or node counts, so equal inputs give equal
/// bytes.
nlohmann::json plan_to_json(const plan::CapacityPlan& plan);

nlohmann::json timeline_to_json(const std::vector<analytics::HospitalTimeline>& timeline);
nlohmann::json targets_to_json(const analytics::AdmissionTargetTable& table);
nlohmann::json occupancy_to_json(const analytics::OccupancySeries& occupancy, const plan::CapacityPlan& plan);
nlohmann::json transfer_summary_to_json(const analytics::TransferSummary& summary);
nlohmann::json report_to_json(const analytics::StatusReport& report);
nlohmann::json robustness_to_json(const uncertainty::RobustnessReport& report);
nlohmann::json census_view_to_json(const std::vector<gateway::CensusView>& view);

/// Everything POST /api/plan returns and `surge_cli plan` writes: the plan,
/// its surge timeline, baseline occupancy, transfer summary and admission
/// targets.
nlohmann::json plan_payload(const std::string& plan_id, const plan::CapacityPlan& plan, const plan::PlanData& data);

/// Content hash of (canonical request, snapshot id).
std::string plan_id(const plan::PlanRequest& request, const std::string& snapshot_id);

}  // namespace surge::api
