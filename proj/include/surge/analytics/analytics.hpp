#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "surge/core/types.hpp"
#include "surge/plan/inputs.hpp"
#include "surge/plan/plan.hpp"
#include "surge/plan/request.hpp"

namespace surge::analytics {

/// Largest whole number of weekly admissions A such that admitting A/7
/// patients a day, starting from the matching steady state, keeps the
/// projected census within usable capacity at `level` for 8 * E[L] days.
/// Throws ValidationError when E[L] is zero or the level is out of range.
int admission_target(const HospitalProfile& profile, std::size_t level, const Utilization& utilization);

/// Red when the target is below the recent weekly average.
inline bool shade_red(int target, double recent_weekly_average) {
    return static_cast<double>(target) < recent_weekly_average;
}

struct AdmissionTargetRow {
    std::string hospital_id;
    std::vector<int> targets;  // per level
    double recent_weekly_average = 0.0;
    std::vector<bool> red;     // per level

    static AdmissionTargetRow make(std::string hospital_id, std::vector<int> targets, double recent_weekly_average);
};

struct AdmissionTargetTable {
    std::vector<std::string> level_names;
    std::vector<AdmissionTargetRow> rows;
};

/// `recent_weekly` holds one value per hospital; empty means zero.
AdmissionTargetTable admission_targets(std::span<const HospitalProfile> profiles, const SurgeLevelLadder& ladder,
                                       const Utilization& utilization, std::span<const double> recent_weekly);

struct OccupancySeries {
    std::size_t reference_level = 0;
    /// census / beds at the reference level; 0 where undefined.
    DailyGrid ratio;
    /// Per hospital: reference capacity is zero, so the ratio is undefined.
    std::vector<bool> undefined;
};

OccupancySeries occupancy(const DailyGrid& census, std::span<const HospitalProfile> profiles,
                          std::size_t reference_level);

struct LevelRun {
    std::size_t start = 0;  // first day index
    std::size_t length = 0;
    int level = 0;

    friend bool operator==(const LevelRun&, const LevelRun&) = default;
};

std::vector<LevelRun> encode_levels(std::span<const int> levels);
std::vector<int> decode_levels(std::span<const LevelRun> runs);

struct TimelineRange {
    Date from;
    Date to;  // inclusive
    LevelRun run;
    std::string level_name;  // "overflow" for kOverflowLevel
};

struct HospitalTimeline {
    std::string hospital_id;
    std::vector<TimelineRange> ranges;
};

std::vector<HospitalTimeline> surge_timeline(const plan::CapacityPlan& plan);

struct TransferFlow {
    std::string from;
    std::string to;
    double total = 0.0;
};

struct TransferSummary {
    /// Every ordered pair of distinct hospitals, in plan order.
    std::vector<TransferFlow> flows;
    double total = 0.0;
};

TransferSummary transfer_summary(const plan::CapacityPlan& plan);

struct StatusReport {
    std::string generated_at;  // ISO-8601 UTC
    plan::PlanRequest request;
    std::vector<HospitalTimeline> timeline;
    AdmissionTargetTable targets;
    TransferSummary transfers;
    std::vector<std::string> notes;
};

/// `generated_at` is stamped by the caller so reports stay reproducible.
StatusReport build_status_report(const plan::CapacityPlan& plan, const plan::PlanData& data,
                                 const plan::PlanRequest& request, std::string generated_at);

/// Current UTC time as `YYYY-MM-DDTHH:MM:SSZ`.
std::string utc_timestamp();

/// Flat export, header `hospital_id,metric,value`.
std::string report_csv(const StatusReport& report);

}  // namespace surge::analytics
