#include "surge/analytics/analytics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <sstream>

#include "surge/core/projection.hpp"

namespace surge::analytics {

namespace {

constexpr double kCapacityTol = 1e-9;

bool sustainable(const HospitalProfile& profile, double usable, int weekly, std::size_t horizon) {
    const double daily = static_cast<double>(weekly) / 7.0;
    DailyGrid arrivals(1, horizon, daily);
    InitialState seed{DailyGrid(1, profile.los_pmf.size(), daily)};
    const std::vector<LosPmf> pmfs{profile.los_pmf};
    const auto result = project(arrivals, TransferSeries(1, horizon), pmfs, seed);
    const double limit = usable + kCapacityTol * std::max(1.0, std::abs(usable));
    for (double c : result.initial_census)
        if (c > limit) return false;
    for (double c : result.census.flat())
        if (c > limit) return false;
    return true;
}

std::string csv_number(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

}  // namespace

int admission_target(const HospitalProfile& profile, std::size_t level, const Utilization& utilization) {
    if (level >= profile.level_capacities.size())
        throw ValidationError("level", "level " + std::to_string(level) + " is not on the ladder");
    validate_pmf(profile.los_pmf);
    const double mean = mean_los(profile.los_pmf);
    if (!(mean > 0.0)) throw ValidationError("los_pmf", "mean length of stay is zero for " + profile.id);
    const double usable = utilization.usable(profile.beds(level));
    const auto horizon = static_cast<std::size_t>(std::max(1.0, std::ceil(8.0 * mean)));
    if (!sustainable(profile, usable, 0, horizon)) return 0;

    int lo = 0;  // sustainable
    int hi = static_cast<int>(std::ceil(7.0 * std::max(0.0, usable) / mean)) + 7;
    if (sustainable(profile, usable, hi, horizon)) return hi;
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        if (sustainable(profile, usable, mid, horizon))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

AdmissionTargetRow AdmissionTargetRow::make(std::string hospital_id, std::vector<int> targets,
                                            double recent_weekly_average) {
    AdmissionTargetRow row{std::move(hospital_id), std::move(targets), recent_weekly_average, {}};
    row.red.reserve(row.targets.size());
    for (int t : row.targets) row.red.push_back(shade_red(t, recent_weekly_average));
    return row;
}

AdmissionTargetTable admission_targets(std::span<const HospitalProfile> profiles, const SurgeLevelLadder& ladder,
                                       const Utilization& utilization, std::span<const double> recent_weekly) {
    if (!recent_weekly.empty() && recent_weekly.size() != profiles.size())
        throw ValidationError("recent_weekly_admissions", "one value per hospital is required");
    AdmissionTargetTable table{ladder.levels, {}};
    for (std::size_t h = 0; h < profiles.size(); ++h) {
        std::vector<int> targets;
        for (std::size_t l = 0; l < ladder.size(); ++l)
            targets.push_back(admission_target(profiles[h], l, utilization));
        const double recent = recent_weekly.empty() ? 0.0 : recent_weekly[h];
        table.rows.push_back(AdmissionTargetRow::make(profiles[h].id, std::move(targets), recent));
    }
    return table;
}

OccupancySeries occupancy(const DailyGrid& census, std::span<const HospitalProfile> profiles,
                          std::size_t reference_level) {
    if (census.hospitals() != profiles.size())
        throw ValidationError("census", "census rows do not match the hospital set");
    OccupancySeries out{reference_level, DailyGrid(census.hospitals(), census.days()),
                        std::vector<bool>(profiles.size(), false)};
    for (std::size_t h = 0; h < profiles.size(); ++h) {
        if (reference_level >= profiles[h].level_capacities.size())
            throw ValidationError("reference_level", "level is not on the ladder");
        const double beds = profiles[h].beds(reference_level);
        if (beds <= 0.0) {
            out.undefined[h] = true;
            continue;
        }
        for (std::size_t t = 0; t < census.days(); ++t) out.ratio(h, t) = census(h, t) / beds;
    }
    return out;
}

std::vector<LevelRun> encode_levels(std::span<const int> levels) {
    std::vector<LevelRun> runs;
    for (std::size_t t = 0; t < levels.size(); ++t) {
        if (!runs.empty() && runs.back().level == levels[t])
            ++runs.back().length;
        else
            runs.push_back({t, 1, levels[t]});
    }
    return runs;
}

std::vector<int> decode_levels(std::span<const LevelRun> runs) {
    std::vector<int> out;
    for (const auto& r : runs) out.insert(out.end(), r.length, r.level);
    return out;
}

std::vector<HospitalTimeline> surge_timeline(const plan::CapacityPlan& plan) {
    std::vector<HospitalTimeline> out;
    for (std::size_t h = 0; h < plan.hospital_ids.size(); ++h) {
        HospitalTimeline line{plan.hospital_ids[h], {}};
        for (const auto& run : encode_levels(plan.levels[h])) {
            const std::string name = run.level == kOverflowLevel
                                         ? "overflow"
                                         : plan.level_names.at(static_cast<std::size_t>(run.level));
            line.ranges.push_back({plan.horizon.date_at(static_cast<int>(run.start)),
                                   plan.horizon.date_at(static_cast<int>(run.start + run.length - 1)), run, name});
        }
        out.push_back(std::move(line));
    }
    return out;
}

TransferSummary transfer_summary(const plan::CapacityPlan& plan) {
    TransferSummary out;
    const auto& s = plan.transfers;
    const std::size_t n = plan.hospital_ids.size();
    for (std::size_t h = 0; h < n; ++h)
        for (std::size_t g = 0; g < n; ++g) {
            if (g == h) continue;
            double total = 0.0;
            if (s.hospitals() == n)
                for (std::size_t t = 0; t < s.days(); ++t) total += s(h, g, t);
            out.flows.push_back({plan.hospital_ids[h], plan.hospital_ids[g], total});
            out.total += total;
        }
    return out;
}

StatusReport build_status_report(const plan::CapacityPlan& plan, const plan::PlanData& data,
                                 const plan::PlanRequest& request, std::string generated_at) {
    StatusReport report;
    report.generated_at = std::move(generated_at);
    report.request = request;
    report.timeline = surge_timeline(plan);
    report.targets = admission_targets(data.hospitals, data.ladder, request.utilization(),
                                       data.recent_weekly_admissions);
    report.transfers = transfer_summary(plan);
    report.notes.push_back("admission targets assume no transfers");
    if (data.recent_weekly_admissions.empty())
        report.notes.push_back("no admission history; recent weekly averages are 0");
    return report;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

std::string report_csv(const StatusReport& report) {
    std::string out = "hospital_id,metric,value\n";
    auto row = [&](const std::string& id, const std::string& metric, const std::string& value) {
        out += id + "," + metric + "," + value + "\n";
    };
    for (const auto& line : report.timeline) {
        std::string peak = report.targets.level_names.empty() ? "0" : report.targets.level_names[0];
        int peak_index = 0;
        std::size_t surge_days = 0;
        for (const auto& r : line.ranges) {
            if (r.run.level != 0) surge_days += r.run.length;
            if (peak_index == kOverflowLevel) continue;
            if (r.run.level == kOverflowLevel || r.run.level > peak_index) {
                peak_index = r.run.level;
                peak = r.level_name;
            }
        }
        row(line.hospital_id, "peak_level", peak);
        row(line.hospital_id, "surge_days", std::to_string(surge_days));
    }
    for (const auto& r : report.targets.rows) {
        for (std::size_t l = 0; l < r.targets.size(); ++l) {
            row(r.hospital_id, "target:" + report.targets.level_names[l], std::to_string(r.targets[l]));
            row(r.hospital_id, "shade:" + report.targets.level_names[l], r.red[l] ? "red" : "green");
        }
        row(r.hospital_id, "recent_weekly_average", csv_number(r.recent_weekly_average));
    }
    for (const auto& line : report.timeline) {
        double out_total = 0.0;
        double in_total = 0.0;
        for (const auto& f : report.transfers.flows) {
            if (f.from == line.hospital_id) out_total += f.total;
            if (f.to == line.hospital_id) in_total += f.total;
        }
        row(line.hospital_id, "transfers_out", csv_number(out_total));
        row(line.hospital_id, "transfers_in", csv_number(in_total));
    }
    return out;
}

}  // namespace surge::analytics
