#include "surge/api/json_codec.hpp"

#include <cmath>
#include <cstdio>

#include "surge/gateway/config.hpp"

namespace surge::api {

using nlohmann::json;

namespace {

constexpr double kTransferEpsilon = 1e-9;

std::string level_name(const plan::CapacityPlan& plan, int level) {
    return level == kOverflowLevel ? "overflow" : plan.level_names.at(static_cast<std::size_t>(level));
}

}  // namespace

std::string canonical(const json& doc) { return doc.dump(); }

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json grid_to_json(const DailyGrid& grid) {
    json rows = json::array();
    for (std::size_t h = 0; h < grid.hospitals(); ++h) {
        const auto r = grid.row(h);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    return rows;
}

json plan_to_json(const plan::CapacityPlan& plan) {
    json doc;
    doc["request"] = gateway::request_to_json(plan.request);
    doc["hospital_ids"] = plan.hospital_ids;
    doc["level_names"] = plan.level_names;
    doc["start_date"] = plan.horizon.start.iso();
    doc["end_date"] = plan.horizon.end.iso();
    doc["levels"] = plan.levels;
    json names = json::array();
    for (const auto& row : plan.levels) {
        json r = json::array();
        for (int l : row) r.push_back(level_name(plan, l));
        names.push_back(r);
    }
    doc["level_labels"] = names;
    doc["capacity"] = grid_to_json(plan.capacity);
    json transfers = json::array();
    const auto& s = plan.transfers;
    for (std::size_t t = 0; t < s.days(); ++t)
        for (std::size_t h = 0; h < s.hospitals(); ++h)
            for (std::size_t g = 0; g < s.hospitals(); ++g)
                if (g != h && s(h, g, t) > kTransferEpsilon)
                    transfers.push_back({{"from", plan.hospital_ids[h]},
                                         {"to", plan.hospital_ids[g]},
                                         {"day", t},
                                         {"date", plan.horizon.date_at(static_cast<int>(t)).iso()},
                                         {"count", s(h, g, t)}});
    doc["transfers"] = transfers;
    doc["admissions"] = grid_to_json(plan.projection.admissions);
    doc["census"] = grid_to_json(plan.projection.census);
    doc["admissions_without_transfers"] = grid_to_json(plan.baseline.admissions);
    doc["census_without_transfers"] = grid_to_json(plan.baseline.census);
    doc["objective"] = plan.objective;
    doc["bound"] = plan.bound;
    doc["status"] = solver::status_name(plan.status);
    doc["max_shortage"] = plan.max_shortage();
    doc["warnings"] = plan.warnings;
    if (!plan.unit_ids.empty()) {
        json units = json::object();
        for (std::size_t h = 0; h < plan.unit_ids.size(); ++h) {
            json list = json::array();
            for (std::size_t k = 0; k < plan.unit_ids[h].size(); ++k)
                list.push_back({{"id", plan.unit_ids[h][k]}, {"open", plan.unit_use[h][k]}});
            units[plan.hospital_ids[h]] = list;
        }
        doc["units"] = units;
    }
    return doc;
}

json timeline_to_json(const std::vector<analytics::HospitalTimeline>& timeline) {
    json out = json::array();
    for (const auto& line : timeline) {
        json ranges = json::array();
        for (const auto& r : line.ranges)
            ranges.push_back({{"from", r.from.iso()},
                              {"to", r.to.iso()},
                              {"start", r.run.start},
                              {"length", r.run.length},
                              {"level", r.run.level},
                              {"level_name", r.level_name}});
        out.push_back({{"hospital_id", line.hospital_id}, {"ranges", ranges}});
    }
    return out;
}

json targets_to_json(const analytics::AdmissionTargetTable& table) {
    json rows = json::array();
    for (const auto& r : table.rows) {
        json shading = json::array();
        for (bool red : r.red) shading.push_back(red ? "red" : "green");
        rows.push_back({{"hospital_id", r.hospital_id},
                        {"targets", r.targets},
                        {"recent_weekly_average", r.recent_weekly_average},
                        {"shading", shading}});
    }
    return {{"level_names", table.level_names}, {"rows", rows}, {"unit", "patients_per_week"}};
}

json occupancy_to_json(const analytics::OccupancySeries& occupancy, const plan::CapacityPlan& plan) {
    json undefined = json::array();
    for (std::size_t h = 0; h < occupancy.undefined.size(); ++h)
        if (occupancy.undefined[h]) undefined.push_back(plan.hospital_ids[h]);
    return {{"reference_level", plan.level_names.at(occupancy.reference_level)},
            {"ratio", grid_to_json(occupancy.ratio)},
            {"undefined", undefined}};
}

json transfer_summary_to_json(const analytics::TransferSummary& summary) {
    json flows = json::array();
    for (const auto& f : summary.flows) flows.push_back({{"from", f.from}, {"to", f.to}, {"total", f.total}});
    return {{"flows", flows}, {"total", summary.total}};
}

json report_to_json(const analytics::StatusReport& report) {
    return {{"generated_at", report.generated_at},
            {"request", gateway::request_to_json(report.request)},
            {"timeline", timeline_to_json(report.timeline)},
            {"admission_targets", targets_to_json(report.targets)},
            {"transfer_summary", transfer_summary_to_json(report.transfers)},
            {"notes", report.notes}};
}

json robustness_to_json(const uncertainty::RobustnessReport& report) {
    json hospitals = json::array();
    for (const auto& h : report.hospitals)
        hospitals.push_back({{"hospital_id", h.hospital_id},
                             {"violation_rate", h.violation_rate},
                             {"violating_days", h.violating_days},
                             {"worst_overflow", h.worst_overflow},
                             {"clipped_days", h.clipped_days}});
    json offending = json::array();
    for (const auto& o : report.offending)
        offending.push_back(
            {{"index", o.index}, {"worst_overflow", o.worst_overflow}, {"arrivals", grid_to_json(o.arrivals)}});
    return {{"scenarios", report.scenarios},
            {"days", report.days},
            {"overall_violation_rate", report.overall_violation_rate()},
            {"hospitals", hospitals},
            {"offending", offending},
            {"offending_total", report.offending_total},
            {"clipped", report.clipped},
            {"notes", report.notes}};
}

json census_view_to_json(const std::vector<gateway::CensusView>& view) {
    json out = json::array();
    for (const auto& v : view) {
        json points = json::array();
        for (const auto& p : v.points)
            points.push_back({{"date", p.date.iso()}, {"value", p.value}, {"source", p.actual ? "actual" : "forecast"}});
        out.push_back({{"hospital_id", v.hospital_id}, {"points", points}});
    }
    return out;
}

json plan_payload(const std::string& id, const plan::CapacityPlan& plan, const plan::PlanData& data) {
    const auto occupancy = analytics::occupancy(plan.projection.census, data.hospitals, 0);
    const auto targets = analytics::admission_targets(data.hospitals, data.ladder, plan.request.utilization(),
                                                      data.recent_weekly_admissions);
    return {{"plan_id", id},
            {"plan", plan_to_json(plan)},
            {"timeline", timeline_to_json(analytics::surge_timeline(plan))},
            {"occupancy", occupancy_to_json(occupancy, plan)},
            {"transfer_summary", transfer_summary_to_json(analytics::transfer_summary(plan))},
            {"admission_targets", targets_to_json(targets)},
            {"notes", json::array({"admission targets assume no transfers"})}};
}

std::string plan_id(const plan::PlanRequest& request, const std::string& snapshot_id) {
    return fnv1a_hex(canonical(gateway::request_to_json(request)) + "|" + snapshot_id);
}

}  // namespace surge::api
