#include <algorithm>
#include <cmath>

#include "surge/plan/plan.hpp"

namespace surge::plan {

namespace {

constexpr double kCensusTol = 1e-6;
constexpr double kZeroTol = 1e-9;

int level_covering(const std::vector<double>& beds, double capacity) {
    for (std::size_t l = 0; l < beds.size(); ++l)
        if (beds[l] >= capacity - kCensusTol) return static_cast<int>(l);
    return kOverflowLevel;
}

}  // namespace

double CapacityPlan::max_shortage() const {
    const Utilization util = request.utilization();
    double worst = -solver::kInfinity;
    for (std::size_t h = 0; h < capacity.hospitals(); ++h)
        for (std::size_t t = 0; t < capacity.days(); ++t)
            worst = std::max(worst, projection.census(h, t) - util.usable(capacity(h, t)));
    return worst;
}

CapacityPlan decode_plan(const PlanRequest& request, const BuiltModel& built, const solver::SolveResult& result,
                         const PlanData& data) {
    if (!result.has_solution()) throw std::logic_error("decode_plan needs a solution");
    const auto& layout = built.layout;
    const std::size_t n = layout.hospitals;
    const std::size_t days = layout.days;
    const auto& x = result.values;
    auto value = [&](int var) { return var < 0 ? 0.0 : x[static_cast<std::size_t>(var)]; };

    CapacityPlan plan;
    plan.request = request;
    for (const auto& p : data.hospitals) plan.hospital_ids.push_back(p.id);
    plan.level_names = data.ladder.levels;
    plan.horizon = data.horizon;
    plan.objective = result.objective;
    plan.bound = result.bound;
    plan.status = result.status;
    plan.nodes = result.nodes;
    plan.simplex_iterations = result.simplex_iterations;
    plan.wall_seconds = result.wall_seconds;
    plan.warnings = built.warnings;

    plan.transfers = TransferSeries(n, days);
    for (std::size_t h = 0; h < n; ++h)
        for (std::size_t g = 0; g < n; ++g) {
            if (g == h) continue;
            for (std::size_t t = 0; t < days; ++t) {
                const double s = value(layout.transfer_var(h, g, t));
                plan.transfers(h, g, t) = s > kZeroTol ? s : 0.0;
            }
        }
    // Round-off can push outbound a hair past arrivals; pull it back.
    for (std::size_t h = 0; h < n; ++h)
        for (std::size_t t = 0; t < days; ++t) {
            const double out = plan.transfers.outbound(h, t);
            const double cap = data.arrivals(h, t);
            if (out > cap && out > 0.0) {
                if (out - cap > kCensusTol * std::max(1.0, cap))
                    throw ConsistencyError("outbound transfers exceed arrivals at " + data.hospitals[h].id);
                const double f = cap / out;
                for (std::size_t g = 0; g < n; ++g) plan.transfers(h, g, t) *= f;
            }
        }

    const auto pmfs = data.pmfs();
    plan.projection = project(data.arrivals, plan.transfers, pmfs, data.initial);
    plan.baseline = project(data.arrivals, TransferSeries(n, days), pmfs, data.initial);

    for (std::size_t h = 0; h < n; ++h)
        for (std::size_t t = 0; t < days; ++t) {
            const double solver_census = built.census_value(h, t, x);
            const double core_census = plan.projection.census(h, t);
            if (std::fabs(solver_census - core_census) > kCensusTol * std::max(1.0, std::fabs(core_census)))
                throw ConsistencyError("census mismatch at " + data.hospitals[h].id + " day " + std::to_string(t) +
                                       ": solver " + std::to_string(solver_census) + ", projection " +
                                       std::to_string(core_census));
        }

    plan.capacity = DailyGrid(n, days);
    plan.levels.assign(n, std::vector<int>(days, 0));
    const Utilization& util = built.utilization;
    for (std::size_t h = 0; h < n; ++h) {
        const auto& beds = built.level_beds[h];
        for (std::size_t t = 0; t < days; ++t) {
            double cap = 0.0;
            int level = 0;
            if (built.complexity == ModelComplexity::complete) {
                cap = built.baseline_beds[h];
                for (std::size_t k = 0; k < layout.unit_count[h]; ++k) {
                    double u = value(layout.use_var(h, k, t));
                    if (built.surge_capacity == SurgeCapacityType::discrete) u = std::round(u);
                    cap += u * layout.unit_beds[layout.unit_offset[h] + k];
                }
                level = level_covering(beds, cap);
            } else if (built.surge_capacity == SurgeCapacityType::discrete) {
                std::size_t pick = 0;
                for (std::size_t l = 1; l < layout.levels; ++l)
                    if (value(layout.level_var(h, t, l)) > value(layout.level_var(h, t, pick))) pick = l;
                // Among levels of equal cost, report the smallest that still covers.
                const auto& cost = built.weights.level[h];
                const double census = plan.projection.census(h, t);
                for (std::size_t l = 0; l < pick; ++l) {
                    const auto var = solver::VarId{layout.level_var(h, t, l)};
                    if (cost[l] == cost[pick] && built.model.variable(var).upper > 0.0 &&
                        util.usable(beds[l]) >= census - kCensusTol) {
                        pick = l;
                        break;
                    }
                }
                level = static_cast<int>(pick);
                cap = beds[pick];
            } else {
                for (std::size_t l = 0; l < layout.levels; ++l) cap += value(layout.level_var(h, t, l)) * beds[l];
                level = level_covering(beds, cap);
            }
            plan.capacity(h, t) = cap;
            plan.levels[h][t] = level;
        }
    }

    if (built.complexity == ModelComplexity::complete && data.units) {
        for (std::size_t h = 0; h < n; ++h) {
            std::vector<std::string> ids;
            std::vector<std::vector<double>> use;
            const auto& units = data.units->for_hospital(data.hospitals[h].id);
            for (std::size_t k = 0; k < units.size(); ++k) {
                ids.push_back(units[k].id);
                std::vector<double> row(days);
                for (std::size_t t = 0; t < days; ++t) {
                    double u = value(layout.use_var(h, k, t));
                    if (built.surge_capacity == SurgeCapacityType::discrete) u = std::round(u);
                    row[t] = u;
                }
                use.push_back(std::move(row));
            }
            plan.unit_ids.push_back(std::move(ids));
            plan.unit_use.push_back(std::move(use));
        }
    }
    return plan;
}

}  // namespace surge::plan
