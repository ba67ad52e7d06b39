#include <algorithm>
#include <cmath>

#include "surge/plan/models.hpp"

namespace surge::plan {

namespace {

constexpr double kCoverTol = 1e-9;

double lower_of(const BuiltModel& built, int var) { return built.model.variable(solver::VarId{var}).lower; }
double upper_of(const BuiltModel& built, int var) { return built.model.variable(solver::VarId{var}).upper; }

void scale_group(std::vector<double>& x, const std::vector<int>& vars, double cap) {
    double total = 0.0;
    for (int v : vars) total += x[static_cast<std::size_t>(v)];
    if (total <= cap || total <= 0.0) return;
    const double f = std::max(cap, 0.0) / total;
    for (int v : vars) x[static_cast<std::size_t>(v)] *= f;
}

/// Clamp the relaxation's transfers into their boxes and scale groups down
/// until every outbound, inbound and system row holds.
void repair_transfers(const BuiltModel& built, const PlanData& data, const PlanRequest& request,
                      std::vector<double>& x) {
    const auto& layout = built.layout;
    const std::size_t n = layout.hospitals;
    for (int v : layout.transfer_vars) {
        if (v < 0) continue;
        auto& value = x[static_cast<std::size_t>(v)];
        value = std::clamp(value, lower_of(built, v), upper_of(built, v));
    }
    if (n < 2) return;
    const double system = request.total_transfer_budget.value_or(solver::kInfinity);
    for (std::size_t t = 0; t < layout.days; ++t) {
        std::vector<int> all;
        for (std::size_t h = 0; h < n; ++h) {
            std::vector<int> out;
            for (std::size_t g = 0; g < n; ++g)
                if (g != h) out.push_back(layout.transfer_var(h, g, t));
            const double budget = request.budget_for(data.hospitals[h].id).value_or(solver::kInfinity);
            scale_group(x, out, std::min(data.arrivals(h, t), budget));
            all.insert(all.end(), out.begin(), out.end());
        }
        for (std::size_t h = 0; h < n; ++h) {
            std::vector<int> in;
            for (std::size_t g = 0; g < n; ++g)
                if (g != h) in.push_back(layout.transfer_var(g, h, t));
            scale_group(x, in, request.budget_for(data.hospitals[h].id).value_or(solver::kInfinity));
        }
        scale_group(x, all, system);
    }
}

void set_balance(const BuiltModel& built, std::vector<double>& x, const std::vector<double>& top_beds) {
    if (built.layout.balance_var < 0) return;
    const double z = built.utilization.max_fraction;
    double m = 0.0;
    for (std::size_t h = 0; h < built.layout.hospitals; ++h) {
        const double denom = z * top_beds[h];
        if (!(denom > 0.0)) continue;
        for (std::size_t t = 0; t < built.layout.days; ++t) m = std::max(m, built.census_value(h, t, x) / denom);
    }
    x[static_cast<std::size_t>(built.layout.balance_var)] = m;
}

std::optional<std::vector<double>> simplified_candidate(const BuiltModel& built, std::vector<double> x) {
    const auto& layout = built.layout;
    for (std::size_t h = 0; h < layout.hospitals; ++h) {
        const auto& beds = built.level_beds[h];
        const auto& cost = built.weights.level[h];
        for (std::size_t t = 0; t < layout.days; ++t) {
            const double census = built.census_value(h, t, x);
            std::optional<std::size_t> pick;
            for (std::size_t l = 0; l < layout.levels; ++l) {
                const int v = layout.level_var(h, t, l);
                if (upper_of(built, v) <= 0.0) continue;
                if (lower_of(built, v) >= 1.0) {
                    pick = l;
                    break;
                }
                if (built.utilization.usable(beds[l]) < census - kCoverTol) continue;
                if (!pick || cost[l] < cost[*pick]) pick = l;
            }
            if (!pick) return std::nullopt;
            for (std::size_t l = 0; l < layout.levels; ++l)
                x[static_cast<std::size_t>(layout.level_var(h, t, l))] = l == *pick ? 1.0 : 0.0;
        }
    }
    std::vector<double> top;
    for (const auto& beds : built.level_beds) top.push_back(beds.back());
    set_balance(built, x, top);
    return x;
}

struct UnitSchedule {
    std::vector<double> use;
    std::vector<double> avail;
    std::vector<double> convert;
};

UnitSchedule derive(const std::vector<double>& use, int setup, int teardown) {
    const auto days = static_cast<int>(use.size());
    UnitSchedule s{use, std::vector<double>(use.size(), 0.0), std::vector<double>(use.size(), 0.0)};
    for (int t = 0; t < days; ++t) {
        double a = use[static_cast<std::size_t>(t)];
        if (teardown > 0 && t + teardown < days) a = std::max(a, use[static_cast<std::size_t>(t + teardown)]);
        if (setup > 0 && t - setup >= 0) a = std::max(a, use[static_cast<std::size_t>(t - setup)]);
        s.avail[static_cast<std::size_t>(t)] = a;
        const double prev = t == 0 ? 0.0 : use[static_cast<std::size_t>(t - 1)];
        s.convert[static_cast<std::size_t>(t)] = std::max(0.0, use[static_cast<std::size_t>(t)] - prev);
    }
    return s;
}

double schedule_cost(const UnitSchedule& s, const std::vector<double>& day_cost, double beds, double avail_cost,
                     double convert_cost) {
    double total = 0.0;
    for (std::size_t t = 0; t < s.use.size(); ++t)
        total += day_cost[t] * beds * s.use[t] + avail_cost * s.avail[t] + convert_cost * s.convert[t];
    return total;
}

std::optional<std::vector<double>> complete_candidate(const BuiltModel& built, const PlanData& data,
                                                      std::vector<double> x) {
    const auto& layout = built.layout;
    const std::size_t days = layout.days;
    for (std::size_t h = 0; h < layout.hospitals; ++h) {
        const std::size_t count = layout.unit_count[h];
        const auto& units = data.units->for_hospital(data.hospitals[h].id);
        std::vector<std::vector<double>> use(count, std::vector<double>(days, 0.0));
        for (std::size_t t = 0; t < days; ++t) {
            const double census = built.census_value(h, t, x);
            double cap = built.baseline_beds[h];
            std::size_t open = 0;
            while (open < count && lower_of(built, layout.use_var(h, open, t)) >= 1.0) {
                cap += layout.unit_beds[layout.unit_offset[h] + open];
                ++open;
            }
            while (built.utilization.usable(cap) < census - kCoverTol) {
                if (open == count || upper_of(built, layout.use_var(h, open, t)) <= 0.0) return std::nullopt;
                cap += layout.unit_beds[layout.unit_offset[h] + open];
                ++open;
            }
            for (std::size_t k = 0; k < open; ++k) use[k][t] = 1.0;
        }
        // Bridge short closures when staying open is cheaper than reconverting.
        for (std::size_t k = 0; k < count; ++k) {
            const double beds = layout.unit_beds[layout.unit_offset[h] + k];
            const double avail_cost = built.weights.unit_available[h][k];
            const double convert_cost = built.weights.unit_converted[h][k];
            const auto& day_cost = built.weights.capacity_day[h];
            std::size_t t = 0;
            while (t < days) {
                if (use[k][t] == 0.0 || t + 1 >= days || use[k][t + 1] == 1.0) {
                    ++t;
                    continue;
                }
                std::size_t end = t + 1;
                while (end < days && use[k][end] == 0.0) ++end;
                if (end == days) break;
                bool allowed = true;
                for (std::size_t s = t + 1; s < end && allowed; ++s)
                    allowed = upper_of(built, layout.use_var(h, k, s)) >= 1.0 && (k == 0 || use[k - 1][s] == 1.0);
                if (allowed) {
                    auto filled = use[k];
                    for (std::size_t s = t + 1; s < end; ++s) filled[s] = 1.0;
                    const double before = schedule_cost(derive(use[k], units[k].setup_days, units[k].teardown_days),
                                                        day_cost, beds, avail_cost, convert_cost);
                    const double after = schedule_cost(derive(filled, units[k].setup_days, units[k].teardown_days),
                                                       day_cost, beds, avail_cost, convert_cost);
                    if (after < before) use[k] = std::move(filled);
                }
                t = end;
            }
        }
        for (std::size_t k = 0; k < count; ++k) {
            const auto s = derive(use[k], units[k].setup_days, units[k].teardown_days);
            const std::size_t unit = layout.unit_offset[h] + k;
            for (std::size_t t = 0; t < days; ++t) {
                x[static_cast<std::size_t>(layout.use_vars[unit * days + t])] = s.use[t];
                x[static_cast<std::size_t>(layout.avail_vars[unit * days + t])] = s.avail[t];
                x[static_cast<std::size_t>(layout.convert_vars[unit * days + t])] = s.convert[t];
            }
        }
    }
    std::vector<double> top(layout.hospitals);
    for (std::size_t h = 0; h < layout.hospitals; ++h) {
        top[h] = built.baseline_beds[h];
        for (std::size_t k = 0; k < layout.unit_count[h]; ++k) top[h] += layout.unit_beds[layout.unit_offset[h] + k];
    }
    set_balance(built, x, top);
    return x;
}

}  // namespace

solver::PrimalHeuristic make_heuristic(const BuiltModel& built, const PlanRequest& request, const PlanData& data) {
    return [&built, &request, &data](std::span<const double> relaxation) -> std::optional<std::vector<double>> {
        std::vector<double> x(relaxation.begin(), relaxation.end());
        repair_transfers(built, data, request, x);
        if (built.complexity == ModelComplexity::complete) return complete_candidate(built, data, std::move(x));
        return simplified_candidate(built, std::move(x));
    };
}

}  // namespace surge::plan
