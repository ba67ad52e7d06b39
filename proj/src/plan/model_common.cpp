#include "model_common.hpp"

#include <algorithm>
#include <cmath>

namespace surge::plan {

std::vector<solver::Term> BuiltModel::census_expression(std::size_t h, std::size_t t) const {
    std::vector<solver::Term> terms;
    const std::size_t n = layout.hospitals;
    const std::size_t w = census.window(h);
    for (std::size_t age = 0; age < w && age <= t; ++age) {
        const double weight = census.weight(h, age);
        const std::size_t day = t - age;
        for (std::size_t g = 0; g < n; ++g) {
            if (g == h) continue;
            const int in = layout.transfer_var(g, h, day);
            const int out = layout.transfer_var(h, g, day);
            if (in >= 0 && model.variable(solver::VarId{in}).upper > 0.0) terms.push_back({solver::VarId{in}, weight});
            if (out >= 0 && model.variable(solver::VarId{out}).upper > 0.0)
                terms.push_back({solver::VarId{out}, -weight});
        }
    }
    return terms;
}

double BuiltModel::census_value(std::size_t h, std::size_t t, std::span<const double> values) const {
    double o = census.base(h, t);
    for (const auto& term : census_expression(h, t)) o += term.coef * values[static_cast<std::size_t>(term.var.index)];
    return o;
}

namespace detail {

std::string hospital_day_name(const char* prefix, const PlanData& data, std::size_t h, std::size_t t) {
    return std::string(prefix) + "[" + data.hospitals[h].id + "," + std::to_string(t) + "]";
}

void add_transfer_block(const PlanRequest& request, const PlanData& data, BuiltModel& built) {
    const std::size_t n = data.num_hospitals();
    const std::size_t days = data.num_days();
    auto& layout = built.layout;
    auto& model = built.model;
    layout.transfer_vars.assign(n * n * days, -1);
    const bool enabled = request.transfers_enabled() && n > 1;
    const double system = request.total_transfer_budget.value_or(solver::kInfinity);
    std::vector<double> budget(n, solver::kInfinity);
    for (std::size_t h = 0; h < n; ++h) budget[h] = request.budget_for(data.hospitals[h].id).value_or(solver::kInfinity);

    for (std::size_t h = 0; h < n; ++h)
        for (std::size_t g = 0; g < n; ++g) {
            if (g == h) continue;
            for (std::size_t t = 0; t < days; ++t) {
                double ub = 0.0;
                if (enabled) ub = std::min({data.arrivals(h, t), budget[h], budget[g], system});
                const auto v = model.add_variable(
                    "s[" + data.hospitals[h].id + "," + data.hospitals[g].id + "," + std::to_string(t) + "]", 0.0,
                    ub, solver::VarKind::continuous, built.weights.transfer[h][g]);
                layout.transfer_vars[(h * n + g) * days + t] = v.index;
            }
        }
    if (!enabled) return;

    for (std::size_t t = 0; t < days; ++t) {
        std::vector<solver::Term> all;
        for (std::size_t h = 0; h < n; ++h) {
            std::vector<solver::Term> out, in;
            for (std::size_t g = 0; g < n; ++g) {
                if (g == h) continue;
                out.push_back({solver::VarId{layout.transfer_var(h, g, t)}, 1.0});
                in.push_back({solver::VarId{layout.transfer_var(g, h, t)}, 1.0});
            }
            all.insert(all.end(), out.begin(), out.end());
            // Transfers divert arriving patients, so outbound never exceeds arrivals.
            const double out_cap = std::min(data.arrivals(h, t), budget[h]);
            model.add_constraint(hospital_day_name("out", data, h, t), std::move(out), solver::RowSense::less_equal,
                                 out_cap);
            if (std::isfinite(budget[h]))
                model.add_constraint(hospital_day_name("in", data, h, t), std::move(in), solver::RowSense::less_equal,
                                     budget[h]);
        }
        if (std::isfinite(system))
            model.add_constraint("system[" + std::to_string(t) + "]", std::move(all), solver::RowSense::less_equal,
                                 system);
    }
}

CensusRange census_range(const PlanData& data, const BuiltModel& built) {
    const std::size_t n = data.num_hospitals();
    const std::size_t days = data.num_days();
    DailyGrid out_max(n, days), in_max(n, days);
    for (std::size_t h = 0; h < n; ++h)
        for (std::size_t t = 0; t < days; ++t) {
            double out = 0.0, in = 0.0;
            for (std::size_t g = 0; g < n; ++g) {
                if (g == h) continue;
                out += built.model.variable(solver::VarId{built.layout.transfer_var(h, g, t)}).upper;
                in += built.model.variable(solver::VarId{built.layout.transfer_var(g, h, t)}).upper;
            }
            out_max(h, t) = std::min(out, data.arrivals(h, t));
            in_max(h, t) = in;
        }
    CensusRange range{built.census.base_grid(), built.census.base_grid()};
    for (std::size_t h = 0; h < n; ++h)
        for (std::size_t t = 0; t < days; ++t) {
            const std::size_t w = built.census.window(h);
            for (std::size_t age = 0; age < w && age <= t; ++age) {
                const double weight = built.census.weight(h, age);
                range.low(h, t) -= weight * out_max(h, t - age);
                range.high(h, t) += weight * in_max(h, t - age);
            }
        }
    return range;
}

void add_capacity_rows(BuiltModel& built, std::size_t h, std::size_t t, const std::vector<solver::Term>& capacity_terms,
                       double constant) {
    const auto census = built.census_expression(h, t);
    const double base = built.census.base(h, t);
    const double z = built.utilization.max_fraction;
    const std::string suffix = "[" + std::to_string(h) + "," + std::to_string(t) + "]";
    // census + base <= z * (capacity + constant)
    std::vector<solver::Term> row = census;
    for (const auto& term : capacity_terms) row.push_back({term.var, -z * term.coef});
    built.model.add_constraint("util" + suffix, std::move(row), solver::RowSense::less_equal, z * constant - base);
    if (built.utilization.headroom) {
        std::vector<solver::Term> head = census;
        for (const auto& term : capacity_terms) head.push_back({term.var, -term.coef});
        built.model.add_constraint("headroom" + suffix, std::move(head), solver::RowSense::less_equal,
                                   constant - *built.utilization.headroom - base);
    }
}

void add_step_cuts(BuiltModel& built, std::size_t h, std::size_t t, double high,
                   const std::vector<CapacityStep>& steps) {
    constexpr double kMargin = 1e-6;
    const auto census = built.census_expression(h, t);
    const double base = built.census.base(h, t);
    const std::string suffix = "[" + std::to_string(h) + "," + std::to_string(t) + ",";
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const CapacityStep& step = steps[i];
        if (high > step.off + kMargin && high < step.on - kMargin) {
            auto row = census;
            for (const auto& term : step.indicator) row.push_back({term.var, -(high - step.off) * term.coef});
            built.model.add_constraint("step" + suffix + std::to_string(i) + "]", std::move(row),
                                       solver::RowSense::less_equal, step.off - base);
        }
    }
}

void add_relief_cut(BuiltModel& built, std::size_t h, std::size_t t, const std::vector<CapacityChoice>& choices) {
    constexpr double kMargin = 1e-6;
    const double base = built.census.base(h, t);
    std::vector<solver::Term> row;
    double rhs = 0.0;
    for (const auto& choice : choices) {
        const double need = base - choice.usable;
        if (need <= kMargin) continue;
        rhs -= need * choice.constant;
        for (const auto& term : choice.indicator) row.push_back({term.var, need * term.coef});
    }
    if (row.empty() && rhs >= 0.0) return;
    for (const auto& term : built.census_expression(h, t))
        if (term.coef < 0.0) row.push_back(term);
    built.model.add_constraint("relief[" + std::to_string(h) + "," + std::to_string(t) + "]", std::move(row),
                               solver::RowSense::less_equal, rhs);
}

void add_balance_rows(BuiltModel& built, const std::vector<double>& top_beds) {
    const auto m = built.model.add_variable("m", 0.0, solver::kInfinity, solver::VarKind::continuous, 1.0);
    built.layout.balance_var = m.index;
    const double z = built.utilization.max_fraction;
    for (std::size_t h = 0; h < built.layout.hospitals; ++h) {
        const double denom = z * top_beds[h];
        if (!(denom > 0.0)) continue;
        for (std::size_t t = 0; t < built.layout.days; ++t) {
            auto row = built.census_expression(h, t);
            row.push_back({m, -denom});
            built.model.add_constraint("balance[" + std::to_string(h) + "," + std::to_string(t) + "]", std::move(row),
                                       solver::RowSense::less_equal, -built.census.base(h, t));
        }
    }
}

}  // namespace detail
}  // namespace surge::plan
