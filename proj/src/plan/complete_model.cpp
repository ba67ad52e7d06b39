#include <algorithm>
#include <cmath>
#include <optional>

#include "model_common.hpp"
#include "surge/plan/models.hpp"

namespace surge::plan {

namespace {

constexpr double kCoverTol = 1e-9;

}  // namespace

BuiltModel build_complete(const PlanRequest& request, const PlanData& data, const ModelBuildOptions& options) {
    request.validate();
    data.validate();
    if (data.num_days() == 0) throw ValidationError("horizon", "horizon has no days");
    if (!data.units) throw ValidationError("units", "the complete model needs a unit catalog");

    const std::size_t n = data.num_hospitals();
    const std::size_t days = data.num_days();
    BuiltModel built{.model = {}, .layout = {}, .weights = make_weights(request, data), .census = CensusTerms(data)};
    built.complexity = ModelComplexity::complete;
    built.surge_capacity = request.surge_capacity;
    built.utilization = request.utilization();
    auto& layout = built.layout;
    layout.hospitals = n;
    layout.days = days;
    layout.levels = data.ladder.size();

    const auto kind =
        request.surge_capacity == SurgeCapacityType::discrete ? solver::VarKind::binary : solver::VarKind::continuous;
    std::vector<double> top(n);
    for (std::size_t h = 0; h < n; ++h) {
        const HospitalProfile& p = data.hospitals[h];
        built.baseline_beds.push_back(p.beds(0));
        std::vector<double> beds;
        for (std::size_t l = 0; l < data.ladder.size(); ++l) beds.push_back(p.beds(l));
        built.level_beds.push_back(std::move(beds));
        const auto& units = data.units->for_hospital(p.id);
        layout.unit_offset.push_back(layout.unit_beds.size());
        layout.unit_count.push_back(units.size());
        top[h] = p.beds(0);
        for (const Unit& u : units) {
            layout.unit_beds.push_back(u.beds);
            top[h] += u.beds;
        }
    }
    const std::size_t total_units = layout.unit_beds.size();
    layout.use_vars.assign(total_units * days, -1);
    layout.avail_vars.assign(total_units * days, -1);
    layout.convert_vars.assign(total_units * days, -1);

    for (std::size_t h = 0; h < n; ++h) {
        const auto& units = data.units->for_hospital(data.hospitals[h].id);
        for (std::size_t k = 0; k < units.size(); ++k) {
            const std::size_t unit = layout.unit_offset[h] + k;
            const std::string tag = data.hospitals[h].id + "," + units[k].id + ",";
            for (std::size_t t = 0; t < days; ++t) {
                const std::string key = tag + std::to_string(t) + "]";
                layout.use_vars[unit * days + t] =
                    built.model.add_variable("u[" + key, 0, 1, kind, built.weights.capacity_day[h][t] * units[k].beds).index;
                layout.avail_vars[unit * days + t] =
                    built.model.add_variable("uhat[" + key, 0, 1, kind, built.weights.unit_available[h][k]).index;
                layout.convert_vars[unit * days + t] =
                    built.model.add_variable("ucheck[" + key, 0, 1, kind, built.weights.unit_converted[h][k]).index;
            }
        }
    }

    detail::add_transfer_block(request, data, built);

    auto use = [&](std::size_t h, std::size_t k, std::size_t t) { return solver::VarId{layout.use_var(h, k, t)}; };
    auto avail = [&](std::size_t h, std::size_t k, std::size_t t) {
        return solver::VarId{layout.avail_vars[(layout.unit_offset[h] + k) * days + t]};
    };
    auto convert = [&](std::size_t h, std::size_t k, std::size_t t) {
        return solver::VarId{layout.convert_vars[(layout.unit_offset[h] + k) * days + t]};
    };

    // Open prefix needed to reach `beds` of usable capacity, or units+1.
    auto prefix_for = [&](std::size_t h, double census) {
        double cap = built.baseline_beds[h];
        std::size_t count = 0;
        while (built.utilization.usable(cap) < census - kCoverTol) {
            if (count == layout.unit_count[h]) return count + 1;
            cap += layout.unit_beds[layout.unit_offset[h] + count];
            ++count;
        }
        return count;
    };

    if (request.recommendation == RecommendationType::transfers_only) {
        for (std::size_t h = 0; h < n; ++h) {
            auto it = request.current_level.find(data.hospitals[h].id);
            const std::size_t level = it == request.current_level.end() ? 0 : *data.ladder.index_of(it->second);
            const double extra = data.hospitals[h].beds(level) - built.baseline_beds[h];
            double opened = 0.0;
            for (std::size_t k = 0; k < layout.unit_count[h]; ++k) {
                const double v = opened < extra - kCoverTol ? 1.0 : 0.0;
                opened += v * layout.unit_beds[layout.unit_offset[h] + k];
                for (std::size_t t = 0; t < days; ++t) built.model.set_bounds(use(h, k, t), v, v);
            }
        }
    }
    std::optional<detail::CensusRange> range;
    if (request.recommendation != RecommendationType::transfers_only && options.presolve &&
        kind == solver::VarKind::binary)
        range = detail::census_range(data, built);
    if (range) {
        // Units every reachable census needs are forced open.
        for (std::size_t h = 0; h < n; ++h)
            for (std::size_t t = 0; t < days; ++t) {
                const std::size_t need = std::min(prefix_for(h, range->low(h, t)), layout.unit_count[h]);
                for (std::size_t k = 0; k < need; ++k) {
                    built.model.set_bounds(use(h, k, t), 1.0, 1.0);
                    ++built.presolve_fixed;
                }
            }
    }

    std::size_t dropped = 0;
    for (std::size_t h = 0; h < n; ++h) {
        const auto& units = data.units->for_hospital(data.hospitals[h].id);
        for (std::size_t k = 0; k < units.size(); ++k) {
            const auto teardown = static_cast<std::size_t>(units[k].teardown_days);
            const auto setup = static_cast<std::size_t>(units[k].setup_days);
            const std::string tag = "[" + data.hospitals[h].id + "," + units[k].id + ",";
            for (std::size_t t = 0; t < days; ++t) {
                const std::string key = tag + std::to_string(t) + "]";
                built.model.add_constraint("avail" + key, {{use(h, k, t), 1.0}, {avail(h, k, t), -1.0}},
                                           solver::RowSense::less_equal, 0.0);
                if (teardown > 0) {
                    if (t >= teardown)
                        built.model.add_constraint("avail_lag" + key, {{use(h, k, t), 1.0}, {avail(h, k, t - teardown), -1.0}},
                                                   solver::RowSense::less_equal, 0.0);
                    else
                        ++dropped;
                }
                if (setup > 0) {
                    if (t + setup < days)
                        built.model.add_constraint("avail_lead" + key, {{use(h, k, t), 1.0}, {avail(h, k, t + setup), -1.0}},
                                                   solver::RowSense::less_equal, 0.0);
                    else
                        ++dropped;
                }
                if (t == 0)
                    built.model.add_constraint("convert" + key, {{convert(h, k, t), 1.0}, {use(h, k, t), -1.0}},
                                               solver::RowSense::equal, 0.0);
                else
                    built.model.add_constraint(
                        "convert" + key, {{convert(h, k, t), 1.0}, {use(h, k, t), -1.0}, {use(h, k, t - 1), 1.0}},
                        solver::RowSense::greater_equal, 0.0);
                if (k > 0)
                    built.model.add_constraint("order" + key, {{use(h, k, t), 1.0}, {use(h, k - 1, t), -1.0}},
                                               solver::RowSense::less_equal, 0.0);
            }
        }
    }
    if (dropped > 0)
        built.warnings.push_back(std::to_string(dropped) +
                                 " availability constraints reference days outside the horizon and were dropped");

    for (std::size_t h = 0; h < n; ++h)
        for (std::size_t t = 0; t < days; ++t) {
            std::vector<solver::Term> capacity;
            for (std::size_t k = 0; k < layout.unit_count[h]; ++k)
                capacity.push_back({use(h, k, t), layout.unit_beds[layout.unit_offset[h] + k]});
            detail::add_capacity_rows(built, h, t, capacity, built.baseline_beds[h]);
            if (!range) continue;
            // Capacity with the first j units open, j = 0..count.
            double beds = built.baseline_beds[h];
            std::vector<detail::CapacityStep> steps;
            std::vector<detail::CapacityChoice> choices;
            for (std::size_t k = 0; k <= layout.unit_count[h]; ++k) {
                const double off = built.utilization.usable(beds);
                detail::CapacityChoice choice{off, k == 0 ? 1.0 : 0.0, {}};
                if (k > 0) choice.indicator.push_back({use(h, k - 1, t), 1.0});
                if (k < layout.unit_count[h]) {
                    choice.indicator.push_back({use(h, k, t), -1.0});
                    beds += layout.unit_beds[layout.unit_offset[h] + k];
                    steps.push_back({off, built.utilization.usable(beds), {{use(h, k, t), 1.0}}});
                }
                choices.push_back(std::move(choice));
            }
            detail::add_step_cuts(built, h, t, range->high(h, t), steps);
            detail::add_relief_cut(built, h, t, choices);
        }

    if (built.weights.balance_load) detail::add_balance_rows(built, top);
    return built;
}

}  // namespace surge::plan
