#include <algorithm>
#include <cmath>
#include <optional>

#include "model_common.hpp"
#include "surge/plan/models.hpp"

namespace surge::plan {

namespace {

constexpr double kCoverTol = 1e-9;

std::size_t fixed_level_of(const PlanRequest& request, const PlanData& data, std::size_t h) {
    auto it = request.current_level.find(data.hospitals[h].id);
    if (it == request.current_level.end()) return 0;
    return *data.ladder.index_of(it->second);
}

}  // namespace

BuiltModel build_simplified(const PlanRequest& request, const PlanData& data, const ModelBuildOptions& options) {
    request.validate();
    data.validate();
    if (data.num_days() == 0) throw ValidationError("horizon", "horizon has no days");

    const std::size_t n = data.num_hospitals();
    const std::size_t days = data.num_days();
    const std::size_t levels = data.ladder.size();
    BuiltModel built{.model = {}, .layout = {}, .weights = make_weights(request, data), .census = CensusTerms(data)};
    built.complexity = ModelComplexity::fast;
    built.surge_capacity = request.surge_capacity;
    built.utilization = request.utilization();
    for (const auto& p : data.hospitals) {
        built.baseline_beds.push_back(p.beds(0));
        std::vector<double> beds;
        for (std::size_t l = 0; l < data.ladder.size(); ++l) beds.push_back(p.beds(l));
        built.level_beds.push_back(std::move(beds));
    }
    auto& layout = built.layout;
    layout.hospitals = n;
    layout.days = days;
    layout.levels = levels;

    const bool discrete = request.surge_capacity == SurgeCapacityType::discrete;
    const auto kind = discrete ? solver::VarKind::binary : solver::VarKind::continuous;
    layout.level_vars.assign(n * days * levels, -1);
    // Selector groups are declared in (day, hospital) order, which is the
    // order branch and bound visits them.
    for (std::size_t t = 0; t < days; ++t)
        for (std::size_t h = 0; h < n; ++h)
            for (std::size_t l = 0; l < levels; ++l) {
                const auto v = built.model.add_variable(
                    "u[" + data.hospitals[h].id + "," + std::to_string(t) + "," + data.ladder.levels[l] + "]", 0.0, 1.0,
                    kind, built.weights.level[h][l]);
                layout.level_vars[(h * days + t) * levels + l] = v.index;
            }

    detail::add_transfer_block(request, data, built);

    const bool levels_fixed = request.recommendation == RecommendationType::transfers_only;
    if (levels_fixed) {
        for (std::size_t h = 0; h < n; ++h) {
            const std::size_t current = fixed_level_of(request, data, h);
            for (std::size_t t = 0; t < days; ++t)
                for (std::size_t l = 0; l < levels; ++l) {
                    const double v = l == current ? 1.0 : 0.0;
                    built.model.set_bounds(solver::VarId{layout.level_var(h, t, l)}, v, v);
                }
        }
    }
    std::optional<detail::CensusRange> range;
    if (!levels_fixed && options.presolve && discrete) range = detail::census_range(data, built);
    if (range) {
        const Utilization& util = built.utilization;
        for (std::size_t h = 0; h < n; ++h) {
            const HospitalProfile& p = data.hospitals[h];
            const bool monotone = built.weights.levels_monotone(h);
            for (std::size_t t = 0; t < days; ++t) {
                bool covered = false;
                for (std::size_t l = 0; l < levels; ++l) {
                    const double usable = util.usable(p.beds(l));
                    const bool too_small = usable < range->low(h, t) - kCoverTol;
                    // Once a level covers every reachable census, dearer
                    // levels above it can never help.
                    const bool dominated = monotone && covered;
                    if (too_small || dominated) {
                        built.model.set_bounds(solver::VarId{layout.level_var(h, t, l)}, 0.0, 0.0);
                        ++built.presolve_fixed;
                    }
                    if (usable >= range->high(h, t) - kCoverTol) covered = true;
                }
            }
        }
    }

    for (std::size_t t = 0; t < days; ++t)
        for (std::size_t h = 0; h < n; ++h) {
            std::vector<solver::VarId> members;
            std::vector<double> beds;
            std::vector<solver::Term> capacity;
            for (std::size_t l = 0; l < levels; ++l) {
                const solver::VarId v{layout.level_var(h, t, l)};
                members.push_back(v);
                beds.push_back(data.hospitals[h].beds(l));
                capacity.push_back({v, data.hospitals[h].beds(l)});
            }
            const std::string name = detail::hospital_day_name("level", data, h, t);
            if (discrete) {
                built.model.add_sos1(name, members, beds);
            } else {
                std::vector<solver::Term> convex;
                for (auto v : members) convex.push_back({v, 1.0});
                built.model.add_constraint(name, std::move(convex), solver::RowSense::equal, 1.0);
            }
            detail::add_capacity_rows(built, h, t, capacity, 0.0);
            if (range) {
                std::vector<detail::CapacityStep> steps;
                for (std::size_t l = 0; l + 1 < levels; ++l) {
                    detail::CapacityStep step{built.utilization.usable(data.hospitals[h].beds(l)),
                                              built.utilization.usable(data.hospitals[h].beds(l + 1)),
                                              {}};
                    for (std::size_t k = l + 1; k < levels; ++k) step.indicator.push_back({members[k], 1.0});
                    steps.push_back(std::move(step));
                }
                detail::add_step_cuts(built, h, t, range->high(h, t), steps);
                std::vector<detail::CapacityChoice> choices;
                for (std::size_t l = 0; l < levels; ++l)
                    choices.push_back({built.utilization.usable(data.hospitals[h].beds(l)), 0.0, {{members[l], 1.0}}});
                detail::add_relief_cut(built, h, t, choices);
            }
        }

    if (built.weights.balance_load) {
        std::vector<double> top;
        for (const auto& p : data.hospitals) top.push_back(p.beds(levels - 1));
        detail::add_balance_rows(built, top);
    }
    return built;
}

}  // namespace surge::plan
