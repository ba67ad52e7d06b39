#include <algorithm>
#include <cmath>

#include "model_common.hpp"
#include "surge/plan/plan.hpp"

namespace surge::plan {

namespace {

constexpr double kHintTol = 1e-9;

/// Names the constraint family that makes the model infeasible, judged from
/// census bounds alone. Falls back to the transfer limits.
std::string infeasibility_hint(const PlanRequest& request, const PlanData& data, const BuiltModel& built,
                               std::string& detail) {
    const auto range = detail::census_range(data, built);
    const Utilization& util = built.utilization;
    for (std::size_t h = 0; h < built.layout.hospitals; ++h) {
        double top = built.level_beds[h].back();
        if (built.complexity == ModelComplexity::complete) {
            top = built.baseline_beds[h];
            for (std::size_t k = 0; k < built.layout.unit_count[h]; ++k)
                top += built.layout.unit_beds[built.layout.unit_offset[h] + k];
        }
        for (std::size_t t = 0; t < built.layout.days; ++t)
            if (util.usable(top) < range.low(h, t) - kHintTol) {
                detail = data.hospitals[h].id + " on " + data.horizon.date_at(static_cast<int>(t)).iso() +
                         ": census of at least " + std::to_string(range.low(h, t)) + " exceeds usable capacity " +
                         std::to_string(util.usable(top));
                return "capacity";
            }
    }
    if (request.recommendation == RecommendationType::transfers_only) {
        detail = "levels are fixed at the current level and transfers cannot absorb the demand";
        return "current_level";
    }
    detail = "transfer limits leave no way to keep every census within capacity";
    return request.total_transfer_budget ? "total_transfer_budget" : "transfer_budget";
}

}  // namespace

solver::SolveOptions default_solve_options(const PlanRequest& request) {
    solver::SolveOptions options;
    options.time_limit_seconds = request.timeout_s.value_or(kDefaultTimeLimit);
    if (request.complexity == ModelComplexity::complete) options.acceptable_gap = kCompleteAcceptableGap;
    return options;
}

CapacityPlan run_plan(const PlanRequest& request, const PlanData& data, const PlanOptions& options) {
    request.validate();
    data.validate();
    if (request.complexity == ModelComplexity::complete && !data.units)
        throw ValidationError("model_complexity", "the complete model needs a unit catalog (units.csv)");
    const BuiltModel built = request.complexity == ModelComplexity::complete
                                 ? build_complete(request, data, options.build)
                                 : build_simplified(request, data, options.build);
    solver::SolveOptions solve = options.solve.value_or(default_solve_options(request));
    if (options.heuristic && !solve.heuristic) solve.heuristic = make_heuristic(built, request, data);

    const auto result = solver::solve_mip(built.model, solve);
    switch (result.status) {
        case solver::SolveStatus::optimal:
        case solver::SolveStatus::feasible_gap:
            break;
        case solver::SolveStatus::infeasible: {
            std::string detail;
            std::string hint = infeasibility_hint(request, data, built, detail);
            throw PlanError(PlanError::Kind::infeasible, hint, "model is infeasible (" + hint + "): " + detail);
        }
        case solver::SolveStatus::unbounded:
            throw PlanError(PlanError::Kind::unbounded, "objective", "model is unbounded");
        case solver::SolveStatus::limit_hit:
            if (!result.has_solution())
                throw PlanError(PlanError::Kind::timeout, "timeout_s",
                                "solver stopped at its limit without a feasible plan");
            break;
    }
    return decode_plan(request, built, result, data);
}

}  // namespace surge::plan
