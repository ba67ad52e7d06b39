#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "surge/core/projection.hpp"
#include "surge/plan/models.hpp"
#include "surge/solver/solve.hpp"

namespace surge::plan {

/// Solver values disagree with the core projection; points at a builder bug.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// The solve produced no usable plan.
class PlanError : public std::runtime_error {
public:
    enum class Kind { infeasible, timeout, unbounded };
    PlanError(Kind kind, std::string hint, const std::string& message)
        : std::runtime_error(message), kind_(kind), hint_(std::move(hint)) {}
    Kind kind() const noexcept { return kind_; }
    /// Constraint family most likely responsible, e.g. "capacity" or "transfer_budget".
    const std::string& hint() const noexcept { return hint_; }

private:
    Kind kind_;
    std::string hint_;
};

struct CapacityPlan {
    PlanRequest request;
    std::vector<std::string> hospital_ids;
    std::vector<std::string> level_names;
    Horizon horizon;
    /// Level index per hospital and day. For continuous or unit capacity this
    /// is the smallest level whose beds cover the capacity, or kOverflowLevel.
    std::vector<std::vector<int>> levels;
    /// Staffed beds c[h][t].
    DailyGrid capacity;
    /// Complete model only: unit ids and open flags [h][k][t].
    std::vector<std::vector<std::string>> unit_ids;
    std::vector<std::vector<std::vector<double>>> unit_use;
    TransferSeries transfers;
    ProjectionResult projection;
    /// Same arrivals with every transfer removed.
    ProjectionResult baseline;
    double objective = 0.0;
    double bound = 0.0;
    solver::SolveStatus status = solver::SolveStatus::optimal;
    std::int64_t nodes = 0;
    std::int64_t simplex_iterations = 0;
    double wall_seconds = 0.0;
    std::vector<std::string> warnings;

    /// Largest o[h][t] - usable(c[h][t]); non-positive for a feasible plan.
    double max_shortage() const;
};

/// Reads levels, units and transfers out of a solution and recomputes the
/// projection through the core arithmetic. Throws ConsistencyError when the
/// recomputed census disagrees with the solver's census beyond 1e-6.
CapacityPlan decode_plan(const PlanRequest& request, const BuiltModel& built, const solver::SolveResult& result,
                         const PlanData& data);

struct PlanOptions {
    ModelBuildOptions build;
    /// Replaces the defaults derived from the request when set.
    std::optional<solver::SolveOptions> solve;
    bool heuristic = true;
};

inline constexpr double kDefaultTimeLimit = 60.0;
inline constexpr double kCompleteAcceptableGap = 0.01;

/// Solver settings for a request: the request's timeout (default 60 s) and a
/// 1% acceptable gap for the complete model.
solver::SolveOptions default_solve_options(const PlanRequest& request);

/// Build, solve and decode. Throws ValidationError for bad input and
/// PlanError when no plan comes back.
CapacityPlan run_plan(const PlanRequest& request, const PlanData& data, const PlanOptions& options = {});

}  // namespace surge::plan
