#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "surge/solver/mip_model.hpp"

namespace surge::solver {

enum class SolveStatus { optimal, feasible_gap, infeasible, unbounded, limit_hit };

std::string_view status_name(SolveStatus status);

/// Candidate completion of a relaxation solution. The solver re-checks every
/// candidate against the model before accepting it as an incumbent.
using PrimalHeuristic = std::function<std::optional<std::vector<double>>(std::span<const double> relaxation)>;

struct SolveOptions {
    double relative_gap_tol = 1e-6;
    double absolute_feas_tol = 1e-7;
    std::int64_t node_limit = 200'000;
    double time_limit_seconds = 60.0;
    /// Stop early once the relative gap falls to this value; the result then
    /// carries status feasible_gap. Zero disables the early stop.
    double acceptable_gap = 0.0;
    /// Run the heuristic every this many nodes (always at the root).
    int heuristic_frequency = 25;
    PrimalHeuristic heuristic;
    /// After an improving incumbent, fix its integer part and re-solve the
    /// continuous part.
    bool polish_incumbents = true;

    void validate() const;
};

struct SolveResult {
    SolveStatus status = SolveStatus::limit_hit;
    std::vector<double> values;
    double objective = kInfinity;
    double bound = -kInfinity;
    std::int64_t nodes = 0;
    std::int64_t simplex_iterations = 0;
    double wall_seconds = 0.0;

    bool has_solution() const { return !values.empty(); }
    double relative_gap() const;
};

/// Continuous relaxation: binaries become [0, 1], each SOS1 group keeps only
/// its convexity row.
SolveResult solve_lp(const MipModel& model, const SolveOptions& options = {});

/// Best-bound branch and bound over LP relaxations. SOS1 groups are branched
/// first, in declaration order, split at the weight-weighted mean of the
/// relaxation values; free binaries are branched most-fractional first.
SolveResult solve_mip(const MipModel& model, const SolveOptions& options = {});

}  // namespace surge::solver
