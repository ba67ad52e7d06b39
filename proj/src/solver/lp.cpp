#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "lp_form.hpp"
#include "simplex.hpp"
#include "surge/solver/solve.hpp"

namespace surge::solver {

std::string_view status_name(SolveStatus status) {
    switch (status) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::feasible_gap: return "feasible_gap";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::unbounded: return "unbounded";
        case SolveStatus::limit_hit: return "limit_hit";
    }
    return "unknown";
}

void SolveOptions::validate() const {
    if (!(relative_gap_tol >= 0.0)) throw std::invalid_argument("relative_gap_tol must be non-negative");
    if (!(absolute_feas_tol > 0.0)) throw std::invalid_argument("absolute_feas_tol must be positive");
    if (node_limit < 1) throw std::invalid_argument("node_limit must be at least 1");
    if (!(time_limit_seconds > 0.0)) throw std::invalid_argument("time_limit_seconds must be positive");
    if (!(acceptable_gap >= 0.0)) throw std::invalid_argument("acceptable_gap must be non-negative");
    if (heuristic_frequency < 1) throw std::invalid_argument("heuristic_frequency must be at least 1");
}

double SolveResult::relative_gap() const {
    if (!has_solution()) return kInfinity;
    if (!std::isfinite(bound)) return kInfinity;
    return std::max(0.0, objective - bound) / std::max(1.0, std::fabs(objective));
}

namespace detail {

LpForm build_relaxation(const MipModel& model) {
    model.validate();
    LpForm f;
    f.n = static_cast<int>(model.num_variables());
    const auto& rows = model.constraints();
    const auto& groups = model.sos1_groups();
    f.m = static_cast<int>(rows.size() + groups.size());
    f.objective_constant = model.objective_constant();

    const auto total = static_cast<std::size_t>(f.n + f.m);
    f.cost.assign(total, 0.0);
    f.lower.assign(total, 0.0);
    f.upper.assign(total, 0.0);
    f.row_scale.assign(static_cast<std::size_t>(f.m), 1.0);
    for (int j = 0; j < f.n; ++j) {
        const Variable& v = model.variables()[static_cast<std::size_t>(j)];
        f.cost[static_cast<std::size_t>(j)] = model.costs()[static_cast<std::size_t>(j)];
        f.lower[static_cast<std::size_t>(j)] = v.lower;
        f.upper[static_cast<std::size_t>(j)] = v.upper;
    }

    f.row_start.assign(1, 0);
    auto push_row = [&](const std::vector<Term>& terms, double lo, double hi) {
        const auto i = static_cast<std::size_t>(f.row_start.size() - 1);
        double biggest = 0.0;
        for (const Term& t : terms) biggest = std::max(biggest, std::fabs(t.coef));
        const double s = biggest > 0.0 ? 1.0 / biggest : 1.0;
        f.row_scale[i] = s;
        for (const Term& t : terms) {
            f.row_col.push_back(t.var.index);
            f.row_val.push_back(t.coef * s);
        }
        f.row_start.push_back(static_cast<int>(f.row_col.size()));
        f.lower[static_cast<std::size_t>(f.n) + i] = lo * s;
        f.upper[static_cast<std::size_t>(f.n) + i] = hi * s;
    };
    for (const Constraint& c : rows) {
        const double lo = c.sense == RowSense::less_equal ? -kInfinity : c.rhs;
        const double hi = c.sense == RowSense::greater_equal ? kInfinity : c.rhs;
        push_row(c.terms, lo, hi);
    }
    for (const Sos1Group& g : groups) {
        std::vector<Term> terms;
        for (VarId v : g.members) terms.push_back(Term{v, 1.0});
        push_row(terms, 1.0, 1.0);
    }

    // Column-major copy.
    f.col_start.assign(static_cast<std::size_t>(f.n) + 1, 0);
    for (int c : f.row_col) ++f.col_start[static_cast<std::size_t>(c) + 1];
    for (int j = 0; j < f.n; ++j) f.col_start[static_cast<std::size_t>(j) + 1] += f.col_start[static_cast<std::size_t>(j)];
    f.col_row.resize(f.row_col.size());
    f.col_val.resize(f.row_col.size());
    std::vector<int> fill(f.col_start.begin(), f.col_start.end() - 1);
    for (int i = 0; i < f.m; ++i) {
        for (int e = f.row_start[static_cast<std::size_t>(i)]; e < f.row_start[static_cast<std::size_t>(i) + 1]; ++e) {
            const int c = f.row_col[static_cast<std::size_t>(e)];
            const auto slot = static_cast<std::size_t>(fill[static_cast<std::size_t>(c)]++);
            f.col_row[slot] = i;
            f.col_val[slot] = f.row_val[static_cast<std::size_t>(e)];
        }
    }
    return f;
}

}  // namespace detail

SolveResult solve_lp(const MipModel& model, const SolveOptions& options) {
    options.validate();
    const auto start = std::chrono::steady_clock::now();
    detail::Simplex simplex(detail::build_relaxation(model));
    detail::SimplexLimits limits;
    limits.deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                  std::chrono::duration<double>(options.time_limit_seconds));
    const detail::LpOutcome outcome = simplex.solve(limits);

    SolveResult result;
    result.simplex_iterations = simplex.iterations();
    switch (outcome) {
        case detail::LpOutcome::optimal:
            result.status = SolveStatus::optimal;
            result.values = simplex.structural_values();
            result.objective = model.evaluate_objective(result.values);
            result.bound = result.objective;
            break;
        case detail::LpOutcome::infeasible: result.status = SolveStatus::infeasible; break;
        case detail::LpOutcome::unbounded: result.status = SolveStatus::unbounded; break;
        case detail::LpOutcome::iteration_limit:
        case detail::LpOutcome::time_limit: result.status = SolveStatus::limit_hit; break;
    }
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace surge::solver
