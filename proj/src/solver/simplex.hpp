#pragma once

// Bounded-variable simplex over an LpForm. The object keeps its basis and
// factorization between calls, so a branch-and-bound driver can change
// bounds and re-optimize from the previous optimum (usually a handful of dual
// simplex pivots).

#include <chrono>
#include <cstdint>
#include <span>
#include <vector>

#include "basis_factor.hpp"
#include "lp_form.hpp"

namespace surge::solver::detail {

enum class LpOutcome { optimal, infeasible, unbounded, iteration_limit, time_limit };

struct SimplexLimits {
    std::chrono::steady_clock::time_point deadline = std::chrono::steady_clock::time_point::max();
    std::int64_t max_iterations = 5'000'000;
};

class Simplex {
public:
    explicit Simplex(LpForm form);

    LpOutcome solve(const SimplexLimits& limits = {});

    /// Bounds of column j (structural, or logical n + i in scaled units).
    void set_bounds(int j, double lower, double upper);
    double lower(int j) const { return lower_[static_cast<std::size_t>(j)]; }
    double upper(int j) const { return upper_[static_cast<std::size_t>(j)]; }

    const LpForm& form() const { return form_; }
    /// Structural values of the current basic solution.
    std::vector<double> structural_values() const;
    double value(int j) const;
    double objective() const;
    /// Reduced cost of a nonbasic column after an optimal solve, else 0.
    double reduced_cost(int j) const { return d_[static_cast<std::size_t>(j)]; }
    bool is_basic(int j) const { return status_[static_cast<std::size_t>(j)] == Status::basic; }
    std::int64_t iterations() const { return iterations_; }

private:
    enum class Status : unsigned char { basic, at_lower, at_upper, at_zero };
    enum class PhaseResult { optimal, infeasible, unbounded, need_primal, limit_iter, limit_time, restart };

    void reinvert();
    void reset_to_slack_basis();
    void place_nonbasic(int j);
    void compute_primal();
    void compute_duals();
    bool make_dual_feasible();
    bool primal_feasible(double tol) const;

    PhaseResult dual_phase(const SimplexLimits& limits);
    PhaseResult primal_phase(const SimplexLimits& limits);
    bool limits_hit(const SimplexLimits& limits, PhaseResult& why) const;

    void load_column(int j, std::vector<double>& dense) const;
    double column_dot(int j, std::span<const double> dense) const;
    void compute_pivot_row();
    void pivot(int r, int q, double entering_value, Status leaving_status, double leaving_value);

    double basic_value(int pos) const { return xb_[static_cast<std::size_t>(pos)]; }
    bool is_fixed(int j) const { return lower_[static_cast<std::size_t>(j)] == upper_[static_cast<std::size_t>(j)]; }

    LpForm form_;
    BasisFactor factor_;
    int n_ = 0;
    int m_ = 0;

    std::vector<double> lower_;
    std::vector<double> upper_;
    std::vector<int> head_;         // basis position -> column
    std::vector<int> position_;     // column -> basis position or -1
    std::vector<Status> status_;
    std::vector<double> x_;         // nonbasic values (basic entries stale)
    std::vector<double> xb_;        // basic values by position
    std::vector<double> d_;         // reduced costs, zero for basic columns

    std::vector<double> rho_;
    std::vector<double> alpha_col_;
    std::vector<double> alpha_row_;
    std::vector<double> work_;

    bool factored_ = false;
    std::int64_t iterations_ = 0;
    std::int64_t degenerate_run_ = 0;
};

}  // namespace surge::solver::detail
