#include "simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "surge/kernels.hpp"

namespace surge::solver::detail {

namespace {

constexpr double kPrimalTol = 1e-9;
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kVerifyTol = 1e-7;
constexpr int kRefactorInterval = 100;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

Simplex::Simplex(LpForm form) : form_(std::move(form)), factor_(form_), n_(form_.n), m_(form_.m) {
    lower_ = form_.lower;
    upper_ = form_.upper;
    const auto total = static_cast<std::size_t>(n_ + m_);
    head_.resize(static_cast<std::size_t>(m_));
    position_.assign(total, -1);
    status_.assign(total, Status::at_lower);
    x_.assign(total, 0.0);
    xb_.assign(static_cast<std::size_t>(m_), 0.0);
    d_.assign(total, 0.0);
    rho_.assign(static_cast<std::size_t>(m_), 0.0);
    alpha_col_.assign(static_cast<std::size_t>(m_), 0.0);
    alpha_row_.assign(total, 0.0);
    work_.assign(static_cast<std::size_t>(m_), 0.0);
    reset_to_slack_basis();
}

void Simplex::reset_to_slack_basis() {
    for (int j = 0; j < n_; ++j) {
        position_[static_cast<std::size_t>(j)] = -1;
        status_[static_cast<std::size_t>(j)] = form_.cost[static_cast<std::size_t>(j)] < 0.0 ? Status::at_upper
                                                                                           : Status::at_lower;
        place_nonbasic(j);
    }
    for (int i = 0; i < m_; ++i) {
        const int j = n_ + i;
        head_[static_cast<std::size_t>(i)] = j;
        position_[static_cast<std::size_t>(j)] = i;
        status_[static_cast<std::size_t>(j)] = Status::basic;
    }
    factored_ = false;
}

// Puts a nonbasic column on a finite bound, keeping its current side when it
// can; free columns sit at zero.
void Simplex::place_nonbasic(int j) {
    const auto k = static_cast<std::size_t>(j);
    const double l = lower_[k];
    const double u = upper_[k];
    Status want = status_[k];
    if (want == Status::at_upper && std::isfinite(u)) {
        x_[k] = u;
        return;
    }
    if (want == Status::at_lower && std::isfinite(l)) {
        x_[k] = l;
        return;
    }
    if (std::isfinite(l)) {
        status_[k] = Status::at_lower;
        x_[k] = l;
    } else if (std::isfinite(u)) {
        status_[k] = Status::at_upper;
        x_[k] = u;
    } else {
        status_[k] = Status::at_zero;
        x_[k] = 0.0;
    }
}

void Simplex::set_bounds(int j, double lower, double upper) {
    const auto k = static_cast<std::size_t>(j);
    lower_[k] = lower;
    upper_[k] = upper;
    if (status_[k] == Status::basic) return;
    if (status_[k] == Status::at_zero) status_[k] = Status::at_lower;
    // Keep the side that agrees with the reduced cost so the basis stays
    // dual feasible whenever possible.
    if (std::isfinite(lower) && std::isfinite(upper))
        status_[k] = d_[k] < 0.0 ? Status::at_upper : Status::at_lower;
    place_nonbasic(j);
}

void Simplex::reinvert() {
    if (!factor_.refactor(head_)) {
        reset_to_slack_basis();
        factor_.refactor(head_);
    }
    factored_ = true;
}

void Simplex::load_column(int j, std::vector<double>& dense) const {
    std::fill(dense.begin(), dense.end(), 0.0);
    if (j >= n_) {
        dense[static_cast<std::size_t>(j - n_)] = -1.0;
        return;
    }
    for (int k = form_.col_start[static_cast<std::size_t>(j)]; k < form_.col_start[static_cast<std::size_t>(j) + 1];
         ++k)
        dense[static_cast<std::size_t>(form_.col_row[static_cast<std::size_t>(k)])] =
            form_.col_val[static_cast<std::size_t>(k)];
}

double Simplex::column_dot(int j, std::span<const double> dense) const {
    if (j >= n_) return -dense[static_cast<std::size_t>(j - n_)];
    double sum = 0.0;
    for (int k = form_.col_start[static_cast<std::size_t>(j)]; k < form_.col_start[static_cast<std::size_t>(j) + 1];
         ++k)
        sum += form_.col_val[static_cast<std::size_t>(k)] *
               dense[static_cast<std::size_t>(form_.col_row[static_cast<std::size_t>(k)])];
    return sum;
}

void Simplex::compute_primal() {
    std::fill(work_.begin(), work_.end(), 0.0);
    for (int j = 0; j < n_ + m_; ++j) {
        const auto k = static_cast<std::size_t>(j);
        if (status_[k] == Status::basic || x_[k] == 0.0) continue;
        if (j >= n_) {
            work_[static_cast<std::size_t>(j - n_)] += x_[k];
        } else {
            for (int e = form_.col_start[k]; e < form_.col_start[k + 1]; ++e)
                work_[static_cast<std::size_t>(form_.col_row[static_cast<std::size_t>(e)])] -=
                    form_.col_val[static_cast<std::size_t>(e)] * x_[k];
        }
    }
    factor_.ftran(work_);
    xb_ = work_;
}

void Simplex::compute_duals() {
    for (int pos = 0; pos < m_; ++pos)
        rho_[static_cast<std::size_t>(pos)] = form_.cost[static_cast<std::size_t>(head_[static_cast<std::size_t>(pos)])];
    factor_.btran(rho_);
    for (int j = 0; j < n_ + m_; ++j) {
        const auto k = static_cast<std::size_t>(j);
        d_[k] = status_[k] == Status::basic ? 0.0 : form_.cost[k] - column_dot(j, rho_);
    }
}

bool Simplex::make_dual_feasible() {
    bool feasible = true;
    bool moved = false;
    for (int j = 0; j < n_ + m_; ++j) {
        const auto k = static_cast<std::size_t>(j);
        const Status s = status_[k];
        if (s == Status::basic || is_fixed(j)) continue;
        const double dj = d_[k];
        const bool lo = std::isfinite(lower_[k]);
        const bool hi = std::isfinite(upper_[k]);
        if ((s == Status::at_lower && dj < -kDualTol) || (s == Status::at_zero && dj < -kDualTol)) {
            if (!hi) {
                feasible = false;
                continue;
            }
            status_[k] = Status::at_upper;
            x_[k] = upper_[k];
            moved = true;
        } else if ((s == Status::at_upper && dj > kDualTol) || (s == Status::at_zero && dj > kDualTol)) {
            if (!lo) {
                feasible = false;
                continue;
            }
            status_[k] = Status::at_lower;
            x_[k] = lower_[k];
            moved = true;
        }
    }
    if (moved) compute_primal();
    return feasible;
}

bool Simplex::primal_feasible(double tol) const {
    for (int pos = 0; pos < m_; ++pos) {
        const auto j = static_cast<std::size_t>(head_[static_cast<std::size_t>(pos)]);
        const double v = xb_[static_cast<std::size_t>(pos)];
        if (v < lower_[j] - tol || v > upper_[j] + tol) return false;
    }
    return true;
}

bool Simplex::limits_hit(const SimplexLimits& limits, PhaseResult& why) const {
    if (iterations_ >= limits.max_iterations) {
        why = PhaseResult::limit_iter;
        return true;
    }
    if ((iterations_ & 15) == 0 && std::chrono::steady_clock::now() >= limits.deadline) {
        why = PhaseResult::limit_time;
        return true;
    }
    return false;
}

void Simplex::compute_pivot_row() {
    std::fill(alpha_row_.begin(), alpha_row_.end(), 0.0);
    int nonzeros = 0;
    for (double v : rho_) nonzeros += v != 0.0;
    if (nonzeros * 5 < m_) {
        for (int i = 0; i < m_; ++i) {
            const double r = rho_[static_cast<std::size_t>(i)];
            if (r == 0.0) continue;
            for (int e = form_.row_start[static_cast<std::size_t>(i)]; e < form_.row_start[static_cast<std::size_t>(i) + 1];
                 ++e)
                alpha_row_[static_cast<std::size_t>(form_.row_col[static_cast<std::size_t>(e)])] +=
                    r * form_.row_val[static_cast<std::size_t>(e)];
            alpha_row_[static_cast<std::size_t>(n_ + i)] = -r;
        }
        for (int pos = 0; pos < m_; ++pos) alpha_row_[static_cast<std::size_t>(head_[static_cast<std::size_t>(pos)])] = 0.0;
    } else {
        for (int j = 0; j < n_ + m_; ++j)
            if (status_[static_cast<std::size_t>(j)] != Status::basic)
                alpha_row_[static_cast<std::size_t>(j)] = column_dot(j, rho_);
    }
}

void Simplex::pivot(int r, int q, double entering_value, Status leaving_status, double leaving_value) {
    const auto rr = static_cast<std::size_t>(r);
    const int p = head_[rr];
    const auto pk = static_cast<std::size_t>(p);
    const auto qk = static_cast<std::size_t>(q);
    status_[pk] = leaving_status;
    x_[pk] = leaving_value;
    position_[pk] = -1;
    head_[rr] = q;
    position_[qk] = r;
    status_[qk] = Status::basic;
    xb_[rr] = entering_value;
    d_[qk] = 0.0;
    factor_.update(r, alpha_col_);
    ++iterations_;
}

Simplex::PhaseResult Simplex::dual_phase(const SimplexLimits& limits) {
    const std::int64_t bland_threshold = 10LL * (n_ + m_);
    const auto& kern = kernels::active();
    while (true) {
        PhaseResult why{};
        if (limits_hit(limits, why)) return why;
        if (factor_.updates() >= kRefactorInterval) {
            reinvert();
            compute_primal();
            compute_duals();
            if (!make_dual_feasible()) return PhaseResult::need_primal;
        }
        const bool bland = degenerate_run_ > bland_threshold;

        int r = -1;
        double worst = 0.0;
        for (int pos = 0; pos < m_; ++pos) {
            const int j = head_[static_cast<std::size_t>(pos)];
            const double v = xb_[static_cast<std::size_t>(pos)];
            const double l = lower_[static_cast<std::size_t>(j)];
            const double u = upper_[static_cast<std::size_t>(j)];
            const double infeas = v < l - kPrimalTol ? l - v : (v > u + kPrimalTol ? v - u : 0.0);
            if (infeas <= 0.0) continue;
            if (bland) {
                if (r < 0 || j < head_[static_cast<std::size_t>(r)]) r = pos;
            } else if (infeas > worst) {
                worst = infeas;
                r = pos;
            }
        }
        if (r < 0) return PhaseResult::optimal;

        const int p = head_[static_cast<std::size_t>(r)];
        const double xp = xb_[static_cast<std::size_t>(r)];
        const bool to_lower = xp < lower_[static_cast<std::size_t>(p)];
        const double target = to_lower ? lower_[static_cast<std::size_t>(p)] : upper_[static_cast<std::size_t>(p)];
        const double delta = xp - target;
        const double sigma = to_lower ? 1.0 : -1.0;

        std::fill(rho_.begin(), rho_.end(), 0.0);
        rho_[static_cast<std::size_t>(r)] = 1.0;
        factor_.btran(rho_);
        compute_pivot_row();

        auto eligible = [&](int j, double a) {
            const Status s = status_[static_cast<std::size_t>(j)];
            if (s == Status::basic || is_fixed(j) || std::fabs(a) < kPivotTol) return false;
            if (s == Status::at_zero) return true;
            if (s == Status::at_lower) return a * sigma < 0.0;
            return a * sigma > 0.0;
        };

        double theta_max = kInf;
        for (int j = 0; j < n_ + m_; ++j) {
            const double a = alpha_row_[static_cast<std::size_t>(j)];
            if (!eligible(j, a)) continue;
            const double bound = (std::fabs(d_[static_cast<std::size_t>(j)]) + kDualTol) / std::fabs(a);
            theta_max = std::min(theta_max, bound);
        }
        if (!std::isfinite(theta_max)) {
            if (factor_.updates() > 0) return PhaseResult::restart;
            return PhaseResult::infeasible;
        }
        int q = -1;
        double best_pivot = 0.0;
        for (int j = 0; j < n_ + m_; ++j) {
            const double a = alpha_row_[static_cast<std::size_t>(j)];
            if (!eligible(j, a)) continue;
            if (std::fabs(d_[static_cast<std::size_t>(j)]) / std::fabs(a) > theta_max) continue;
            if (bland) {
                if (q < 0) q = j;
            } else if (std::fabs(a) > best_pivot) {
                best_pivot = std::fabs(a);
                q = j;
            }
        }

        load_column(q, alpha_col_);
        factor_.ftran(alpha_col_);
        const double arq = alpha_row_[static_cast<std::size_t>(q)];
        const double acq = alpha_col_[static_cast<std::size_t>(r)];
        if (std::fabs(acq - arq) > 1e-6 * (1.0 + std::fabs(acq)) || std::fabs(acq) < kPivotTol) {
            if (factor_.updates() == 0) return PhaseResult::need_primal;
            return PhaseResult::restart;
        }

        // Dual step. Sign mismatches within tolerance are treated as zero.
        double dq = d_[static_cast<std::size_t>(q)];
        const Status sq = status_[static_cast<std::size_t>(q)];
        if ((sq == Status::at_lower && dq < 0.0) || (sq == Status::at_upper && dq > 0.0)) dq = 0.0;
        const double theta_d = dq / acq;
        kern.axpy(-theta_d, alpha_row_.data(), d_.data(), alpha_row_.size());
        d_[static_cast<std::size_t>(p)] = -theta_d;

        const double step = delta / acq;
        const double entering = x_[static_cast<std::size_t>(q)] + step;
        kern.axpy(-step, alpha_col_.data(), xb_.data(), xb_.size());
        pivot(r, q, entering, to_lower ? Status::at_lower : Status::at_upper, target);
        d_[static_cast<std::size_t>(q)] = 0.0;

        degenerate_run_ = std::fabs(theta_d) < 1e-12 ? degenerate_run_ + 1 : 0;
    }
}

Simplex::PhaseResult Simplex::primal_phase(const SimplexLimits& limits) {
    const std::int64_t bland_threshold = 10LL * (n_ + m_);
    const auto& kern = kernels::active();
    std::vector<double> phase_cost(static_cast<std::size_t>(m_));
    while (true) {
        PhaseResult why{};
        if (limits_hit(limits, why)) return why;
        if (factor_.updates() >= kRefactorInterval) {
            reinvert();
            compute_primal();
        }
        const bool phase_one = !primal_feasible(kPrimalTol);
        for (int pos = 0; pos < m_; ++pos) {
            const auto j = static_cast<std::size_t>(head_[static_cast<std::size_t>(pos)]);
            double c = form_.cost[j];
            if (phase_one) {
                const double v = xb_[static_cast<std::size_t>(pos)];
                c = v < lower_[j] - kPrimalTol ? -1.0 : (v > upper_[j] + kPrimalTol ? 1.0 : 0.0);
            }
            rho_[static_cast<std::size_t>(pos)] = c;
        }
        factor_.btran(rho_);
        for (int j = 0; j < n_ + m_; ++j) {
            const auto k = static_cast<std::size_t>(j);
            if (status_[k] == Status::basic) {
                d_[k] = 0.0;
                continue;
            }
            d_[k] = (phase_one ? 0.0 : form_.cost[k]) - column_dot(j, rho_);
        }

        const bool bland = degenerate_run_ > bland_threshold;
        int q = -1;
        double dir = 0.0;
        double best = 0.0;
        for (int j = 0; j < n_ + m_; ++j) {
            const auto k = static_cast<std::size_t>(j);
            const Status s = status_[k];
            if (s == Status::basic || is_fixed(j)) continue;
            const double dj = d_[k];
            double score = 0.0;
            double jdir = 0.0;
            if ((s == Status::at_lower || s == Status::at_zero) && dj < -kDualTol) {
                score = -dj;
                jdir = 1.0;
            } else if ((s == Status::at_upper || s == Status::at_zero) && dj > kDualTol) {
                score = dj;
                jdir = -1.0;
            }
            if (jdir == 0.0) continue;
            if (bland) {
                q = j;
                dir = jdir;
                break;
            }
            if (score > best) {
                best = score;
                q = j;
                dir = jdir;
            }
        }
        if (q < 0) return phase_one ? PhaseResult::infeasible : PhaseResult::optimal;

        load_column(q, alpha_col_);
        factor_.ftran(alpha_col_);

        const auto qk = static_cast<std::size_t>(q);
        const double range = upper_[qk] - lower_[qk];
        int r = -1;
        double step = kInf;
        bool leave_upper = false;

        if (phase_one) {
            double best_pivot = 0.0;
            for (int pos = 0; pos < m_; ++pos) {
                const double beta = -dir * alpha_col_[static_cast<std::size_t>(pos)];
                if (std::fabs(beta) < kPivotTol) continue;
                const auto j = static_cast<std::size_t>(head_[static_cast<std::size_t>(pos)]);
                const double v = xb_[static_cast<std::size_t>(pos)];
                const double l = lower_[j];
                const double u = upper_[j];
                double ratio = kInf;
                bool upper_side = false;
                if (v < l - kPrimalTol) {
                    if (beta > 0.0) ratio = (l - v) / beta;
                } else if (v > u + kPrimalTol) {
                    if (beta < 0.0) {
                        ratio = (v - u) / -beta;
                        upper_side = true;
                    }
                } else if (beta > 0.0 && std::isfinite(u)) {
                    ratio = std::max(0.0, (u - v) / beta);
                    upper_side = true;
                } else if (beta < 0.0 && std::isfinite(l)) {
                    ratio = std::max(0.0, (v - l) / -beta);
                }
                if (!std::isfinite(ratio)) continue;
                if (ratio < step - 1e-12 || (ratio <= step + 1e-12 && std::fabs(beta) > best_pivot)) {
                    step = ratio;
                    r = pos;
                    leave_upper = upper_side;
                    best_pivot = std::fabs(beta);
                }
            }
        } else {
            double harris = kInf;
            for (int pos = 0; pos < m_; ++pos) {
                const double beta = -dir * alpha_col_[static_cast<std::size_t>(pos)];
                if (std::fabs(beta) < kPivotTol) continue;
                const auto j = static_cast<std::size_t>(head_[static_cast<std::size_t>(pos)]);
                const double v = xb_[static_cast<std::size_t>(pos)];
                if (beta > 0.0 && std::isfinite(upper_[j]))
                    harris = std::min(harris, (upper_[j] - v + kPrimalTol) / beta);
                else if (beta < 0.0 && std::isfinite(lower_[j]))
                    harris = std::min(harris, (v - lower_[j] + kPrimalTol) / -beta);
            }
            if (std::isfinite(harris)) {
                double best_pivot = 0.0;
                for (int pos = 0; pos < m_; ++pos) {
                    const double beta = -dir * alpha_col_[static_cast<std::size_t>(pos)];
                    if (std::fabs(beta) < kPivotTol) continue;
                    const auto j = static_cast<std::size_t>(head_[static_cast<std::size_t>(pos)]);
                    const double v = xb_[static_cast<std::size_t>(pos)];
                    double ratio = kInf;
                    bool upper_side = false;
                    if (beta > 0.0 && std::isfinite(upper_[j])) {
                        ratio = (upper_[j] - v) / beta;
                        upper_side = true;
                    } else if (beta < 0.0 && std::isfinite(lower_[j])) {
                        ratio = (v - lower_[j]) / -beta;
                    }
                    if (ratio > harris) continue;
                    const bool take = bland ? (r < 0 || head_[static_cast<std::size_t>(pos)] <
                                                            head_[static_cast<std::size_t>(r)])
                                            : std::fabs(beta) > best_pivot;
                    if (take) {
                        best_pivot = std::fabs(beta);
                        r = pos;
                        step = std::max(0.0, ratio);
                        leave_upper = upper_side;
                    }
                }
            }
        }

        if (std::isfinite(range) && range <= step) {
            // Entering column reaches its opposite bound first.
            kern.axpy(-dir * range, alpha_col_.data(), xb_.data(), xb_.size());
            status_[qk] = dir > 0.0 ? Status::at_upper : Status::at_lower;
            x_[qk] = dir > 0.0 ? upper_[qk] : lower_[qk];
            ++iterations_;
            degenerate_run_ = 0;
            continue;
        }
        if (r < 0) {
            if (factor_.updates() > 0) {
                reinvert();
                compute_primal();
                continue;
            }
            return phase_one ? PhaseResult::infeasible : PhaseResult::unbounded;
        }

        kern.axpy(-dir * step, alpha_col_.data(), xb_.data(), xb_.size());
        const double entering = x_[qk] + dir * step;
        const int p = head_[static_cast<std::size_t>(r)];
        const double leave_value = leave_upper ? upper_[static_cast<std::size_t>(p)] : lower_[static_cast<std::size_t>(p)];
        pivot(r, q, entering, leave_upper ? Status::at_upper : Status::at_lower, leave_value);
        degenerate_run_ = step < 1e-12 ? degenerate_run_ + 1 : 0;
    }
}

LpOutcome Simplex::solve(const SimplexLimits& limits) {
    // A warm start keeps the current factorization; bound changes only move
    // nonbasic values, so recomputing the basic values is enough.
    if (!factored_ || factor_.updates() >= kRefactorInterval / 2) reinvert();
    compute_primal();
    for (int round = 0; round < 12; ++round) {
        compute_duals();
        PhaseResult result;
        if (make_dual_feasible()) {
            result = dual_phase(limits);
            if (result == PhaseResult::need_primal) result = primal_phase(limits);
        } else {
            result = primal_phase(limits);
        }
        switch (result) {
            case PhaseResult::limit_iter: return LpOutcome::iteration_limit;
            case PhaseResult::limit_time: return LpOutcome::time_limit;
            case PhaseResult::infeasible: return LpOutcome::infeasible;
            case PhaseResult::unbounded: return LpOutcome::unbounded;
            case PhaseResult::restart:
            case PhaseResult::need_primal:
                reinvert();
                compute_primal();
                continue;
            case PhaseResult::optimal: break;
        }
        compute_primal();
        compute_duals();
        bool dual_ok = true;
        for (int j = 0; j < n_ + m_ && dual_ok; ++j) {
            const auto k = static_cast<std::size_t>(j);
            const Status s = status_[k];
            if (s == Status::basic || is_fixed(j)) continue;
            if ((s == Status::at_lower || s == Status::at_zero) && d_[k] < -kVerifyTol) dual_ok = false;
            if ((s == Status::at_upper || s == Status::at_zero) && d_[k] > kVerifyTol) dual_ok = false;
        }
        if (dual_ok && primal_feasible(kVerifyTol)) return LpOutcome::optimal;
        reinvert();
        compute_primal();
    }
    return primal_feasible(1e-6) ? LpOutcome::optimal : LpOutcome::infeasible;
}

double Simplex::value(int j) const {
    const int pos = position_[static_cast<std::size_t>(j)];
    return pos >= 0 ? xb_[static_cast<std::size_t>(pos)] : x_[static_cast<std::size_t>(j)];
}

std::vector<double> Simplex::structural_values() const {
    std::vector<double> out(static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j) out[static_cast<std::size_t>(j)] = value(j);
    return out;
}

double Simplex::objective() const {
    double obj = form_.objective_constant;
    for (int j = 0; j < n_; ++j) obj += form_.cost[static_cast<std::size_t>(j)] * value(j);
    return obj;
}

}  // namespace surge::solver::detail
