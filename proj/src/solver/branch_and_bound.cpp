#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <queue>
#include <vector>

#include "lp_form.hpp"
#include "simplex.hpp"
#include "surge/solver/solve.hpp"

namespace surge::solver {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kIntegralityTol = 1e-6;

struct BoundChange {
    int column;
    double lower;
    double upper;
};

struct Node {
    double bound;
    int depth;
    std::int64_t order;
    std::vector<BoundChange> changes;
};

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;
        if (a.depth != b.depth) return a.depth < b.depth;
        return a.order > b.order;
    }
};

class BranchAndBound {
public:
    BranchAndBound(const MipModel& model, const SolveOptions& options)
        : model_(model), options_(options), root_form_(detail::build_relaxation(model)), simplex_(root_form_) {
        start_ = Clock::now();
        deadline_ = start_ + std::chrono::duration_cast<Clock::duration>(
                                 std::chrono::duration<double>(options.time_limit_seconds));
        in_group_.assign(model.num_variables(), false);
        for (const Sos1Group& g : model.sos1_groups())
            for (VarId v : g.members) in_group_[static_cast<std::size_t>(v.index)] = true;
    }

    SolveResult run();

private:
    bool out_of_time() const { return Clock::now() >= deadline_; }
    double cutoff() const {
        if (incumbent_.empty()) return kInfinity;
        return incumbent_obj_ - options_.relative_gap_tol * std::max(1.0, std::fabs(incumbent_obj_));
    }
    void apply(const std::vector<BoundChange>& changes);
    std::optional<std::vector<BoundChange>> branch_split(const std::vector<double>& x, std::vector<BoundChange>& other);
    void offer(std::vector<double> candidate);
    std::optional<std::vector<double>> polish(const std::vector<double>& candidate);
    bool integral(const std::vector<double>& x) const;
    void fix_by_reduced_cost();
    void dive(const std::vector<BoundChange>& start, std::vector<double> x);

    const MipModel& model_;
    const SolveOptions& options_;
    detail::LpForm root_form_;
    detail::Simplex simplex_;
    Clock::time_point start_;
    Clock::time_point deadline_;
    std::vector<bool> in_group_;
    std::vector<int> dirty_;
    std::vector<double> incumbent_;
    double incumbent_obj_ = kInfinity;
    std::int64_t polish_iterations_ = 0;
    // Root relaxation value and reduced costs of its nonbasic binaries.
    double root_value_ = -kInfinity;
    std::vector<std::pair<int, double>> root_reduced_;
    double fixed_at_ = kInfinity;
};

void BranchAndBound::apply(const std::vector<BoundChange>& changes) {
    for (int j : dirty_)
        simplex_.set_bounds(j, root_form_.lower[static_cast<std::size_t>(j)], root_form_.upper[static_cast<std::size_t>(j)]);
    dirty_.clear();
    for (const BoundChange& c : changes) {
        simplex_.set_bounds(c.column, c.lower, c.upper);
        dirty_.push_back(c.column);
    }
}

// A nonbasic binary whose root reduced cost exceeds the gap to the incumbent
// can never move in an improving solution; pin it for the rest of the search.
void BranchAndBound::fix_by_reduced_cost() {
    if (incumbent_.empty() || root_reduced_.empty() || incumbent_obj_ >= fixed_at_) return;
    fixed_at_ = incumbent_obj_;
    const double gap = cutoff() - root_value_;
    for (const auto& [j, d] : root_reduced_) {
        if (std::fabs(d) <= gap) continue;
        const auto k = static_cast<std::size_t>(j);
        const double v = d > 0.0 ? root_form_.lower[k] : root_form_.upper[k];
        if (root_form_.lower[k] == root_form_.upper[k]) continue;
        root_form_.lower[k] = v;
        root_form_.upper[k] = v;
        simplex_.set_bounds(j, v, v);
    }
}

// Depth-first descent from a node: always take the child that keeps the
// larger share of the relaxation, until the relaxation is integral or a child
// fails. The search tree is untouched; the simplex is left wherever the dive
// ended and the next node resets it.
void BranchAndBound::dive(const std::vector<BoundChange>& start, std::vector<double> x) {
    std::vector<BoundChange> changes = start;
    std::vector<BoundChange> second;
    const std::size_t limit = model_.sos1_groups().size() + model_.num_variables();
    for (std::size_t depth = 0; depth < limit && !out_of_time(); ++depth) {
        auto first = branch_split(x, second);
        if (!first) {
            if (integral(x)) offer(x);
            return;
        }
        auto kept_mass = [&](const std::vector<BoundChange>& side) {
            // Mass removed by a side's fixings; keep the side removing less.
            double removed = 0.0;
            for (const auto& c : side) removed += std::fabs(x[static_cast<std::size_t>(c.column)] - c.lower);
            return removed;
        };
        const auto& pick = kept_mass(*first) <= kept_mass(second) ? *first : second;
        changes.insert(changes.end(), pick.begin(), pick.end());
        apply(changes);
        detail::SimplexLimits limits;
        limits.deadline = deadline_;
        if (simplex_.solve(limits) != detail::LpOutcome::optimal) return;
        x = simplex_.structural_values();
        if (model_.evaluate_objective(x) >= cutoff()) return;
    }
}

bool BranchAndBound::integral(const std::vector<double>& x) const {
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (model_.variables()[j].kind != VarKind::binary) continue;
        if (std::min(std::fabs(x[j]), std::fabs(1.0 - x[j])) > kIntegralityTol) return false;
    }
    return true;
}

// Returns the bound changes of the first child and fills `other` with those
// of the second; nullopt when the relaxation is already integral.
std::optional<std::vector<BoundChange>> BranchAndBound::branch_split(const std::vector<double>& x,
                                                                     std::vector<BoundChange>& other) {
    other.clear();
    for (const Sos1Group& g : model_.sos1_groups()) {
        const std::size_t k = g.members.size();
        int positive = 0;
        int first_positive = -1;
        double mass = 0.0;
        double weighted = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            const double v = x[static_cast<std::size_t>(g.members[i].index)];
            if (v > kIntegralityTol) {
                ++positive;
                if (first_positive < 0) first_positive = static_cast<int>(i);
            }
            mass += v;
            weighted += g.weights[i] * v;
        }
        if (positive < 2) continue;
        const double mean = weighted / mass;
        // Left keeps members [0, split], right keeps (split, k).
        int split = -1;
        for (std::size_t i = 0; i < k; ++i)
            if (g.weights[i] <= mean) split = static_cast<int>(i);
        auto side_has_positive = [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i)
                if (x[static_cast<std::size_t>(g.members[i].index)] > kIntegralityTol) return true;
            return false;
        };
        if (split < 0 || !side_has_positive(0, static_cast<std::size_t>(split) + 1) ||
            !side_has_positive(static_cast<std::size_t>(split) + 1, k))
            split = first_positive;
        std::vector<BoundChange> left;
        for (std::size_t i = 0; i < k; ++i) {
            const int col = g.members[i].index;
            if (static_cast<int>(i) <= split)
                other.push_back({col, 0.0, 0.0});
            else
                left.push_back({col, 0.0, 0.0});
        }
        return left;
    }
    int best = -1;
    double best_frac = kIntegralityTol;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (model_.variables()[j].kind != VarKind::binary || in_group_[j]) continue;
        const double frac = std::min(x[j], 1.0 - x[j]);
        if (frac > best_frac) {
            best_frac = frac;
            best = static_cast<int>(j);
        }
    }
    if (best < 0) return std::nullopt;
    other.push_back({best, 1.0, 1.0});
    return std::vector<BoundChange>{{best, 0.0, 0.0}};
}

std::optional<std::vector<double>> BranchAndBound::polish(const std::vector<double>& candidate) {
    detail::LpForm form = root_form_;
    for (std::size_t j = 0; j < candidate.size(); ++j) {
        if (model_.variables()[j].kind != VarKind::binary) continue;
        const double v = std::round(candidate[j]);
        form.lower[j] = v;
        form.upper[j] = v;
    }
    detail::Simplex lp(std::move(form));
    detail::SimplexLimits limits;
    limits.deadline = deadline_;
    const auto outcome = lp.solve(limits);
    polish_iterations_ += lp.iterations();
    if (outcome != detail::LpOutcome::optimal) return std::nullopt;
    return lp.structural_values();
}

void BranchAndBound::offer(std::vector<double> candidate) {
    if (candidate.size() != model_.num_variables()) return;
    for (std::size_t j = 0; j < candidate.size(); ++j)
        if (model_.variables()[j].kind == VarKind::binary) candidate[j] = std::round(candidate[j]);
    const double feas_tol = std::max(options_.absolute_feas_tol, 1e-6);
    if (options_.polish_incumbents && !out_of_time()) {
        if (auto polished = polish(candidate)) {
            for (std::size_t j = 0; j < candidate.size(); ++j)
                if (model_.variables()[j].kind == VarKind::binary) (*polished)[j] = candidate[j];
            if (model_.max_violation(*polished) <= feas_tol &&
                model_.evaluate_objective(*polished) <= model_.evaluate_objective(candidate) + 1e-12)
                candidate = std::move(*polished);
        }
    }
    if (model_.max_violation(candidate) > feas_tol) return;
    const double obj = model_.evaluate_objective(candidate);
    if (obj < incumbent_obj_) {
        incumbent_obj_ = obj;
        incumbent_ = std::move(candidate);
    }
}

SolveResult BranchAndBound::run() {
    SolveResult result;
    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    std::int64_t order = 0;
    open.push(Node{-kInfinity, 0, order++, {}});
    bool stopped = false;
    bool acceptable_stop = false;
    double stopped_bound = kInfinity;

    while (!open.empty()) {
        if (result.nodes >= options_.node_limit || out_of_time()) {
            stopped = true;
            break;
        }
        const double global_bound = open.top().bound;
        if (!incumbent_.empty() && options_.acceptable_gap > 0.0) {
            const double gap = (incumbent_obj_ - global_bound) / std::max(1.0, std::fabs(incumbent_obj_));
            if (gap <= options_.acceptable_gap) {
                acceptable_stop = true;
                break;
            }
        }
        Node node = open.top();
        open.pop();
        if (node.bound >= cutoff()) continue;

        apply(node.changes);
        detail::SimplexLimits limits;
        limits.deadline = deadline_;
        const detail::LpOutcome outcome = simplex_.solve(limits);
        ++result.nodes;
        if (outcome == detail::LpOutcome::time_limit || outcome == detail::LpOutcome::iteration_limit) {
            stopped = true;
            stopped_bound = node.bound;
            break;
        }
        if (outcome == detail::LpOutcome::infeasible) continue;
        if (outcome == detail::LpOutcome::unbounded) {
            if (node.depth == 0) {
                result.status = SolveStatus::unbounded;
                result.simplex_iterations = simplex_.iterations();
                return result;
            }
            continue;
        }
        const std::vector<double> x = simplex_.structural_values();
        const double value = model_.evaluate_objective(x);
        if (node.depth == 0) {
            result.bound = value;
            root_value_ = value;
            for (std::size_t j = 0; j < model_.num_variables(); ++j) {
                const int col = static_cast<int>(j);
                if (model_.variables()[j].kind != VarKind::binary || simplex_.is_basic(col)) continue;
                const double d = simplex_.reduced_cost(col);
                if (d != 0.0) root_reduced_.emplace_back(col, d);
            }
        }
        if (value >= cutoff()) continue;

        if (options_.heuristic && (node.depth == 0 || result.nodes % options_.heuristic_frequency == 0)) {
            if (auto candidate = options_.heuristic(x)) offer(std::move(*candidate));
            fix_by_reduced_cost();
            if (value >= cutoff()) continue;
        }

        if (node.depth == 0 || (options_.heuristic_frequency > 0 && result.nodes % (8 * options_.heuristic_frequency) == 0)) {
            dive(node.changes, x);
            fix_by_reduced_cost();
        }

        std::vector<BoundChange> second;
        auto first = branch_split(x, second);
        if (!first) {
            if (integral(x)) {
                offer(x);
                fix_by_reduced_cost();
            }
            continue;
        }
        for (auto* side : {&*first, &second}) {
            Node child{value, node.depth + 1, order++, node.changes};
            child.changes.insert(child.changes.end(), side->begin(), side->end());
            open.push(std::move(child));
        }
    }

    double bound = incumbent_.empty() ? kInfinity : incumbent_obj_;
    if (!open.empty()) bound = std::min(bound, open.top().bound);
    if (stopped) bound = std::min(bound, stopped_bound);
    if (std::isfinite(bound)) result.bound = std::max(result.bound, std::min(bound, incumbent_obj_));
    if (open.empty() && !stopped && !incumbent_.empty()) result.bound = incumbent_obj_;

    result.simplex_iterations = simplex_.iterations() + polish_iterations_;
    if (incumbent_.empty()) {
        result.status = (stopped || acceptable_stop) ? SolveStatus::limit_hit : SolveStatus::infeasible;
        return result;
    }
    result.values = incumbent_;
    result.objective = incumbent_obj_;
    if (!stopped && !acceptable_stop && open.empty()) {
        result.status = SolveStatus::optimal;
    } else {
        result.status =
            result.relative_gap() <= options_.relative_gap_tol ? SolveStatus::optimal : SolveStatus::feasible_gap;
    }
    return result;
}

}  // namespace

SolveResult solve_mip(const MipModel& model, const SolveOptions& options) {
    options.validate();
    const auto start = Clock::now();
    SolveResult result;
    if (!model.has_integers()) {
        result = solve_lp(model, options);
    } else {
        BranchAndBound bb(model, options);
        result = bb.run();
    }
    result.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return result;
}

}  // namespace surge::solver
