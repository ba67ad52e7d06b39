#include "surge/solver/mip_model.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace surge::solver {

namespace {

void check_bounds(const std::string& name, double lower, double upper) {
    if (std::isnan(lower) || std::isnan(upper)) throw ModelError("variable '" + name + "' has a NaN bound");
    if (lower > upper) throw ModelError("variable '" + name + "' has lower bound above upper bound");
}

}  // namespace

VarId MipModel::add_variable(std::string name, double lower, double upper, VarKind kind, double cost) {
    if (kind == VarKind::binary) {
        lower = std::max(lower, 0.0);
        upper = std::min(upper, 1.0);
    }
    check_bounds(name, lower, upper);
    if (!std::isfinite(cost)) throw ModelError("variable '" + name + "' has a non-finite cost");
    variables_.push_back(Variable{std::move(name), lower, upper, kind});
    costs_.push_back(cost);
    return VarId{static_cast<int>(variables_.size()) - 1};
}

RowId MipModel::add_constraint(std::string name, std::vector<Term> terms, RowSense sense, double rhs) {
    if (!std::isfinite(rhs)) throw ModelError("constraint '" + name + "' has a non-finite right-hand side");
    for (const Term& t : terms) {
        if (t.var.index < 0 || static_cast<std::size_t>(t.var.index) >= variables_.size())
            throw ModelError("constraint '" + name + "' references an unknown variable");
        if (!std::isfinite(t.coef)) throw ModelError("constraint '" + name + "' has a non-finite coefficient");
    }
    // Merge duplicate references so the sparse matrix has one entry per column.
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.var.index < b.var.index; });
    std::vector<Term> merged;
    merged.reserve(terms.size());
    for (const Term& t : terms) {
        if (!merged.empty() && merged.back().var == t.var)
            merged.back().coef += t.coef;
        else
            merged.push_back(t);
    }
    std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
    constraints_.push_back(Constraint{std::move(name), std::move(merged), sense, rhs});
    return RowId{static_cast<int>(constraints_.size()) - 1};
}

void MipModel::add_sos1(std::string name, std::vector<VarId> members, std::vector<double> weights) {
    if (members.empty()) throw ModelError("SOS1 group '" + name + "' is empty");
    if (members.size() != weights.size())
        throw ModelError("SOS1 group '" + name + "' needs one weight per member");
    for (VarId v : members) {
        if (v.index < 0 || static_cast<std::size_t>(v.index) >= variables_.size())
            throw ModelError("SOS1 group '" + name + "' references an unknown variable");
        if (variables_[static_cast<std::size_t>(v.index)].kind != VarKind::binary)
            throw ModelError("SOS1 group '" + name + "' contains a non-binary variable");
    }
    for (std::size_t k = 1; k < weights.size(); ++k)
        if (weights[k] < weights[k - 1]) throw ModelError("SOS1 group '" + name + "' weights must be non-decreasing");
    sos1_groups_.push_back(Sos1Group{std::move(name), std::move(members), std::move(weights)});
}

void MipModel::set_bounds(VarId var, double lower, double upper) {
    Variable& v = variables_.at(static_cast<std::size_t>(var.index));
    check_bounds(v.name, lower, upper);
    v.lower = lower;
    v.upper = upper;
}

bool MipModel::has_integers() const {
    return std::any_of(variables_.begin(), variables_.end(),
                       [](const Variable& v) { return v.kind == VarKind::binary; });
}

void MipModel::validate() const {
    std::vector<int> owner(variables_.size(), -1);
    for (std::size_t g = 0; g < sos1_groups_.size(); ++g) {
        for (VarId v : sos1_groups_[g].members) {
            int& slot = owner[static_cast<std::size_t>(v.index)];
            if (slot >= 0) throw ModelError("variable '" + variables_[static_cast<std::size_t>(v.index)].name +
                                            "' belongs to more than one SOS1 group");
            slot = static_cast<int>(g);
        }
    }
    for (const Variable& v : variables_) check_bounds(v.name, v.lower, v.upper);
}

double MipModel::evaluate_objective(std::span<const double> values) const {
    double obj = objective_constant_;
    for (std::size_t j = 0; j < costs_.size(); ++j) obj += costs_[j] * values[j];
    return obj;
}

double MipModel::row_activity(std::size_t row, std::span<const double> values) const {
    double sum = 0.0;
    for (const Term& t : constraints_.at(row).terms) sum += t.coef * values[static_cast<std::size_t>(t.var.index)];
    return sum;
}

double MipModel::max_violation(std::span<const double> values) const {
    if (values.size() != variables_.size()) return kInfinity;
    double worst = 0.0;
    for (std::size_t j = 0; j < variables_.size(); ++j) {
        const Variable& v = variables_[j];
        worst = std::max({worst, v.lower - values[j], values[j] - v.upper});
        if (v.kind == VarKind::binary) worst = std::max(worst, std::min(values[j], 1.0 - values[j]));
    }
    for (std::size_t i = 0; i < constraints_.size(); ++i) {
        const double act = row_activity(i, values);
        const Constraint& c = constraints_[i];
        const double scale = 1.0 + std::fabs(c.rhs);
        double viol = 0.0;
        if (c.sense != RowSense::greater_equal) viol = std::max(viol, act - c.rhs);
        if (c.sense != RowSense::less_equal) viol = std::max(viol, c.rhs - act);
        worst = std::max(worst, viol / scale);
    }
    for (const Sos1Group& g : sos1_groups_) {
        double sum = 0.0;
        for (VarId v : g.members) sum += values[static_cast<std::size_t>(v.index)];
        worst = std::max(worst, std::fabs(sum - 1.0));
    }
    return worst;
}

}  // namespace surge::solver
