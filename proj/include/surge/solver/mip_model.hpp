#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace surge::solver {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Malformed model: dangling variable references, inverted bounds, bad SOS1 groups.
class ModelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct VarId {
    int index = -1;
    friend bool operator==(VarId, VarId) = default;
};

struct RowId {
    int index = -1;
};

enum class VarKind { continuous, binary };
enum class RowSense { less_equal, equal, greater_equal };

struct Variable {
    std::string name;
    double lower = 0.0;
    double upper = kInfinity;
    VarKind kind = VarKind::continuous;
};

struct Term {
    VarId var;
    double coef = 0.0;
};

struct Constraint {
    std::string name;
    std::vector<Term> terms;
    RowSense sense = RowSense::less_equal;
    double rhs = 0.0;
};

/// Exactly one member takes the value 1, the rest are 0. The convexity row
/// (members sum to 1) is implied by the group and never stored explicitly.
/// Weights order the members for branching (capacity per surge level in the
/// planning models); they must be non-decreasing along `members`.
struct Sos1Group {
    std::string name;
    std::vector<VarId> members;
    std::vector<double> weights;
};

/// Minimization model: bounded variables, sparse linear rows, SOS1 selector
/// groups. Immutable once handed to a solver.
class MipModel {
public:
    VarId add_variable(std::string name, double lower, double upper, VarKind kind = VarKind::continuous,
                       double cost = 0.0);
    RowId add_constraint(std::string name, std::vector<Term> terms, RowSense sense, double rhs);
    void add_sos1(std::string name, std::vector<VarId> members, std::vector<double> weights);

    void set_cost(VarId var, double cost) { costs_.at(static_cast<std::size_t>(var.index)) = cost; }
    void add_cost(VarId var, double cost) { costs_.at(static_cast<std::size_t>(var.index)) += cost; }
    void set_objective_constant(double value) { objective_constant_ = value; }
    void add_objective_constant(double value) { objective_constant_ += value; }
    void set_bounds(VarId var, double lower, double upper);

    std::size_t num_variables() const { return variables_.size(); }
    std::size_t num_constraints() const { return constraints_.size(); }

    const std::vector<Variable>& variables() const { return variables_; }
    const Variable& variable(VarId v) const { return variables_.at(static_cast<std::size_t>(v.index)); }
    const std::vector<Constraint>& constraints() const { return constraints_; }
    const std::vector<Sos1Group>& sos1_groups() const { return sos1_groups_; }
    const std::vector<double>& costs() const { return costs_; }
    double cost(VarId v) const { return costs_.at(static_cast<std::size_t>(v.index)); }
    double objective_constant() const { return objective_constant_; }

    bool has_integers() const;

    /// Throws ModelError.
    void validate() const;

    double evaluate_objective(std::span<const double> values) const;
    double row_activity(std::size_t row, std::span<const double> values) const;
    /// Largest violation over bounds, rows and the SOS1 convexity rows.
    double max_violation(std::span<const double> values) const;

private:
    std::vector<Variable> variables_;
    std::vector<double> costs_;
    std::vector<Constraint> constraints_;
    std::vector<Sos1Group> sos1_groups_;
    double objective_constant_ = 0.0;
};

}  // namespace surge::solver
