#pragma once

// Pieces shared by the simplified and complete builders: transfer variables
// with their budget rows, census bounds for presolve, and capacity rows.

#include <vector>

#include "surge/plan/models.hpp"

namespace surge::plan::detail {

/// Per hospital-day bounds on the census reachable with any admissible
/// transfers.
struct CensusRange {
    DailyGrid low;
    DailyGrid high;
};

/// Adds s[h][g][t] with its outbound, inbound and system rows. Transfer
/// variables exist for every ordered pair of distinct hospitals; they are
/// fixed to zero when the request disables transfers.
void add_transfer_block(const PlanRequest& request, const PlanData& data, BuiltModel& built);

CensusRange census_range(const PlanData& data, const BuiltModel& built);

/// o[h][t] <= usable(capacity): one row for z, one more for z' when set.
/// `capacity_terms` are the capacity expression in beds minus `constant`.
void add_capacity_rows(BuiltModel& built, std::size_t h, std::size_t t, const std::vector<solver::Term>& capacity_terms,
                       double constant);

/// One capacity step: usable beds while the step is off, usable beds right
/// after it switches on, and the 0/1 expression that says it is on.
struct CapacityStep {
    double off;
    double on;
    std::vector<solver::Term> indicator;
};

/// o[h][t] <= off + (high - off) * indicator, added for steps where the
/// census ceiling `high` lies strictly between `off` and `on`. The LP
/// relaxation then has to switch such a step on in full.
void add_step_cuts(BuiltModel& built, std::size_t h, std::size_t t, double high,
                   const std::vector<CapacityStep>& steps);

/// One way to run hospital h on a day: usable beds and the 0/1 expression
/// `constant + indicator` that says this choice is made.
struct CapacityChoice {
    double usable;
    double constant;
    std::vector<solver::Term> indicator;
};

/// Outbound relief needed under each choice: weighted outbound transfers
/// must cover sum over choices of indicator * (base - usable)^+. Inbound
/// transfers only raise the census, so they never help meet it.
void add_relief_cut(BuiltModel& built, std::size_t h, std::size_t t, const std::vector<CapacityChoice>& choices);

/// Balance-load rows o[h][t] <= m * z * top_beds[h] and the variable m.
void add_balance_rows(BuiltModel& built, const std::vector<double>& top_beds);

std::string hospital_day_name(const char* prefix, const PlanData& data, std::size_t h, std::size_t t);

}  // namespace surge::plan::detail
