#pragma once

#include <optional>
#include <string>
#include <vector>

#include "surge/plan/census_terms.hpp"
#include "surge/plan/inputs.hpp"
#include "surge/plan/request.hpp"
#include "surge/plan/weights.hpp"
#include "surge/solver/mip_model.hpp"
#include "surge/solver/solve.hpp"

namespace surge::plan {

struct ModelBuildOptions {
    /// Fix level and unit variables that census bounds rule out or dominate.
    bool presolve = true;
};

/// Where each decision lives in the MipModel. Index -1 means "not created".
struct ModelLayout {
    std::size_t hospitals = 0;
    std::size_t days = 0;
    std::size_t levels = 0;

    std::vector<int> level_vars;     // [(h * days + t) * levels + l], simplified model
    std::vector<int> transfer_vars;  // [(h * hospitals + g) * days + t]
    int balance_var = -1;

    // Complete model, one block of `days` entries per unit in catalog order.
    std::vector<std::size_t> unit_offset;  // first unit index of hospital h
    std::vector<std::size_t> unit_count;   // units of hospital h
    std::vector<double> unit_beds;         // per unit
    std::vector<int> use_vars;             // [unit * days + t]
    std::vector<int> avail_vars;
    std::vector<int> convert_vars;

    int level_var(std::size_t h, std::size_t t, std::size_t l) const {
        return level_vars.empty() ? -1 : level_vars[(h * days + t) * levels + l];
    }
    int transfer_var(std::size_t h, std::size_t g, std::size_t t) const {
        return transfer_vars[(h * hospitals + g) * days + t];
    }
    int use_var(std::size_t h, std::size_t k, std::size_t t) const {
        return use_vars[(unit_offset[h] + k) * days + t];
    }
};

struct BuiltModel {
    solver::MipModel model;
    ModelLayout layout;
    CostWeights weights;
    CensusTerms census;
    ModelComplexity complexity = ModelComplexity::fast;
    SurgeCapacityType surge_capacity = SurgeCapacityType::discrete;
    Utilization utilization{};
    /// Baseline beds per hospital (the complete model adds units on top).
    std::vector<double> baseline_beds{};
    /// Staffed beds per hospital and ladder level.
    std::vector<std::vector<double>> level_beds{};
    std::vector<std::string> warnings{};
    std::size_t presolve_fixed = 0;

    /// Census expression of (h, t) over the transfer variables.
    std::vector<solver::Term> census_expression(std::size_t h, std::size_t t) const;
    /// Census of (h, t) evaluated at a solver value vector.
    double census_value(std::size_t h, std::size_t t, std::span<const double> values) const;
};

/// Level-granularity model: one SOS1 selector per (hospital, day), continuous
/// transfers, census rows expanded from the LOS survival weights.
BuiltModel build_simplified(const PlanRequest& request, const PlanData& data, const ModelBuildOptions& options = {});

/// Unit-granularity model with availability lead times and conversion
/// indicators. Requires `data.units`.
BuiltModel build_complete(const PlanRequest& request, const PlanData& data, const ModelBuildOptions& options = {});

/// Keeps the relaxation's transfers and picks the cheapest capacity that
/// covers the resulting census. Returns nothing when no such choice exists.
/// All three arguments must outlive the returned callable.
solver::PrimalHeuristic make_heuristic(const BuiltModel& built, const PlanRequest& request, const PlanData& data);

}  // namespace surge::plan
