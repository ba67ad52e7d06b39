#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "surge/core/projection.hpp"
#include "surge/core/types.hpp"

namespace surge::plan {

/// A block of beds that can be converted to the target population.
struct Unit {
    std::string id;
    int beds = 0;
    int setup_days = 0;     // delta+
    int teardown_days = 0;  // delta-
    int order = 0;          // opening preference, lower opens first

    friend bool operator==(const Unit&, const Unit&) = default;
};

/// Surge units per hospital id, kept sorted by `order`. Units add beds on top
/// of the hospital's baseline capacity.
struct UnitCatalog {
    std::map<std::string, std::vector<Unit>> units;

    const std::vector<Unit>& for_hospital(const std::string& id) const;
    std::size_t total_units() const;
    void validate() const;
};

/// Inputs for one solve, already narrowed to a population, capacity type,
/// scenario and horizon. Hospital order fixes every index used downstream.
struct PlanData {
    SurgeLevelLadder ladder = SurgeLevelLadder::standard();
    std::vector<HospitalProfile> hospitals;
    Horizon horizon;
    /// Forecast arrivals i[h][t].
    DailyGrid arrivals;
    /// Occupants present before day 1.
    InitialState initial;
    std::optional<UnitCatalog> units;
    /// Actual admissions over the 7 days before the horizon, per hospital.
    /// Empty when no history was supplied.
    std::vector<double> recent_weekly_admissions;

    std::size_t num_hospitals() const { return hospitals.size(); }
    std::size_t num_days() const { return arrivals.days(); }
    std::vector<LosPmf> pmfs() const;
    std::optional<std::size_t> index_of(const std::string& hospital_id) const;
    void validate() const;
};

}  // namespace surge::plan
