#pragma once

#include <string>
#include <vector>

#include "surge/gateway/csv_ingest.hpp"
#include "surge/plan/inputs.hpp"
#include "surge/plan/request.hpp"

namespace surge::gateway {

/// Population token the request selects, e.g. "covid" or "covid_icu".
std::string population_key(const plan::PlanRequest& request);

/// Narrows the bundle to the request's population, capacity type, scenario
/// and horizon. Hospitals come in id order. Arrivals use the scenario's
/// forecast and fall back to actual admissions on days without one. The
/// initial state is the observed census on the day before the horizon when
/// present, otherwise the actual admissions of the preceding Lmax + 1 days.
/// Throws ValidationError naming what is missing.
plan::PlanData to_plan_data(const IngestBundle& bundle, const plan::PlanRequest& request);

struct CensusPoint {
    Date date;
    double value = 0.0;
    bool actual = true;
};

struct CensusView {
    std::string hospital_id;
    std::vector<CensusPoint> points;
};

/// Observed census in [from, to] followed by the no-transfer projection of
/// the scenario from the day after the last observation through `to`.
std::vector<CensusView> census_view(const IngestBundle& bundle, const std::string& population,
                                    const std::string& scenario, const Date& from, const Date& to);

}  // namespace surge::gateway
