#pragma once

#include <span>
#include <vector>

#include "surge/core/types.hpp"

namespace surge {

/// Occupants present before the horizon, described as admissions on the days
/// leading up to day 0 (the day before the first horizon day). Column j of
/// `admissions` is day j - (columns - 1) relative to day 0, so the last column
/// is day 0 itself. Existing patients then leave through the same LOS pmf as
/// new ones.
struct InitialState {
    DailyGrid admissions;

    static InitialState empty(std::size_t hospitals);
    /// Pseudo-admission pulse on day 0 equal to the observed census.
    static InitialState from_census(std::span<const double> census);

    /// Census carried into day 1 under the given pmfs.
    std::vector<double> census(std::span<const LosPmf> pmfs) const;
};

/// a[h][t] = i[h][t] + sum_g (s[g][h][t] - s[h][g][t]).
DailyGrid project_admissions(const DailyGrid& arrivals, const TransferSeries& transfers);

/// d[h][t] = sum_{t' <= t} P(L_h = t - t') a[h][t'], including discharges of
/// patients admitted in the initial-state history.
DailyGrid project_discharges(const DailyGrid& admissions, std::span<const LosPmf> pmfs,
                             const InitialState* history = nullptr);

/// o[h][t] = o[h][-1] + sum_{t' <= t} (a - d).
ProjectionResult project_census(const DailyGrid& admissions, const DailyGrid& discharges,
                                std::span<const double> initial_census);

/// Admissions, discharges and census for fixed arrivals and transfers.
ProjectionResult project(const DailyGrid& arrivals, const TransferSeries& transfers,
                         std::span<const LosPmf> pmfs, const InitialState& initial);

inline constexpr int kOverflowLevel = -1;

/// Smallest level whose usable capacity covers the census, or kOverflowLevel.
std::vector<std::vector<int>> required_levels(const DailyGrid& census,
                                              std::span<const HospitalProfile> profiles,
                                              const Utilization& utilization);

int required_level(double census, const HospitalProfile& profile, const Utilization& utilization);

}  // namespace surge
