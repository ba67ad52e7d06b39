#include "surge/core/projection.hpp"

#include <algorithm>

#include "surge/kernels.hpp"

namespace surge {

namespace {

constexpr double kNegativeTolerance = 1e-9;

void require_same_shape(const DailyGrid& a, const DailyGrid& b, const char* what) {
    if (a.hospitals() != b.hospitals() || a.days() != b.days())
        throw ValidationError(what, "hospital/day dimensions do not match");
}

}  // namespace

InitialState InitialState::empty(std::size_t hospitals) { return {DailyGrid(hospitals, 0)}; }

InitialState InitialState::from_census(std::span<const double> census) {
    InitialState state{DailyGrid(census.size(), 1)};
    for (std::size_t h = 0; h < census.size(); ++h) {
        if (!(census[h] >= 0.0)) throw ValidationError("census", "initial census must be >= 0");
        state.admissions(h, 0) = census[h];
    }
    return state;
}

std::vector<double> InitialState::census(std::span<const LosPmf> pmfs) const {
    const std::size_t hospitals = admissions.hospitals();
    if (pmfs.size() != hospitals) throw ValidationError("los_pmf", "one pmf per hospital required");
    std::vector<double> out(hospitals, 0.0);
    const std::size_t columns = admissions.days();
    for (std::size_t h = 0; h < hospitals; ++h) {
        const auto survival = los_survival(pmfs[h]);
        for (std::size_t j = 0; j < columns; ++j) {
            const std::size_t age = columns - 1 - j;
            if (age < survival.size()) out[h] += admissions(h, j) * survival[age];
        }
    }
    return out;
}

DailyGrid project_admissions(const DailyGrid& arrivals, const TransferSeries& transfers) {
    const std::size_t hospitals = arrivals.hospitals();
    const std::size_t days = arrivals.days();
    if (transfers.hospitals() != hospitals || transfers.days() != days)
        throw ValidationError("transfers", "transfer series does not match the arrivals' hospitals and horizon");
    DailyGrid admissions = arrivals;
    for (std::size_t h = 0; h < hospitals; ++h)
        for (std::size_t g = 0; g < hospitals; ++g) {
            if (g == h) continue;
            for (std::size_t t = 0; t < days; ++t) {
                const double moved = transfers(h, g, t);
                admissions(h, t) -= moved;
                admissions(g, t) += moved;
            }
        }
    for (std::size_t h = 0; h < hospitals; ++h)
        for (std::size_t t = 0; t < days; ++t)
            if (admissions(h, t) < -kNegativeTolerance) throw InfeasibleTransferError(h, t, admissions(h, t));
    return admissions;
}

DailyGrid project_discharges(const DailyGrid& admissions, std::span<const LosPmf> pmfs,
                             const InitialState* history) {
    const std::size_t hospitals = admissions.hospitals();
    const std::size_t days = admissions.days();
    if (pmfs.size() != hospitals) throw ValidationError("los_pmf", "one pmf per hospital required");
    const std::size_t lead = history ? history->admissions.days() : 0;
    if (history && history->admissions.hospitals() != hospitals)
        throw ValidationError("initial_state", "history does not match the hospital set");

    DailyGrid discharges(hospitals, days);
    std::vector<double> signal(lead + days);
    std::vector<double> out(lead + days);
    for (std::size_t h = 0; h < hospitals; ++h) {
        validate_pmf(pmfs[h]);
        for (std::size_t j = 0; j < lead; ++j) signal[j] = history->admissions(h, j);
        std::copy_n(admissions.row(h).begin(), days, signal.begin() + static_cast<std::ptrdiff_t>(lead));
        kernels::causal_convolve(signal, pmfs[h], out);
        std::copy_n(out.begin() + static_cast<std::ptrdiff_t>(lead), days, discharges.row(h).begin());
    }
    return discharges;
}

ProjectionResult project_census(const DailyGrid& admissions, const DailyGrid& discharges,
                                std::span<const double> initial_census) {
    require_same_shape(admissions, discharges, "discharges");
    const std::size_t hospitals = admissions.hospitals();
    const std::size_t days = admissions.days();
    if (initial_census.size() != hospitals) throw ValidationError("initial_census", "one value per hospital required");

    ProjectionResult result;
    result.admissions = admissions;
    result.discharges = discharges;
    result.census = DailyGrid(hospitals, days);
    result.initial_census.assign(initial_census.begin(), initial_census.end());
    for (std::size_t h = 0; h < hospitals; ++h) {
        double running = initial_census[h];
        for (std::size_t t = 0; t < days; ++t) {
            running += admissions(h, t) - discharges(h, t);
            result.census(h, t) = running;
            if (running < -kNegativeTolerance) result.negative_census = true;
        }
    }
    return result;
}

ProjectionResult project(const DailyGrid& arrivals, const TransferSeries& transfers,
                         std::span<const LosPmf> pmfs, const InitialState& initial) {
    const DailyGrid admissions = project_admissions(arrivals, transfers);
    const DailyGrid discharges = project_discharges(admissions, pmfs, &initial);
    const auto seed = initial.census(pmfs);
    return project_census(admissions, discharges, seed);
}

int required_level(double census, const HospitalProfile& profile, const Utilization& utilization) {
    constexpr double kTolerance = 1e-9;
    for (std::size_t l = 0; l < profile.level_capacities.size(); ++l)
        if (utilization.usable(profile.beds(l)) + kTolerance >= census) return static_cast<int>(l);
    return kOverflowLevel;
}

std::vector<std::vector<int>> required_levels(const DailyGrid& census, std::span<const HospitalProfile> profiles,
                                              const Utilization& utilization) {
    if (profiles.size() != census.hospitals()) throw ValidationError("profiles", "one profile per hospital required");
    std::vector<std::vector<int>> levels(census.hospitals(), std::vector<int>(census.days()));
    for (std::size_t h = 0; h < census.hospitals(); ++h)
        for (std::size_t t = 0; t < census.days(); ++t)
            levels[h][t] = required_level(census(h, t), profiles[h], utilization);
    return levels;
}

}  // namespace surge
