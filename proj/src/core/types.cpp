#include "surge/core/types.hpp"

#include <cmath>
#include <set>

namespace surge {

InfeasibleTransferError::InfeasibleTransferError(std::size_t hospital, std::size_t day, double admissions)
    : std::runtime_error("outbound transfers exceed arrivals at hospital " + std::to_string(hospital) +
                         ", day " + std::to_string(day) + " (admissions " + std::to_string(admissions) + ")"),
      hospital_(hospital),
      day_(day) {}

SurgeLevelLadder SurgeLevelLadder::standard() {
    return {{"baseline", "ramp_up", "surge", "surge_plus", "maximum", "crisis"}};
}

std::optional<std::size_t> SurgeLevelLadder::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < levels.size(); ++i)
        if (levels[i] == name) return i;
    return std::nullopt;
}

void SurgeLevelLadder::validate() const {
    if (levels.empty()) throw ValidationError("levels", "surge ladder needs at least the baseline level");
    std::set<std::string> seen;
    for (const auto& name : levels)
        if (!seen.insert(name).second) throw ValidationError("levels", "duplicate level '" + name + "'");
}

void validate_pmf(std::span<const double> pmf, const std::string& field) {
    if (pmf.empty()) throw ValidationError(field, "empty length-of-stay distribution");
    double total = 0.0;
    for (double p : pmf) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw ValidationError(field, "probabilities must be finite and >= 0");
        total += p;
    }
    if (std::fabs(total - 1.0) > kPmfTolerance)
        throw ValidationError(field, "probabilities sum to " + std::to_string(total) + ", expected 1");
}

double mean_los(std::span<const double> pmf) {
    double mean = 0.0;
    for (std::size_t k = 0; k < pmf.size(); ++k) mean += static_cast<double>(k) * pmf[k];
    return mean;
}

std::vector<double> los_survival(std::span<const double> pmf) {
    std::vector<double> survival(pmf.size());
    double cdf = 0.0;
    for (std::size_t k = 0; k < pmf.size(); ++k) {
        cdf += pmf[k];
        survival[k] = std::max(0.0, 1.0 - cdf);
    }
    // The last entry is the tail beyond Lmax, zero for a normalized pmf.
    if (!survival.empty()) survival.back() = 0.0;
    return survival;
}

void HospitalProfile::validate(const SurgeLevelLadder& ladder) const {
    if (id.empty()) throw ValidationError("hospital_id", "empty hospital id");
    if (level_capacities.size() != ladder.size())
        throw ValidationError("level_capacities", "hospital " + id + " has " +
                                                      std::to_string(level_capacities.size()) +
                                                      " levels, ladder has " + std::to_string(ladder.size()));
    for (std::size_t l = 0; l < level_capacities.size(); ++l) {
        if (level_capacities[l] < 0) throw ValidationError("level_capacities", "negative bed count at " + id);
        if (l > 0 && level_capacities[l] < level_capacities[l - 1])
            throw ValidationError("level_capacities", "hospital " + id + ": level '" + ladder.levels[l] +
                                                          "' has fewer beds than '" + ladder.levels[l - 1] + "'");
    }
    validate_pmf(los_pmf, "los_pmf[" + id + "]");
    if (latitude && (*latitude < -90.0 || *latitude > 90.0)) throw ValidationError("latitude", "out of range");
    if (longitude && (*longitude < -180.0 || *longitude > 180.0))
        throw ValidationError("longitude", "out of range");
}

void Horizon::validate() const {
    if (end < start) throw ValidationError("end_date", "end date precedes start date");
}

void DemandSeries::validate(const Horizon& horizon) const {
    if (values.size() != static_cast<std::size_t>(horizon.days()))
        throw ValidationError("values", "series for " + hospital_id + " has " + std::to_string(values.size()) +
                                            " days, horizon has " + std::to_string(horizon.days()));
    for (double v : values)
        if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("values", "negative or non-finite arrivals");
}

double TransferSeries::outbound(std::size_t h, std::size_t t) const {
    double sum = 0.0;
    for (std::size_t g = 0; g < hospitals_; ++g) sum += (*this)(h, g, t);
    return sum;
}

double TransferSeries::inbound(std::size_t h, std::size_t t) const {
    double sum = 0.0;
    for (std::size_t g = 0; g < hospitals_; ++g) sum += (*this)(g, h, t);
    return sum;
}

double TransferSeries::total() const {
    double sum = 0.0;
    for (double v : data_) sum += v;
    return sum;
}

void TransferSeries::validate() const {
    for (std::size_t h = 0; h < hospitals_; ++h)
        for (std::size_t g = 0; g < hospitals_; ++g)
            for (std::size_t t = 0; t < days_; ++t) {
                const double v = (*this)(h, g, t);
                if (h == g && v != 0.0) throw ValidationError("transfers", "non-zero self transfer");
                if (!(v >= 0.0) || !std::isfinite(v))
                    throw ValidationError("transfers", "negative or non-finite transfer");
            }
}

void Utilization::validate() const {
    if (!(max_fraction > 0.0 && max_fraction <= 1.0))
        throw ValidationError("max_utilization", "must lie in (0, 1]");
    if (headroom && !(*headroom >= 0.0)) throw ValidationError("headroom", "must be >= 0");
}

}  // namespace surge
