#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "surge/core/date.hpp"

namespace surge {

/// Input that violates a documented invariant. `field` names the offending
/// field or record so callers can surface it.
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string field, const std::string& message)
        : std::runtime_error(field.empty() ? message : field + ": " + message),
          field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Outbound transfers exceed arrivals, so admissions would go negative.
class InfeasibleTransferError : public std::runtime_error {
public:
    InfeasibleTransferError(std::size_t hospital, std::size_t day, double admissions);
    std::size_t hospital() const noexcept { return hospital_; }
    std::size_t day() const noexcept { return day_; }

private:
    std::size_t hospital_;
    std::size_t day_;
};

/// Ordered surge tiers; index 0 is the baseline.
struct SurgeLevelLadder {
    std::vector<std::string> levels;

    /// Baseline, Ramp-Up, Surge, Surge+, Maximum, Crisis.
    static SurgeLevelLadder standard();

    std::size_t size() const { return levels.size(); }
    std::optional<std::size_t> index_of(std::string_view name) const;
    void validate() const;
};

/// Probability mass over length of stay in whole days, index 0..Lmax.
using LosPmf = std::vector<double>;

inline constexpr double kPmfTolerance = 1e-9;

void validate_pmf(std::span<const double> pmf, const std::string& field = "los_pmf");
double mean_los(std::span<const double> pmf);
/// survival[k] = P(L > k), clamped at zero.
std::vector<double> los_survival(std::span<const double> pmf);

struct HospitalProfile {
    std::string id;
    std::string name;
    std::vector<int> level_capacities;
    LosPmf los_pmf;
    std::optional<double> latitude;
    std::optional<double> longitude;

    void validate(const SurgeLevelLadder& ladder) const;
    double beds(std::size_t level) const { return static_cast<double>(level_capacities.at(level)); }
};

/// Inclusive day range; day index t in [0, days()) maps to start + t.
struct Horizon {
    Date start;
    Date end;

    int days() const { return start.days_until(end) + 1; }
    Date date_at(int t) const { return start.plus_days(t); }
    void validate() const;
};

struct DemandSeries {
    std::string hospital_id;
    std::string population;
    std::string scenario;
    std::vector<double> values;

    void validate(const Horizon& horizon) const;
};

/// hospitals x days matrix, row-major by hospital.
class DailyGrid {
public:
    DailyGrid() = default;
    DailyGrid(std::size_t hospitals, std::size_t days, double fill = 0.0)
        : hospitals_(hospitals), days_(days), data_(hospitals * days, fill) {}

    std::size_t hospitals() const { return hospitals_; }
    std::size_t days() const { return days_; }

    double& operator()(std::size_t h, std::size_t t) { return data_[h * days_ + t]; }
    double operator()(std::size_t h, std::size_t t) const { return data_[h * days_ + t]; }

    std::span<double> row(std::size_t h) { return {data_.data() + h * days_, days_}; }
    std::span<const double> row(std::size_t h) const { return {data_.data() + h * days_, days_}; }
    std::span<const double> flat() const { return data_; }

    friend bool operator==(const DailyGrid&, const DailyGrid&) = default;

private:
    std::size_t hospitals_ = 0;
    std::size_t days_ = 0;
    std::vector<double> data_;
};

/// s[h][g][t]: patients moved from hospital h to hospital g on day t.
class TransferSeries {
public:
    TransferSeries() = default;
    TransferSeries(std::size_t hospitals, std::size_t days)
        : hospitals_(hospitals), days_(days), data_(hospitals * hospitals * days, 0.0) {}

    std::size_t hospitals() const { return hospitals_; }
    std::size_t days() const { return days_; }

    double& operator()(std::size_t from, std::size_t to, std::size_t t) {
        return data_[(from * hospitals_ + to) * days_ + t];
    }
    double operator()(std::size_t from, std::size_t to, std::size_t t) const {
        return data_[(from * hospitals_ + to) * days_ + t];
    }

    double outbound(std::size_t h, std::size_t t) const;
    double inbound(std::size_t h, std::size_t t) const;
    double total() const;

    /// Zero diagonal, non-negative entries.
    void validate() const;

    friend bool operator==(const TransferSeries&, const TransferSeries&) = default;

private:
    std::size_t hospitals_ = 0;
    std::size_t days_ = 0;
    std::vector<double> data_;
};

/// Usable share of staffed beds: min(z * beds, beds - headroom).
struct Utilization {
    double max_fraction = 1.0;
    std::optional<double> headroom;

    double usable(double beds) const {
        double cap = max_fraction * beds;
        if (headroom) cap = std::min(cap, beds - *headroom);
        return cap;
    }
    void validate() const;
};

struct ProjectionResult {
    DailyGrid admissions;
    DailyGrid discharges;
    DailyGrid census;
    std::vector<double> initial_census;
    /// Set when some census value went below zero, which points at an
    /// inconsistent seed or LOS input rather than a modelling failure.
    bool negative_census = false;
};

}  // namespace surge
