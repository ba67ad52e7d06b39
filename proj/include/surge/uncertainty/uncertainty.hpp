#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "surge/core/types.hpp"
#include "surge/plan/inputs.hpp"
#include "surge/plan/plan.hpp"

namespace surge::uncertainty {

/// Admissible arrival trajectories around a nominal forecast for one
/// hospital: a per-day box, a total-deviation budget and a ramp bound.
struct UncertaintySpec {
    std::vector<double> nominal;
    std::vector<double> lower;  // allowed drop below nominal, per day
    std::vector<double> upper;  // allowed rise above nominal, per day
    double gamma1 = 0.0;        // sum |i - nominal| <= gamma1 * sum nominal
    double gamma2 = 0.0;        // |(i_t - i_t+1) / (nominal_t - nominal_t+1)| <= gamma2

    /// Nominal only.
    static UncertaintySpec point(std::vector<double> nominal);

    /// Throws ValidationError naming the field.
    void validate() const;
};

enum class Clause { box, budget, ramp };

std::string_view clause_name(Clause c);

struct ClauseViolation {
    Clause clause;
    /// Day index; for the budget clause always 0.
    std::size_t day = 0;
    double value = 0.0;
    double limit = 0.0;

    std::string describe() const;
};

struct Membership {
    bool member = true;
    /// First violated clause in the order box, budget, ramp.
    std::optional<ClauseViolation> violation;
    /// Ramp clauses skipped because the nominal is flat between t and t+1.
    std::size_t ramp_skipped = 0;
};

inline constexpr double kMembershipTol = 1e-9;

/// Throws ValidationError when the candidate length differs from the nominal.
Membership contains(const UncertaintySpec& spec, std::span<const double> candidate, double tol = kMembershipTol);

struct SampleSet {
    std::vector<std::vector<double>> samples;
    std::vector<std::string> notes;
};

/// Deterministic in (spec, count, seed). Samples lean towards extreme points:
/// a random sign pattern over a random window of days takes the full box
/// deviation, then the whole deviation is scaled down until the budget and
/// ramp clauses hold. Throws ValidationError when the set has no member.
SampleSet sample_scenarios(const UncertaintySpec& spec, std::size_t count, std::uint64_t seed);

/// Stream seed for (seed, scenario, hospital); independent per scenario so
/// scenarios can be evaluated in any order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t scenario, std::uint64_t hospital);

/// Arrivals [h][t] of scenario `index`: hospital h draws from specs[h] with
/// the stream derive_seed(seed, index, h).
DailyGrid scenario_arrivals(const std::vector<UncertaintySpec>& specs, std::size_t index, std::uint64_t seed);

struct HospitalRobustness {
    std::string hospital_id;
    /// Scenario-days with census above usable capacity, over all scenario-days.
    double violation_rate = 0.0;
    std::size_t violating_days = 0;
    /// Largest census minus usable capacity seen; 0 when never exceeded.
    double worst_overflow = 0.0;
    /// Scenario-days where outbound transfers were scaled down to arrivals.
    std::size_t clipped_days = 0;
};

struct OffendingScenario {
    std::size_t index = 0;
    double worst_overflow = 0.0;
    /// Arrivals [h][t] of the scenario.
    DailyGrid arrivals;
};

struct RobustnessReport {
    std::size_t scenarios = 0;
    std::size_t days = 0;
    std::vector<HospitalRobustness> hospitals;
    /// Worst scenarios first, at most `max_payloads` of them.
    std::vector<OffendingScenario> offending;
    std::size_t offending_total = 0;
    bool clipped = false;
    std::vector<std::string> notes;

    double overall_violation_rate() const;
};

inline constexpr std::size_t kDefaultMaxPayloads = 10;

/// Replays the plan's capacity and transfers against `count` sampled arrival
/// scenarios (one spec per hospital, in plan order).
RobustnessReport validate_plan(const plan::CapacityPlan& plan, const plan::PlanData& data,
                               const std::vector<UncertaintySpec>& specs, std::size_t count, std::uint64_t seed,
                               std::size_t max_payloads = kDefaultMaxPayloads);

/// Envelope around a forecast, as multiples of the nominal.
struct ScenarioPreset {
    double low = 1.0;   // lower bound = low * nominal
    double high = 1.0;  // upper bound = high * nominal
    double gamma1 = 0.0;
    double gamma2 = 2.0;

    friend bool operator==(const ScenarioPreset&, const ScenarioPreset&) = default;
};

/// optimistic: [0.8, 1.0], moderate: nominal only, pessimistic: [1.0, 1.25].
std::map<std::string, ScenarioPreset> default_presets();

UncertaintySpec spec_from_preset(std::vector<double> nominal, const ScenarioPreset& preset);

}  // namespace surge::uncertainty
