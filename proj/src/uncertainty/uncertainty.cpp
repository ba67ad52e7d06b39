#include "surge/uncertainty/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "surge/core/projection.hpp"

namespace surge::uncertainty {

namespace {

constexpr double kOverflowTol = 1e-9;
// Pull samples a hair inside the set so round-off never breaks membership.
constexpr double kShrink = 1.0 - 1e-12;

double slack(double tol, double scale) { return tol * std::max(1.0, std::fabs(scale)); }

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

bool box_is_empty(const UncertaintySpec& spec) {
    for (std::size_t t = 0; t < spec.nominal.size(); ++t)
        if (spec.upper[t] > 0.0 || std::min(spec.lower[t], spec.nominal[t]) > 0.0) return false;
    return true;
}

/// Full-box deviation over a window with a few sign runs.
std::vector<double> direction(const UncertaintySpec& spec, std::mt19937_64& rng) {
    const std::size_t n = spec.nominal.size();
    std::vector<double> d(n, 0.0);
    if (n == 0) return d;
    auto pick = [&](std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    };
    std::size_t first = 0;
    std::size_t last = n - 1;
    if (std::bernoulli_distribution(0.5)(rng)) {
        first = pick(0, n - 1);
        last = pick(first, n - 1);
    }
    const std::size_t runs = pick(1, 3);
    std::vector<std::size_t> cuts{first};
    for (std::size_t r = 1; r < runs; ++r) cuts.push_back(pick(first, last));
    std::sort(cuts.begin(), cuts.end());
    std::vector<int> sign(runs);
    for (int& s : sign) s = std::bernoulli_distribution(0.5)(rng) ? 1 : -1;
    for (std::size_t t = first; t <= last; ++t) {
        std::size_t run = 0;
        while (run + 1 < runs && t >= cuts[run + 1]) ++run;
        d[t] = sign[run] > 0 ? spec.upper[t] : -std::min(spec.lower[t], spec.nominal[t]);
    }
    return d;
}

/// Largest alpha in [0, 1] keeping nominal + alpha * d inside the budget and
/// ramp clauses. The box holds for any alpha in [0, 1].
double max_scale(const UncertaintySpec& spec, const std::vector<double>& d) {
    double alpha = 1.0;
    const double total = std::accumulate(spec.nominal.begin(), spec.nominal.end(), 0.0);
    double dev = 0.0;
    for (double v : d) dev += std::fabs(v);
    if (dev > 0.0) alpha = std::min(alpha, spec.gamma1 * total / dev);
    for (std::size_t t = 0; t + 1 < d.size(); ++t) {
        const double a = spec.nominal[t] - spec.nominal[t + 1];
        if (a == 0.0) continue;
        const double b = d[t] - d[t + 1];
        const double c = spec.gamma2 * std::fabs(a);
        if (b > 0.0) alpha = std::min(alpha, (c - a) / b);
        if (b < 0.0) alpha = std::min(alpha, (c + a) / -b);
    }
    return std::max(0.0, alpha) * kShrink;
}

std::vector<double> sample_one(const UncertaintySpec& spec, std::mt19937_64& rng) {
    const auto d = direction(spec, rng);
    const double alpha = max_scale(spec, d);
    std::vector<double> out(spec.nominal);
    for (std::size_t t = 0; t < out.size(); ++t) out[t] = std::max(0.0, out[t] + alpha * d[t]);
    return out;
}

void require_nonempty(const UncertaintySpec& spec) {
    const auto m = contains(spec, spec.nominal);
    if (!m.member)
        throw ValidationError("gamma2", "the uncertainty set is empty: the nominal itself breaks the " +
                                            m.violation->describe());
}

}  // namespace

UncertaintySpec UncertaintySpec::point(std::vector<double> nominal) {
    UncertaintySpec s;
    s.lower.assign(nominal.size(), 0.0);
    s.upper.assign(nominal.size(), 0.0);
    s.nominal = std::move(nominal);
    s.gamma2 = 1.0;
    return s;
}

void UncertaintySpec::validate() const {
    if (lower.size() != nominal.size() || upper.size() != nominal.size())
        throw ValidationError("deviation", "deviation bounds must have one entry per nominal day");
    for (double v : nominal)
        if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("nominal", "nominal arrivals must be finite and >= 0");
    for (std::size_t t = 0; t < nominal.size(); ++t) {
        if (!(lower[t] >= 0.0) || !std::isfinite(lower[t]))
            throw ValidationError("lower", "deviation bounds must be finite and >= 0");
        if (!(upper[t] >= 0.0) || !std::isfinite(upper[t]))
            throw ValidationError("upper", "deviation bounds must be finite and >= 0");
    }
    if (!(gamma1 >= 0.0) || !std::isfinite(gamma1)) throw ValidationError("gamma1", "gamma1 must be finite and >= 0");
    if (!(gamma2 >= 0.0) || !std::isfinite(gamma2)) throw ValidationError("gamma2", "gamma2 must be finite and >= 0");
}

std::string_view clause_name(Clause c) {
    switch (c) {
        case Clause::box: return "box";
        case Clause::budget: return "budget";
        case Clause::ramp: return "ramp";
    }
    return "?";
}

std::string ClauseViolation::describe() const {
    std::ostringstream os;
    os << clause_name(clause) << " clause";
    if (clause != Clause::budget) os << " on day " << day;
    os << ": " << value << " exceeds " << limit;
    return os.str();
}

Membership contains(const UncertaintySpec& spec, std::span<const double> candidate, double tol) {
    if (candidate.size() != spec.nominal.size())
        throw ValidationError("candidate", "candidate has " + std::to_string(candidate.size()) + " days, nominal has " +
                                               std::to_string(spec.nominal.size()));
    Membership m;
    const std::size_t n = candidate.size();
    auto fail = [&](Clause c, std::size_t day, double value, double limit) {
        if (m.member) {
            m.member = false;
            m.violation = ClauseViolation{c, day, value, limit};
        }
    };
    for (std::size_t t = 0; t < n && m.member; ++t) {
        const double lo = spec.nominal[t] - spec.lower[t];
        const double hi = spec.nominal[t] + spec.upper[t];
        if (candidate[t] < lo - slack(tol, lo)) fail(Clause::box, t, lo - candidate[t], 0.0);
        else if (candidate[t] > hi + slack(tol, hi)) fail(Clause::box, t, candidate[t] - hi, 0.0);
    }
    double dev = 0.0;
    double total = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        dev += std::fabs(candidate[t] - spec.nominal[t]);
        total += spec.nominal[t];
    }
    const double budget = spec.gamma1 * total;
    if (dev > budget + slack(tol, budget)) fail(Clause::budget, 0, dev, budget);
    for (std::size_t t = 0; t + 1 < n; ++t) {
        const double a = spec.nominal[t] - spec.nominal[t + 1];
        if (a == 0.0) {
            ++m.ramp_skipped;
            continue;
        }
        const double step = std::fabs(candidate[t] - candidate[t + 1]);
        const double limit = spec.gamma2 * std::fabs(a);
        if (step > limit + slack(tol, limit)) fail(Clause::ramp, t, step / std::fabs(a), spec.gamma2);
    }
    return m;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t scenario, std::uint64_t hospital) {
    return splitmix(splitmix(splitmix(seed) ^ scenario) ^ (hospital + 0x51ed27ULL));
}

SampleSet sample_scenarios(const UncertaintySpec& spec, std::size_t count, std::uint64_t seed) {
    spec.validate();
    if (count == 0) throw ValidationError("count", "at least one scenario is required");
    require_nonempty(spec);
    SampleSet out;
    if (box_is_empty(spec) || spec.gamma1 == 0.0) {
        out.notes.push_back(box_is_empty(spec) ? "deviation bounds are all zero; every sample equals the nominal"
                                               : "gamma1 is zero; every sample equals the nominal");
        out.samples.assign(count, spec.nominal);
        return out;
    }
    out.samples.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        std::mt19937_64 rng(derive_seed(seed, s, 0));
        out.samples.push_back(sample_one(spec, rng));
    }
    return out;
}

DailyGrid scenario_arrivals(const std::vector<UncertaintySpec>& specs, std::size_t index, std::uint64_t seed) {
    const std::size_t days = specs.empty() ? 0 : specs.front().nominal.size();
    DailyGrid arrivals(specs.size(), days);
    for (std::size_t h = 0; h < specs.size(); ++h) {
        if (specs[h].nominal.size() != days) throw ValidationError("specs", "specs cover different horizons");
        std::mt19937_64 rng(derive_seed(seed, index, h));
        const auto row = sample_one(specs[h], rng);
        std::copy(row.begin(), row.end(), arrivals.row(h).begin());
    }
    return arrivals;
}

double RobustnessReport::overall_violation_rate() const {
    const double cells = static_cast<double>(hospitals.size() * scenarios * days);
    if (cells == 0.0) return 0.0;
    std::size_t violating = 0;
    for (const auto& h : hospitals) violating += h.violating_days;
    return static_cast<double>(violating) / cells;
}

RobustnessReport validate_plan(const plan::CapacityPlan& plan, const plan::PlanData& data,
                               const std::vector<UncertaintySpec>& specs, std::size_t count, std::uint64_t seed,
                               std::size_t max_payloads) {
    const std::size_t n = plan.hospital_ids.size();
    const std::size_t days = plan.capacity.days();
    if (specs.size() != n) throw ValidationError("specs", "one uncertainty spec per hospital is required");
    if (count == 0) throw ValidationError("count", "at least one scenario is required");
    for (std::size_t h = 0; h < n; ++h) {
        specs[h].validate();
        if (specs[h].nominal.size() != days)
            throw ValidationError("specs", plan.hospital_ids[h] + ": nominal does not cover the plan horizon");
        require_nonempty(specs[h]);
    }
    const auto pmfs = data.pmfs();
    const Utilization util = plan.request.utilization();

    RobustnessReport report;
    report.scenarios = count;
    report.days = days;
    for (const auto& id : plan.hospital_ids) report.hospitals.push_back({id, 0.0, 0, 0.0, 0});

    for (std::size_t s = 0; s < count; ++s) {
        DailyGrid arrivals = scenario_arrivals(specs, s, seed);
        TransferSeries transfers = plan.transfers;
        for (std::size_t h = 0; h < n; ++h)
            for (std::size_t t = 0; t < days; ++t) {
                const double out = transfers.outbound(h, t);
                if (out <= arrivals(h, t)) continue;
                const double f = arrivals(h, t) / out;
                for (std::size_t g = 0; g < n; ++g) transfers(h, g, t) *= f;
                ++report.hospitals[h].clipped_days;
                report.clipped = true;
            }
        const auto proj = project(arrivals, transfers, pmfs, data.initial);
        double worst = 0.0;
        bool offending = false;
        for (std::size_t h = 0; h < n; ++h)
            for (std::size_t t = 0; t < days; ++t) {
                const double over = proj.census(h, t) - util.usable(plan.capacity(h, t));
                if (over <= kOverflowTol) continue;
                auto& hr = report.hospitals[h];
                ++hr.violating_days;
                hr.worst_overflow = std::max(hr.worst_overflow, over);
                worst = std::max(worst, over);
                offending = true;
            }
        if (offending) {
            ++report.offending_total;
            report.offending.push_back({s, worst, std::move(arrivals)});
        }
    }
    const double cells = static_cast<double>(count) * static_cast<double>(days);
    for (auto& hr : report.hospitals) hr.violation_rate = cells > 0 ? static_cast<double>(hr.violating_days) / cells : 0.0;
    std::stable_sort(report.offending.begin(), report.offending.end(),
                     [](const auto& a, const auto& b) { return a.worst_overflow > b.worst_overflow; });
    if (report.offending.size() > max_payloads) report.offending.resize(max_payloads);
    if (report.clipped)
        report.notes.push_back("outbound transfers exceeded scenario arrivals on some days and were scaled down");
    for (std::size_t h = 0; h < n; ++h)
        if (box_is_empty(specs[h]) || specs[h].gamma1 == 0.0)
            report.notes.push_back(plan.hospital_ids[h] + ": spec admits only the nominal");
    return report;
}

std::map<std::string, ScenarioPreset> default_presets() {
    return {{"optimistic", {0.8, 1.0, 0.2, 2.0}},
            {"moderate", {1.0, 1.0, 0.0, 2.0}},
            {"pessimistic", {1.0, 1.25, 0.25, 2.0}}};
}

UncertaintySpec spec_from_preset(std::vector<double> nominal, const ScenarioPreset& preset) {
    UncertaintySpec s;
    for (double v : nominal) {
        s.lower.push_back(std::max(0.0, (1.0 - preset.low) * v));
        s.upper.push_back(std::max(0.0, (preset.high - 1.0) * v));
    }
    s.nominal = std::move(nominal);
    s.gamma1 = preset.gamma1;
    s.gamma2 = preset.gamma2;
    return s;
}

}  // namespace surge::uncertainty
