#include "surge/plan/weights.hpp"

#include <cmath>

namespace surge::plan {

namespace {

void check_grid(const std::vector<std::vector<double>>& grid, const char* field) {
    for (const auto& row : grid)
        for (double v : row)
            if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError(field, "weights must be finite and >= 0");
}

}  // namespace

void CostWeights::validate() const {
    check_grid(level, "weights.level_costs");
    check_grid(transfer, "weights.transfer_cost");
    check_grid(capacity_day, "weights.capacity_costs");
    check_grid(unit_available, "weights.availability_factor");
    check_grid(unit_converted, "weights.conversion_factor");
    for (const auto& row : level)
        if (!row.empty() && row[0] != 0.0) throw ValidationError("weights.level_costs", "baseline cost must be 0");
}

bool CostWeights::levels_monotone(std::size_t h) const {
    const auto& row = level.at(h);
    for (std::size_t l = 1; l < row.size(); ++l)
        if (row[l] < row[l - 1]) return false;
    return true;
}

CostWeights default_weights(const PlanRequest& request, const PlanData& data) {
    const std::size_t n = data.num_hospitals();
    const std::size_t days = data.num_days();
    const std::size_t levels = data.ladder.size();
    CostWeights w;
    w.level.assign(n, std::vector<double>(levels, 0.0));
    w.transfer.assign(n, std::vector<double>(n, request.weights.transfer_cost.value_or(kDefaultTransferCost)));
    w.capacity_day.assign(n, std::vector<double>(days, 0.0));
    w.unit_available.resize(n);
    w.unit_converted.resize(n);
    const double avail = request.weights.availability_factor.value_or(kDefaultAvailabilityFactor);
    const double convert = request.weights.conversion_factor.value_or(kDefaultConversionFactor);

    for (std::size_t h = 0; h < n; ++h) {
        const HospitalProfile& p = data.hospitals[h];
        const double r = request.surge_cost_for(p.id);
        w.transfer[h][h] = 0.0;
        auto override_it = request.weights.level_costs.find(p.id);
        if (override_it != request.weights.level_costs.end()) {
            if (override_it->second.size() != levels)
                throw ValidationError("weights.level_costs", p.id + ": one cost per surge level required");
            for (std::size_t l = 0; l < levels; ++l) w.level[h][l] = r * override_it->second[l];
        } else {
            for (std::size_t l = 0; l < levels; ++l) w.level[h][l] = r * (p.beds(l) - p.beds(0));
        }
        auto cap_it = request.weights.capacity_costs.find(p.id);
        const double per_bed = cap_it != request.weights.capacity_costs.end() ? cap_it->second : r;
        std::fill(w.capacity_day[h].begin(), w.capacity_day[h].end(), per_bed);
        if (data.units) {
            for (const Unit& u : data.units->for_hospital(p.id)) {
                w.unit_available[h].push_back(avail * r * u.beds);
                w.unit_converted[h].push_back(convert * r * u.beds);
            }
        }
    }
    w.validate();
    return w;
}

CostWeights apply_objective_mode(const PlanRequest& request, const PlanData& data, CostWeights w) {
    const std::size_t n = data.num_hospitals();
    switch (request.objective) {
        case ObjectiveMode::min_cost: break;
        case ObjectiveMode::min_surge:
            for (auto& row : w.level)
                for (std::size_t l = 0; l < row.size(); ++l) row[l] = static_cast<double>(l);
            for (auto& row : w.capacity_day) std::fill(row.begin(), row.end(), 1.0);
            for (auto& row : w.unit_available) std::fill(row.begin(), row.end(), 0.0);
            for (auto& row : w.unit_converted) std::fill(row.begin(), row.end(), 0.0);
            for (std::size_t h = 0; h < n; ++h)
                for (std::size_t g = 0; g < n; ++g) w.transfer[h][g] = h == g ? 0.0 : kTiebreak;
            break;
        case ObjectiveMode::balance_load:
            w.balance_load = true;
            for (auto& row : w.level) std::fill(row.begin(), row.end(), 0.0);
            for (auto& row : w.capacity_day) std::fill(row.begin(), row.end(), 0.0);
            for (auto& row : w.unit_available) std::fill(row.begin(), row.end(), 0.0);
            for (auto& row : w.unit_converted) std::fill(row.begin(), row.end(), 0.0);
            for (std::size_t h = 0; h < n; ++h)
                for (std::size_t g = 0; g < n; ++g) w.transfer[h][g] = h == g ? 0.0 : kTiebreak;
            break;
    }
    return w;
}

}  // namespace surge::plan
