#include "surge/plan/inputs.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace surge::plan {

const std::vector<Unit>& UnitCatalog::for_hospital(const std::string& id) const {
    static const std::vector<Unit> none;
    auto it = units.find(id);
    return it == units.end() ? none : it->second;
}

std::size_t UnitCatalog::total_units() const {
    std::size_t n = 0;
    for (const auto& [id, list] : units) n += list.size();
    return n;
}

void UnitCatalog::validate() const {
    for (const auto& [hospital, list] : units) {
        std::set<std::string> ids;
        for (std::size_t k = 0; k < list.size(); ++k) {
            const Unit& u = list[k];
            if (u.beds <= 0) throw ValidationError("units", hospital + "/" + u.id + ": beds must be > 0");
            if (u.setup_days < 0 || u.teardown_days < 0)
                throw ValidationError("units", hospital + "/" + u.id + ": lead times must be >= 0");
            if (!ids.insert(u.id).second) throw ValidationError("units", hospital + "/" + u.id + ": duplicate unit id");
            if (k > 0 && list[k - 1].order > u.order)
                throw ValidationError("units", hospital + ": units must be sorted by order");
        }
    }
}

std::vector<LosPmf> PlanData::pmfs() const {
    std::vector<LosPmf> out;
    out.reserve(hospitals.size());
    for (const auto& h : hospitals) out.push_back(h.los_pmf);
    return out;
}

std::optional<std::size_t> PlanData::index_of(const std::string& hospital_id) const {
    for (std::size_t h = 0; h < hospitals.size(); ++h)
        if (hospitals[h].id == hospital_id) return h;
    return std::nullopt;
}

void PlanData::validate() const {
    ladder.validate();
    horizon.validate();
    if (hospitals.empty()) throw ValidationError("hospitals", "at least one hospital is required");
    std::set<std::string> ids;
    for (const auto& h : hospitals) {
        h.validate(ladder);
        if (!ids.insert(h.id).second) throw ValidationError("hospitals", "duplicate hospital id '" + h.id + "'");
    }
    if (arrivals.hospitals() != hospitals.size() || arrivals.days() != static_cast<std::size_t>(horizon.days()))
        throw ValidationError("arrivals", "arrivals do not cover every hospital and horizon day");
    for (double v : arrivals.flat())
        if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("arrivals", "arrivals must be finite and >= 0");
    if (initial.admissions.hospitals() != hospitals.size())
        throw ValidationError("initial_state", "initial state does not match the hospital set");
    for (double v : initial.admissions.flat())
        if (!(v >= 0.0)) throw ValidationError("initial_state", "history admissions must be >= 0");
    if (!recent_weekly_admissions.empty() && recent_weekly_admissions.size() != hospitals.size())
        throw ValidationError("recent_weekly_admissions", "one value per hospital is required");
    for (double v : recent_weekly_admissions)
        if (!(v >= 0.0)) throw ValidationError("recent_weekly_admissions", "values must be >= 0");
    if (units) {
        units->validate();
        for (const auto& [id, list] : units->units)
            if (!ids.count(id)) throw ValidationError("units", "unknown hospital id '" + id + "'");
    }
}

}  // namespace surge::plan
