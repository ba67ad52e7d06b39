#include "surge/gateway/plan_data.hpp"

#include <algorithm>

#include "surge/core/projection.hpp"

namespace surge::gateway {

std::string population_key(const plan::PlanRequest& request) {
    if (request.capacity_type == plan::CapacityType::total) return request.population;
    return request.population + "_" + std::string(plan::to_string(request.capacity_type));
}

plan::PlanData to_plan_data(const IngestBundle& bundle, const plan::PlanRequest& request) {
    request.horizon().validate();
    const std::string key = population_key(request);
    plan::PlanData data;
    data.ladder = bundle.ladder;
    data.horizon = request.horizon();
    const auto days = static_cast<std::size_t>(data.horizon.days());
    const std::size_t n = bundle.hospitals.size();
    if (n == 0) throw ValidationError("hospitals", "the data snapshot declares no hospitals");
    data.arrivals = DailyGrid(n, days);

    std::size_t columns = 1;
    for (const auto& h : bundle.hospitals) {
        const auto* los = bundle.los_for(h.id, key);
        if (!los) throw ValidationError("los", "no length-of-stay distribution for " + h.id + "/" + key);
        HospitalProfile p;
        p.id = h.id;
        p.name = h.id;
        p.level_capacities = h.level_capacities;
        p.los_pmf = los->pmf;
        columns = std::max(columns, p.los_pmf.size());
        data.hospitals.push_back(std::move(p));
    }

    const Date day0 = data.horizon.start.plus_days(-1);
    data.initial.admissions = DailyGrid(n, columns);
    bool any_recent = false;
    std::vector<double> recent(n, 0.0);
    for (std::size_t h = 0; h < n; ++h) {
        const auto& id = bundle.hospitals[h].id;
        const auto* forecast = bundle.admissions_for(id, key, request.scenario);
        const auto* actual = bundle.admissions_for(id, key, std::string(kActualScenario));
        for (std::size_t t = 0; t < days; ++t) {
            const Date day = data.horizon.date_at(static_cast<int>(t));
            std::optional<double> v = forecast ? forecast->at(day) : std::nullopt;
            if (!v && actual) v = actual->at(day);
            if (!v)
                throw ValidationError("arrivals", "no admissions for " + id + "/" + key + " on " + day.iso() +
                                                      " in scenario '" + request.scenario + "'");
            data.arrivals(h, t) = *v;
        }

        const auto* census = bundle.census_for(id, key);
        const auto observed = census ? census->at(day0) : std::nullopt;
        if (observed) {
            data.initial.admissions(h, columns - 1) = *observed;
        } else if (actual) {
            for (std::size_t j = 0; j < columns; ++j) {
                const Date day = day0.plus_days(static_cast<int>(j) - static_cast<int>(columns - 1));
                data.initial.admissions(h, j) = actual->at(day).value_or(0.0);
            }
        }
        if (actual) {
            for (int k = 1; k <= 7; ++k) {
                if (auto v = actual->at(data.horizon.start.plus_days(-k))) {
                    recent[h] += *v;
                    any_recent = true;
                }
            }
        }
    }
    if (any_recent) data.recent_weekly_admissions = std::move(recent);
    if (bundle.units) data.units = bundle.units;
    data.validate();
    return data;
}

std::vector<CensusView> census_view(const IngestBundle& bundle, const std::string& population,
                                    const std::string& scenario, const Date& from, const Date& to) {
    if (to < from) throw ValidationError("to", "'to' is before 'from'");
    const auto token = parse_population_token(population);
    std::optional<Date> last_actual;
    for (const auto& h : bundle.hospitals)
        if (const auto* c = bundle.census_for(h.id, population))
            last_actual = last_actual ? std::max(*last_actual, c->end()) : c->end();

    std::vector<CensusView> out;
    for (const auto& h : bundle.hospitals) {
        CensusView view{h.id, {}};
        if (const auto* c = bundle.census_for(h.id, population)) {
            for (Date d = std::max(from, c->start); d <= std::min(to, c->end()); d = d.plus_days(1))
                view.points.push_back({d, *c->at(d), true});
        }
        out.push_back(std::move(view));
    }

    const Date forecast_start = last_actual ? std::max(from, last_actual->plus_days(1)) : from;
    if (forecast_start <= to) {
        plan::PlanRequest request;
        request.start_date = forecast_start;
        request.end_date = to;
        request.population = token.population;
        request.capacity_type = plan::parse_capacity_type(token.capacity_type);
        request.scenario = scenario;
        const auto data = to_plan_data(bundle, request);
        const auto pmfs = data.pmfs();
        const auto census = project(data.arrivals, TransferSeries(data.num_hospitals(), data.num_days()), pmfs,
                                    data.initial)
                                .census;
        for (std::size_t h = 0; h < out.size(); ++h)
            for (std::size_t t = 0; t < data.num_days(); ++t)
                out[h].points.push_back({data.horizon.date_at(static_cast<int>(t)), census(h, t), false});
    }
    return out;
}

}  // namespace surge::gateway
