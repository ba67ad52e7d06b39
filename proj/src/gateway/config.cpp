#include "surge/gateway/config.hpp"

#include <algorithm>

namespace surge::gateway {

using nlohmann::json;

namespace {

double number(const json& v, const std::string& field) {
    if (!v.is_number()) throw ValidationError(field, "must be a number");
    return v.get<double>();
}

std::string text(const json& v, const std::string& field) {
    if (!v.is_string()) throw ValidationError(field, "must be a string");
    return v.get<std::string>();
}

const json& object(const json& v, const std::string& field) {
    if (!v.is_object()) throw ValidationError(field, "must be an object");
    return v;
}

Date date(const json& v, const std::string& field) {
    try {
        return Date::parse(text(v, field));
    } catch (const ValidationError& e) {
        throw ValidationError(field, e.what());
    }
}

std::map<std::string, double> number_map(const json& v, const std::string& field) {
    std::map<std::string, double> out;
    for (const auto& [k, x] : object(v, field).items()) out[k] = number(x, field + "." + k);
    return out;
}

void reject_unknown(const json& doc, std::initializer_list<std::string_view> known,
                    std::initializer_list<std::string_view> skip, const std::string& prefix) {
    for (const auto& [key, value] : doc.items()) {
        const auto matches = [&](std::string_view k) { return k == key; };
        if (std::any_of(known.begin(), known.end(), matches) || std::any_of(skip.begin(), skip.end(), matches))
            continue;
        throw ValidationError(prefix + key, "unknown field (schema_version " + std::string(kSchemaVersion) + ")");
    }
}

json preset_to_json(const uncertainty::ScenarioPreset& p) {
    return {{"low", p.low}, {"high", p.high}, {"gamma1", p.gamma1}, {"gamma2", p.gamma2}};
}

uncertainty::ScenarioPreset preset_from_json(const json& v, const std::string& field) {
    object(v, field);
    reject_unknown(v, {"low", "high", "gamma1", "gamma2"}, {}, field + ".");
    uncertainty::ScenarioPreset p;
    if (v.contains("low")) p.low = number(v["low"], field + ".low");
    if (v.contains("high")) p.high = number(v["high"], field + ".high");
    if (v.contains("gamma1")) p.gamma1 = number(v["gamma1"], field + ".gamma1");
    if (v.contains("gamma2")) p.gamma2 = number(v["gamma2"], field + ".gamma2");
    if (!(p.low >= 0.0 && p.low <= 1.0 && p.high >= 1.0 && p.gamma1 >= 0.0 && p.gamma2 >= 0.0))
        throw ValidationError(field, "preset needs 0 <= low <= 1 <= high and non-negative gammas");
    return p;
}

}  // namespace

json request_to_json(const plan::PlanRequest& r) {
    json doc;
    doc["start_date"] = r.start_date.iso();
    doc["end_date"] = r.end_date.iso();
    doc["population"] = r.population;
    doc["capacity_type"] = plan::to_string(r.capacity_type);
    doc["scenario"] = r.scenario;
    doc["recommendation_type"] = plan::to_string(r.recommendation);
    doc["objective"] = plan::to_string(r.objective);
    doc["surge_capacity_type"] = plan::to_string(r.surge_capacity);
    doc["model_complexity"] = plan::to_string(r.complexity);
    doc["transfer_budget"] = r.transfer_budget;
    if (r.total_transfer_budget) doc["total_transfer_budget"] = *r.total_transfer_budget;
    doc["relative_surge_cost"] = r.relative_surge_cost;
    doc["max_utilization"] = r.max_utilization;
    if (r.headroom) doc["headroom"] = *r.headroom;
    doc["current_level"] = r.current_level;
    if (r.timeout_s) doc["timeout_s"] = *r.timeout_s;
    json w = json::object();
    if (!r.weights.level_costs.empty()) w["level_costs"] = r.weights.level_costs;
    if (r.weights.transfer_cost) w["transfer_cost"] = *r.weights.transfer_cost;
    if (!r.weights.capacity_costs.empty()) w["capacity_costs"] = r.weights.capacity_costs;
    if (r.weights.availability_factor) w["availability_factor"] = *r.weights.availability_factor;
    if (r.weights.conversion_factor) w["conversion_factor"] = *r.weights.conversion_factor;
    doc["weights"] = w;
    return doc;
}

plan::PlanRequest request_from_json(const json& doc, std::initializer_list<std::string_view> skip) {
    object(doc, "request");
    reject_unknown(doc,
                   {"start_date", "end_date", "population", "capacity_type", "scenario", "recommendation_type",
                    "objective", "surge_capacity_type", "model_complexity", "transfer_budget",
                    "total_transfer_budget", "relative_surge_cost", "max_utilization", "headroom", "current_level",
                    "timeout_s", "weights"},
                   skip, "");
    plan::PlanRequest r;
    auto has = [&](const char* key) { return doc.contains(key) && !doc[key].is_null(); };
    if (has("start_date")) r.start_date = date(doc["start_date"], "start_date");
    if (has("end_date")) r.end_date = date(doc["end_date"], "end_date");
    if (has("population")) r.population = text(doc["population"], "population");
    if (has("capacity_type")) r.capacity_type = plan::parse_capacity_type(text(doc["capacity_type"], "capacity_type"));
    if (has("scenario")) r.scenario = text(doc["scenario"], "scenario");
    if (has("recommendation_type"))
        r.recommendation = plan::parse_recommendation_type(text(doc["recommendation_type"], "recommendation_type"));
    if (has("objective")) r.objective = plan::parse_objective_mode(text(doc["objective"], "objective"));
    if (has("surge_capacity_type"))
        r.surge_capacity = plan::parse_surge_capacity_type(text(doc["surge_capacity_type"], "surge_capacity_type"));
    if (has("model_complexity"))
        r.complexity = plan::parse_model_complexity(text(doc["model_complexity"], "model_complexity"));
    if (has("transfer_budget")) r.transfer_budget = number_map(doc["transfer_budget"], "transfer_budget");
    if (has("total_transfer_budget"))
        r.total_transfer_budget = number(doc["total_transfer_budget"], "total_transfer_budget");
    if (has("relative_surge_cost"))
        r.relative_surge_cost = number_map(doc["relative_surge_cost"], "relative_surge_cost");
    if (has("max_utilization")) r.max_utilization = number(doc["max_utilization"], "max_utilization");
    if (has("headroom")) r.headroom = number(doc["headroom"], "headroom");
    if (has("current_level")) {
        for (const auto& [k, v] : object(doc["current_level"], "current_level").items())
            r.current_level[k] = text(v, "current_level." + k);
    }
    if (has("timeout_s")) r.timeout_s = number(doc["timeout_s"], "timeout_s");
    if (has("weights")) {
        const auto& w = object(doc["weights"], "weights");
        reject_unknown(w, {"level_costs", "transfer_cost", "capacity_costs", "availability_factor", "conversion_factor"},
                       {}, "weights.");
        auto whas = [&](const char* key) { return w.contains(key) && !w[key].is_null(); };
        if (whas("level_costs")) {
            for (const auto& [k, v] : object(w["level_costs"], "weights.level_costs").items()) {
                if (!v.is_array()) throw ValidationError("weights.level_costs." + k, "must be an array");
                std::vector<double> costs;
                for (const auto& x : v) costs.push_back(number(x, "weights.level_costs." + k));
                r.weights.level_costs[k] = std::move(costs);
            }
        }
        if (whas("transfer_cost")) r.weights.transfer_cost = number(w["transfer_cost"], "weights.transfer_cost");
        if (whas("capacity_costs"))
            r.weights.capacity_costs = number_map(w["capacity_costs"], "weights.capacity_costs");
        if (whas("availability_factor"))
            r.weights.availability_factor = number(w["availability_factor"], "weights.availability_factor");
        if (whas("conversion_factor"))
            r.weights.conversion_factor = number(w["conversion_factor"], "weights.conversion_factor");
    }
    return r;
}

json config_to_json(const ConfigFile& config) {
    json doc = request_to_json(config.request);
    doc["schema_version"] = kSchemaVersion;
    if (!config.presets.empty()) {
        json presets = json::object();
        for (const auto& [name, p] : config.presets) presets[name] = preset_to_json(p);
        doc["uncertainty_presets"] = presets;
    }
    return doc;
}

ConfigFile config_from_json(const json& doc) {
    object(doc, "config");
    if (!doc.contains("schema_version"))
        throw ValidationError("schema_version", "missing (expected \"" + std::string(kSchemaVersion) + "\")");
    if (!doc["schema_version"].is_string() || doc["schema_version"].get<std::string>() != kSchemaVersion)
        throw ValidationError("schema_version", "unsupported version " + doc["schema_version"].dump() +
                                                    " (expected \"" + std::string(kSchemaVersion) + "\")");
    ConfigFile config;
    config.request = request_from_json(doc, {"schema_version", "uncertainty_presets"});
    config.request.validate();
    if (doc.contains("uncertainty_presets") && !doc["uncertainty_presets"].is_null())
        for (const auto& [name, p] : object(doc["uncertainty_presets"], "uncertainty_presets").items())
            config.presets[name] = preset_from_json(p, "uncertainty_presets." + name);
    return config;
}

std::string save_config(const ConfigFile& config) { return config_to_json(config).dump(2) + "\n"; }

std::string save_config(const plan::PlanRequest& request) { return save_config(ConfigFile{request, {}}); }

ConfigFile parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ValidationError("config", std::string("malformed JSON: ") + e.what());
    }
    return config_from_json(doc);
}

plan::PlanRequest load_config(std::string_view text) { return parse_config(text).request; }

}  // namespace surge::gateway
