#include "surge/api/service.hpp"

#include <algorithm>
#include <chrono>

#include "surge/analytics/analytics.hpp"
#include "surge/api/json_codec.hpp"
#include "surge/gateway/plan_data.hpp"
#include "surge/uncertainty/uncertainty.hpp"

namespace surge::api {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxRobustnessScenarios = 100'000;
constexpr std::size_t kDefaultRobustnessScenarios = 200;

/// Thrown inside handlers and turned into an error envelope.
struct HttpError {
    int status;
    std::string code;
    std::string message;
    std::string field;
};

Response error(int status, const std::string& code, const std::string& message, const std::string& field = "") {
    return {status, error_envelope(code, message, field)};
}

json parse_body(const std::string& body) {
    try {
        return json::parse(body);
    } catch (const json::parse_error& e) {
        throw HttpError{400, "invalid_request", std::string("malformed JSON: ") + e.what(), "body"};
    }
}

std::optional<Date> query_date(const Request& r, const std::string& key) {
    auto it = r.query.find(key);
    if (it == r.query.end() || it->second.empty()) return std::nullopt;
    try {
        return Date::parse(it->second);
    } catch (const ValidationError& e) {
        throw HttpError{400, "invalid_request", e.what(), key};
    }
}

std::string query_or(const Request& r, const std::string& key, const std::string& fallback) {
    auto it = r.query.find(key);
    return it == r.query.end() || it->second.empty() ? fallback : it->second;
}

std::size_t count_field(const json& doc, const char* key, std::size_t fallback, std::size_t max) {
    if (!doc.contains(key)) return fallback;
    const auto& v = doc[key];
    if (!v.is_number_integer() || v.get<long long>() < 0 || static_cast<std::size_t>(v.get<long long>()) > max)
        throw HttpError{400, "invalid_request", "must be an integer in [0, " + std::to_string(max) + "]", key};
    return static_cast<std::size_t>(v.get<long long>());
}

double number_field(const json& v, const std::string& field) {
    if (!v.is_number()) throw HttpError{400, "invalid_request", "must be a number", field};
    return v.get<double>();
}

std::vector<double> number_array(const json& v, const std::string& field) {
    if (!v.is_array()) throw HttpError{400, "invalid_request", "must be an array of numbers", field};
    std::vector<double> out;
    for (const auto& x : v) out.push_back(number_field(x, field));
    return out;
}

}  // namespace

std::shared_ptr<const SolvedPlan> PlanCache::get(const std::string& id) {
    std::lock_guard lock(mutex_);
    auto it = index_.find(id);
    if (it == index_.end()) return nullptr;
    order_.splice(order_.begin(), order_, it->second);
    return *it->second;
}

void PlanCache::put(std::shared_ptr<const SolvedPlan> plan) {
    std::lock_guard lock(mutex_);
    auto it = index_.find(plan->id);
    if (it != index_.end()) {
        order_.splice(order_.begin(), order_, it->second);
        return;
    }
    order_.push_front(plan);
    index_[plan->id] = order_.begin();
    while (order_.size() > capacity_) {
        index_.erase(order_.back()->id);
        order_.pop_back();
    }
}

std::size_t PlanCache::size() const {
    std::lock_guard lock(mutex_);
    return order_.size();
}

std::shared_ptr<const Snapshot> Snapshot::from_bundle(gateway::IngestBundle bundle) {
    auto s = std::make_shared<Snapshot>();
    s->id = fnv1a_hex(gateway::bundle_digest(bundle));
    s->bundle = std::move(bundle);
    return s;
}

std::shared_ptr<const Snapshot> Snapshot::from_directory(const std::filesystem::path& dir) {
    return from_bundle(gateway::ingest_csv(gateway::IngestPaths::in_directory(dir)));
}

std::string ok_envelope(const std::string& payload, const json& telemetry) {
    return "{\"payload\":" + payload + ",\"status\":\"ok\",\"telemetry\":" + canonical(telemetry) +
           ",\"version\":" + canonical(json(kVersion)) + "}";
}

std::string error_envelope(const std::string& code, const std::string& message, const std::string& field) {
    json err{{"code", code}, {"message", message}};
    err["field"] = field.empty() ? json(nullptr) : json(field);
    return canonical({{"status", "error"}, {"error", err}, {"version", kVersion}});
}

plan::PlanRequest request_from_body(const std::string& body) {
    const json doc = parse_body(body);
    if (!doc.is_object()) throw ValidationError("body", "request body must be a JSON object");
    if (doc.contains("schema_version") &&
        (!doc["schema_version"].is_string() || doc["schema_version"].get<std::string>() != gateway::kSchemaVersion))
        throw ValidationError("schema_version", "unsupported version " + doc["schema_version"].dump());
    auto request = gateway::request_from_json(doc, {"schema_version", "uncertainty_presets"});
    if (request.timeout_s && *request.timeout_s > plan::kMaxTimeoutSeconds) request.timeout_s = plan::kMaxTimeoutSeconds;
    request.validate();
    return request;
}

Service::Service(ServiceOptions options) : options_(std::move(options)), cache_(options_.cache_capacity) {}

void Service::set_snapshot(std::shared_ptr<const Snapshot> snapshot) {
    std::lock_guard lock(mutex_);
    snapshot_ = std::move(snapshot);
}

std::shared_ptr<const Snapshot> Service::snapshot() const {
    std::lock_guard lock(mutex_);
    return snapshot_;
}

std::shared_ptr<const SolvedPlan> Service::solve(const plan::PlanRequest& request, bool* cache_hit) {
    const auto snap = snapshot();
    if (!snap) throw HttpError{409, "no_snapshot", "no data snapshot is loaded", ""};
    const std::string id = plan_id(request, snap->id);
    if (auto cached = cache_.get(id)) {
        if (cache_hit) *cache_hit = true;
        return cached;
    }
    if (cache_hit) *cache_hit = false;
    auto solved = std::make_shared<SolvedPlan>();
    solved->id = id;
    solved->data = gateway::to_plan_data(snap->bundle, request);
    solved->plan = plan::run_plan(request, solved->data);
    solved->payload = canonical(plan_payload(id, solved->plan, solved->data));
    cache_.put(solved);
    return solved;
}

Response Service::handle(const Request& request) {
    try {
        if (request.path.starts_with("/api/") && options_.token &&
            request.authorization != "Bearer " + *options_.token)
            return error(401, "unauthorized", "missing or wrong bearer token");
        const auto& m = request.method;
        const auto& p = request.path;
        if (p == "/api/plan") return m == "POST" ? plan(request) : error(405, "method_not_allowed", "use POST");
        if (p == "/api/data/census") return m == "GET" ? census(request) : error(405, "method_not_allowed", "use GET");
        if (p == "/api/report") return m == "GET" ? report(request) : error(405, "method_not_allowed", "use GET");
        if (p == "/api/config") {
            if (m == "GET") return get_config(request);
            if (m == "PUT") return put_config(request);
            return error(405, "method_not_allowed", "use GET or PUT");
        }
        if (p == "/api/robustness")
            return m == "POST" ? robustness(request) : error(405, "method_not_allowed", "use POST");
        if (p == "/api/snapshot") return m == "POST" ? reload(request) : error(405, "method_not_allowed", "use POST");
        if (p == "/api/meta") return m == "GET" ? meta(request) : error(405, "method_not_allowed", "use GET");
        return error(404, "not_found", "no route for " + p);
    } catch (const HttpError& e) {
        return error(e.status, e.code, e.message, e.field);
    } catch (const plan::PlanError& e) {
        switch (e.kind()) {
            case plan::PlanError::Kind::timeout:
                return error(503, "timeout", e.what(), e.hint());
            case plan::PlanError::Kind::infeasible:
                return error(422, "infeasible", e.what(), e.hint());
            case plan::PlanError::Kind::unbounded:
                return error(422, "unbounded", e.what(), e.hint());
        }
        return error(500, "internal", e.what());
    } catch (const ValidationError& e) {
        return error(400, "invalid_request", e.what(), e.field());
    } catch (const std::exception& e) {
        return error(500, "internal", e.what());
    }
}

Response Service::plan(const Request& request) {
    const auto start = std::chrono::steady_clock::now();
    const auto req = request_from_body(request.body);
    bool hit = false;
    const auto solved = solve(req, &hit);
    {
        std::lock_guard lock(mutex_);
        last_plan_ = solved;
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    const json telemetry{{"wall_ms", ms},
                         {"solve_wall_ms", solved->plan.wall_seconds * 1000.0},
                         {"solver_status", solver::status_name(solved->plan.status)},
                         {"nodes", solved->plan.nodes},
                         {"cache_hit", hit}};
    return {200, ok_envelope(solved->payload, telemetry)};
}

Response Service::census(const Request& request) {
    const auto snap = snapshot();
    if (!snap) return error(409, "no_snapshot", "no data snapshot is loaded");
    gateway::ConfigFile config;
    {
        std::lock_guard lock(mutex_);
        config = config_;
    }
    const auto population = query_or(request, "population", gateway::population_key(config.request));
    const auto scenario = query_or(request, "scenario", config.request.scenario);
    const Date from = query_date(request, "from").value_or(config.request.start_date.plus_days(-28));
    const Date to = query_date(request, "to").value_or(config.request.end_date);
    const auto view = gateway::census_view(snap->bundle, population, scenario, from, to);
    const json payload{{"population", population},
                       {"scenario", scenario},
                       {"from", from.iso()},
                       {"to", to.iso()},
                       {"series", census_view_to_json(view)}};
    return {200, ok_envelope(canonical(payload), json::object())};
}

Response Service::report(const Request&) {
    std::shared_ptr<const SolvedPlan> last;
    {
        std::lock_guard lock(mutex_);
        last = last_plan_;
    }
    if (!last) return error(409, "no_plan", "no plan has been solved yet");
    const auto rep = analytics::build_status_report(last->plan, last->data, last->plan.request,
                                                    analytics::utc_timestamp());
    json payload = report_to_json(rep);
    payload["plan_id"] = last->id;
    return {200, ok_envelope(canonical(payload), json::object())};
}

Response Service::get_config(const Request&) {
    std::lock_guard lock(mutex_);
    return {200, ok_envelope(canonical(gateway::config_to_json(config_)), json::object())};
}

Response Service::put_config(const Request& request) {
    const auto config = gateway::parse_config(request.body);
    std::lock_guard lock(mutex_);
    config_ = config;
    return {200, ok_envelope(canonical(gateway::config_to_json(config_)), json::object())};
}

Response Service::robustness(const Request& request) {
    const json doc = parse_body(request.body);
    if (!doc.is_object()) return error(400, "invalid_request", "request body must be a JSON object", "body");
    for (const auto& [key, value] : doc.items())
        if (key != "plan_id" && key != "scenarios" && key != "seed" && key != "max_payloads" && key != "preset" &&
            key != "specs")
            return error(400, "invalid_request", "unknown field", key);
    if (!doc.contains("plan_id") || !doc["plan_id"].is_string())
        return error(400, "invalid_request", "plan_id is required", "plan_id");
    const auto solved = cache_.get(doc["plan_id"].get<std::string>());
    if (!solved) return error(404, "not_found", "unknown plan id", "plan_id");
    if (doc.contains("preset") && doc.contains("specs"))
        return error(400, "invalid_request", "give either preset or specs", "specs");

    const auto count = count_field(doc, "scenarios", kDefaultRobustnessScenarios, kMaxRobustnessScenarios);
    const auto payloads = count_field(doc, "max_payloads", uncertainty::kDefaultMaxPayloads, 1000);
    std::uint64_t seed = 1;
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned()) return error(400, "invalid_request", "must be an integer >= 0", "seed");
        seed = doc["seed"].get<std::uint64_t>();
    }

    const auto& data = solved->data;
    std::vector<uncertainty::UncertaintySpec> specs;
    if (doc.contains("specs")) {
        const auto& obj = doc["specs"];
        if (!obj.is_object()) return error(400, "invalid_request", "must be an object", "specs");
        for (const auto& [key, value] : obj.items())
            if (!data.index_of(key)) return error(400, "invalid_request", "unknown hospital id '" + key + "'", "specs");
        for (std::size_t h = 0; h < data.num_hospitals(); ++h) {
            const auto& id = data.hospitals[h].id;
            const auto row = data.arrivals.row(h);
            auto spec = uncertainty::UncertaintySpec::point({row.begin(), row.end()});
            if (obj.contains(id)) {
                const auto& s = obj[id];
                const std::string f = "specs." + id;
                if (!s.is_object()) return error(400, "invalid_request", "must be an object", f);
                for (const auto& [key, value] : s.items())
                    if (key != "nominal" && key != "lower" && key != "upper" && key != "gamma1" &&
                        key != "gamma2")
                        return error(400, "invalid_request", "unknown field", f + "." + key);
                if (s.contains("nominal")) spec.nominal = number_array(s["nominal"], f + ".nominal");
                if (s.contains("lower")) spec.lower = number_array(s["lower"], f + ".lower");
                if (s.contains("upper")) spec.upper = number_array(s["upper"], f + ".upper");
                if (s.contains("gamma1")) spec.gamma1 = number_field(s["gamma1"], f + ".gamma1");
                if (s.contains("gamma2")) spec.gamma2 = number_field(s["gamma2"], f + ".gamma2");
            }
            specs.push_back(std::move(spec));
        }
    } else {
        uncertainty::ScenarioPreset preset;
        const json p = doc.contains("preset") ? doc["preset"] : json("moderate");
        if (p.is_string()) {
            std::map<std::string, uncertainty::ScenarioPreset> presets = uncertainty::default_presets();
            {
                std::lock_guard lock(mutex_);
                for (const auto& [name, value] : config_.presets) presets[name] = value;
            }
            auto it = presets.find(p.get<std::string>());
            if (it == presets.end()) return error(400, "invalid_request", "unknown preset " + p.dump(), "preset");
            preset = it->second;
        } else {
            gateway::ConfigFile probe;
            json wrapper = gateway::config_to_json(probe);
            wrapper["uncertainty_presets"] = {{"inline", p}};
            try {
                preset = gateway::config_from_json(wrapper).presets.at("inline");
            } catch (const ValidationError& e) {
                return error(400, "invalid_request", e.what(), "preset");
            }
        }
        for (std::size_t h = 0; h < data.num_hospitals(); ++h) {
            const auto row = data.arrivals.row(h);
            specs.push_back(uncertainty::spec_from_preset({row.begin(), row.end()}, preset));
        }
    }
    const auto report = uncertainty::validate_plan(solved->plan, data, specs, count, seed, payloads);
    json payload = robustness_to_json(report);
    payload["plan_id"] = solved->id;
    return {200, ok_envelope(canonical(payload), json::object())};
}

Response Service::reload(const Request& request) {
    if (!options_.admin) return error(403, "forbidden", "snapshot replacement needs the admin flag");
    std::optional<std::filesystem::path> dir = options_.data_dir;
    if (!request.body.empty()) {
        const json doc = parse_body(request.body);
        if (!doc.is_object()) return error(400, "invalid_request", "request body must be a JSON object", "body");
        for (const auto& [key, value] : doc.items())
            if (key != "data_dir") return error(400, "invalid_request", "unknown field", key);
        if (doc.contains("data_dir")) {
            if (!doc["data_dir"].is_string()) return error(400, "invalid_request", "must be a string", "data_dir");
            dir = doc["data_dir"].get<std::string>();
        }
    }
    if (!dir) return error(400, "invalid_request", "no data directory configured", "data_dir");
    try {
        auto snap = Snapshot::from_directory(*dir);
        const json payload{{"snapshot_id", snap->id}, {"hospitals", snap->bundle.hospitals.size()}};
        set_snapshot(std::move(snap));
        return {200, ok_envelope(canonical(payload), json::object())};
    } catch (const gateway::IngestError& e) {
        json problems = json::array();
        for (const auto& p : e.errors()) problems.push_back(p.describe());
        return error(400, "invalid_data", problems.dump(), "data_dir");
    }
}

Response Service::meta(const Request&) {
    const auto snap = snapshot();
    json payload{{"version", kVersion}};
    json populations = json::array();
    for (auto p : plan::kPopulations) populations.push_back(p);
    payload["populations"] = populations;
    if (snap) {
        payload["snapshot_id"] = snap->id;
        json hospitals = json::array();
        for (const auto& h : snap->bundle.hospitals) hospitals.push_back(h.id);
        payload["hospitals"] = hospitals;
        payload["levels"] = snap->bundle.ladder.levels;
        payload["scenarios"] = snap->bundle.scenarios();
    } else {
        payload["snapshot_id"] = nullptr;
    }
    return {200, ok_envelope(canonical(payload), json::object())};
}

}  // namespace surge::api
