#pragma once

#include <cstddef>
#include <filesystem>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "json.hpp"
#include "surge/gateway/config.hpp"
#include "surge/gateway/csv_ingest.hpp"
#include "surge/plan/plan.hpp"

namespace surge::api {

struct Request {
    std::string method;
    std::string path;
    std::map<std::string, std::string> query;
    std::string body;
    /// Value of the Authorization header, if any.
    std::string authorization;
};

struct Response {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

/// Immutable ingested data plus its content id.
struct Snapshot {
    gateway::IngestBundle bundle;
    std::string id;

    static std::shared_ptr<const Snapshot> from_bundle(gateway::IngestBundle bundle);
    static std::shared_ptr<const Snapshot> from_directory(const std::filesystem::path& dir);
};

struct SolvedPlan {
    std::string id;
    plan::CapacityPlan plan;
    plan::PlanData data;
    /// Canonical JSON of the /api/plan payload.
    std::string payload;
};

/// Bounded least-recently-used map from plan id to solved plan.
class PlanCache {
public:
    explicit PlanCache(std::size_t capacity) : capacity_(capacity) {}

    std::shared_ptr<const SolvedPlan> get(const std::string& id);
    void put(std::shared_ptr<const SolvedPlan> plan);
    std::size_t size() const;

private:
    mutable std::mutex mutex_;
    std::size_t capacity_;
    std::list<std::shared_ptr<const SolvedPlan>> order_;  // most recent first
    std::unordered_map<std::string, std::list<std::shared_ptr<const SolvedPlan>>::iterator> index_;
};

struct ServiceOptions {
    /// Required bearer token for every /api route when set.
    std::optional<std::string> token;
    /// Enables POST /api/snapshot.
    bool admin = false;
    /// Directory POST /api/snapshot reloads when the body names none.
    std::optional<std::filesystem::path> data_dir;
    std::size_t cache_capacity = 32;
};

/// HTTP-independent request handling. Safe to call from many threads.
class Service {
public:
    explicit Service(ServiceOptions options = {});

    Response handle(const Request& request);

    void set_snapshot(std::shared_ptr<const Snapshot> snapshot);
    std::shared_ptr<const Snapshot> snapshot() const;

    /// Solves (or fetches from the cache) exactly as POST /api/plan does.
    /// Throws ValidationError, PlanError, or std::runtime_error when no
    /// snapshot is loaded.
    std::shared_ptr<const SolvedPlan> solve(const plan::PlanRequest& request, bool* cache_hit = nullptr);

private:
    Response plan(const Request& request);
    Response census(const Request& request);
    Response report(const Request& request);
    Response get_config(const Request& request);
    Response put_config(const Request& request);
    Response robustness(const Request& request);
    Response reload(const Request& request);
    Response meta(const Request& request);

    ServiceOptions options_;
    mutable std::mutex mutex_;  // guards snapshot_, config_, last_plan_
    std::shared_ptr<const Snapshot> snapshot_;
    gateway::ConfigFile config_;
    std::shared_ptr<const SolvedPlan> last_plan_;
    PlanCache cache_;
};

/// Builds the ok envelope around a canonical payload string.
std::string ok_envelope(const std::string& payload, const nlohmann::json& telemetry);
std::string error_envelope(const std::string& code, const std::string& message, const std::string& field);

/// Request body to PlanRequest: optional schema_version "1", presets ignored,
/// timeout_s capped at 120, then validated.
plan::PlanRequest request_from_body(const std::string& body);

}  // namespace surge::api
