#pragma once

#include <map>
#include <string>
#include <string_view>

#include "json.hpp"
#include "surge/plan/request.hpp"
#include "surge/uncertainty/uncertainty.hpp"

namespace surge::gateway {

inline constexpr std::string_view kSchemaVersion = "1";

/// A saved scenario configuration.
struct ConfigFile {
    plan::PlanRequest request;
    /// Optional uncertainty presets by name.
    std::map<std::string, uncertainty::ScenarioPreset> presets;

    friend bool operator==(const ConfigFile&, const ConfigFile&) = default;
};

/// Request fields by canonical name. Absent optionals are omitted.
nlohmann::json request_to_json(const plan::PlanRequest& request);

/// Reads request fields from `doc`, ignoring `skip` keys. Unknown keys throw
/// ValidationError naming the key. Does not call PlanRequest::validate().
plan::PlanRequest request_from_json(const nlohmann::json& doc, std::initializer_list<std::string_view> skip = {});

nlohmann::json config_to_json(const ConfigFile& config);
/// Checks schema_version and validates the request.
ConfigFile config_from_json(const nlohmann::json& doc);

/// Indented JSON with sorted keys and a trailing newline.
std::string save_config(const ConfigFile& config);
std::string save_config(const plan::PlanRequest& request);

/// Throws ValidationError on malformed text, a schema version other than
/// "1", unknown fields or an invalid request.
ConfigFile parse_config(std::string_view text);
plan::PlanRequest load_config(std::string_view text);

}  // namespace surge::gateway
