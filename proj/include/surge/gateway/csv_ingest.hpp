#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "surge/core/types.hpp"
#include "surge/plan/inputs.hpp"

namespace surge::gateway {

inline constexpr std::string_view kAdmissionsHeader = "hospital_id,date,population,scenario,count";
inline constexpr std::string_view kCensusHeader = "hospital_id,date,population,count";
inline constexpr std::string_view kCapacityHeader = "hospital_id,level_name,beds";
inline constexpr std::string_view kLosHeader = "hospital_id,population,days,probability";
inline constexpr std::string_view kUnitsHeader = "hospital_id,unit_id,beds,setup_days,teardown_days,order";

/// Scenario tag of observed admissions in admissions.csv.
inline constexpr std::string_view kActualScenario = "actual";

struct Provenance {
    std::string file;
    std::size_t line = 0;
};

struct RowError {
    std::string file;
    std::size_t line = 0;  // 0 when the problem is not tied to one row
    std::string reason;

    std::string describe() const;
};

/// Every problem found in one ingest. Nothing is returned alongside it.
class IngestError : public ValidationError {
public:
    explicit IngestError(std::vector<RowError> errors);
    const std::vector<RowError>& errors() const noexcept { return errors_; }

private:
    std::vector<RowError> errors_;
};

struct HospitalEntry {
    std::string id;
    std::vector<int> level_capacities;  // bundle ladder order
    Provenance source;
};

/// Contiguous daily values from `start`.
struct Series {
    std::string hospital_id;
    std::string population;
    std::string scenario;  // "actual" for census series
    Date start;
    std::vector<double> values;
    std::vector<Provenance> sources;

    Date end() const { return start.plus_days(static_cast<int>(values.size()) - 1); }
    std::optional<double> at(const Date& day) const;
};

struct LosEntry {
    std::string hospital_id;
    std::string population;
    LosPmf pmf;
    Provenance source;
};

/// Parsed and cross-checked input files, in canonical order: hospitals by
/// id, series by (hospital, population, scenario), units by order.
struct IngestBundle {
    SurgeLevelLadder ladder;
    std::vector<HospitalEntry> hospitals;
    std::vector<Series> admissions;
    std::vector<Series> census;
    std::vector<LosEntry> los;
    std::optional<plan::UnitCatalog> units;

    const HospitalEntry* hospital(const std::string& id) const;
    const Series* admissions_for(const std::string& hospital, const std::string& population,
                                 const std::string& scenario) const;
    const Series* census_for(const std::string& hospital, const std::string& population) const;
    /// Exact population first, then its population tag without the capacity
    /// suffix, then "all".
    const LosEntry* los_for(const std::string& hospital, const std::string& population) const;
    /// Scenario names present in admissions.csv other than "actual".
    std::vector<std::string> scenarios() const;
};

struct IngestPaths {
    std::filesystem::path admissions;
    std::filesystem::path capacity;
    std::filesystem::path los;
    std::optional<std::filesystem::path> census;
    std::optional<std::filesystem::path> units;

    /// admissions.csv, capacity.csv and los.csv are required; census.csv and
    /// units.csv are picked up when present.
    static IngestPaths in_directory(const std::filesystem::path& dir);
};

/// Throws IngestError listing every row-level problem.
IngestBundle ingest_csv(const IngestPaths& paths);

/// Same as ingest_csv but from in-memory file contents, keyed by file name.
struct CsvText {
    std::string admissions;
    std::string capacity;
    std::string los;
    std::optional<std::string> census;
    std::optional<std::string> units;
};
IngestBundle ingest_text(const CsvText& text);

/// Canonical JSON of the bundle contents without provenance. Equal digests
/// mean equal data.
std::string bundle_digest(const IngestBundle& bundle);

/// Population token with the capacity type folded in: "covid", "covid_icu",
/// "covid_general". Throws ValidationError for an unknown population tag.
struct PopulationToken {
    std::string population;
    std::string capacity_type;  // total, icu or general
};
PopulationToken parse_population_token(std::string_view token);

}  // namespace surge::gateway
