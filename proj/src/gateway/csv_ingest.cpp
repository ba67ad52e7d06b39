#include "surge/gateway/csv_ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "surge/plan/request.hpp"

namespace surge::gateway {

namespace {

constexpr double kIngestPmfTolerance = 1e-6;

struct Row {
    std::size_t line = 0;
    std::vector<std::string> fields;
};

class Collector {
public:
    void add(const std::string& file, std::size_t line, std::string reason) {
        errors_.push_back({file, line, std::move(reason)});
    }
    bool empty() const { return errors_.empty(); }
    std::vector<RowError> take() {
        std::stable_sort(errors_.begin(), errors_.end(), [](const RowError& a, const RowError& b) {
            return std::tie(a.file, a.line) < std::tie(b.file, b.line);
        });
        return std::move(errors_);
    }

private:
    std::vector<RowError> errors_;
};

bool valid_utf8(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        const auto c = static_cast<unsigned char>(s[i]);
        std::size_t extra = 0;
        if (c < 0x80)
            extra = 0;
        else if ((c & 0xE0) == 0xC0 && c >= 0xC2)
            extra = 1;
        else if ((c & 0xF0) == 0xE0)
            extra = 2;
        else if ((c & 0xF8) == 0xF0 && c <= 0xF4)
            extra = 3;
        else
            return false;
        for (std::size_t k = 1; k <= extra; ++k) {
            if (i + k >= s.size()) return false;
            if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return false;
        }
        i += extra + 1;
    }
    return true;
}

/// Splits into rows after checking the header. Returns nullopt when the file
/// cannot be used at all.
std::optional<std::vector<Row>> read_sheet(const std::string& file, std::string_view text, std::string_view header,
                                           Collector& errors) {
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
    if (!valid_utf8(text)) {
        errors.add(file, 0, "file is not valid UTF-8");
        return std::nullopt;
    }
    const std::size_t columns = static_cast<std::size_t>(std::count(header.begin(), header.end(), ',')) + 1;
    std::vector<Row> rows;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!header_seen) {
            if (line != header) {
                errors.add(file, line_no, "header must be '" + std::string(header) + "'");
                return std::nullopt;
            }
            header_seen = true;
            continue;
        }
        if (line.empty()) continue;
        if (line.find('"') != std::string_view::npos) {
            errors.add(file, line_no, "quoted fields are not supported");
            continue;
        }
        Row row{line_no, {}};
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            row.fields.emplace_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (row.fields.size() != columns) {
            errors.add(file, line_no,
                       "expected " + std::to_string(columns) + " fields, found " + std::to_string(row.fields.size()));
            continue;
        }
        rows.push_back(std::move(row));
    }
    if (!header_seen) {
        errors.add(file, 1, "missing header '" + std::string(header) + "'");
        return std::nullopt;
    }
    return rows;
}

std::optional<double> parse_number(std::string_view s) {
    double v = 0.0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    if (s.empty()) return std::nullopt;
    auto [ptr, ec] = std::from_chars(first, last, v, std::chars_format::fixed | std::chars_format::scientific);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::optional<long> parse_integer(std::string_view s) {
    long v = 0;
    if (s.empty()) return std::nullopt;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<Date> parse_date(std::string_view s) {
    try {
        return Date::parse(s);
    } catch (const ValidationError&) {
        return std::nullopt;
    }
}

bool valid_population(std::string_view token) {
    try {
        parse_population_token(token);
        return true;
    } catch (const ValidationError&) {
        return false;
    }
}

struct DatedValue {
    Date date;
    double value;
    Provenance source;
};

/// Groups dated rows into contiguous series, reporting duplicates and gaps.
std::vector<Series> build_series(const std::string& file,
                                 std::map<std::tuple<std::string, std::string, std::string>, std::vector<DatedValue>>& groups,
                                 const std::string& key_label, Collector& errors) {
    std::vector<Series> out;
    for (auto& [key, points] : groups) {
        std::stable_sort(points.begin(), points.end(),
                         [](const DatedValue& a, const DatedValue& b) { return a.date < b.date; });
        const auto& [hospital, population, scenario] = key;
        Series s{hospital, population, scenario, points.front().date, {}, {}};
        bool ok = true;
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (i > 0 && points[i].date == points[i - 1].date) {
                const auto& later = points[i].source.line > points[i - 1].source.line ? points[i] : points[i - 1];
                errors.add(file, later.source.line,
                           "duplicate " + key_label + " for " + hospital + " on " + points[i].date.iso());
                ok = false;
                continue;
            }
            if (i > 0 && points[i - 1].date.days_until(points[i].date) != 1) {
                errors.add(file, points[i].source.line,
                           "gap in " + hospital + "/" + population + " between " + points[i - 1].date.iso() +
                               " and " + points[i].date.iso());
                ok = false;
            }
            s.values.push_back(points[i].value);
            s.sources.push_back(points[i].source);
        }
        if (ok) out.push_back(std::move(s));
    }
    return out;
}

std::string read_file(const std::filesystem::path& path, Collector& errors) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        errors.add(path.filename().string(), 0, "cannot open " + path.string());
        return {};
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

std::string RowError::describe() const {
    return line == 0 ? file + ": " + reason : file + ":" + std::to_string(line) + ": " + reason;
}

IngestError::IngestError(std::vector<RowError> errors)
    : ValidationError("ingest", [&] {
          std::string msg = std::to_string(errors.size()) + " problem(s) in input files";
          for (std::size_t i = 0; i < errors.size() && i < 5; ++i) msg += "; " + errors[i].describe();
          return msg;
      }()),
      errors_(std::move(errors)) {}

std::optional<double> Series::at(const Date& day) const {
    const int offset = start.days_until(day);
    if (offset < 0 || static_cast<std::size_t>(offset) >= values.size()) return std::nullopt;
    return values[static_cast<std::size_t>(offset)];
}

const HospitalEntry* IngestBundle::hospital(const std::string& id) const {
    for (const auto& h : hospitals)
        if (h.id == id) return &h;
    return nullptr;
}

const Series* IngestBundle::admissions_for(const std::string& hospital, const std::string& population,
                                           const std::string& scenario) const {
    for (const auto& s : admissions)
        if (s.hospital_id == hospital && s.population == population && s.scenario == scenario) return &s;
    return nullptr;
}

const Series* IngestBundle::census_for(const std::string& hospital, const std::string& population) const {
    for (const auto& s : census)
        if (s.hospital_id == hospital && s.population == population) return &s;
    return nullptr;
}

const LosEntry* IngestBundle::los_for(const std::string& hospital, const std::string& population) const {
    auto find = [&](const std::string& pop) -> const LosEntry* {
        for (const auto& e : los)
            if (e.hospital_id == hospital && e.population == pop) return &e;
        return nullptr;
    };
    if (const auto* e = find(population)) return e;
    const auto token = parse_population_token(population);
    if (const auto* e = find(token.population)) return e;
    return find("all");
}

std::vector<std::string> IngestBundle::scenarios() const {
    std::set<std::string> names;
    for (const auto& s : admissions)
        if (s.scenario != kActualScenario) names.insert(s.scenario);
    return {names.begin(), names.end()};
}

PopulationToken parse_population_token(std::string_view token) {
    PopulationToken out{std::string(token), "total"};
    for (std::string_view suffix : {"_icu", "_general"}) {
        if (token.size() > suffix.size() && token.ends_with(suffix)) {
            out.population = std::string(token.substr(0, token.size() - suffix.size()));
            out.capacity_type = std::string(suffix.substr(1));
            break;
        }
    }
    if (std::find(plan::kPopulations.begin(), plan::kPopulations.end(), out.population) == plan::kPopulations.end())
        throw ValidationError("population", "unknown population '" + std::string(token) + "'");
    return out;
}

IngestPaths IngestPaths::in_directory(const std::filesystem::path& dir) {
    IngestPaths p{dir / "admissions.csv", dir / "capacity.csv", dir / "los.csv", std::nullopt, std::nullopt};
    if (std::filesystem::exists(dir / "census.csv")) p.census = dir / "census.csv";
    if (std::filesystem::exists(dir / "units.csv")) p.units = dir / "units.csv";
    return p;
}

IngestBundle ingest_csv(const IngestPaths& paths) {
    Collector errors;
    CsvText text;
    text.admissions = read_file(paths.admissions, errors);
    text.capacity = read_file(paths.capacity, errors);
    text.los = read_file(paths.los, errors);
    if (paths.census) text.census = read_file(*paths.census, errors);
    if (paths.units) text.units = read_file(*paths.units, errors);
    if (!errors.empty()) throw IngestError(errors.take());
    return ingest_text(text);
}

IngestBundle ingest_text(const CsvText& text) {
    Collector errors;
    IngestBundle bundle;
    const auto standard = SurgeLevelLadder::standard();

    // capacity.csv declares the hospitals and the ladder.
    const std::string cap_file = "capacity.csv";
    std::map<std::string, std::map<std::size_t, std::pair<int, std::size_t>>> beds;  // id -> level -> (beds, line)
    if (auto rows = read_sheet(cap_file, text.capacity, kCapacityHeader, errors)) {
        for (const auto& r : *rows) {
            const auto& id = r.fields[0];
            if (id.empty()) {
                errors.add(cap_file, r.line, "empty hospital_id");
                continue;
            }
            const auto level = standard.index_of(r.fields[1]);
            if (!level) {
                errors.add(cap_file, r.line, "unknown level_name '" + r.fields[1] + "'");
                continue;
            }
            const auto n = parse_integer(r.fields[2]);
            if (!n || *n < 0) {
                errors.add(cap_file, r.line, "beds must be a whole number >= 0");
                continue;
            }
            if (!beds[id].emplace(*level, std::pair{static_cast<int>(*n), r.line}).second)
                errors.add(cap_file, r.line, "duplicate level '" + r.fields[1] + "' for " + id);
        }
    }
    std::set<std::size_t> used_levels;
    for (const auto& [id, levels] : beds)
        for (const auto& [l, v] : levels) used_levels.insert(l);
    for (std::size_t l : used_levels) bundle.ladder.levels.push_back(standard.levels[l]);
    if (!beds.empty() && !used_levels.count(0)) errors.add(cap_file, 0, "the baseline level is required");
    for (const auto& [id, levels] : beds) {
        HospitalEntry entry{id, {}, {cap_file, levels.begin()->second.second}};
        bool complete = true;
        std::optional<std::pair<std::size_t, int>> prev;
        for (std::size_t l : used_levels) {
            auto it = levels.find(l);
            if (it == levels.end()) {
                errors.add(cap_file, 0, id + " has no row for level '" + standard.levels[l] + "'");
                complete = false;
                continue;
            }
            const auto [count, line] = it->second;
            if (prev && count < prev->second)
                errors.add(cap_file, line,
                           id + ": level '" + standard.levels[l] + "' has " + std::to_string(count) +
                               " beds, fewer than '" + standard.levels[prev->first] + "' (" +
                               std::to_string(prev->second) + ")");
            prev = {l, count};
            entry.level_capacities.push_back(count);
        }
        if (complete) bundle.hospitals.push_back(std::move(entry));
    }
    auto known = [&](const std::string& id) { return beds.count(id) > 0; };

    const std::string adm_file = "admissions.csv";
    std::map<std::tuple<std::string, std::string, std::string>, std::vector<DatedValue>> adm_groups;
    if (auto rows = read_sheet(adm_file, text.admissions, kAdmissionsHeader, errors)) {
        for (const auto& r : *rows) {
            const auto& f = r.fields;
            bool ok = true;
            if (!known(f[0])) errors.add(adm_file, r.line, "unknown hospital id '" + f[0] + "'"), ok = false;
            const auto date = parse_date(f[1]);
            if (!date) errors.add(adm_file, r.line, "invalid date '" + f[1] + "'"), ok = false;
            if (!valid_population(f[2])) errors.add(adm_file, r.line, "unknown population '" + f[2] + "'"), ok = false;
            if (f[3].empty()) errors.add(adm_file, r.line, "empty scenario"), ok = false;
            const auto count = parse_number(f[4]);
            if (!count) errors.add(adm_file, r.line, "count is not a number"), ok = false;
            else if (*count < 0.0) errors.add(adm_file, r.line, "negative count"), ok = false;
            if (ok) adm_groups[{f[0], f[2], f[3]}].push_back({*date, *count, {adm_file, r.line}});
        }
    }
    bundle.admissions = build_series(adm_file, adm_groups, "admissions", errors);

    if (text.census) {
        const std::string file = "census.csv";
        std::map<std::tuple<std::string, std::string, std::string>, std::vector<DatedValue>> groups;
        if (auto rows = read_sheet(file, *text.census, kCensusHeader, errors)) {
            for (const auto& r : *rows) {
                const auto& f = r.fields;
                bool ok = true;
                if (!known(f[0])) errors.add(file, r.line, "unknown hospital id '" + f[0] + "'"), ok = false;
                const auto date = parse_date(f[1]);
                if (!date) errors.add(file, r.line, "invalid date '" + f[1] + "'"), ok = false;
                if (!valid_population(f[2])) errors.add(file, r.line, "unknown population '" + f[2] + "'"), ok = false;
                const auto count = parse_number(f[3]);
                if (!count) errors.add(file, r.line, "count is not a number"), ok = false;
                else if (*count < 0.0) errors.add(file, r.line, "negative count"), ok = false;
                if (ok) groups[{f[0], f[2], std::string(kActualScenario)}].push_back({*date, *count, {file, r.line}});
            }
        }
        bundle.census = build_series(file, groups, "census", errors);
    }

    const std::string los_file = "los.csv";
    std::map<std::pair<std::string, std::string>, std::map<long, std::pair<double, std::size_t>>> los_groups;
    if (auto rows = read_sheet(los_file, text.los, kLosHeader, errors)) {
        for (const auto& r : *rows) {
            const auto& f = r.fields;
            bool ok = true;
            if (!known(f[0])) errors.add(los_file, r.line, "unknown hospital id '" + f[0] + "'"), ok = false;
            if (!valid_population(f[1])) errors.add(los_file, r.line, "unknown population '" + f[1] + "'"), ok = false;
            const auto days = parse_integer(f[2]);
            if (!days || *days < 0 || *days > 3650)
                errors.add(los_file, r.line, "days must be a whole number in [0, 3650]"), ok = false;
            const auto p = parse_number(f[3]);
            if (!p || *p < 0.0 || *p > 1.0) errors.add(los_file, r.line, "probability must lie in [0, 1]"), ok = false;
            if (!ok) continue;
            if (!los_groups[{f[0], f[1]}].emplace(*days, std::pair{*p, r.line}).second)
                errors.add(los_file, r.line, "duplicate day " + f[2] + " for " + f[0] + "/" + f[1]);
        }
    }
    for (const auto& [key, points] : los_groups) {
        LosPmf pmf(static_cast<std::size_t>(points.rbegin()->first) + 1, 0.0);
        double total = 0.0;
        for (const auto& [d, v] : points) {
            pmf[static_cast<std::size_t>(d)] = v.first;
            total += v.first;
        }
        const std::size_t first_line = points.begin()->second.second;
        if (std::abs(total - 1.0) > kIngestPmfTolerance) {
            std::ostringstream msg;
            msg << "length-of-stay pmf for " << key.first << "/" << key.second << " sums to " << total
                << ", not 1";
            errors.add(los_file, first_line, msg.str());
            continue;
        }
        if (std::abs(total - 1.0) > kPmfTolerance)
            for (double& v : pmf) v /= total;
        bundle.los.push_back({key.first, key.second, std::move(pmf), {los_file, first_line}});
    }

    if (text.units) {
        const std::string file = "units.csv";
        plan::UnitCatalog catalog;
        std::set<std::pair<std::string, std::string>> seen;
        if (auto rows = read_sheet(file, *text.units, kUnitsHeader, errors)) {
            for (const auto& r : *rows) {
                const auto& f = r.fields;
                bool ok = true;
                if (!known(f[0])) errors.add(file, r.line, "unknown hospital id '" + f[0] + "'"), ok = false;
                if (f[1].empty()) errors.add(file, r.line, "empty unit_id"), ok = false;
                const auto b = parse_integer(f[2]);
                const auto setup = parse_integer(f[3]);
                const auto teardown = parse_integer(f[4]);
                const auto order = parse_integer(f[5]);
                if (!b || *b <= 0) errors.add(file, r.line, "beds must be a whole number > 0"), ok = false;
                if (!setup || *setup < 0) errors.add(file, r.line, "setup_days must be a whole number >= 0"), ok = false;
                if (!teardown || *teardown < 0)
                    errors.add(file, r.line, "teardown_days must be a whole number >= 0"), ok = false;
                if (!order) errors.add(file, r.line, "order must be a whole number"), ok = false;
                if (ok && !seen.insert({f[0], f[1]}).second)
                    errors.add(file, r.line, "duplicate unit '" + f[1] + "' for " + f[0]), ok = false;
                if (ok)
                    catalog.units[f[0]].push_back({f[1], static_cast<int>(*b), static_cast<int>(*setup),
                                                   static_cast<int>(*teardown), static_cast<int>(*order)});
            }
        }
        for (auto& [id, list] : catalog.units)
            std::sort(list.begin(), list.end(), [](const plan::Unit& a, const plan::Unit& b) {
                return std::tie(a.order, a.id) < std::tie(b.order, b.id);
            });
        bundle.units = std::move(catalog);
    }

    if (!errors.empty()) throw IngestError(errors.take());
    return bundle;
}

std::string bundle_digest(const IngestBundle& bundle) {
    using nlohmann::json;
    json doc;
    doc["ladder"] = bundle.ladder.levels;
    json hospitals = json::array();
    for (const auto& h : bundle.hospitals) hospitals.push_back({{"id", h.id}, {"beds", h.level_capacities}});
    doc["hospitals"] = hospitals;
    auto series = [](const std::vector<Series>& list) {
        json out = json::array();
        for (const auto& s : list)
            out.push_back({{"hospital_id", s.hospital_id},
                           {"population", s.population},
                           {"scenario", s.scenario},
                           {"start", s.start.iso()},
                           {"values", s.values}});
        return out;
    };
    doc["admissions"] = series(bundle.admissions);
    doc["census"] = series(bundle.census);
    json los = json::array();
    for (const auto& e : bundle.los) los.push_back({{"hospital_id", e.hospital_id}, {"population", e.population}, {"pmf", e.pmf}});
    doc["los"] = los;
    if (bundle.units) {
        json units = json::object();
        for (const auto& [id, list] : bundle.units->units) {
            json arr = json::array();
            for (const auto& u : list)
                arr.push_back({{"id", u.id},
                               {"beds", u.beds},
                               {"setup_days", u.setup_days},
                               {"teardown_days", u.teardown_days},
                               {"order", u.order}});
            units[id] = arr;
        }
        doc["units"] = units;
    }
    return doc.dump();
}

}  // namespace surge::gateway
