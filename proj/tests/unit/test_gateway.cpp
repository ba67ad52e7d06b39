#include <algorithm>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "support/instances.hpp"
#include "support/request_gen.hpp"
#include "surge/gateway/config.hpp"
#include "surge/gateway/csv_ingest.hpp"
#include "surge/gateway/plan_data.hpp"

using namespace surge;
using namespace surge::gateway;
using namespace surge::testing;

namespace {

const std::string kFixtures = SURGE_FIXTURES_DIR;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

CsvText fixture_text(const std::string& dir) {
    CsvText t;
    t.admissions = slurp(dir + "/admissions.csv");
    t.capacity = slurp(dir + "/capacity.csv");
    t.los = slurp(dir + "/los.csv");
    if (std::filesystem::exists(dir + "/census.csv")) t.census = slurp(dir + "/census.csv");
    return t;
}

/// Minimal valid single-hospital text that tests then break one row at a time.
CsvText small_text() {
    CsvText t;
    t.capacity = "hospital_id,level_name,beds\nH,baseline,10\nH,ramp_up,12\n";
    t.los = "hospital_id,population,days,probability\nH,all,1,0.5\nH,all,2,0.5\n";
    t.admissions =
        "hospital_id,date,population,scenario,count\n"
        "H,2021-12-15,all,moderate,1\nH,2021-12-16,all,moderate,2\n";
    return t;
}

std::vector<RowError> errors_of(const CsvText& t) {
    try {
        ingest_text(t);
    } catch (const IngestError& e) {
        return e.errors();
    }
    return {};
}

bool mentions(const std::vector<RowError>& errors, const std::string& file, std::size_t line, const std::string& word) {
    return std::any_of(errors.begin(), errors.end(), [&](const RowError& e) {
        return e.file == file && e.line == line && e.reason.find(word) != std::string::npos;
    });
}

std::string shuffle_rows(Rng& rng, const std::string& text) {
    std::stringstream in(text);
    std::string header;
    std::getline(in, header);
    std::vector<std::string> rows;
    for (std::string line; std::getline(in, line);) rows.push_back(line);
    std::shuffle(rows.begin(), rows.end(), rng);
    std::string out = header + "\n";
    for (const auto& r : rows) out += r + "\n";
    return out;
}

}  // namespace

TEST_SUITE("gateway") {
    TEST_CASE("admissions row becomes one series point") {
        auto t = small_text();
        t.capacity = "hospital_id,level_name,beds\nJHH,baseline,1091\n";
        t.los = "hospital_id,population,days,probability\nJHH,all,3,1\n";
        t.admissions = "hospital_id,date,population,scenario,count\nJHH,2021-12-15,covid_icu,moderate,4\n";
        const auto bundle = ingest_text(t);
        REQUIRE(bundle.admissions.size() == 1);
        const auto& s = bundle.admissions[0];
        CHECK(s.hospital_id == "JHH");
        CHECK(s.population == "covid_icu");
        CHECK(s.scenario == "moderate");
        CHECK(s.start == Date(2021, 12, 15));
        CHECK(s.values == std::vector<double>{4.0});
        CHECK(s.sources[0].line == 2);
        const auto token = parse_population_token("covid_icu");
        CHECK(token.population == "covid");
        CHECK(token.capacity_type == "icu");
        CHECK(bundle.los_for("JHH", "covid_icu")->population == "all");
    }

    TEST_CASE("capacity must not drop along the ladder") {
        auto t = small_text();
        t.capacity = "hospital_id,level_name,beds\nBMC,baseline,420\nBMC,ramp_up,400\n";
        t.los = "hospital_id,population,days,probability\nBMC,all,1,1\n";
        t.admissions = "hospital_id,date,population,scenario,count\n";
        const auto errors = errors_of(t);
        REQUIRE(errors.size() == 1);
        CHECK(mentions(errors, "capacity.csv", 3, "fewer than 'baseline' (420)"));
    }

    TEST_CASE("regional fixture loads five hospitals") {
        const auto bundle = ingest_csv(IngestPaths::in_directory(kFixtures + "/regional"));
        REQUIRE(bundle.hospitals.size() == 5);
        const std::vector<std::pair<std::string, int>> expected{
            {"BMC", 420}, {"HCGH", 225}, {"JHH", 1091}, {"SH", 230}, {"SMH", 245}};
        for (std::size_t h = 0; h < 5; ++h) {
            CHECK(bundle.hospitals[h].id == expected[h].first);
            CHECK(bundle.hospitals[h].level_capacities.front() == expected[h].second);
            CHECK(bundle.hospitals[h].level_capacities.size() == 6);
        }
        CHECK(bundle.ladder.levels == SurgeLevelLadder::standard().levels);
        CHECK(bundle.scenarios() == std::vector<std::string>{"moderate", "optimistic", "pessimistic"});
        CHECK(bundle.census.size() == 5);
        CHECK_FALSE(bundle.units.has_value());
    }

    TEST_CASE("row-level errors are all reported and nothing is returned") {
        auto t = small_text();
        t.admissions =
            "hospital_id,date,population,scenario,count\n"
            "H,2021-12-15,all,moderate,-1\n"
            "X,2021-12-16,all,moderate,2\n"
            "H,2021-12-40,all,moderate,2\n"
            "H,2021-12-16,martian,moderate,2\n"
            "H,2021-12-17,all,moderate,1,000\n"
            "H,2021-12-18,all,moderate,abc\n";
        t.los = "hospital_id,population,days,probability\nH,all,1,0.5\nH,all,2,0.4\n";
        const auto errors = errors_of(t);
        CHECK(mentions(errors, "admissions.csv", 2, "negative count"));
        CHECK(mentions(errors, "admissions.csv", 3, "unknown hospital id 'X'"));
        CHECK(mentions(errors, "admissions.csv", 4, "invalid date"));
        CHECK(mentions(errors, "admissions.csv", 5, "unknown population"));
        CHECK(mentions(errors, "admissions.csv", 6, "expected 5 fields"));
        CHECK(mentions(errors, "admissions.csv", 7, "not a number"));
        CHECK(mentions(errors, "los.csv", 2, "sums to 0.9"));
        CHECK(errors.size() == 7);
    }

    TEST_CASE("schema, duplicates and gaps") {
        auto t = small_text();
        t.capacity = "hospital,level_name,beds\nH,baseline,10\n";
        CHECK(mentions(errors_of(t), "capacity.csv", 1, "header must be"));

        t = small_text();
        t.admissions += "H,2021-12-16,all,moderate,3\n";
        CHECK(mentions(errors_of(t), "admissions.csv", 4, "duplicate"));

        t = small_text();
        t.admissions += "H,2021-12-19,all,moderate,3\n";
        CHECK(mentions(errors_of(t), "admissions.csv", 4, "gap"));

        t = small_text();
        t.capacity += "H,crisis,12\nH,ramp_up,14\n";
        const auto errors = errors_of(t);
        CHECK(mentions(errors, "capacity.csv", 5, "duplicate level"));

        t = small_text();
        t.capacity += "G,baseline,5\n";
        CHECK(mentions(errors_of(t), "capacity.csv", 0, "G has no row for level 'ramp_up'"));

        t = small_text();
        t.capacity = "hospital_id,level_name,beds\nH,ramp_up,10\n";
        CHECK(mentions(errors_of(t), "capacity.csv", 0, "baseline"));

        t = small_text();
        t.admissions = std::string("\xEF\xBB\xBF") + t.admissions;
        CHECK_NOTHROW(ingest_text(t));
        t.admissions += "H,2021-12-17,all,mod\xFF,1\n";
        CHECK(mentions(errors_of(t), "admissions.csv", 0, "UTF-8"));
    }

    TEST_CASE("units file") {
        auto t = small_text();
        t.units =
            "hospital_id,unit_id,beds,setup_days,teardown_days,order\n"
            "H,north,4,2,1,2\nH,south,2,0,0,1\n";
        const auto bundle = ingest_text(t);
        REQUIRE(bundle.units);
        const auto& list = bundle.units->for_hospital("H");
        REQUIRE(list.size() == 2);
        CHECK(list[0].id == "south");
        CHECK(list[1] == plan::Unit{"north", 4, 2, 1, 2});

        t.units = *t.units + "H,north,1,0,0,3\nH,east,0,0,0,4\n";
        const auto errors = errors_of(t);
        CHECK(mentions(errors, "units.csv", 4, "duplicate unit"));
        CHECK(mentions(errors, "units.csv", 5, "beds must be"));
    }

    TEST_CASE("ingest does not depend on row order") {
        const auto base = fixture_text(kFixtures + "/regional");
        const auto expected = bundle_digest(ingest_text(base));
        Rng rng(501);
        for (int trial = 0; trial < 10; ++trial) {
            CsvText t = base;
            t.admissions = shuffle_rows(rng, t.admissions);
            t.capacity = shuffle_rows(rng, t.capacity);
            t.los = shuffle_rows(rng, t.los);
            t.census = shuffle_rows(rng, *t.census);
            CHECK(bundle_digest(ingest_text(t)) == expected);
        }
    }

    TEST_CASE("toy-3 files reproduce the in-code instance") {
        const auto bundle = ingest_csv(IngestPaths::in_directory(kFixtures + "/toy3"));
        const auto config = parse_config(slurp(kFixtures + "/toy3/config.json"));
        const auto data = to_plan_data(bundle, config.request);
        const auto expected = toy3_instance();
        CHECK(config.request == toy3_request(expected));
        REQUIRE(data.num_hospitals() == 3);
        CHECK(data.ladder.levels == expected.ladder.levels);
        CHECK(data.horizon.start == expected.horizon.start);
        CHECK(data.horizon.end == expected.horizon.end);
        for (std::size_t h = 0; h < 3; ++h) {
            CHECK(data.hospitals[h].id == expected.hospitals[h].id);
            CHECK(data.hospitals[h].level_capacities == expected.hospitals[h].level_capacities);
            CHECK(data.hospitals[h].los_pmf == expected.hospitals[h].los_pmf);
        }
        CHECK(data.arrivals == expected.arrivals);
        CHECK(data.initial.admissions == expected.initial.admissions);
        CHECK(data.recent_weekly_admissions == expected.recent_weekly_admissions);
    }

    TEST_CASE("observed census seeds the initial state") {
        const auto bundle = ingest_csv(IngestPaths::in_directory(kFixtures + "/regional"));
        auto request = load_config(slurp(kFixtures + "/regional/config.json"));
        const auto data = to_plan_data(bundle, request);
        CHECK(data.num_days() == 30);
        const std::size_t last = data.initial.admissions.days() - 1;
        for (std::size_t h = 0; h < 5; ++h) {
            const auto* census = bundle.census_for(data.hospitals[h].id, "all");
            CHECK(data.initial.admissions(h, last) == *census->at(Date(2021, 12, 14)));
            for (std::size_t j = 0; j < last; ++j) CHECK(data.initial.admissions(h, j) == 0.0);
            CHECK(data.recent_weekly_admissions[h] ==
                  7.0 * bundle.admissions_for(data.hospitals[h].id, "all", "actual")->values.back());
        }

        request.scenario = "catastrophic";
        CHECK_THROWS_WITH_AS(to_plan_data(bundle, request), doctest::Contains("arrivals"), ValidationError);
        request.scenario = "moderate";
        request.end_date = Date(2022, 6, 1);
        CHECK_THROWS_AS(to_plan_data(bundle, request), ValidationError);
        request.end_date = Date(2021, 12, 20);
        request.population = "pediatric";
        CHECK_THROWS_WITH_AS(to_plan_data(bundle, request), doctest::Contains("arrivals"), ValidationError);

        auto t = small_text();
        t.los = "hospital_id,population,days,probability\nH,covid,1,1\n";
        const auto small = ingest_text(t);
        plan::PlanRequest adult;
        adult.start_date = Date(2021, 12, 15);
        adult.end_date = Date(2021, 12, 16);
        CHECK_THROWS_WITH_AS(to_plan_data(small, adult), doctest::Contains("los"), ValidationError);
    }

    TEST_CASE("census view joins observations and the forecast") {
        const auto bundle = ingest_csv(IngestPaths::in_directory(kFixtures + "/regional"));
        const auto view = census_view(bundle, "all", "moderate", Date(2021, 12, 10), Date(2021, 12, 24));
        REQUIRE(view.size() == 5);
        for (const auto& v : view) {
            REQUIRE(v.points.size() == 15);
            for (std::size_t i = 0; i < v.points.size(); ++i) {
                CHECK(v.points[i].date == Date(2021, 12, 10).plus_days(static_cast<int>(i)));
                CHECK(v.points[i].actual == (i < 5));
            }
        }
        CHECK_THROWS_AS(census_view(bundle, "all", "moderate", Date(2021, 12, 24), Date(2021, 12, 10)),
                        ValidationError);
    }

    TEST_CASE("default request round-trips") {
        const plan::PlanRequest r;
        const auto text = save_config(r);
        CHECK(load_config(text) == r);
        CHECK(save_config(load_config(text)) == text);
        CHECK(text.find("\"schema_version\": \"1\"") != std::string::npos);
    }

    TEST_CASE("zero system budget disables transfers") {
        const auto r = load_config(R"({"schema_version": "1", "total_transfer_budget": 0})");
        CHECK(r.total_transfer_budget == 0.0);
        CHECK_FALSE(r.transfers_enabled());
    }

    TEST_CASE("random requests round-trip byte-stable") {
        Rng rng(502);
        for (int trial = 0; trial < 100; ++trial) {
            ConfigFile config{random_request(rng), {}};
            REQUIRE_NOTHROW(config.request.validate());
            if (trial % 3 == 0) config.presets = uncertainty::default_presets();
            const auto first = save_config(config);
            const auto parsed = parse_config(first);
            CAPTURE(first);
            CHECK(parsed == config);
            CHECK(save_config(parsed) == first);
        }
    }

    TEST_CASE("bad config documents") {
        CHECK_THROWS_WITH_AS(load_config(R"({"start_date": "2021-12-15"})"), doctest::Contains("schema_version"),
                             ValidationError);
        CHECK_THROWS_WITH_AS(load_config(R"({"schema_version": "2"})"), doctest::Contains("unsupported"),
                             ValidationError);
        try {
            load_config(R"({"schema_version": "1", "colour": "red"})");
            FAIL("accepted an unknown field");
        } catch (const ValidationError& e) {
            CHECK(e.field() == "colour");
            CHECK(std::string(e.what()).find("schema_version 1") != std::string::npos);
        }
        try {
            load_config(R"({"schema_version": "1", "weights": {"transfer_costs": 1}})");
            FAIL("accepted an unknown weight");
        } catch (const ValidationError& e) {
            CHECK(e.field() == "weights.transfer_costs");
        }
        try {
            load_config(R"({"schema_version": "1", "transfer_budget": {"BMC": -3}})");
            FAIL("accepted a negative budget");
        } catch (const ValidationError& e) {
            CHECK(e.field() == "transfer_budget");
        }
        CHECK_THROWS_AS(load_config(R"({"schema_version": "1", "max_utilization": "high"})"), ValidationError);
        CHECK_THROWS_AS(load_config("{not json"), ValidationError);
        CHECK_THROWS_AS(load_config(R"({"schema_version": "1", "objective": "max_profit"})"), ValidationError);
        CHECK_THROWS_AS(load_config(R"({"schema_version": "1", "uncertainty_presets": {"x": {"low": 2}}})"),
                        ValidationError);
    }
}
