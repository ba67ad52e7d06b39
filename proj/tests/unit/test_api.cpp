#include <fstream>
#include <sstream>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "surge/api/http_server.hpp"
#include "surge/api/json_codec.hpp"
#include "surge/api/service.hpp"

using namespace surge;
using namespace surge::api;
using nlohmann::json;

namespace {

const std::string kFixtures = SURGE_FIXTURES_DIR;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

/// Two hospitals, one week, no forecast demand at all.
gateway::IngestBundle zero_demand_bundle() {
    gateway::CsvText t;
    t.capacity = "hospital_id,level_name,beds\nH,baseline,10\nH,ramp_up,12\nG,baseline,5\nG,ramp_up,8\n";
    t.los = "hospital_id,population,days,probability\nH,all,1,0.5\nH,all,2,0.5\nG,all,1,1\n";
    t.admissions = "hospital_id,date,population,scenario,count\n";
    for (const char* h : {"H", "G"})
        for (int d = 15; d <= 21; ++d)
            t.admissions += std::string(h) + ",2021-12-" + std::to_string(d) + ",all,moderate,0\n";
    return gateway::ingest_text(t);
}

const char* kZeroBody = R"({"start_date":"2021-12-15","end_date":"2021-12-21"})";

Request post(const std::string& path, const std::string& body) { return {"POST", path, {}, body, ""}; }
Request get(const std::string& path) { return {"GET", path, {}, "", ""}; }

json body_of(const Response& r) { return json::parse(r.body); }

std::unique_ptr<Service> toy3_service(ServiceOptions options = {}) {
    auto s = std::make_unique<Service>(std::move(options));
    s->set_snapshot(Snapshot::from_directory(kFixtures + "/toy3"));
    return s;
}

}  // namespace

TEST_SUITE("api") {
    TEST_CASE("zero demand gives an all-baseline plan") {
        Service s;
        s.set_snapshot(Snapshot::from_bundle(zero_demand_bundle()));
        const auto r = s.handle(post("/api/plan", kZeroBody));
        REQUIRE(r.status == 200);
        const auto doc = body_of(r);
        CHECK(doc["status"] == "ok");
        for (const auto& row : doc["payload"]["plan"]["levels"])
            for (const auto& l : row) CHECK(l == 0);
        CHECK(doc["payload"]["plan"]["transfers"].empty());
        CHECK(doc["payload"]["transfer_summary"]["total"] == 0.0);
        CHECK(doc["telemetry"]["cache_hit"] == false);
        CHECK(body_of(s.handle(post("/api/plan", kZeroBody)))["telemetry"]["cache_hit"] == true);
    }

    TEST_CASE("request errors name the field") {
        Service s;
        s.set_snapshot(Snapshot::from_bundle(zero_demand_bundle()));
        auto r = s.handle(post("/api/plan", R"({"transfer_budget":{"H":-1}})"));
        CHECK(r.status == 400);
        CHECK(body_of(r)["error"]["field"] == "transfer_budget");
        r = s.handle(post("/api/plan", "{not json"));
        CHECK(r.status == 400);
        CHECK(body_of(r)["error"]["field"] == "body");
        r = s.handle(post("/api/plan", R"({"schema_version":"7"})"));
        CHECK(body_of(r)["error"]["field"] == "schema_version");
        r = s.handle(post("/api/plan", R"({"colour":"red"})"));
        CHECK(r.status == 400);
        CHECK(body_of(r)["error"]["field"] == "colour");
        r = s.handle(post("/api/plan", R"({"start_date":"2021-12-15","end_date":"2021-12-21","scenario":"nope"})"));
        CHECK(r.status == 400);
        CHECK(body_of(r)["error"]["field"] == "arrivals");
        CHECK(s.handle({"DELETE", "/api/plan", {}, "", ""}).status == 405);
        CHECK(s.handle(get("/api/nothing")).status == 404);
    }

    TEST_CASE("timeout above the cap is clamped") {
        const auto r = request_from_body(R"({"timeout_s": 900})");
        REQUIRE(r.timeout_s);
        CHECK(*r.timeout_s == plan::kMaxTimeoutSeconds);
    }

    TEST_CASE("conflict before data or plan exists") {
        Service s;
        CHECK(s.handle(post("/api/plan", "{}")).status == 409);
        CHECK(s.handle(get("/api/data/census")).status == 409);
        CHECK(s.handle(get("/api/report")).status == 409);
        const auto meta = body_of(s.handle(get("/api/meta")));
        CHECK(meta["payload"]["snapshot_id"].is_null());
    }

    TEST_CASE("report after a solve") {
        auto s_ptr = toy3_service();
        auto& s = *s_ptr;
        REQUIRE(s.handle(post("/api/plan", slurp(kFixtures + "/toy3/config.json"))).status == 200);
        const auto r = s.handle(get("/api/report"));
        REQUIRE(r.status == 200);
        const auto p = body_of(r)["payload"];
        CHECK(p["timeline"].size() == 3);
        CHECK(p["admission_targets"]["rows"].size() == 3);
        CHECK(p["generated_at"].get<std::string>().size() == 20);
    }

    TEST_CASE("config PUT then GET returns the same document") {
        auto s_ptr = toy3_service();
        auto& s = *s_ptr;
        const auto doc = gateway::parse_config(slurp(kFixtures + "/toy3/config.json"));
        const auto put = s.handle({"PUT", "/api/config", {}, canonical(gateway::config_to_json(doc)), ""});
        REQUIRE(put.status == 200);
        const auto got = s.handle(get("/api/config"));
        CHECK(got.body == put.body);
        CHECK(gateway::config_from_json(body_of(got)["payload"]) == doc);
        CHECK(s.handle({"PUT", "/api/config", {}, R"({"start_date":"2021-12-15"})", ""}).status == 400);
    }

    TEST_CASE("census view defaults follow the stored config") {
        auto s_ptr = toy3_service();
        auto& s = *s_ptr;
        const auto r = s.handle({"GET", "/api/data/census", {{"from", "2021-12-10"}, {"to", "2021-12-20"}}, "", ""});
        REQUIRE(r.status == 200);
        const auto p = body_of(r)["payload"];
        CHECK(p["series"].size() == 3);
        CHECK(p["series"][0]["points"].size() == 11);
        CHECK(s.handle({"GET", "/api/data/census", {{"from", "12/10/2021"}}, "", ""}).status == 400);
    }

    TEST_CASE("robustness of a nominal-only preset") {
        Service s;
        s.set_snapshot(Snapshot::from_bundle(zero_demand_bundle()));
        const auto id = body_of(s.handle(post("/api/plan", kZeroBody)))["payload"]["plan_id"].get<std::string>();
        auto r = s.handle(post("/api/robustness", json{{"plan_id", id}, {"scenarios", 50}}.dump()));
        REQUIRE(r.status == 200);
        CHECK(body_of(r)["payload"]["overall_violation_rate"] == 0.0);
        CHECK(body_of(r)["payload"]["scenarios"] == 50);

        json heavy{{"plan_id", id},
                   {"scenarios", 20},
                   {"specs", {{"G", {{"nominal", std::vector<double>(7, 20.0)}}}}}};
        r = s.handle(post("/api/robustness", heavy.dump()));
        REQUIRE(r.status == 200);
        CHECK(body_of(r)["payload"]["overall_violation_rate"] > 0.0);

        json ragged{{"plan_id", id}, {"specs", {{"G", {{"upper", {1.0}}}}}}};
        CHECK(s.handle(post("/api/robustness", ragged.dump())).status == 400);
        CHECK(s.handle(post("/api/robustness", json{{"plan_id", "ffff"}}.dump())).status == 404);
        r = s.handle(post("/api/robustness", json{{"plan_id", id}, {"preset", "doomsday"}}.dump()));
        CHECK(body_of(r)["error"]["field"] == "preset");
    }

    TEST_CASE("identical requests give identical payloads") {
        auto a_ptr = toy3_service();
        auto& a = *a_ptr;
        auto b_ptr = toy3_service();
        auto& b = *b_ptr;
        const auto body = slurp(kFixtures + "/toy3/config.json");
        const auto ra = body_of(a.handle(post("/api/plan", body)));
        const auto rb = body_of(b.handle(post("/api/plan", body)));
        CHECK(canonical(ra["payload"]) == canonical(rb["payload"]));
    }

    TEST_CASE("concurrent solves match serial ones") {
        const auto base = json::parse(slurp(kFixtures + "/toy3/config.json"));
        std::vector<std::string> bodies;
        for (double z : {1.0, 0.95, 0.9, 0.85, 0.8, 0.75}) {
            auto b = base;
            b["max_utilization"] = z;
            bodies.push_back(b.dump());
        }
        auto serial_ptr = toy3_service();
        auto& serial = *serial_ptr;
        std::vector<std::string> expected;
        for (const auto& b : bodies)
            expected.push_back(canonical(body_of(serial.handle(post("/api/plan", b)))["payload"]));

        auto shared_ptr = toy3_service(ServiceOptions{.cache_capacity = 2});
        auto& shared = *shared_ptr;
        std::vector<std::string> got(bodies.size() * 2);
        std::vector<std::thread> threads;
        for (std::size_t i = 0; i < got.size(); ++i)
            threads.emplace_back([&, i] {
                got[i] = canonical(body_of(shared.handle(post("/api/plan", bodies[i % bodies.size()])))["payload"]);
            });
        for (auto& t : threads) t.join();
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == expected[i % bodies.size()]);
    }

    TEST_CASE("token and admin gates") {
        auto s_ptr = toy3_service(ServiceOptions{.token = "secret"});
        auto& s = *s_ptr;
        CHECK(s.handle(get("/api/meta")).status == 401);
        CHECK(s.handle({"GET", "/api/meta", {}, "", "Bearer secret"}).status == 200);
        CHECK(s.handle({"POST", "/api/snapshot", {}, "", "Bearer secret"}).status == 403);

        Service admin(ServiceOptions{.admin = true, .data_dir = kFixtures + "/toy3"});
        const auto r = admin.handle(post("/api/snapshot", ""));
        REQUIRE(r.status == 200);
        CHECK(body_of(r)["payload"]["hospitals"] == 3);
        CHECK(admin.snapshot()->id == body_of(r)["payload"]["snapshot_id"]);
        CHECK(admin.handle(post("/api/snapshot", R"({"data_dir":"/nonexistent"})")).status >= 400);
    }

    TEST_CASE("served over a socket") {
        auto s_ptr = toy3_service(ServiceOptions{.token = "t"});
        auto& s = *s_ptr;
        HttpServer server(s, ServerOptions{.host = "127.0.0.1", .port = 0});
        const int port = server.bind();
        REQUIRE(port > 0);
        std::thread loop([&] { server.listen_after_bind(); });
        httplib::Client client("127.0.0.1", port);
        auto health = client.Get("/api/health");
        REQUIRE(health);
        CHECK(health->status == 200);
        CHECK(client.Get("/api/meta")->status == 401);
        const httplib::Headers auth{{"Authorization", "Bearer t"}};
        auto res = client.Post("/api/plan", auth, slurp(kFixtures + "/toy3/config.json"), "application/json");
        REQUIRE(res);
        CHECK(res->status == 200);
        const auto direct = s.handle({"POST", "/api/plan", {}, slurp(kFixtures + "/toy3/config.json"), "Bearer t"});
        CHECK(canonical(json::parse(res->body)["payload"]) == canonical(body_of(direct)["payload"]));
        auto census = client.Get("/api/data/census?from=2021-12-10&to=2021-12-12", auth);
        REQUIRE(census);
        CHECK(json::parse(census->body)["payload"]["series"][0]["points"].size() == 3);
        server.stop();
        loop.join();
    }
}
