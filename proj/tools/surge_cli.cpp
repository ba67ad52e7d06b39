#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "surge/analytics/analytics.hpp"
#include "surge/api/http_server.hpp"
#include "surge/api/service.hpp"
#include "surge/gateway/config.hpp"
#include "surge/gateway/csv_ingest.hpp"
#include "surge/gateway/plan_data.hpp"

namespace {

namespace fs = std::filesystem;
using namespace surge;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitInfeasible = 3;

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("config", "cannot read " + path.string());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

int report_ingest(const gateway::IngestError& e) {
    for (const auto& r : e.errors()) std::cerr << r.describe() << "\n";
    std::cerr << e.errors().size() << " problem(s) in input files\n";
    return kExitInvalid;
}

int run_plan(const fs::path& config, const fs::path& data_dir, const fs::path& out, const std::string& format) {
    const auto request = api::request_from_body(slurp(config));
    api::Service service;
    service.set_snapshot(api::Snapshot::from_directory(data_dir));
    const auto solved = service.solve(request);
    fs::create_directories(out);
    if (format == "csv") {
        const auto report = analytics::build_status_report(solved->plan, solved->data, request,
                                                           analytics::utc_timestamp());
        write_file(out / "report.csv", analytics::report_csv(report));
    } else {
        write_file(out / "plan.json", solved->payload);
    }
    std::cerr << "plan " << solved->id << ": " << solver::status_name(solved->plan.status) << ", objective "
              << solved->plan.objective << "\n";
    return kExitOk;
}

int run_validate(const fs::path& data_dir, const std::optional<fs::path>& config) {
    const auto snapshot = api::Snapshot::from_directory(data_dir);
    std::cout << "snapshot " << snapshot->id << ": " << snapshot->bundle.hospitals.size() << " hospitals, "
              << snapshot->bundle.admissions.size() << " admission series\n";
    if (config) {
        const auto parsed = gateway::parse_config(slurp(*config));
        gateway::to_plan_data(snapshot->bundle, parsed.request);
        std::cout << "config ok\n";
    }
    return kExitOk;
}

api::HttpServer* g_server = nullptr;

int run_serve(api::EnvironmentConfig env, bool admin) {
    env.service.admin = admin;
    api::Service service(env.service);
    if (env.service.data_dir) service.set_snapshot(api::Snapshot::from_directory(*env.service.data_dir));
    api::HttpServer server(service, env.server);
    if (server.bind() < 0) {
        std::cerr << "cannot bind port " << env.server.port << "\n";
        return kExitError;
    }
    g_server = &server;
    std::signal(SIGINT, [](int) { g_server->stop(); });
    std::signal(SIGTERM, [](int) { g_server->stop(); });
    std::cerr << "listening on " << env.server.host << ":" << env.server.port << "\n";
    server.listen_after_bind();
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Regional hospital surge capacity planner"};
    app.require_subcommand(1);

    fs::path config, data_dir, out;
    std::string format = "json";
    auto* plan = app.add_subcommand("plan", "Solve a capacity plan and write it to a directory");
    plan->add_option("--config", config, "Config file (schema_version 1)")->required()->check(CLI::ExistingFile);
    plan->add_option("--data-dir", data_dir, "Directory with the CSV inputs")->required()->check(CLI::ExistingDirectory);
    plan->add_option("--out", out, "Output directory")->required();
    plan->add_option("--format", format, "json writes plan.json, csv writes report.csv")
        ->check(CLI::IsMember({"json", "csv"}));

    std::optional<fs::path> validate_config;
    auto* validate = app.add_subcommand("validate", "Ingest the CSV inputs and report problems");
    validate->add_option("--data-dir", data_dir, "Directory with the CSV inputs")->required();
    validate->add_option("--config", validate_config, "Also check a config against the data");

    auto env = api::EnvironmentConfig::from_environment();
    bool admin = false;
    std::string static_dir, token, serve_data;
    auto* serve = app.add_subcommand("serve", "Run the HTTP API");
    serve->add_option("--port", env.server.port, "Port (SURGE_PORT)");
    serve->add_option("--host", env.server.host, "Bind address");
    serve->add_option("--data-dir", serve_data, "Snapshot directory (SURGE_DATA_DIR)");
    serve->add_option("--token", token, "Bearer token (SURGE_TOKEN)");
    serve->add_option("--static-dir", static_dir, "Dashboard files served at /");
    serve->add_flag("--admin", admin, "Allow POST /api/snapshot");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*plan) return run_plan(config, data_dir, out, format);
        if (*validate) return run_validate(data_dir, validate_config);
        if (!serve_data.empty()) env.service.data_dir = serve_data;
        if (!token.empty()) env.service.token = token;
        if (!static_dir.empty()) env.server.static_dir = static_dir;
        return run_serve(env, admin);
    } catch (const gateway::IngestError& e) {
        return report_ingest(e);
    } catch (const plan::PlanError& e) {
        std::cerr << e.what() << " (" << e.hint() << ")\n";
        return kExitInfeasible;
    } catch (const ValidationError& e) {
        std::cerr << "invalid " << e.field() << ": " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitError;
    }
}
