#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "surge/api/service.hpp"

namespace surge::api {

struct ServerOptions {
    std::string host = "0.0.0.0";
    int port = 8080;
    /// Served at / when set (the dashboard bundle).
    std::optional<std::filesystem::path> static_dir;
};

/// Reads SURGE_PORT, SURGE_DATA_DIR, SURGE_TOKEN and SURGE_STATIC_DIR.
struct EnvironmentConfig {
    ServerOptions server;
    ServiceOptions service;

    static EnvironmentConfig from_environment();
};

/// Thin httplib adapter over Service.
class HttpServer {
public:
    HttpServer(Service& service, ServerOptions options);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds to options.port, or to any free port when it is 0. Returns the
    /// bound port, or -1.
    int bind();
    /// Blocks until stop().
    bool listen_after_bind();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace surge::api
