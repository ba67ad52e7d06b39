#include "surge/api/http_server.hpp"

#include <cstdlib>

#include "httplib.h"

namespace surge::api {

namespace {

std::optional<std::string> env(const char* name) {
    const char* v = std::getenv(name);
    if (!v || !*v) return std::nullopt;
    return std::string(v);
}

}  // namespace

EnvironmentConfig EnvironmentConfig::from_environment() {
    EnvironmentConfig c;
    if (auto port = env("SURGE_PORT")) c.server.port = std::stoi(*port);
    if (auto dir = env("SURGE_STATIC_DIR")) c.server.static_dir = *dir;
    if (auto dir = env("SURGE_DATA_DIR")) c.service.data_dir = *dir;
    c.service.token = env("SURGE_TOKEN");
    return c;
}

struct HttpServer::Impl {
    Impl(Service& s, ServerOptions o) : service(s), options(std::move(o)) {}
    Service& service;
    ServerOptions options;
    httplib::Server server;
};

HttpServer::HttpServer(Service& service, ServerOptions options)
    : impl_(std::make_unique<Impl>(service, std::move(options))) {
    auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
        Request r;
        r.method = req.method;
        r.path = req.path;
        for (const auto& [k, v] : req.params) r.query[k] = v;
        r.body = req.body;
        r.authorization = req.get_header_value("Authorization");
        const auto out = impl_->service.handle(r);
        res.status = out.status;
        res.set_content(out.body, out.content_type);
    };
    auto& s = impl_->server;
    s.Get("/api/health", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(R"({"status":"ok"})", "application/json");
    });
    const std::string api = R"(/api/.*)";
    s.Get(api, dispatch);
    s.Post(api, dispatch);
    s.Put(api, dispatch);
    s.Delete(api, dispatch);
    if (impl_->options.static_dir) s.set_mount_point("/", impl_->options.static_dir->string());
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
    auto& o = impl_->options;
    if (o.port == 0) return impl_->server.bind_to_any_port(o.host);
    return impl_->server.bind_to_port(o.host, o.port) ? o.port : -1;
}

bool HttpServer::listen_after_bind() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace surge::api
