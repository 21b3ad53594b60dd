#include "biflip/service.hpp"

#include <stdexcept>
#include <thread>

#include "biflip/ops.hpp"

// After Eigen: resolv.h defines a _res macro that clashes with its parameter names.
#include <httplib.h>

namespace biflip {

namespace {

constexpr std::string_view prefix = "/api/v1/";

ApiResponse error_response(int status, const GeometryError& e) { return {status, dump(error_to_json(e)) + "\n"}; }

void install(httplib::Server& server) {
    auto route = [](const httplib::Request& req, httplib::Response& res) {
        const ApiResponse r = handle(req.method, req.path, req.body);
        res.status = r.status;
        res.set_content(r.body, "application/json");
        if (req.has_header("X-Request-Id")) res.set_header("X-Request-Id", req.get_header_value("X-Request-Id"));
    };
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type, X-Request-Id"},
                                {"Access-Control-Expose-Headers", "X-Request-Id"}});
    server.Get(R"(/.*)", route);
    server.Post(R"(/.*)", route);
    server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
}

} // namespace

ApiResponse handle(std::string_view method, std::string_view path, const std::string& body) {
    if (!path.starts_with(prefix))
        return error_response(404, GeometryError(ErrorCode::MalformedInput, "unknown endpoint '" + std::string(path) + "'"));
    const std::string_view op = path.substr(prefix.size());
    const bool known = has_operation(op);
    const bool get_only = op == "spaces";
    if (!known || (method == "GET") != get_only)
        return error_response(404, GeometryError(ErrorCode::MalformedInput,
                                                 "unknown endpoint '" + std::string(method) + " " + std::string(path) + "'"));
    try {
        const Json request = get_only ? Json::object() : parse_json(body);
        return {200, dump(run_operation(op, request)) + "\n"};
    } catch (const GeometryError& e) {
        return error_response(e.code() == ErrorCode::MalformedInput ? 400 : 422, e);
    }
}

struct Server::Impl {
    httplib::Server server;
    std::thread thread;
};

Server::Server() : impl_(std::make_unique<Impl>()) { install(impl_->server); }

Server::~Server() { stop(); }

int Server::start(const std::string& host, int port) {
    const int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return bound;
}

void Server::stop() {
    if (!impl_ || !impl_->thread.joinable()) return;
    impl_->server.stop();
    impl_->thread.join();
}

int serve(const std::string& host, int port) {
    httplib::Server server;
    install(server);
    if (!server.bind_to_port(host, port)) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
    server.listen_after_bind();
    return 0;
}

} // namespace biflip
