#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace biflip {

struct ApiResponse {
    int status = 200;
    std::string body;
};

// Routes one request: POST /api/v1/<op> runs the operation on the JSON body,
// GET /api/v1/spaces lists the space tags. Bodies are the same bytes the CLI
// prints. Errors come back as {"error": {"name", "message"}} with 400 for
// malformed input, 422 for geometric failures and 404 for unknown paths.
ApiResponse handle(std::string_view method, std::string_view path, const std::string& body);

// HTTP listener on a background thread.
class Server {
public:
    Server();
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    // Port 0 picks a free port. Returns the bound port.
    int start(const std::string& host, int port);
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Blocks until the process is killed.
int serve(const std::string& host, int port);

} // namespace biflip
