#pragma once

#include <memory>
#include <string>

#include "brickvm/gateway/session.hpp"

namespace brickvm::gateway {

struct ServerOptions {
    std::string address = "127.0.0.1";
    unsigned short port = 8080;  // 0 picks a free port
    bool handle_signals = false;  // SIGINT/SIGTERM stop the server
};

/// WebSocket frame stream at `/` for one client at a time, plus
/// `GET /assets/<archive path>` for the project's look and sound files.
/// Frames to a client that can't keep up are replaced by the newest one.
class Server {
public:
    /// Binds immediately; throws std::runtime_error when the address is unusable.
    Server(Session& session, ServerOptions options);
    ~Server();

    unsigned short port() const;
    /// Serves until `stop`. Starts the session thread.
    void run();
    void stop();  // callable from any thread

    struct Impl;

private:
    std::unique_ptr<Impl> impl_;
};

}  // namespace brickvm::gateway
