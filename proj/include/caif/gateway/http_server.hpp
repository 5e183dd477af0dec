#pragma once

#include <memory>
#include <string>

#include "caif/gateway/system.hpp"

namespace httplib {
class Server;
}

namespace caif::gateway {

// JSON + server-sent-events API over a System.
//
//   POST   /sessions                     new conversation
//   POST   /sessions/{id}/turns          {"text": ...} -> SessionView
//   GET    /sessions/{id}
//   GET    /contracts/{id}
//   POST   /contracts/{id}:activate      feasibility + A1 dispatch
//   DELETE /policies/{id}                stop
//   GET    /policies
//   GET    /metrics/stream               text/event-stream; ?limit=n closes after n events
//   GET    /state
//   POST   /clock/step                   {"ticks": n}, for headless use without the ticker
//   PUT    /a1/policies/{id}             A1 mediator
//   DELETE /a1/policies/{id}
class HttpServer {
public:
    explicit HttpServer(System& system);
    ~HttpServer();

    // Blocks until stop().
    bool listen(const std::string& host, int port);
    // Binds an ephemeral port and returns it; call listen_after_bind() to serve.
    int bind_any_port(const std::string& host);
    bool listen_after_bind();
    void stop();
    bool is_running() const;
    void wait_until_ready() const;

private:
    void routes();

    System& system_;
    std::unique_ptr<httplib::Server> server_;
};

}  // namespace caif::gateway
