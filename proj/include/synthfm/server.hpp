#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <utility>

#include "synthfm/config.hpp"
#include "synthfm/protocol.hpp"

namespace synthfm {

struct BindAddress {
    std::string host = "127.0.0.1";
    std::uint16_t port = wire::kDefaultPort;
};

/// Parses "HOST:PORT", "HOST" or ":PORT". IPv6 hosts go in brackets.
BindAddress parse_bind(const std::string& text);

/// TCP sample server. Each connection runs on its own thread; within a
/// request, a producer thread generates samples into a queue of at most
/// kQueueDepth encoded frames while the connection thread sends them in
/// index order.
class SampleServer {
public:
    static constexpr std::size_t kQueueDepth = 4;

    SampleServer(GenConfig cfg, BindAddress bind);
    ~SampleServer();
    SampleServer(const SampleServer&) = delete;
    SampleServer& operator=(const SampleServer&) = delete;

    /// Binds and starts accepting; port 0 picks a free port.
    void start();
    /// Actual listening port once started.
    std::uint16_t port() const noexcept { return port_; }
    /// Closes the listener and all connections, then joins every thread.
    void stop();
    /// Blocks until stop() is called from another thread.
    void wait();

    const std::string& config_hash() const noexcept { return hash_; }

    /// Called for every handled event (for logging); may be empty.
    std::function<void(const std::string&)> on_event;

private:
    struct Connection;

    void accept_loop();
    void serve_connection(Connection& conn);
    bool serve_request(Connection& conn, const wire::Request& req);
    void event(const std::string& what);

    GenConfig cfg_;
    BindAddress bind_;
    std::string hash_;
    std::uint16_t port_ = 0;
    int listen_fd_ = -1;
    std::atomic<bool> stopping_{false};
    std::thread accept_thread_;
    std::mutex mutex_;
    std::list<std::unique_ptr<Connection>> connections_;
    std::mutex stop_mutex_;
};

} // namespace synthfm
