#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "synthfm/protocol.hpp"

namespace synthfm::net {

/// Owning file descriptor.
class Socket {
public:
    Socket() = default;
    explicit Socket(int fd) : fd_(fd) {}
    ~Socket() { close(); }
    Socket(Socket&& o) noexcept : fd_(o.release()) {}
    Socket& operator=(Socket&& o) noexcept
    {
        if (this != &o) {
            close();
            fd_ = o.release();
        }
        return *this;
    }
    Socket(const Socket&) = delete;
    Socket& operator=(const Socket&) = delete;

    int fd() const noexcept { return fd_; }
    bool valid() const noexcept { return fd_ >= 0; }
    int release() noexcept
    {
        const int fd = fd_;
        fd_ = -1;
        return fd;
    }
    void close() noexcept;
    /// Unblocks pending reads and writes from another thread.
    void shutdown() noexcept;

private:
    int fd_ = -1;
};

/// Writes everything or throws IoError. Never raises SIGPIPE.
void send_all(int fd, const std::uint8_t* data, std::size_t n);

/// Reads exactly n bytes. Returns false on orderly EOF before the first
/// byte; throws IoError on errors or EOF mid-buffer.
bool recv_exact(int fd, std::uint8_t* data, std::size_t n);

/// Reads one frame. std::nullopt on clean EOF at a frame boundary; throws
/// ProtocolError for bad headers or payloads above max_payload.
std::optional<wire::Frame> read_frame(int fd, std::uint32_t max_payload = wire::kMaxPayload);

void send_frame(int fd, wire::MsgType type, const std::vector<std::uint8_t>& payload);

Socket connect_tcp(const std::string& host, std::uint16_t port);
Socket listen_tcp(const std::string& host, std::uint16_t port, int backlog = 16);
std::uint16_t local_port(int fd);

} // namespace synthfm::net
