#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "synthfm/protocol.hpp"

namespace synthfm {

/// ERROR frame received from the server.
class RemoteError : public Error {
public:
    explicit RemoteError(wire::ErrorMessage msg)
        : Error("server error " + std::to_string(static_cast<int>(msg.code)) + ": " + msg.message),
          msg_(std::move(msg))
    {
    }
    const wire::ErrorMessage& message() const noexcept { return msg_; }
    wire::ErrorCode code() const noexcept { return msg_.code; }

private:
    wire::ErrorMessage msg_;
};

/// Blocking client for the sample stream.
class StreamClient {
public:
    StreamClient(const std::string& host, std::uint16_t port);
    ~StreamClient();
    StreamClient(StreamClient&&) noexcept;
    StreamClient& operator=(StreamClient&&) noexcept;

    /// Handshake; returns the server's HELLO. Throws RemoteError on refusal.
    wire::ServerHello hello(std::uint8_t version = wire::kVersion);

    /// Raw SAMPLE payloads for [start, start + count), in order.
    std::vector<std::vector<std::uint8_t>> request_raw(std::uint64_t start, std::uint32_t count);
    std::vector<wire::SamplePayload> fetch(std::uint64_t start, std::uint32_t count);

    /// Sends BYE and waits for the server's BYE.
    void bye();

    // Low-level access for protocol tests.
    void send_bytes(const std::vector<std::uint8_t>& bytes);
    /// Next frame, or nullopt once the server closed the connection.
    std::optional<wire::Frame> read_frame();

    bool open() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace synthfm
