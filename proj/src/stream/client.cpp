#include "synthfm/client.hpp"

#include "socket.hpp"

namespace synthfm {

using wire::MsgType;

struct StreamClient::Impl {
    net::Socket socket;
    bool closed = false;
};

namespace {

[[noreturn]] void unexpected(const wire::Frame& f, const char* wanted)
{
    if (f.type == MsgType::error)
        throw RemoteError(wire::decode_error(f.payload));
    throw wire::ProtocolError(wire::ErrorCode::malformed,
                              std::string("expected ") + wanted + ", got message type " +
                                  std::to_string(static_cast<int>(f.type)));
}

} // namespace

StreamClient::StreamClient(const std::string& host, std::uint16_t port) : impl_(std::make_unique<Impl>())
{
    impl_->socket = net::connect_tcp(host, port);
}

StreamClient::~StreamClient() = default;
StreamClient::StreamClient(StreamClient&&) noexcept = default;
StreamClient& StreamClient::operator=(StreamClient&&) noexcept = default;

bool StreamClient::open() const noexcept
{
    return impl_ && !impl_->closed;
}

void StreamClient::send_bytes(const std::vector<std::uint8_t>& bytes)
{
    if (!open())
        throw IoError("stream client session is closed");
    net::send_all(impl_->socket.fd(), bytes.data(), bytes.size());
}

std::optional<wire::Frame> StreamClient::read_frame()
{
    if (!open())
        throw IoError("stream client session is closed");
    auto f = net::read_frame(impl_->socket.fd());
    if (!f)
        impl_->closed = true;
    return f;
}

wire::ServerHello StreamClient::hello(std::uint8_t version)
{
    send_bytes(wire::encode_frame(MsgType::hello, wire::encode_client_hello(version)));
    auto f = read_frame();
    if (!f)
        throw IoError("server closed the connection during HELLO");
    if (f->type != MsgType::hello)
        unexpected(*f, "HELLO");
    wire::ServerHello h = wire::decode_server_hello(f->payload);
    if (f->version != wire::kVersion || h.version != wire::kVersion)
        throw wire::ProtocolError(wire::ErrorCode::version_mismatch,
                                  "server protocol version " + std::to_string(h.version));
    return h;
}

std::vector<std::vector<std::uint8_t>> StreamClient::request_raw(std::uint64_t start, std::uint32_t count)
{
    send_bytes(wire::encode_frame(MsgType::request, wire::encode_request({start, count})));
    std::vector<std::vector<std::uint8_t>> out;
    out.reserve(count);
    for (std::uint32_t k = 0; k < count; ++k) {
        auto f = read_frame();
        if (!f)
            throw IoError("server closed the connection after " + std::to_string(k) + " samples");
        if (f->type != MsgType::sample)
            unexpected(*f, "SAMPLE");
        out.push_back(std::move(f->payload));
    }
    return out;
}

std::vector<wire::SamplePayload> StreamClient::fetch(std::uint64_t start, std::uint32_t count)
{
    std::vector<wire::SamplePayload> out;
    for (const auto& raw : request_raw(start, count)) {
        out.push_back(wire::decode_sample(raw));
        if (out.back().sample_index != start + out.size() - 1)
            throw wire::ProtocolError(wire::ErrorCode::malformed, "samples arrived out of order");
    }
    return out;
}

void StreamClient::bye()
{
    send_bytes(wire::encode_frame(MsgType::bye, {}));
    auto f = read_frame();
    if (f && f->type != MsgType::bye)
        unexpected(*f, "BYE");
    impl_->closed = true;
    impl_->socket.close();
}

} // namespace synthfm
