#include "socket.hpp"

#include <cerrno>
#include <cstring>

#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

namespace synthfm::net {
namespace {

[[noreturn]] void sys_error(const std::string& what)
{
    throw IoError(what + ": " + std::strerror(errno));
}

struct AddrInfo {
    addrinfo* list = nullptr;
    ~AddrInfo()
    {
        if (list)
            freeaddrinfo(list);
    }
};

AddrInfo resolve(const std::string& host, std::uint16_t port, bool passive)
{
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    if (passive)
        hints.ai_flags = AI_PASSIVE;
    AddrInfo ai;
    const std::string service = std::to_string(port);
    const int rc = getaddrinfo(host.empty() ? nullptr : host.c_str(), service.c_str(), &hints, &ai.list);
    if (rc != 0)
        throw IoError("cannot resolve " + host + ": " + gai_strerror(rc));
    return ai;
}

} // namespace

void Socket::close() noexcept
{
    if (fd_ >= 0)
        ::close(fd_);
    fd_ = -1;
}

void Socket::shutdown() noexcept
{
    if (fd_ >= 0)
        ::shutdown(fd_, SHUT_RDWR);
}

void send_all(int fd, const std::uint8_t* data, std::size_t n)
{
    while (n > 0) {
        const ssize_t k = ::send(fd, data, n, MSG_NOSIGNAL);
        if (k < 0) {
            if (errno == EINTR)
                continue;
            sys_error("send");
        }
        data += k;
        n -= static_cast<std::size_t>(k);
    }
}

bool recv_exact(int fd, std::uint8_t* data, std::size_t n)
{
    std::size_t got = 0;
    while (got < n) {
        const ssize_t k = ::recv(fd, data + got, n - got, 0);
        if (k < 0) {
            if (errno == EINTR)
                continue;
            sys_error("recv");
        }
        if (k == 0) {
            if (got == 0)
                return false;
            throw IoError("connection closed mid-frame");
        }
        got += static_cast<std::size_t>(k);
    }
    return true;
}

std::optional<wire::Frame> read_frame(int fd, std::uint32_t max_payload)
{
    std::uint8_t head[wire::kHeaderSize];
    if (!recv_exact(fd, head, sizeof head))
        return std::nullopt;
    const wire::FrameHeader h = wire::decode_frame_header(head);
    if (h.payload_length > max_payload)
        throw wire::ProtocolError(wire::ErrorCode::malformed,
                                  "payload length " + std::to_string(h.payload_length) + " exceeds limit");
    wire::Frame f;
    f.version = h.version;
    f.type = h.type;
    f.payload.resize(h.payload_length);
    if (h.payload_length > 0 && !recv_exact(fd, f.payload.data(), f.payload.size()))
        throw IoError("connection closed mid-frame");
    return f;
}

void send_frame(int fd, wire::MsgType type, const std::vector<std::uint8_t>& payload)
{
    const auto bytes = wire::encode_frame(type, payload);
    send_all(fd, bytes.data(), bytes.size());
}

Socket connect_tcp(const std::string& host, std::uint16_t port)
{
    AddrInfo ai = resolve(host, port, false);
    int last_errno = 0;
    for (addrinfo* a = ai.list; a; a = a->ai_next) {
        Socket s(::socket(a->ai_family, a->ai_socktype, a->ai_protocol));
        if (!s.valid())
            continue;
        if (::connect(s.fd(), a->ai_addr, a->ai_addrlen) == 0)
            return s;
        last_errno = errno;
    }
    errno = last_errno;
    sys_error("cannot connect to " + host + ":" + std::to_string(port));
}

Socket listen_tcp(const std::string& host, std::uint16_t port, int backlog)
{
    AddrInfo ai = resolve(host, port, true);
    int last_errno = 0;
    for (addrinfo* a = ai.list; a; a = a->ai_next) {
        Socket s(::socket(a->ai_family, a->ai_socktype, a->ai_protocol));
        if (!s.valid())
            continue;
        const int one = 1;
        ::setsockopt(s.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
        if (::bind(s.fd(), a->ai_addr, a->ai_addrlen) == 0 && ::listen(s.fd(), backlog) == 0)
            return s;
        last_errno = errno;
    }
    errno = last_errno;
    sys_error("cannot listen on " + host + ":" + std::to_string(port));
}

std::uint16_t local_port(int fd)
{
    sockaddr_storage addr{};
    socklen_t len = sizeof addr;
    if (::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len) != 0)
        sys_error("getsockname");
    if (addr.ss_family == AF_INET6)
        return ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port);
    return ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
}

} // namespace synthfm::net
