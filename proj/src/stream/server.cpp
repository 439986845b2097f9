#include "synthfm/server.hpp"

#include <condition_variable>
#include <deque>

#include <sys/socket.h>
#include <unistd.h>

#include "socket.hpp"

namespace synthfm {

using wire::ErrorCode;
using wire::MsgType;

BindAddress parse_bind(const std::string& text)
{
    BindAddress b;
    std::string host = text;
    std::string port;
    if (!text.empty() && text.front() == '[') {
        const auto close = text.find(']');
        if (close == std::string::npos)
            throw ConfigError("bad bind address '" + text + "'");
        host = text.substr(1, close - 1);
        if (close + 1 < text.size()) {
            if (text[close + 1] != ':')
                throw ConfigError("bad bind address '" + text + "'");
            port = text.substr(close + 2);
        }
    } else if (const auto colon = text.rfind(':'); colon != std::string::npos) {
        host = text.substr(0, colon);
        port = text.substr(colon + 1);
    }
    if (!host.empty())
        b.host = host;
    if (!port.empty()) {
        std::size_t used = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(port, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != port.size() || v > 65535)
            throw ConfigError("bad port in bind address '" + text + "'");
        b.port = static_cast<std::uint16_t>(v);
    }
    return b;
}

struct SampleServer::Connection {
    net::Socket socket;
    std::thread thread;
    std::atomic<bool> done{false};
};

SampleServer::SampleServer(GenConfig cfg, BindAddress bind)
    : cfg_(std::move(cfg)), bind_(std::move(bind)), hash_(synthfm::config_hash(cfg_))
{
}

SampleServer::~SampleServer()
{
    stop();
}

void SampleServer::event(const std::string& what)
{
    if (on_event)
        on_event(what);
}

void SampleServer::start()
{
    net::Socket s = net::listen_tcp(bind_.host, bind_.port);
    port_ = net::local_port(s.fd());
    listen_fd_ = s.release();
    accept_thread_ = std::thread([this] { accept_loop(); });
}

void SampleServer::stop()
{
    std::lock_guard stop_lock(stop_mutex_);
    if (stopping_.exchange(true) && listen_fd_ < 0)
        return;
    if (listen_fd_ >= 0)
        ::shutdown(listen_fd_, SHUT_RDWR);
    if (accept_thread_.joinable())
        accept_thread_.join();
    if (listen_fd_ >= 0) {
        ::close(listen_fd_);
        listen_fd_ = -1;
    }
    std::list<std::unique_ptr<Connection>> conns;
    {
        std::lock_guard lock(mutex_);
        conns.swap(connections_);
    }
    for (auto& c : conns)
        c->socket.shutdown();
    for (auto& c : conns)
        if (c->thread.joinable())
            c->thread.join();
}

void SampleServer::wait()
{
    while (!stopping_.load())
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
}

void SampleServer::accept_loop()
{
    while (!stopping_.load()) {
        const int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) {
            if (errno == EINTR || errno == ECONNABORTED)
                continue;
            return;
        }
        std::lock_guard lock(mutex_);
        // Reap finished connections so long-running servers do not accumulate threads.
        for (auto it = connections_.begin(); it != connections_.end();) {
            if ((*it)->done.load()) {
                (*it)->thread.join();
                it = connections_.erase(it);
            } else {
                ++it;
            }
        }
        if (stopping_.load()) {
            ::close(fd);
            return;
        }
        auto conn = std::make_unique<Connection>();
        conn->socket = net::Socket(fd);
        Connection& ref = *conn;
        connections_.push_back(std::move(conn));
        ref.thread = std::thread([this, &ref] {
            serve_connection(ref);
            ref.socket.shutdown();
            ref.done = true;
        });
    }
}

namespace {

void send_error(int fd, ErrorCode code, std::uint64_t index, const std::string& message)
{
    try {
        net::send_frame(fd, MsgType::error, wire::encode_error({code, index, message}));
    } catch (const IoError&) {
    }
}

// Client frames are tiny; anything larger is treated as malformed.
constexpr std::uint32_t kMaxClientPayload = 1024;

} // namespace

void SampleServer::serve_connection(Connection& conn)
{
    const int fd = conn.socket.fd();
    try {
        auto hello = net::read_frame(fd, kMaxClientPayload);
        if (!hello)
            return;
        if (hello->type != MsgType::hello) {
            send_error(fd, ErrorCode::malformed, wire::kNoIndex, "expected HELLO");
            return;
        }
        const std::uint8_t version = wire::decode_client_hello(hello->payload);
        if (hello->version != wire::kVersion || version != wire::kVersion) {
            send_error(fd, ErrorCode::version_mismatch, wire::kNoIndex,
                       "server speaks protocol version " + std::to_string(wire::kVersion));
            return;
        }
        net::send_frame(fd, MsgType::hello, wire::encode_server_hello({wire::kVersion, hash_}));
        event("client handshake complete");

        while (!stopping_.load()) {
            auto frame = net::read_frame(fd, kMaxClientPayload);
            if (!frame)
                return;
            if (frame->version != wire::kVersion) {
                send_error(fd, ErrorCode::version_mismatch, wire::kNoIndex, "unsupported frame version");
                return;
            }
            if (frame->type == MsgType::bye) {
                net::send_frame(fd, MsgType::bye, {});
                return;
            }
            if (frame->type != MsgType::request) {
                send_error(fd, ErrorCode::malformed, wire::kNoIndex, "expected REQUEST or BYE");
                return;
            }
            const wire::Request req = wire::decode_request(frame->payload);
            if (req.count > 0 && req.start + req.count - 1 < req.start) {
                send_error(fd, ErrorCode::malformed, wire::kNoIndex, "request range overflows");
                return;
            }
            event("request start=" + std::to_string(req.start) + " count=" + std::to_string(req.count));
            if (!serve_request(conn, req))
                return;
        }
    } catch (const wire::ProtocolError& e) {
        send_error(fd, e.code(), wire::kNoIndex, e.what());
    } catch (const IoError& e) {
        event(std::string("connection dropped: ") + e.what());
    }
}

bool SampleServer::serve_request(Connection& conn, const wire::Request& req)
{
    struct Item {
        std::uint64_t index = 0;
        std::vector<std::uint8_t> frame;
        std::string error;
    };
    std::mutex m;
    std::condition_variable cv;
    std::deque<Item> queue;
    bool cancelled = false;

    std::thread producer([&] {
        for (std::uint32_t k = 0; k < req.count; ++k) {
            Item item;
            item.index = req.start + k;
            try {
                const SampleRecord rec = generate_sample(cfg_, item.index);
                item.frame = wire::encode_frame(MsgType::sample, wire::encode_sample(rec));
            } catch (const std::exception& e) {
                item.error = e.what();
            }
            const bool failed = !item.error.empty();
            std::unique_lock lock(m);
            cv.wait(lock, [&] { return cancelled || queue.size() < kQueueDepth; });
            if (cancelled)
                return;
            queue.push_back(std::move(item));
            cv.notify_all();
            if (failed)
                return;
        }
    });

    bool keep_open = true;
    try {
        for (std::uint32_t k = 0; k < req.count; ++k) {
            Item item;
            {
                std::unique_lock lock(m);
                cv.wait(lock, [&] { return !queue.empty() || stopping_.load(); });
                if (queue.empty()) {
                    keep_open = false;
                    break;
                }
                item = std::move(queue.front());
                queue.pop_front();
                cv.notify_all();
            }
            if (!item.error.empty()) {
                send_error(conn.socket.fd(), ErrorCode::generation_failed, item.index, item.error);
                keep_open = false;
                break;
            }
            net::send_all(conn.socket.fd(), item.frame.data(), item.frame.size());
        }
    } catch (...) {
        {
            std::lock_guard lock(m);
            cancelled = true;
        }
        cv.notify_all();
        producer.join();
        throw;
    }
    {
        std::lock_guard lock(m);
        cancelled = true;
    }
    cv.notify_all();
    producer.join();
    return keep_open;
}

} // namespace synthfm
