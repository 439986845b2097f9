#include "synthfm/protocol.hpp"

#include <cstring>

namespace synthfm::wire {
namespace {

using nlohmann::json;

constexpr std::uint8_t kMagic[4] = {'S', 'F', 'M', 'G'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v)
{
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v)
{
    for (int i = 0; i < 8; ++i)
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p)
{
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i)
        v = (v << 8) | p[i];
    return v;
}

std::uint64_t get_u64(const std::uint8_t* p)
{
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i)
        v = (v << 8) | p[i];
    return v;
}

[[noreturn]] void malformed(const std::string& what)
{
    throw ProtocolError(ErrorCode::malformed, what);
}

std::size_t packed_row_bytes(int width)
{
    return (static_cast<std::size_t>(width) + 7) / 8;
}

json header_json(const SamplePayload& p)
{
    return {
        {"sample_index", p.sample_index},
        {"seed", p.seed},
        {"module", p.module_kind},
        {"config_hash", p.config_hash},
        {"width", p.image.width()},
        {"height", p.image.height()},
        {"instance_count", p.masks.size()},
        {"target_index", p.target_index},
        {"prompts", p.prompts ? to_json(*p.prompts) : json(nullptr)},
    };
}

} // namespace

std::vector<std::uint8_t> encode_frame(MsgType type, std::span<const std::uint8_t> payload, std::uint8_t version)
{
    if (payload.size() > kMaxPayload)
        throw DomainError("frame payload too large: " + std::to_string(payload.size()) + " bytes");
    std::vector<std::uint8_t> out(kHeaderSize + payload.size());
    std::memcpy(out.data(), kMagic, 4);
    out[4] = version;
    out[5] = static_cast<std::uint8_t>(type);
    const auto n = static_cast<std::uint32_t>(payload.size());
    for (int i = 0; i < 4; ++i)
        out[6 + i] = static_cast<std::uint8_t>(n >> (8 * i));
    if (!payload.empty())
        std::memcpy(out.data() + kHeaderSize, payload.data(), payload.size());
    return out;
}

FrameHeader decode_frame_header(std::span<const std::uint8_t> bytes)
{
    if (bytes.size() < kHeaderSize)
        malformed("truncated frame header");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0)
        malformed("bad magic");
    FrameHeader h;
    h.version = bytes[4];
    const std::uint8_t type = bytes[5];
    if (type < 1 || type > 5)
        malformed("unknown message type " + std::to_string(type));
    h.type = static_cast<MsgType>(type);
    h.payload_length = get_u32(bytes.data() + 6);
    if (h.payload_length > kMaxPayload)
        malformed("payload length " + std::to_string(h.payload_length) + " exceeds limit");
    return h;
}

Frame decode_frame(std::span<const std::uint8_t> bytes)
{
    const FrameHeader h = decode_frame_header(bytes);
    if (bytes.size() != kHeaderSize + h.payload_length)
        malformed("frame length does not match payload length field");
    return {h.version, h.type, {bytes.begin() + kHeaderSize, bytes.end()}};
}

std::vector<std::uint8_t> encode_client_hello(std::uint8_t version)
{
    return {version};
}

std::uint8_t decode_client_hello(std::span<const std::uint8_t> payload)
{
    if (payload.size() != 1)
        malformed("client HELLO must carry exactly one byte");
    return payload[0];
}

std::vector<std::uint8_t> encode_server_hello(const ServerHello& hello)
{
    if (hello.config_hash.size() != 64)
        throw DomainError("config hash must be 64 hex characters");
    std::vector<std::uint8_t> out{hello.version};
    out.insert(out.end(), hello.config_hash.begin(), hello.config_hash.end());
    return out;
}

ServerHello decode_server_hello(std::span<const std::uint8_t> payload)
{
    if (payload.size() != 65)
        malformed("server HELLO must carry 65 bytes");
    ServerHello h;
    h.version = payload[0];
    h.config_hash.assign(payload.begin() + 1, payload.end());
    for (char c : h.config_hash)
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f')))
            malformed("server HELLO config hash is not lowercase hex");
    return h;
}

std::vector<std::uint8_t> encode_request(const Request& req)
{
    std::vector<std::uint8_t> out;
    put_u64(out, req.start);
    put_u32(out, req.count);
    return out;
}

Request decode_request(std::span<const std::uint8_t> payload)
{
    if (payload.size() != 12)
        malformed("REQUEST must carry 12 bytes");
    return {get_u64(payload.data()), get_u32(payload.data() + 8)};
}

std::vector<std::uint8_t> encode_error(const ErrorMessage& err)
{
    std::vector<std::uint8_t> out{static_cast<std::uint8_t>(err.code)};
    put_u64(out, err.index);
    out.insert(out.end(), err.message.begin(), err.message.end());
    return out;
}

ErrorMessage decode_error(std::span<const std::uint8_t> payload)
{
    if (payload.size() < 9)
        malformed("ERROR payload too short");
    if (payload[0] < 1 || payload[0] > 3)
        malformed("unknown error code " + std::to_string(payload[0]));
    ErrorMessage e;
    e.code = static_cast<ErrorCode>(payload[0]);
    e.index = get_u64(payload.data() + 1);
    e.message.assign(payload.begin() + 9, payload.end());
    return e;
}

std::size_t header_block_size(std::size_t json_bytes)
{
    return (4 + json_bytes + 7) / 8 * 8;
}

SamplePayload make_payload(const SampleRecord& record)
{
    SamplePayload p;
    p.sample_index = record.sample_index;
    p.seed = record.seed;
    p.module_kind = to_string(record.module_kind);
    p.config_hash = record.meta.value("config_hash", std::string());
    p.target_index = record.target_index;
    p.prompts = record.prompts;
    p.image = record.image;
    p.masks = record.instance_masks;
    return p;
}

std::vector<std::uint8_t> encode_payload(const SamplePayload& p)
{
    const int w = p.image.width();
    const int h = p.image.height();
    for (const BinaryMask& m : p.masks)
        if (m.width() != w || m.height() != h)
            throw ShapeError("encode_payload: mask dimensions differ from image");

    const std::string header = header_json(p).dump();
    const std::size_t block = header_block_size(header.size());
    const std::size_t row_bytes = packed_row_bytes(w);
    const std::size_t total = block + 4 * p.image.size() + p.masks.size() * row_bytes * static_cast<std::size_t>(h);
    if (header.size() > 0xFFFFFFFFu || total > kMaxPayload)
        throw DomainError("sample payload of " + std::to_string(total) + " bytes exceeds the 4-byte length fields");

    std::vector<std::uint8_t> out;
    out.reserve(total);
    put_u32(out, static_cast<std::uint32_t>(header.size()));
    out.insert(out.end(), header.begin(), header.end());
    out.resize(block, 0);

    const std::size_t img_off = out.size();
    out.resize(img_off + 4 * p.image.size());
    auto px = p.image.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) {
        std::uint32_t bits;
        std::memcpy(&bits, &px[i], 4);
        for (int b = 0; b < 4; ++b)
            out[img_off + 4 * i + b] = static_cast<std::uint8_t>(bits >> (8 * b));
    }

    for (const BinaryMask& m : p.masks) {
        for (int y = 0; y < h; ++y) {
            const std::size_t row_off = out.size();
            out.resize(row_off + row_bytes, 0);
            auto row = m.row(y);
            for (int x = 0; x < w; ++x)
                if (row[x])
                    out[row_off + x / 8] |= static_cast<std::uint8_t>(0x80 >> (x % 8));
        }
    }
    return out;
}

SamplePayload decode_payload(std::span<const std::uint8_t> bytes)
{
    if (bytes.size() < 4)
        malformed("sample payload shorter than its header length field");
    const std::size_t header_len = get_u32(bytes.data());
    if (header_len > bytes.size() - 4)
        malformed("sample header length exceeds payload");
    const std::size_t block = header_block_size(header_len);
    if (block > bytes.size())
        malformed("sample header block truncated");
    for (std::size_t i = 4 + header_len; i < block; ++i)
        if (bytes[i] != 0)
            malformed("nonzero header padding");

    const std::string text(bytes.begin() + 4, bytes.begin() + 4 + static_cast<std::ptrdiff_t>(header_len));
    SamplePayload p;
    int w = 0;
    int h = 0;
    std::size_t instances = 0;
    try {
        const json doc = json::parse(text);
        if (!doc.is_object() || doc.size() != 9)
            malformed("sample header must be an object with 9 keys");
        p.sample_index = doc.at("sample_index").get<std::uint64_t>();
        p.seed = doc.at("seed").get<std::uint64_t>();
        p.module_kind = doc.at("module").get<std::string>();
        p.config_hash = doc.at("config_hash").get<std::string>();
        w = doc.at("width").get<int>();
        h = doc.at("height").get<int>();
        instances = doc.at("instance_count").get<std::size_t>();
        p.target_index = doc.at("target_index").get<std::uint64_t>();
        if (!doc.at("prompts").is_null())
            p.prompts = prompts_from_json(doc.at("prompts"));
    } catch (const json::exception& e) {
        malformed(std::string("bad sample header: ") + e.what());
    }
    if (w < 0 || h < 0)
        malformed("negative sample dimensions");

    const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    const std::size_t row_bytes = packed_row_bytes(w);
    const std::size_t mask_bytes = row_bytes * static_cast<std::size_t>(h);
    const std::size_t remaining = bytes.size() - block;
    if (n > remaining / 4 || (mask_bytes != 0 && instances > (remaining - 4 * n) / mask_bytes) ||
        remaining != 4 * n + instances * mask_bytes)
        malformed("sample payload size does not match its header");

    p.image = ScalarImage(w, h);
    auto px = p.image.pixels();
    const std::uint8_t* src = bytes.data() + block;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t bits = get_u32(src + 4 * i);
        std::memcpy(&px[i], &bits, 4);
    }

    src += 4 * n;
    const int tail_bits = static_cast<int>(row_bytes * 8) - w;
    const std::uint8_t tail_mask = tail_bits > 0 ? static_cast<std::uint8_t>((1u << tail_bits) - 1) : 0;
    p.masks.reserve(instances);
    for (std::size_t k = 0; k < instances; ++k) {
        BinaryMask m(w, h);
        for (int y = 0; y < h; ++y, src += row_bytes) {
            if (tail_bits > 0 && (src[row_bytes - 1] & tail_mask) != 0)
                malformed("nonzero mask row padding bits");
            auto row = m.row(y);
            for (int x = 0; x < w; ++x)
                row[x] = (src[x / 8] >> (7 - x % 8)) & 1;
        }
        p.masks.push_back(std::move(m));
    }
    if (header_json(p).dump() != text)
        malformed("sample header is not in canonical form");
    return p;
}

std::vector<std::uint8_t> encode_sample(const SampleRecord& record)
{
    return encode_payload(make_payload(record));
}

SamplePayload decode_sample(std::span<const std::uint8_t> bytes)
{
    return decode_payload(bytes);
}

} // namespace synthfm::wire
