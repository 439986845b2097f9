#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "synthfm/error.hpp"
#include "synthfm/image.hpp"
#include "synthfm/prompts.hpp"
#include "synthfm/sample.hpp"

// Wire format. Every frame is
//   "SFMG" | version u8 | type u8 | payload length u32 LE | payload
// All integers little-endian.

namespace synthfm::wire {

inline constexpr std::uint8_t kVersion = 1;
inline constexpr std::size_t kHeaderSize = 10;
inline constexpr std::uint16_t kDefaultPort = 7431;
/// Upper bound on accepted payloads (a 1024^2 sample with 100 masks is ~17 MB).
inline constexpr std::uint32_t kMaxPayload = 1u << 30;

enum class MsgType : std::uint8_t { hello = 1, request = 2, sample = 3, error = 4, bye = 5 };

enum class ErrorCode : std::uint8_t { version_mismatch = 1, malformed = 2, generation_failed = 3 };

inline constexpr std::uint64_t kNoIndex = ~std::uint64_t{0};

/// Raised on any framing or payload violation; carries the code to send back.
class ProtocolError : public Error {
public:
    ProtocolError(ErrorCode code, const std::string& what) : Error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

struct FrameHeader {
    std::uint8_t version = kVersion;
    MsgType type = MsgType::hello;
    std::uint32_t payload_length = 0;
};

struct Frame {
    std::uint8_t version = kVersion;
    MsgType type = MsgType::hello;
    std::vector<std::uint8_t> payload;
};

std::vector<std::uint8_t> encode_frame(MsgType type, std::span<const std::uint8_t> payload,
                                       std::uint8_t version = kVersion);

/// Validates magic and message type. The version is returned, not checked.
FrameHeader decode_frame_header(std::span<const std::uint8_t> bytes);

/// Decodes one complete frame; trailing bytes are an error.
Frame decode_frame(std::span<const std::uint8_t> bytes);

// HELLO: client sends {version u8}; server answers {version u8, config hash (64 ASCII hex)}.
struct ServerHello {
    std::uint8_t version = kVersion;
    std::string config_hash;
};
std::vector<std::uint8_t> encode_client_hello(std::uint8_t version = kVersion);
std::uint8_t decode_client_hello(std::span<const std::uint8_t> payload);
std::vector<std::uint8_t> encode_server_hello(const ServerHello& hello);
ServerHello decode_server_hello(std::span<const std::uint8_t> payload);

// REQUEST: {start u64, count u32}.
struct Request {
    std::uint64_t start = 0;
    std::uint32_t count = 0;

    friend bool operator==(const Request&, const Request&) = default;
};
std::vector<std::uint8_t> encode_request(const Request& req);
Request decode_request(std::span<const std::uint8_t> payload);

// ERROR: {code u8, sample index u64 (kNoIndex if none), UTF-8 message}.
struct ErrorMessage {
    ErrorCode code = ErrorCode::malformed;
    std::uint64_t index = kNoIndex;
    std::string message;

    friend bool operator==(const ErrorMessage&, const ErrorMessage&) = default;
};
std::vector<std::uint8_t> encode_error(const ErrorMessage& err);
ErrorMessage decode_error(std::span<const std::uint8_t> payload);

/// Decoded SAMPLE payload. Layout:
///   header_length u32 | JSON header | zero padding to a multiple of 8 (counted from the payload start)
///   | W*H float32 row-major | per instance ceil(W/8)*H bytes of packed bits (MSB first)
struct SamplePayload {
    std::uint64_t sample_index = 0;
    std::uint64_t seed = 0;
    std::string module_kind = "shape";
    std::string config_hash;
    std::uint64_t target_index = 0;
    std::optional<PromptSet> prompts;
    ScalarImage image;
    std::vector<BinaryMask> masks;

    friend bool operator==(const SamplePayload&, const SamplePayload&) = default;
};

SamplePayload make_payload(const SampleRecord& record);

std::vector<std::uint8_t> encode_payload(const SamplePayload& payload);
/// Strict inverse of encode_payload: any deviation (padding, sizes, header
/// form) raises ProtocolError, so encode(decode(b)) == b for accepted b.
SamplePayload decode_payload(std::span<const std::uint8_t> bytes);

/// encode_payload(make_payload(record)).
std::vector<std::uint8_t> encode_sample(const SampleRecord& record);
SamplePayload decode_sample(std::span<const std::uint8_t> bytes);

/// Size of the 8-byte-aligned header block for a JSON header of `json_bytes` bytes.
std::size_t header_block_size(std::size_t json_bytes);

} // namespace synthfm::wire
