#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace egoexo::service::ws {

/// base64(SHA-1(key + RFC 6455 GUID)).
std::string accept_key(std::string_view client_key);

struct HandshakeRequest {
  std::string path;
  std::string key;
  /// Bytes after the header block (the client may pipeline frames).
  std::size_t header_bytes = 0;
};

/// Parses a complete HTTP upgrade request. Returns nullopt while the
/// header block is still incomplete; throws ProtocolError when it is not a
/// valid websocket upgrade.
std::optional<HandshakeRequest> parse_handshake(std::string_view data);

std::string handshake_response(std::string_view client_key);
/// Client side; `key` should be 16 random bytes, base64.
std::string handshake_request(std::string_view host, std::string_view path, std::string_view key);
/// Checks a server response; returns header byte count or nullopt while
/// incomplete; throws ProtocolError on a bad status or accept key.
std::optional<std::size_t> check_handshake_response(std::string_view data, std::string_view key);

enum class Opcode : std::uint8_t { continuation = 0x0, text = 0x1, binary = 0x2, close = 0x8, ping = 0x9, pong = 0xA };

/// Single FIN frame. Clients must mask; servers must not.
std::vector<std::uint8_t> encode_frame(Opcode op, std::span<const std::uint8_t> payload,
                                       std::optional<std::uint32_t> mask = std::nullopt);

struct Frame {
  Opcode opcode = Opcode::binary;
  std::vector<std::uint8_t> payload;  // unmasked, fragments joined
};

/// Reassembles data messages from fragments; control frames pass through
/// immediately. Throws ProtocolError on reserved bits, unknown opcodes,
/// bad masking for the configured role, or oversized frames.
class FrameDecoder {
 public:
  explicit FrameDecoder(bool expect_masked) : expect_masked_(expect_masked) {}
  void feed(std::span<const std::uint8_t> bytes);
  std::optional<Frame> next();

 private:
  bool expect_masked_;
  std::vector<std::uint8_t> buffer_;
  std::size_t offset_ = 0;
  std::optional<Frame> partial_;
};

}  // namespace egoexo::service::ws
