#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace egoexo::service {

/// Wire registry; the numeric values are part of the protocol.
enum class MessageType : std::uint8_t {
  ego_frame = 0x01,
  exo_request = 0x02,
  exo_response = 0x03,
  map_snapshot = 0x04,
  status = 0x05,
  config = 0x06,
};

bool is_registered(std::uint8_t type) noexcept;
std::string_view type_name(MessageType type) noexcept;

/// One framed message:
///   u32be length | u8 type | u32be header_len | header (UTF-8 JSON) | payload
/// where length counts every byte after the length field.
struct Message {
  MessageType type = MessageType::status;
  nlohmann::json header = nlohmann::json::object();
  std::vector<std::uint8_t> payload;

  friend bool operator==(const Message&, const Message&) = default;
};

/// Frames above this are rejected by the decoder (64 MiB).
inline constexpr std::uint32_t kMaxFrameLength = 64u << 20;

/// Header must be a JSON object; throws ProtocolError otherwise.
std::vector<std::uint8_t> encode(const Message& message);
void encode_into(std::vector<std::uint8_t>& out, const Message& message);

/// Incremental decoder over an arbitrary split byte stream.
///
/// Any malformation (unknown type, header_len past the frame, oversized
/// frame, header that is not a UTF-8 JSON object) throws ProtocolError;
/// the decoder is unusable afterwards.
class FrameDecoder {
 public:
  void feed(std::span<const std::uint8_t> bytes);
  std::optional<Message> next();
  /// Bytes buffered but not yet consumed as a full frame.
  std::size_t pending() const noexcept { return buffer_.size() - offset_; }

 private:
  std::vector<std::uint8_t> buffer_;
  std::size_t offset_ = 0;
};

/// Decodes a buffer that must hold whole frames only.
std::vector<Message> decode_all(std::span<const std::uint8_t> bytes);

}  // namespace egoexo::service
