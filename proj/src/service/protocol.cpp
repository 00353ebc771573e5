#include "egoexo/service/protocol.hpp"

#include <cstring>

#include "egoexo/errors.hpp"

namespace egoexo::service {
namespace {

void put_u32be(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::uint32_t get_u32be(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) | p[3];
}

}  // namespace

bool is_registered(std::uint8_t type) noexcept { return type >= 0x01 && type <= 0x06; }

std::string_view type_name(MessageType type) noexcept {
  switch (type) {
    case MessageType::ego_frame: return "EGO_FRAME";
    case MessageType::exo_request: return "EXO_REQUEST";
    case MessageType::exo_response: return "EXO_RESPONSE";
    case MessageType::map_snapshot: return "MAP_SNAPSHOT";
    case MessageType::status: return "STATUS";
    case MessageType::config: return "CONFIG";
  }
  return "UNKNOWN";
}

void encode_into(std::vector<std::uint8_t>& out, const Message& m) {
  if (!m.header.is_object()) throw ProtocolError("message header must be a JSON object");
  if (!is_registered(static_cast<std::uint8_t>(m.type))) throw ProtocolError("unregistered message type");
  const std::string header = m.header.dump();
  const std::size_t length = 1 + 4 + header.size() + m.payload.size();
  if (length > kMaxFrameLength) throw ProtocolError("message exceeds the maximum frame length");
  out.reserve(out.size() + 4 + length);
  put_u32be(out, static_cast<std::uint32_t>(length));
  out.push_back(static_cast<std::uint8_t>(m.type));
  put_u32be(out, static_cast<std::uint32_t>(header.size()));
  out.insert(out.end(), header.begin(), header.end());
  out.insert(out.end(), m.payload.begin(), m.payload.end());
}

std::vector<std::uint8_t> encode(const Message& m) {
  std::vector<std::uint8_t> out;
  encode_into(out, m);
  return out;
}

void FrameDecoder::feed(std::span<const std::uint8_t> bytes) {
  // Compact once the consumed prefix dominates.
  if (offset_ > 0 && offset_ * 2 >= buffer_.size()) {
    buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(offset_));
    offset_ = 0;
  }
  buffer_.insert(buffer_.end(), bytes.begin(), bytes.end());
}

std::optional<Message> FrameDecoder::next() {
  const std::size_t avail = buffer_.size() - offset_;
  if (avail < 4) return std::nullopt;
  const std::uint8_t* p = buffer_.data() + offset_;
  const std::uint32_t length = get_u32be(p);
  if (length < 5) throw ProtocolError("frame length " + std::to_string(length) + " is below the 5-byte minimum");
  if (length > kMaxFrameLength) throw ProtocolError("frame length " + std::to_string(length) + " exceeds the limit");
  // Validate the type as soon as it arrives so garbage fails fast.
  if (avail >= 5 && !is_registered(p[4])) throw ProtocolError("unknown message type " + std::to_string(p[4]));
  if (avail >= 9) {
    const std::uint32_t header_len = get_u32be(p + 5);
    if (header_len > length - 5)
      throw ProtocolError("header length " + std::to_string(header_len) + " overruns frame length " +
                          std::to_string(length));
  }
  if (avail < 4 + static_cast<std::size_t>(length)) return std::nullopt;

  const std::uint32_t header_len = get_u32be(p + 5);
  Message m;
  m.type = static_cast<MessageType>(p[4]);
  const char* h = reinterpret_cast<const char*>(p + 9);
  try {
    m.header = nlohmann::json::parse(h, h + header_len);
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("header is not valid JSON: ") + e.what());
  }
  if (!m.header.is_object()) throw ProtocolError("header is not a JSON object");
  m.payload.assign(p + 9 + header_len, p + 4 + length);
  offset_ += 4 + static_cast<std::size_t>(length);
  return m;
}

std::vector<Message> decode_all(std::span<const std::uint8_t> bytes) {
  FrameDecoder d;
  d.feed(bytes);
  std::vector<Message> out;
  while (auto m = d.next()) out.push_back(std::move(*m));
  if (d.pending() != 0) throw ProtocolError("trailing partial frame");
  return out;
}

}  // namespace egoexo::service
