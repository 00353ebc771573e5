#include "egoexo/service/transport.hpp"

#include <algorithm>

#include "egoexo/errors.hpp"

namespace egoexo::service {

void ServerTransport::drain(Output& out) {
  while (auto m = frames_.next()) out.messages.push_back(std::move(*m));
}

void ServerTransport::feed_ws(std::span<const std::uint8_t> bytes, Output& out) {
  ws_.feed(bytes);
  while (auto frame = ws_.next()) {
    switch (frame->opcode) {
      case ws::Opcode::binary:
        frames_.feed(frame->payload);
        drain(out);
        break;
      case ws::Opcode::ping: {
        const auto pong = ws::encode_frame(ws::Opcode::pong, frame->payload);
        out.reply.insert(out.reply.end(), pong.begin(), pong.end());
        break;
      }
      case ws::Opcode::pong: break;
      case ws::Opcode::close: {
        const auto echo = ws::encode_frame(ws::Opcode::close, frame->payload);
        out.reply.insert(out.reply.end(), echo.begin(), echo.end());
        out.closed = true;
        return;
      }
      default: throw ProtocolError("text websocket messages are not part of the protocol");
    }
  }
}

ServerTransport::Output ServerTransport::feed(std::span<const std::uint8_t> bytes) {
  Output out;
  if (kind_ == TransportKind::raw) {
    frames_.feed(bytes);
    drain(out);
    return out;
  }
  if (kind_ == TransportKind::websocket) {
    feed_ws(bytes, out);
    return out;
  }

  head_.append(bytes.begin(), bytes.end());
  constexpr std::string_view kGet = "GET ";
  const std::size_t probe = std::min(head_.size(), kGet.size());
  if (head_.compare(0, probe, kGet.substr(0, probe)) != 0) {
    kind_ = TransportKind::raw;
    const std::string pending = std::move(head_);
    head_.clear();
    frames_.feed({reinterpret_cast<const std::uint8_t*>(pending.data()), pending.size()});
    drain(out);
    return out;
  }
  if (head_.size() < kGet.size()) return out;
  is_http_ = true;
  const auto request = ws::parse_handshake(head_);
  if (!request) return out;
  kind_ = TransportKind::websocket;
  const std::string response = ws::handshake_response(request->key);
  out.reply.assign(response.begin(), response.end());
  const std::string rest = head_.substr(request->header_bytes);
  head_.clear();
  if (!rest.empty()) feed_ws({reinterpret_cast<const std::uint8_t*>(rest.data()), rest.size()}, out);
  return out;
}

bool ServerTransport::assume_raw() noexcept {
  if (kind_ != TransportKind::undecided || !head_.empty()) return false;
  kind_ = TransportKind::raw;
  return true;
}

std::vector<std::uint8_t> ServerTransport::wrap(std::span<const std::uint8_t> encoded) const {
  if (kind_ == TransportKind::websocket) return ws::encode_frame(ws::Opcode::binary, encoded);
  return {encoded.begin(), encoded.end()};
}

std::vector<std::uint8_t> ServerTransport::close_frame() const {
  if (kind_ != TransportKind::websocket) return {};
  const std::uint8_t normal[2] = {0x03, 0xE8};
  return ws::encode_frame(ws::Opcode::close, normal);
}

}  // namespace egoexo::service
