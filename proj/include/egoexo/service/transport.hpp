#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "egoexo/service/protocol.hpp"
#include "egoexo/service/websocket.hpp"

namespace egoexo::service {

enum class TransportKind { undecided, raw, websocket };

/// Server end of one connection. The first bytes decide the transport: a
/// stream starting with "GET " is a websocket upgrade, anything else is
/// raw framed messages. Inside a websocket, binary message payloads are
/// concatenated and parsed with the same framing as raw TCP.
class ServerTransport {
 public:
  struct Output {
    std::vector<Message> messages;
    /// Bytes to write back right away (handshake, pong, close echo).
    std::vector<std::uint8_t> reply;
    /// The peer closed the websocket.
    bool closed = false;
  };

  /// Throws ProtocolError on malformed framing at either layer.
  Output feed(std::span<const std::uint8_t> bytes);

  TransportKind kind() const noexcept { return kind_; }
  /// Raw TCP clients may stay silent; after an idle period with no bytes
  /// the server commits to raw framing so broadcasts can start.
  bool assume_raw() noexcept;
  /// True while an HTTP request is being read; errors then need an HTTP answer.
  bool in_handshake() const noexcept { return kind_ == TransportKind::undecided && is_http_; }

  /// Message bytes as they go on the wire for this transport.
  std::vector<std::uint8_t> wrap(std::span<const std::uint8_t> encoded) const;
  std::vector<std::uint8_t> close_frame() const;

 private:
  TransportKind kind_ = TransportKind::undecided;
  bool is_http_ = false;
  std::string head_;
  FrameDecoder frames_;
  ws::FrameDecoder ws_{true};

  void drain(Output& out);
  void feed_ws(std::span<const std::uint8_t> bytes, Output& out);
};

}  // namespace egoexo::service
