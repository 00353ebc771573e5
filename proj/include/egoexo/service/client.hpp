#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "egoexo/service/protocol.hpp"
#include "egoexo/service/socket.hpp"
#include "egoexo/service/websocket.hpp"

namespace egoexo::service {

/// Blocking protocol client over raw TCP or a websocket upgrade. Used by
/// the tests, the CLI probe and the bench tool; the browser console is the
/// production consumer.
class Client {
 public:
  Client(const std::string& host, std::uint16_t port, bool websocket = false, int timeout_ms = 5000);

  void send(const Message& message);
  /// Raw protocol bytes, wrapped in one websocket frame when upgraded.
  void send_bytes(std::span<const std::uint8_t> bytes);

  /// Next message, or nullopt on timeout. Throws NetworkError once the
  /// server has closed and nothing is left to read.
  std::optional<Message> receive(std::chrono::milliseconds timeout);
  /// Skips messages of other types until one of `type` arrives.
  std::optional<Message> receive_type(MessageType type, std::chrono::milliseconds timeout);

  bool closed() const noexcept { return closed_; }
  bool websocket() const noexcept { return websocket_; }
  void close();

 private:
  Socket socket_;
  bool websocket_;
  bool closed_ = false;
  FrameDecoder frames_;
  ws::FrameDecoder ws_{false};
  std::deque<Message> ready_;
  std::mt19937 rng_{0x5eed};

  void pump(int timeout_ms);
  void ingest(std::span<const std::uint8_t> bytes);
};

}  // namespace egoexo::service
