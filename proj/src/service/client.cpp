#include "egoexo/service/client.hpp"

#include <openssl/evp.h>

#include <array>

namespace egoexo::service {

Client::Client(const std::string& host, std::uint16_t port, bool websocket, int timeout_ms)
    : socket_(connect_tcp(host, port, timeout_ms)), websocket_(websocket) {
  if (!websocket_) return;
  std::array<unsigned char, 16> nonce{};
  for (auto& b : nonce) b = static_cast<unsigned char>(rng_());
  std::array<unsigned char, 32> key_buf{};
  const int n = EVP_EncodeBlock(key_buf.data(), nonce.data(), static_cast<int>(nonce.size()));
  const std::string key(reinterpret_cast<const char*>(key_buf.data()), static_cast<std::size_t>(n));
  send_all(socket_, ws::handshake_request(host + ":" + std::to_string(port), "/", key));

  std::string head;
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
  std::array<std::uint8_t, 4096> buf{};
  while (true) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) throw NetworkError("websocket handshake timed out");
    const auto got = recv_some(socket_, buf, static_cast<int>(left.count()));
    if (!got) continue;
    if (*got == 0) throw NetworkError("server closed during the websocket handshake");
    head.append(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(*got));
    if (const auto used = ws::check_handshake_response(head, key)) {
      const std::string rest = head.substr(*used);
      ingest({reinterpret_cast<const std::uint8_t*>(rest.data()), rest.size()});
      return;
    }
  }
}

void Client::send(const Message& message) { send_bytes(encode(message)); }

void Client::send_bytes(std::span<const std::uint8_t> bytes) {
  if (websocket_)
    send_all(socket_, ws::encode_frame(ws::Opcode::binary, bytes, static_cast<std::uint32_t>(rng_())));
  else
    send_all(socket_, bytes);
}

void Client::ingest(std::span<const std::uint8_t> bytes) {
  if (!websocket_) {
    frames_.feed(bytes);
  } else {
    ws_.feed(bytes);
    while (auto f = ws_.next()) {
      if (f->opcode == ws::Opcode::binary) {
        frames_.feed(f->payload);
      } else if (f->opcode == ws::Opcode::ping) {
        send_all(socket_, ws::encode_frame(ws::Opcode::pong, f->payload, static_cast<std::uint32_t>(rng_())));
      } else if (f->opcode == ws::Opcode::close) {
        closed_ = true;
      }
    }
  }
  while (auto m = frames_.next()) ready_.push_back(std::move(*m));
}

void Client::pump(int timeout_ms) {
  if (closed_) return;
  std::array<std::uint8_t, 65536> buf{};
  const auto got = recv_some(socket_, buf, timeout_ms);
  if (!got) return;
  if (*got == 0) {
    closed_ = true;
    return;
  }
  ingest({buf.data(), *got});
}

std::optional<Message> Client::receive(std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (ready_.empty()) {
    if (closed_) throw NetworkError("connection closed by server");
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) return std::nullopt;
    pump(static_cast<int>(left.count()));
  }
  Message m = std::move(ready_.front());
  ready_.pop_front();
  return m;
}

std::optional<Message> Client::receive_type(MessageType type, std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (true) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    auto m = receive(std::max(left, std::chrono::milliseconds(0)));
    if (!m) return std::nullopt;
    if (m->type == type) return m;
  }
}

void Client::close() {
  if (websocket_ && socket_.valid() && !closed_) {
    try {
      const std::uint8_t normal[2] = {0x03, 0xE8};
      send_all(socket_, ws::encode_frame(ws::Opcode::close, normal, static_cast<std::uint32_t>(rng_())));
    } catch (const NetworkError&) {
    }
  }
  socket_.close();
  closed_ = true;
}

}  // namespace egoexo::service
