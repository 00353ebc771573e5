#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "egoexo/errors.hpp"

namespace egoexo::service {

/// Socket-level failure (bind, connect, send on a dead peer).
class NetworkError : public Error {
 public:
  using Error::Error;
};

/// Owning POSIX socket descriptor.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  ~Socket();
  Socket(Socket&& other) noexcept : fd_(other.release()) {}
  Socket& operator=(Socket&& other) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;

  int fd() const noexcept { return fd_; }
  bool valid() const noexcept { return fd_ >= 0; }
  int release() noexcept;
  void close() noexcept;
  /// Wakes any thread blocked in send/recv on this socket.
  void shutdown() noexcept;

 private:
  int fd_ = -1;
};

/// Binds and listens; port 0 picks an ephemeral port.
Socket listen_tcp(const std::string& host, std::uint16_t port, int backlog = 16);
std::uint16_t local_port(const Socket& socket);

/// nullopt on timeout.
std::optional<Socket> accept_client(const Socket& listener, int timeout_ms);
Socket connect_tcp(const std::string& host, std::uint16_t port, int timeout_ms = 5000);

/// Blocks until every byte is written; throws NetworkError when the peer is gone.
void send_all(const Socket& socket, std::span<const std::uint8_t> bytes);
inline void send_all(const Socket& socket, std::string_view text) {
  send_all(socket, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

/// Bytes read (0 means orderly EOF), or nullopt on timeout. Throws
/// NetworkError on a socket error.
std::optional<std::size_t> recv_some(const Socket& socket, std::span<std::uint8_t> buffer, int timeout_ms);

}  // namespace egoexo::service
