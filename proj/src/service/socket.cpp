#include "egoexo/service/socket.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace egoexo::service {
namespace {

std::string errno_text(const std::string& what) { return what + ": " + std::strerror(errno); }

addrinfo* resolve(const std::string& host, std::uint16_t port, bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  const int rc = getaddrinfo(host.empty() ? nullptr : host.c_str(), service.c_str(), &hints, &res);
  if (rc != 0) throw NetworkError("cannot resolve '" + host + "': " + gai_strerror(rc));
  return res;
}

bool wait_for(int fd, short events, int timeout_ms) {
  pollfd p{fd, events, 0};
  while (true) {
    const int rc = ::poll(&p, 1, timeout_ms);
    if (rc > 0) return true;
    if (rc == 0) return false;
    if (errno != EINTR) throw NetworkError(errno_text("poll"));
  }
}

void set_nodelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

}  // namespace

Socket::~Socket() { close(); }

Socket& Socket::operator=(Socket&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = other.release();
  }
  return *this;
}

int Socket::release() noexcept {
  const int fd = fd_;
  fd_ = -1;
  return fd;
}

void Socket::close() noexcept {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
}

void Socket::shutdown() noexcept {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

Socket listen_tcp(const std::string& host, std::uint16_t port, int backlog) {
  addrinfo* res = resolve(host, port, true);
  std::string last = "no usable address";
  for (addrinfo* a = res; a; a = a->ai_next) {
    Socket s(::socket(a->ai_family, a->ai_socktype, a->ai_protocol));
    if (!s.valid()) continue;
    int one = 1;
    ::setsockopt(s.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(s.fd(), a->ai_addr, a->ai_addrlen) == 0 && ::listen(s.fd(), backlog) == 0) {
      freeaddrinfo(res);
      return s;
    }
    last = errno_text("bind " + host + ":" + std::to_string(port));
  }
  freeaddrinfo(res);
  throw NetworkError(last);
}

std::uint16_t local_port(const Socket& socket) {
  sockaddr_storage addr{};
  socklen_t len = sizeof addr;
  if (::getsockname(socket.fd(), reinterpret_cast<sockaddr*>(&addr), &len) != 0)
    throw NetworkError(errno_text("getsockname"));
  if (addr.ss_family == AF_INET6) return ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port);
  return ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
}

std::optional<Socket> accept_client(const Socket& listener, int timeout_ms) {
  if (!wait_for(listener.fd(), POLLIN, timeout_ms)) return std::nullopt;
  const int fd = ::accept(listener.fd(), nullptr, nullptr);
  if (fd < 0) {
    if (errno == EINTR || errno == EAGAIN || errno == ECONNABORTED) return std::nullopt;
    throw NetworkError(errno_text("accept"));
  }
  set_nodelay(fd);
  return Socket(fd);
}

Socket connect_tcp(const std::string& host, std::uint16_t port, int timeout_ms) {
  addrinfo* res = resolve(host, port, false);
  std::string last = "no usable address";
  for (addrinfo* a = res; a; a = a->ai_next) {
    Socket s(::socket(a->ai_family, a->ai_socktype, a->ai_protocol));
    if (!s.valid()) continue;
    // Loopback connects complete or fail immediately; the timeout only
    // guards remote hosts.
    struct timeval tv{timeout_ms / 1000, (timeout_ms % 1000) * 1000};
    ::setsockopt(s.fd(), SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof tv);
    if (::connect(s.fd(), a->ai_addr, a->ai_addrlen) == 0) {
      struct timeval none{0, 0};
      ::setsockopt(s.fd(), SOL_SOCKET, SO_SNDTIMEO, &none, sizeof none);
      set_nodelay(s.fd());
      freeaddrinfo(res);
      return s;
    }
    last = errno_text("connect " + host + ":" + std::to_string(port));
  }
  freeaddrinfo(res);
  throw NetworkError(last);
}

void send_all(const Socket& socket, std::span<const std::uint8_t> bytes) {
  std::size_t sent = 0;
  while (sent < bytes.size()) {
    const ssize_t n = ::send(socket.fd(), bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw NetworkError(errno_text("send"));
    }
    sent += static_cast<std::size_t>(n);
  }
}

std::optional<std::size_t> recv_some(const Socket& socket, std::span<std::uint8_t> buffer, int timeout_ms) {
  if (!wait_for(socket.fd(), POLLIN, timeout_ms)) return std::nullopt;
  while (true) {
    const ssize_t n = ::recv(socket.fd(), buffer.data(), buffer.size(), 0);
    if (n >= 0) return static_cast<std::size_t>(n);
    if (errno == EINTR) continue;
    if (errno == ECONNRESET) return 0;
    throw NetworkError(errno_text("recv"));
  }
}

}  // namespace egoexo::service
