#include "egoexo/service/websocket.hpp"

#include <openssl/evp.h>
#include <openssl/sha.h>

#include <algorithm>
#include <cctype>

#include "egoexo/errors.hpp"
#include "egoexo/service/protocol.hpp"

namespace egoexo::service::ws {
namespace {

constexpr std::string_view kGuid = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11";

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return std::string(s);
}

struct HttpHead {
  std::string start_line;
  std::vector<std::pair<std::string, std::string>> headers;  // lowercased names
  std::size_t bytes = 0;
};

std::optional<HttpHead> split_head(std::string_view data) {
  const auto end = data.find("\r\n\r\n");
  if (end == std::string_view::npos) {
    if (data.size() > 16384) throw ProtocolError("HTTP header block too large");
    return std::nullopt;
  }
  HttpHead h;
  h.bytes = end + 4;
  std::string_view block = data.substr(0, end);
  bool first = true;
  while (!block.empty()) {
    const auto nl = block.find("\r\n");
    const std::string_view line = block.substr(0, nl);
    block = nl == std::string_view::npos ? std::string_view{} : block.substr(nl + 2);
    if (first) {
      h.start_line = std::string(line);
      first = false;
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ProtocolError("malformed HTTP header line");
    h.headers.emplace_back(lower(trim(line.substr(0, colon))), trim(line.substr(colon + 1)));
  }
  return h;
}

const std::string* header(const HttpHead& h, std::string_view name) {
  for (const auto& [k, v] : h.headers)
    if (k == name) return &v;
  return nullptr;
}

bool has_token(const std::string* value, std::string_view token) {
  if (!value) return false;
  const std::string v = lower(*value);
  std::size_t start = 0;
  while (start <= v.size()) {
    const auto comma = v.find(',', start);
    if (trim(std::string_view(v).substr(start, comma - start)) == token) return true;
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return false;
}

}  // namespace

std::string accept_key(std::string_view client_key) {
  const std::string joined = std::string(client_key) + std::string(kGuid);
  unsigned char digest[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(joined.data()), joined.size(), digest);
  unsigned char out[4 * ((SHA_DIGEST_LENGTH + 2) / 3) + 1];
  const int n = EVP_EncodeBlock(out, digest, SHA_DIGEST_LENGTH);
  return std::string(reinterpret_cast<const char*>(out), static_cast<std::size_t>(n));
}

std::optional<HandshakeRequest> parse_handshake(std::string_view data) {
  const auto head = split_head(data);
  if (!head) return std::nullopt;
  const auto& line = head->start_line;
  if (line.rfind("GET ", 0) != 0) throw ProtocolError("websocket upgrade must be a GET request");
  const auto sp = line.find(' ', 4);
  if (sp == std::string::npos || line.compare(sp + 1, 5, "HTTP/") != 0) throw ProtocolError("malformed request line");
  if (!has_token(header(*head, "upgrade"), "websocket")) throw ProtocolError("missing Upgrade: websocket");
  if (!has_token(header(*head, "connection"), "upgrade")) throw ProtocolError("missing Connection: Upgrade");
  const std::string* version = header(*head, "sec-websocket-version");
  if (!version || *version != "13") throw ProtocolError("unsupported websocket version");
  const std::string* key = header(*head, "sec-websocket-key");
  if (!key || key->empty()) throw ProtocolError("missing Sec-WebSocket-Key");
  return HandshakeRequest{line.substr(4, sp - 4), *key, head->bytes};
}

std::string handshake_response(std::string_view client_key) {
  return "HTTP/1.1 101 Switching Protocols\r\n"
         "Upgrade: websocket\r\n"
         "Connection: Upgrade\r\n"
         "Sec-WebSocket-Accept: " +
         accept_key(client_key) + "\r\n\r\n";
}

std::string handshake_request(std::string_view host, std::string_view path, std::string_view key) {
  return "GET " + std::string(path) + " HTTP/1.1\r\nHost: " + std::string(host) +
         "\r\nUpgrade: websocket\r\nConnection: Upgrade\r\nSec-WebSocket-Key: " + std::string(key) +
         "\r\nSec-WebSocket-Version: 13\r\n\r\n";
}

std::optional<std::size_t> check_handshake_response(std::string_view data, std::string_view key) {
  const auto head = split_head(data);
  if (!head) return std::nullopt;
  if (head->start_line.rfind("HTTP/1.1 101", 0) != 0) throw ProtocolError("server refused the upgrade");
  const std::string* accept = header(*head, "sec-websocket-accept");
  if (!accept || *accept != accept_key(key)) throw ProtocolError("bad Sec-WebSocket-Accept");
  return head->bytes;
}

std::vector<std::uint8_t> encode_frame(Opcode op, std::span<const std::uint8_t> payload,
                                       std::optional<std::uint32_t> mask) {
  std::vector<std::uint8_t> out;
  out.reserve(payload.size() + 14);
  out.push_back(static_cast<std::uint8_t>(0x80 | static_cast<std::uint8_t>(op)));
  const std::uint8_t mbit = mask ? 0x80 : 0x00;
  const std::uint64_t n = payload.size();
  if (n < 126) {
    out.push_back(static_cast<std::uint8_t>(mbit | n));
  } else if (n <= 0xFFFF) {
    out.push_back(mbit | 126);
    out.push_back(static_cast<std::uint8_t>(n >> 8));
    out.push_back(static_cast<std::uint8_t>(n));
  } else {
    out.push_back(mbit | 127);
    for (int i = 7; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(n >> (8 * i)));
  }
  if (mask) {
    std::uint8_t key[4] = {static_cast<std::uint8_t>(*mask >> 24), static_cast<std::uint8_t>(*mask >> 16),
                           static_cast<std::uint8_t>(*mask >> 8), static_cast<std::uint8_t>(*mask)};
    out.insert(out.end(), key, key + 4);
    for (std::size_t i = 0; i < payload.size(); ++i) out.push_back(payload[i] ^ key[i & 3]);
  } else {
    out.insert(out.end(), payload.begin(), payload.end());
  }
  return out;
}

void FrameDecoder::feed(std::span<const std::uint8_t> bytes) {
  if (offset_ > 0 && offset_ * 2 >= buffer_.size()) {
    buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(offset_));
    offset_ = 0;
  }
  buffer_.insert(buffer_.end(), bytes.begin(), bytes.end());
}

std::optional<Frame> FrameDecoder::next() {
  while (true) {
    const std::size_t avail = buffer_.size() - offset_;
    if (avail < 2) return std::nullopt;
    const std::uint8_t* p = buffer_.data() + offset_;
    const bool fin = p[0] & 0x80;
    if (p[0] & 0x70) throw ProtocolError("websocket reserved bits set");
    const auto op = static_cast<Opcode>(p[0] & 0x0F);
    const bool masked = p[1] & 0x80;
    if (masked != expect_masked_) throw ProtocolError(expect_masked_ ? "client frame not masked" : "server frame masked");
    std::uint64_t len = p[1] & 0x7F;
    std::size_t pos = 2;
    if (len == 126) {
      if (avail < 4) return std::nullopt;
      len = (std::uint64_t{p[2]} << 8) | p[3];
      pos = 4;
    } else if (len == 127) {
      if (avail < 10) return std::nullopt;
      len = 0;
      for (int i = 0; i < 8; ++i) len = (len << 8) | p[2 + i];
      pos = 10;
    }
    if (len > kMaxFrameLength + 16) throw ProtocolError("websocket frame too large");
    const bool control = static_cast<std::uint8_t>(op) & 0x08;
    switch (op) {
      case Opcode::continuation:
      case Opcode::text:
      case Opcode::binary:
      case Opcode::close:
      case Opcode::ping:
      case Opcode::pong: break;
      default: throw ProtocolError("unknown websocket opcode");
    }
    if (control && (!fin || len > 125)) throw ProtocolError("malformed websocket control frame");
    std::uint8_t key[4] = {0, 0, 0, 0};
    if (masked) {
      if (avail < pos + 4) return std::nullopt;
      std::copy(p + pos, p + pos + 4, key);
      pos += 4;
    }
    if (avail < pos + len) return std::nullopt;
    std::vector<std::uint8_t> payload(p + pos, p + pos + len);
    if (masked)
      for (std::size_t i = 0; i < payload.size(); ++i) payload[i] ^= key[i & 3];
    offset_ += pos + static_cast<std::size_t>(len);

    if (control) return Frame{op, std::move(payload)};
    if (op == Opcode::continuation) {
      if (!partial_) throw ProtocolError("continuation without a started message");
      partial_->payload.insert(partial_->payload.end(), payload.begin(), payload.end());
      if (partial_->payload.size() > kMaxFrameLength + 16) throw ProtocolError("websocket message too large");
    } else {
      if (partial_) throw ProtocolError("new data frame inside a fragmented message");
      partial_ = Frame{op, std::move(payload)};
    }
    if (fin) {
      Frame done = std::move(*partial_);
      partial_.reset();
      return done;
    }
  }
}

}  // namespace egoexo::service::ws
