#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "egoexo/errors.hpp"

namespace egoexo {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Interleaved 8-bit image, row-major, no padding.
template <int Channels>
class Image {
 public:
  static constexpr int kChannels = Channels;

  Image() = default;
  Image(int width, int height, std::uint8_t fill = 0)
      : width_(width), height_(height) {
    if (width < 0 || height < 0) throw ValidationError("negative image size");
    data_.assign(static_cast<std::size_t>(width) * height * Channels, fill);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return data_.empty(); }
  std::size_t size_bytes() const noexcept { return data_.size(); }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  std::uint8_t* pixel(int x, int y) noexcept {
    return data_.data() + (static_cast<std::size_t>(y) * width_ + x) * Channels;
  }
  const std::uint8_t* pixel(int x, int y) const noexcept {
    return data_.data() + (static_cast<std::size_t>(y) * width_ + x) * Channels;
  }

  std::span<std::uint8_t> bytes() noexcept { return data_; }
  std::span<const std::uint8_t> bytes() const noexcept { return data_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

using RgbImage = Image<3>;
using RgbaImage = Image<4>;

inline Rgb get_rgb(const RgbImage& img, int x, int y) noexcept {
  const auto* p = img.pixel(x, y);
  return {p[0], p[1], p[2]};
}

inline void set_rgb(RgbImage& img, int x, int y, Rgb c) noexcept {
  auto* p = img.pixel(x, y);
  p[0] = c.r;
  p[1] = c.g;
  p[2] = c.b;
}

inline void fill(RgbImage& img, Rgb c) noexcept {
  auto bytes = img.bytes();
  for (std::size_t i = 0; i + 2 < bytes.size(); i += 3) {
    bytes[i] = c.r;
    bytes[i + 1] = c.g;
    bytes[i + 2] = c.b;
  }
}

}  // namespace egoexo
