#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "egoexo/image.hpp"

namespace egoexo::imageio {

/// quality in 1..100; throws ValidationError outside that range.
std::vector<std::uint8_t> encode_jpeg(const RgbImage& image, int quality = 85);
std::vector<std::uint8_t> encode_png(const RgbImage& image);

/// Decodes JPEG or PNG bytes to RGB. Throws ParseError on garbage.
RgbImage decode_image(std::span<const std::uint8_t> bytes);

RgbImage read_image(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const RgbImage& image);

}  // namespace egoexo::imageio
