#include "egoexo/imageio/codec.hpp"

#include <fstream>
#include <iterator>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "egoexo/errors.hpp"

namespace egoexo::imageio {
namespace {

// OpenCV works in BGR; we keep RGB everywhere else.
cv::Mat to_bgr(const RgbImage& image) {
  if (image.empty()) throw ValidationError("cannot encode an empty image");
  cv::Mat rgb(image.height(), image.width(), CV_8UC3,
              const_cast<std::uint8_t*>(image.bytes().data()));
  cv::Mat bgr;
  cv::cvtColor(rgb, bgr, cv::COLOR_RGB2BGR);
  return bgr;
}

RgbImage from_bgr(const cv::Mat& bgr) {
  RgbImage out(bgr.cols, bgr.rows);
  cv::Mat rgb(bgr.rows, bgr.cols, CV_8UC3, out.bytes().data());
  cv::cvtColor(bgr, rgb, cv::COLOR_BGR2RGB);
  return out;
}

std::vector<std::uint8_t> encode(const RgbImage& image, const char* ext, std::vector<int> params) {
  std::vector<std::uint8_t> buf;
  if (!cv::imencode(ext, to_bgr(image), buf, params)) throw Error(std::string("encoding failed: ") + ext);
  return buf;
}

}  // namespace

std::vector<std::uint8_t> encode_jpeg(const RgbImage& image, int quality) {
  if (quality < 1 || quality > 100) throw ValidationError("jpeg quality must be in 1..100");
  return encode(image, ".jpg", {cv::IMWRITE_JPEG_QUALITY, quality});
}

std::vector<std::uint8_t> encode_png(const RgbImage& image) {
  return encode(image, ".png", {cv::IMWRITE_PNG_COMPRESSION, 3});
}

RgbImage decode_image(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) throw ParseError("empty image buffer", 0);
  const cv::Mat raw(1, static_cast<int>(bytes.size()), CV_8UC1, const_cast<std::uint8_t*>(bytes.data()));
  const cv::Mat bgr = cv::imdecode(raw, cv::IMREAD_COLOR);
  if (bgr.empty()) throw ParseError("unrecognized image data", 0);
  return from_bgr(bgr);
}

RgbImage read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open image " + path.string());
  const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), {}};
  try {
    return decode_image(bytes);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

void write_png(const std::filesystem::path& path, const RgbImage& image) {
  const auto bytes = encode_png(image);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace egoexo::imageio
