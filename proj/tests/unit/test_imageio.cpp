#include <doctest.h>

#include "egoexo/errors.hpp"
#include "egoexo/imageio/codec.hpp"
#include "support/temp_dir.hpp"

using namespace egoexo;

namespace {

RgbImage gradient(int w, int h) {
  RgbImage img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      set_rgb(img, x, y, {static_cast<std::uint8_t>(x * 255 / w), static_cast<std::uint8_t>(y * 255 / h), 77});
  return img;
}

}  // namespace

TEST_CASE("PNG is lossless and keeps channel order") {
  RgbImage img = gradient(33, 17);
  set_rgb(img, 0, 0, {255, 0, 0});
  const auto back = imageio::decode_image(imageio::encode_png(img));
  CHECK(back == img);
  CHECK(get_rgb(back, 0, 0) == Rgb{255, 0, 0});

  egoexo::testing::TempDir dir;
  imageio::write_png(dir.path() / "a.png", img);
  CHECK(imageio::read_image(dir.path() / "a.png") == img);
}

TEST_CASE("JPEG decodes close to the source") {
  const RgbImage img = gradient(64, 48);
  const auto bytes = imageio::encode_jpeg(img, 95);
  CHECK(bytes.size() > 2);
  CHECK(bytes[0] == 0xFF);
  CHECK(bytes[1] == 0xD8);
  const auto back = imageio::decode_image(bytes);
  REQUIRE(back.width() == 64);
  REQUIRE(back.height() == 48);
  double err = 0;
  for (std::size_t i = 0; i < img.size_bytes(); ++i) err += std::abs(int(img.bytes()[i]) - int(back.bytes()[i]));
  CHECK(err / static_cast<double>(img.size_bytes()) < 3.0);
  CHECK(imageio::encode_jpeg(img, 10).size() < bytes.size());
}

TEST_CASE("codec errors") {
  const RgbImage img = gradient(4, 4);
  CHECK_THROWS_AS(imageio::encode_jpeg(img, 0), ValidationError);
  CHECK_THROWS_AS(imageio::encode_jpeg(img, 101), ValidationError);
  CHECK_THROWS_AS(imageio::encode_png(RgbImage{}), ValidationError);
  const std::vector<std::uint8_t> junk{1, 2, 3, 4, 5};
  CHECK_THROWS_AS(imageio::decode_image(junk), ParseError);
  CHECK_THROWS_AS(imageio::decode_image({}), ParseError);
  CHECK_THROWS_AS(imageio::read_image("/nonexistent/x.png"), Error);
}
