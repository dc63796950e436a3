#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "doctest.h"
#include "stf/image_io.hpp"
#include "stf/texture.hpp"

namespace fs = std::filesystem;
using namespace stf;

namespace {

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "stf_unit_texture";
  fs::create_directories(dir);
  return dir / name;
}

void write_raw(const fs::path& p, std::uint32_t w, std::uint32_t h, std::uint32_t c, const std::vector<float>& v) {
  std::ofstream out(p, std::ios::binary);
  out.write("STFT", 4);
  for (std::uint32_t x : {w, h, c}) {
    const unsigned char b[4] = {static_cast<unsigned char>(x), static_cast<unsigned char>(x >> 8),
                                static_cast<unsigned char>(x >> 16), static_cast<unsigned char>(x >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
  }
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(float)));
}

}  // namespace

TEST_SUITE("texture_core") {
  TEST_CASE("constructor validates shape and contents") {
    CHECK_THROWS_AS(Texture(0, 1, 1, {}), std::invalid_argument);
    CHECK_THROWS_AS(Texture(1, 1, 5, std::vector<float>(5)), std::invalid_argument);
    CHECK_THROWS_AS(Texture(2, 2, 1, std::vector<float>(3)), std::invalid_argument);
    CHECK_THROWS_AS(Texture(1, 1, 1, {std::numeric_limits<float>::quiet_NaN()}), std::invalid_argument);
    CHECK_THROWS_AS(Texture(1, 1, 1, {std::numeric_limits<float>::infinity()}), std::invalid_argument);
    const Texture t(2, 1, 2, {1, 2, 3, 4});
    CHECK(t.at(1, 0)[0] == 3.0);
    CHECK(t.at(1, 0)[1] == 4.0);
  }

  TEST_CASE("fetch_texel applies the address mode") {
    const Texture clamp(2, 2, 1, {0, 1, 2, 3}, AddressMode::Clamp);
    const Texture wrap = clamp.with_address_mode(AddressMode::Wrap);
    CHECK(fetch_texel(clamp, {-1, 0})[0] == 0.0);
    CHECK(fetch_texel(clamp, {5, 7})[0] == 3.0);
    CHECK(fetch_texel(wrap, {2, 3})[0] == 2.0);  // (0, 1)
    CHECK(fetch_texel(wrap, {-1, -1})[0] == 3.0);
    for (int y = 0; y < 2; ++y) {
      for (int x = 0; x < 2; ++x) {
        CHECK(fetch_texel(clamp, {x, y})[0] == 2.0 * y + x);
        CHECK(fetch_texel(wrap, {x, y})[0] == 2.0 * y + x);
      }
    }
  }

  TEST_CASE("wrap addressing is periodic") {
    const Texture t(3, 2, 1, {0, 1, 2, 3, 4, 5}, AddressMode::Wrap);
    for (int y = -5; y < 5; ++y) {
      for (int x = -7; x < 7; ++x) {
        CHECK(fetch_texel(t, {x, y})[0] == fetch_texel(t, {x + 3, y + 2})[0]);
      }
    }
  }

  TEST_CASE("constant texture") {
    const Texture t = Texture::constant(3, 4, 2, 0.5f);
    CHECK(t.width() == 3);
    CHECK(t.height() == 4);
    CHECK(fetch_texel(t, {2, 3})[1] == 0.5);
  }

  TEST_CASE("raw f32 load") {
    const fs::path p = temp_file("one.f32");
    write_raw(p, 1, 1, 1, {7.0f});
    const Texture t = load_texture(p, ImageFormat::RawF32);
    CHECK(t.width() == 1);
    CHECK(t.height() == 1);
    CHECK(t.channels() == 1);
    CHECK(t.at(0, 0)[0] == 7.0);
  }

  TEST_CASE("raw f32 rejects bad headers") {
    const fs::path p = temp_file("bad.f32");
    write_raw(p, 1, 1, 5, std::vector<float>(5, 1.0f));
    CHECK_THROWS(load_texture(p, ImageFormat::RawF32));
    write_raw(p, 0, 1, 1, {});
    CHECK_THROWS(load_texture(p, ImageFormat::RawF32));
    write_raw(p, 2, 2, 1, {1.0f});
    CHECK_THROWS(load_texture(p, ImageFormat::RawF32));
  }

  TEST_CASE("raw f32 round trip through save_raw_f32") {
    Image img(3, 2, 2);
    for (std::size_t i = 0; i < img.data.size(); ++i) img.data[i] = 0.25f * static_cast<float>(i) - 1.0f;
    const fs::path p = temp_file("rt.f32");
    save_raw_f32(p, img);
    const Texture t = load_texture(p);
    CHECK(t.width() == 3);
    CHECK(t.channels() == 2);
    CHECK(std::vector<float>(t.data().begin(), t.data().end()) == img.data);
  }

  TEST_CASE("8-bit png maps to [0, 1]") {
    Image img(2, 2, 1);
    img.data = {0.0f, 85.0f / 255, 170.0f / 255, 1.0f};
    const fs::path p = temp_file("gray.png");
    save_png(p, img);
    const Texture t = load_texture(p);
    const double expected[4] = {0.0, 1.0 / 3, 2.0 / 3, 1.0};
    REQUIRE(t.channels() == 1);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(t.data()[i] - expected[i]) <= 1.0 / 255);
  }

  TEST_CASE("png keeps channel count and clamps on write") {
    Image img(2, 1, 3);
    img.data = {-1.0f, 0.5f, 2.0f, 1.0f, 0.0f, 0.25f};
    const fs::path p = temp_file("rgb.png");
    save_png(p, img);
    const Texture t = load_texture(p);
    REQUIRE(t.channels() == 3);
    CHECK(t.at(0, 0)[0] == 0.0);
    CHECK(t.at(0, 0)[2] == 1.0);
    CHECK(std::abs(t.at(0, 0)[1] - 0.5) <= 1.0 / 255);
  }

  TEST_CASE("pfm rows are stored bottom to top") {
    const fs::path p = temp_file("img.pfm");
    {
      std::ofstream out(p, std::ios::binary);
      out << "Pf\n2 2\n-1.0\n";
      // bottom row first: (0,1), (1,1), then top row (0,0), (1,0)
      const float v[4] = {3.0f, 4.0f, 1.0f, 2.0f};
      out.write(reinterpret_cast<const char*>(v), sizeof v);
    }
    const Texture t = load_texture(p);
    CHECK(t.at(0, 0)[0] == 1.0);
    CHECK(t.at(1, 0)[0] == 2.0);
    CHECK(t.at(0, 1)[0] == 3.0);
    CHECK(t.at(1, 1)[0] == 4.0);
  }

  TEST_CASE("missing file reports not found") {
    try {
      load_texture(temp_file("does_not_exist.png"));
      FAIL("expected an error");
    } catch (const IoError& e) {
      CHECK(std::string(e.what()).find("not found") != std::string::npos);
    }
  }

  TEST_CASE("format from extension") {
    CHECK(format_from_extension("a.png") == ImageFormat::Png);
    CHECK(format_from_extension("a.PNG") == ImageFormat::Png);
    CHECK(format_from_extension("a.pfm") == ImageFormat::Pfm);
    CHECK(format_from_extension("a.bin") == ImageFormat::RawF32);
  }
}
