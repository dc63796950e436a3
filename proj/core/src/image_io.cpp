#include "stf/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace stf {

namespace fs = std::filesystem;

namespace {

void require_exists(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("not found: " + path.string());
}

std::uint32_t read_u32_le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void write_u32_le(std::ostream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

float float_from_le(const unsigned char* p) {
  return std::bit_cast<float>(read_u32_le(p));
}

float srgb_to_linear(float v) {
  return v <= 0.04045f ? v / 12.92f : std::pow((v + 0.055f) / 1.055f, 2.4f);
}

Texture load_png(const fs::path& path, AddressMode mode, bool srgb_decode) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw IoError("png: " + path.string() + ": " + image.message);
  }
  // Keep the file's channel layout, force 8-bit samples.
  image.format &= ~static_cast<png_uint_32>(PNG_FORMAT_FLAG_LINEAR | PNG_FORMAT_FLAG_COLORMAP);
  const int channels = static_cast<int>(PNG_IMAGE_SAMPLE_CHANNELS(image.format));
  std::vector<unsigned char> bytes(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, bytes.data(), 0, nullptr)) {
    png_image_free(&image);
    throw IoError("png: " + path.string() + ": " + image.message);
  }
  std::vector<float> data(bytes.size());
  std::transform(bytes.begin(), bytes.end(), data.begin(), [&](unsigned char b) {
    const float v = static_cast<float>(b) / 255.0f;
    return srgb_decode ? srgb_to_linear(v) : v;
  });
  return Texture(static_cast<int>(image.width), static_cast<int>(image.height), channels,
                 std::move(data), mode);
}

Texture load_pfm(const fs::path& path, AddressMode mode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  std::string magic;
  int width = 0;
  int height = 0;
  double scale = 0.0;
  in >> magic >> width >> height >> scale;
  in.get();  // single whitespace before the payload
  if (!in || (magic != "PF" && magic != "Pf")) throw IoError("pfm: bad header in " + path.string());
  if (width < 1 || height < 1) throw IoError("pfm: zero-sized image");
  const int channels = magic == "PF" ? 3 : 1;
  const bool little = scale < 0.0;
  const std::size_t count = static_cast<std::size_t>(width) * height * channels;
  std::vector<unsigned char> raw(count * 4);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size()) throw IoError("pfm: truncated payload");
  std::vector<float> data(count);
  for (int y = 0; y < height; ++y) {
    // PFM stores rows bottom-to-top.
    const std::size_t src_row = static_cast<std::size_t>(height - 1 - y) * width * channels;
    for (std::size_t i = 0; i < static_cast<std::size_t>(width) * channels; ++i) {
      const unsigned char* p = raw.data() + (src_row + i) * 4;
      std::uint32_t bits = little ? read_u32_le(p)
                                  : (static_cast<std::uint32_t>(p[0]) << 24) |
                                        (static_cast<std::uint32_t>(p[1]) << 16) |
                                        (static_cast<std::uint32_t>(p[2]) << 8) | p[3];
      data[static_cast<std::size_t>(y) * width * channels + i] = std::bit_cast<float>(bits);
    }
  }
  return Texture(width, height, channels, std::move(data), mode);
}

Texture load_raw(const fs::path& path, AddressMode mode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  unsigned char header[16];
  in.read(reinterpret_cast<char*>(header), 16);
  if (in.gcount() != 16 || std::memcmp(header, "STFT", 4) != 0) {
    throw IoError("raw-f32: missing STFT header in " + path.string());
  }
  const auto width = read_u32_le(header + 4);
  const auto height = read_u32_le(header + 8);
  const auto channels = read_u32_le(header + 12);
  if (width == 0 || height == 0) throw IoError("raw-f32: zero-sized image");
  if (channels == 0 || channels > kMaxChannels) {
    throw IoError("raw-f32: unsupported channel count " + std::to_string(channels));
  }
  const std::size_t count = static_cast<std::size_t>(width) * height * channels;
  std::vector<unsigned char> raw(count * 4);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size()) throw IoError("raw-f32: truncated payload");
  std::vector<float> data(count);
  for (std::size_t i = 0; i < count; ++i) data[i] = float_from_le(raw.data() + i * 4);
  return Texture(static_cast<int>(width), static_cast<int>(height), static_cast<int>(channels),
                 std::move(data), mode);
}

}  // namespace

ImageFormat format_from_extension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".png") return ImageFormat::Png;
  if (ext == ".pfm") return ImageFormat::Pfm;
  return ImageFormat::RawF32;
}

Texture load_texture(const fs::path& path, ImageFormat format, AddressMode mode, bool srgb_decode) {
  require_exists(path);
  switch (format) {
    case ImageFormat::Png: return load_png(path, mode, srgb_decode);
    case ImageFormat::Pfm: return load_pfm(path, mode);
    case ImageFormat::RawF32: return load_raw(path, mode);
  }
  throw IoError("unknown image format");
}

Texture load_texture(const fs::path& path, AddressMode mode) {
  return load_texture(path, format_from_extension(path), mode);
}

void save_png(const fs::path& path, const Image& img) {
  if (img.channels < 1 || img.channels > kMaxChannels) throw IoError("png: bad channel count");
  std::vector<unsigned char> bytes(img.data.size());
  std::transform(img.data.begin(), img.data.end(), bytes.begin(), [](float v) {
    const float c = std::isfinite(v) ? std::clamp(v, 0.0f, 1.0f) : 0.0f;
    return static_cast<unsigned char>(std::lround(c * 255.0f));
  });
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width);
  image.height = static_cast<png_uint_32>(img.height);
  static constexpr png_uint_32 kFormats[] = {PNG_FORMAT_GRAY, PNG_FORMAT_GA, PNG_FORMAT_RGB,
                                             PNG_FORMAT_RGBA};
  image.format = kFormats[img.channels - 1];
  if (!png_image_write_to_file(&image, path.c_str(), 0, bytes.data(), 0, nullptr)) {
    throw IoError("png: cannot write " + path.string() + ": " + image.message);
  }
}

void save_raw_f32(const fs::path& path, const Image& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write: " + path.string());
  out.write("STFT", 4);
  write_u32_le(out, static_cast<std::uint32_t>(img.width));
  write_u32_le(out, static_cast<std::uint32_t>(img.height));
  write_u32_le(out, static_cast<std::uint32_t>(img.channels));
  for (float v : img.data) write_u32_le(out, std::bit_cast<std::uint32_t>(v));
}

}  // namespace stf
