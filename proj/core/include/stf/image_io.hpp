#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "stf/image.hpp"
#include "stf/texture.hpp"

namespace stf {

enum class ImageFormat { Png, Pfm, RawF32 };

/// Raised for missing or unreadable files and malformed contents.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Guesses the format from the extension: .png, .pfm, anything else is raw-f32.
ImageFormat format_from_extension(const std::filesystem::path& path);

/// Loads a texture. 8-bit PNG values map to v/255 unless `srgb_decode` is set,
/// in which case the sRGB transfer curve is inverted first.
///
/// Raw float files start with a 16-byte little-endian header
/// {"STFT", u32 width, u32 height, u32 channels} followed by the texels.
Texture load_texture(const std::filesystem::path& path, ImageFormat format,
                     AddressMode mode = AddressMode::Clamp, bool srgb_decode = false);

Texture load_texture(const std::filesystem::path& path, AddressMode mode = AddressMode::Clamp);

/// Writes an 8-bit PNG, values clamped to [0,1] without tone mapping.
void save_png(const std::filesystem::path& path, const Image& image);

/// Writes the raw-f32 format understood by load_texture.
void save_raw_f32(const std::filesystem::path& path, const Image& image);

}  // namespace stf
