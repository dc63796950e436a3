#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stf/types.hpp"

namespace stf {

enum class AddressMode { Clamp, Wrap };

/// Multi-channel 2D texel grid, row-major, linear-space float data.
///
/// Immutable after construction. The constructor rejects empty sizes, channel
/// counts outside 1..4, mismatched data length, and non-finite values.
class Texture {
 public:
  Texture(int width, int height, int channels, std::vector<float> data,
          AddressMode mode = AddressMode::Clamp);

  /// Single-valued texture of the given size.
  static Texture constant(int width, int height, int channels, float value,
                          AddressMode mode = AddressMode::Clamp);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  AddressMode address_mode() const { return mode_; }
  std::span<const float> data() const { return data_; }

  /// Texture with identical contents but a different address mode.
  Texture with_address_mode(AddressMode mode) const;

  /// Value at in-range coordinates; no addressing applied.
  TexelValue at(int x, int y) const;

 private:
  int width_;
  int height_;
  int channels_;
  std::vector<float> data_;
  AddressMode mode_;
};

/// Texel lookup with the texture's address mode applied (clamp-to-edge or
/// toroidal wrap). Out-of-range coordinates are legal.
TexelValue fetch_texel(const Texture& tex, Int2 coords);

}  // namespace stf
