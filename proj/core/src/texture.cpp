#include "stf/texture.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace stf {

Texture::Texture(int width, int height, int channels, std::vector<float> data, AddressMode mode)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)), mode_(mode) {
  if (width_ < 1 || height_ < 1) {
    throw std::invalid_argument("texture: zero-sized image");
  }
  if (channels_ < 1 || channels_ > kMaxChannels) {
    throw std::invalid_argument("texture: unsupported channel count " + std::to_string(channels_));
  }
  const auto expected = static_cast<std::size_t>(width_) * height_ * channels_;
  if (data_.size() != expected) {
    throw std::invalid_argument("texture: data length " + std::to_string(data_.size()) +
                                " does not match " + std::to_string(expected));
  }
  for (float v : data_) {
    if (!std::isfinite(v)) throw std::invalid_argument("texture: non-finite texel value");
  }
}

Texture Texture::constant(int width, int height, int channels, float value, AddressMode mode) {
  const auto n = static_cast<std::size_t>(std::max(width, 0)) * std::max(height, 0) *
                 std::max(channels, 0);
  return Texture(width, height, channels, std::vector<float>(n, value), mode);
}

Texture Texture::with_address_mode(AddressMode mode) const {
  Texture copy = *this;
  copy.mode_ = mode;
  return copy;
}

TexelValue Texture::at(int x, int y) const {
  TexelValue v{};
  const std::size_t base = (static_cast<std::size_t>(y) * width_ + x) * channels_;
  for (int c = 0; c < channels_; ++c) v[c] = data_[base + c];
  return v;
}

namespace {

int wrap(int i, int n) {
  const int r = i % n;
  return r < 0 ? r + n : r;
}

}  // namespace

TexelValue fetch_texel(const Texture& tex, Int2 coords) {
  int x = coords.x;
  int y = coords.y;
  if (tex.address_mode() == AddressMode::Clamp) {
    x = std::clamp(x, 0, tex.width() - 1);
    y = std::clamp(y, 0, tex.height() - 1);
  } else {
    x = wrap(x, tex.width());
    y = wrap(y, tex.height());
  }
  return tex.at(x, y);
}

}  // namespace stf
