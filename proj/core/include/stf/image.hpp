#pragma once

#include <cstddef>
#include <vector>

#include "stf/types.hpp"

namespace stf {

/// Mutable float framebuffer, row-major, interleaved channels.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<float> data;

  Image() = default;
  Image(int w, int h, int c, float fill = 0.0f)
      : width(w), height(h), channels(c), data(static_cast<std::size_t>(w) * h * c, fill) {}

  std::size_t index(int x, int y) const {
    return (static_cast<std::size_t>(y) * width + x) * channels;
  }

  void store(int x, int y, const TexelValue& v) {
    const std::size_t base = index(x, y);
    for (int c = 0; c < channels; ++c) data[base + c] = static_cast<float>(v[c]);
  }

  TexelValue load(int x, int y) const {
    TexelValue v{};
    const std::size_t base = index(x, y);
    for (int c = 0; c < channels; ++c) v[c] = data[base + c];
    return v;
  }

  bool same_shape(const Image& o) const {
    return width == o.width && height == o.height && channels == o.channels;
  }
};

}  // namespace stf
