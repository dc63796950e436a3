#pragma once

#include <algorithm>
#include <array>
#include <cstdint>

namespace stf {

/// Continuous position in texel space (texel centers sit on integers).
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

/// Integer texel or pixel coordinates.
struct Int2 {
  int x = 0;
  int y = 0;

  friend constexpr bool operator==(Int2, Int2) = default;
};

constexpr Vec2 to_vec2(Int2 p) { return {static_cast<double>(p.x), static_cast<double>(p.y)}; }

inline constexpr int kMaxChannels = 4;

/// Up to four channels; unused channels stay zero. All filtering math runs in
/// double and is narrowed to float only when written to an image.
using TexelValue = std::array<double, kMaxChannels>;

constexpr TexelValue splat(double v) { return {v, v, v, v}; }

constexpr TexelValue& operator+=(TexelValue& a, const TexelValue& b) {
  for (int c = 0; c < kMaxChannels; ++c) a[c] += b[c];
  return a;
}

constexpr TexelValue operator*(double s, const TexelValue& v) {
  return {s * v[0], s * v[1], s * v[2], s * v[3]};
}

constexpr TexelValue operator/(const TexelValue& v, double s) {
  return {v[0] / s, v[1] / s, v[2] / s, v[3] / s};
}

constexpr TexelValue cwise_min(const TexelValue& a, const TexelValue& b) {
  return {std::min(a[0], b[0]), std::min(a[1], b[1]), std::min(a[2], b[2]), std::min(a[3], b[3])};
}

constexpr TexelValue cwise_max(const TexelValue& a, const TexelValue& b) {
  return {std::max(a[0], b[0]), std::max(a[1], b[1]), std::max(a[2], b[2]), std::max(a[3], b[3])};
}

}  // namespace stf
