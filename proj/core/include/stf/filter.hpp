#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>

#include "stf/texture.hpp"
#include "stf/types.hpp"

namespace stf {

/// Reconstruction filter. Both variants are nonnegative and normalized, so the
/// filter weight doubles as the sampling PMF.
enum class FilterKind { Bilinear, BicubicBSpline };

std::string_view to_string(FilterKind kind);
FilterKind parse_filter_kind(std::string_view name);

/// Number of texels in the support of one lookup: 4 or 16.
constexpr int support_size(FilterKind kind) { return kind == FilterKind::Bilinear ? 4 : 16; }

/// 1D tent kernel max(0, 1-|d|).
double tent_kernel(double d);

/// 1D uniform cubic B-spline basis.
double bspline_kernel(double d);

/// Separable 2D weight at `offset` = lookup_point - texel_coords.
double filter_weight(FilterKind kind, Vec2 offset);

/// Probability that a lane filtering at `lookup_point` draws `texel`; equals
/// the filter weight and is zero outside the support.
double get_filter_pmf(FilterKind kind, Vec2 lookup_point, Int2 texel);

struct FilterEntry {
  Int2 texel;
  double weight = 0.0;
};

/// The (texel, weight) pairs for one lookup, in row-major texel order.
///
/// The entry count is fixed per filter kind; zero-weight entries at integer
/// lookups are kept. Coordinates are not addressed, so two lanes agree on the
/// identity of an out-of-range texel; addressing happens at fetch time.
class FilterSupport {
 public:
  static constexpr std::size_t kCapacity = 16;

  FilterSupport(FilterKind kind, Vec2 lookup_point);

  FilterKind kind() const { return kind_; }
  Vec2 lookup_point() const { return lookup_; }
  std::span<const FilterEntry> entries() const { return {entries_.data(), count_}; }
  std::size_t size() const { return count_; }

 private:
  FilterKind kind_;
  Vec2 lookup_;
  std::array<FilterEntry, kCapacity> entries_{};
  std::size_t count_ = 0;
};

/// Support for a lookup. The texture argument is accepted for symmetry with
/// reference_filter; coordinates never depend on it.
FilterSupport filter_support(FilterKind kind, const Texture& tex, Vec2 lookup_point);

/// Exact filtered value: the weighted sum over the support.
TexelValue reference_filter(const Texture& tex, FilterKind kind, Vec2 lookup_point);

/// Continuous texel-space coordinates of a UV position (texel centers at
/// integer coordinates): uv * dims - 0.5.
constexpr Vec2 uv_to_texel_space(Vec2 uv, int width, int height) {
  return {uv.x * width - 0.5, uv.y * height - 0.5};
}

}  // namespace stf
