#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "stf/filter.hpp"
#include "stf/texture.hpp"
#include "stf/wave.hpp"

namespace stf {

enum class EstimatorType { OneTap, IS, MIS, PairwiseMIS, Regression, WIS };

std::string_view to_string(EstimatorType type);
EstimatorType parse_estimator_type(std::string_view name);

/// Estimator plus its two optional post-steps. Exact filtering is only valid
/// for the bilinear filter.
struct EstimatorKind {
  EstimatorType type = EstimatorType::WIS;
  bool clamp = false;
  bool exact_filtering = false;

  /// "wis", "is+clamp", "wis+exact" ...
  std::string label() const;
  static EstimatorKind parse(std::string_view label);
  friend bool operator==(const EstimatorKind&, const EstimatorKind&) = default;
};

/// How each lane draws its texel. UniformInFootprint gives every nonzero-weight
/// support texel the same probability; it exists for the exact-filtering study
/// and is never the default.
enum class SamplingMode { FilterWeighted, UniformInFootprint };

/// The current lane's view: its filter, lookup point and support.
struct EstimatorContext {
  FilterKind filter = FilterKind::Bilinear;
  Vec2 lookup_point;
  FilterSupport support;
  int texture_id = 0;
  SamplingMode sampling = SamplingMode::FilterWeighted;
  /// Position of the current lane's own sample inside the shared list.
  std::size_t self_index = 0;

  EstimatorContext(FilterKind kind, Vec2 lookup, int tex_id = 0,
                   SamplingMode mode = SamplingMode::FilterWeighted, std::size_t self = 0)
      : filter(kind), lookup_point(lookup), support(kind, lookup), texture_id(tex_id),
        sampling(mode), self_index(self) {}

  /// Current lane's filter weight f_c at a shared texel; zero for samples of a
  /// different texture.
  double weight_at(const LaneSample& s) const {
    return s.texture_id == texture_id ? get_filter_pmf(filter, lookup_point, s.texel) : 0.0;
  }
};

/// Probability that a lane filtering at `lookup` draws `texel` under `mode`.
double sampling_pmf(FilterKind kind, SamplingMode mode, Vec2 lookup, Int2 texel);

/// CDF inversion over the support in entry order. Zero-weight entries are
/// never selected. `u` must lie in [0,1).
LaneSample sample_texel(const Texture& tex, const FilterSupport& support, double u,
                        SamplingMode mode = SamplingMode::FilterWeighted, int texture_id = 0);

TexelValue estimate_one_tap(const LaneSample& sample);

/// (1/n) sum f_c(x_i) T_i / p_i(x_i).
TexelValue estimate_is(std::span<const LaneSample> shared, const EstimatorContext& ctx);

/// Balance heuristic over the n one-sample techniques:
/// sum_i f_c(x_i) T_i / sum_j p_j(x_i). Costs n^2 PMF evaluations.
TexelValue estimate_mis(std::span<const LaneSample> shared, const EstimatorContext& ctx);

/// Pairwise MIS with the current lane as canonical technique; 2n PMF
/// evaluations. With M = n-1 non-canonical techniques:
///   m_c(x) = (1/M) sum_i p_c(x) / (p_c(x) + M p_i(x))
///   m_i(x) = p_i(x) / (p_c(x) + M p_i(x))
TexelValue estimate_pmis(std::span<const LaneSample> shared, const EstimatorContext& ctx);

/// Control-variate regression. With h_i = f_c(x_i) / p_i(x_i), whose
/// expectation is 1:
///   (1/n) sum [h_i T_i - beta (h_i - 1)],
///   beta = sum (h_i - h_mean) h_i T_i / sum (h_i - h_mean)^2.
/// beta falls back to 0 when the h_i are (numerically) all equal.
TexelValue estimate_regression(std::span<const LaneSample> shared, const EstimatorContext& ctx);

/// Weighted (self-normalized) importance sampling with one PMF per sample:
/// sum w_i T_i / sum w_i with w_i = f_c(x_i) / p_i(x_i). Always a convex
/// combination of the shared texels; the own sample has w = 1 under filter
/// weighted sampling, so the denominator is never zero.
TexelValue estimate_wis(std::span<const LaneSample> shared, const EstimatorContext& ctx);

/// Componentwise [min, max] over shared texels with f_c > 0, or the own
/// sample's value when none qualify.
std::pair<TexelValue, TexelValue> contributing_bounds(std::span<const LaneSample> shared,
                                                      const EstimatorContext& ctx);

TexelValue apply_clamp(const TexelValue& value, std::span<const LaneSample> shared,
                       const EstimatorContext& ctx);

/// Returns the exact bilinear value when every nonzero-weight support texel
/// appears among the shared samples. Throws for non-bilinear filters.
std::optional<TexelValue> try_exact_filter(std::span<const LaneSample> shared,
                                           const EstimatorContext& ctx);

/// Runs `kind` end to end: exact filtering first (when enabled and it
/// succeeds), otherwise the base estimator, then the optional clamp.
TexelValue evaluate(const EstimatorKind& kind, std::span<const LaneSample> shared,
                    const EstimatorContext& ctx);

}  // namespace stf
