#include "stf/estimators.hpp"

#include <stdexcept>

namespace stf {

std::string_view to_string(EstimatorType type) {
  switch (type) {
    case EstimatorType::OneTap: return "onetap";
    case EstimatorType::IS: return "is";
    case EstimatorType::MIS: return "mis";
    case EstimatorType::PairwiseMIS: return "pmis";
    case EstimatorType::Regression: return "regression";
    case EstimatorType::WIS: return "wis";
  }
  return "unknown";
}

EstimatorType parse_estimator_type(std::string_view name) {
  for (auto t : {EstimatorType::OneTap, EstimatorType::IS, EstimatorType::MIS,
                 EstimatorType::PairwiseMIS, EstimatorType::Regression, EstimatorType::WIS}) {
    if (to_string(t) == name) return t;
  }
  throw std::invalid_argument("unknown estimator: " + std::string(name));
}

std::string EstimatorKind::label() const {
  std::string s(to_string(type));
  if (clamp) s += "+clamp";
  if (exact_filtering) s += "+exact";
  return s;
}

EstimatorKind EstimatorKind::parse(std::string_view label) {
  EstimatorKind kind;
  const auto plus = label.find('+');
  kind.type = parse_estimator_type(label.substr(0, plus));
  std::string_view rest = plus == std::string_view::npos ? std::string_view{} : label.substr(plus + 1);
  while (!rest.empty()) {
    const auto next = rest.find('+');
    const auto flag = rest.substr(0, next);
    if (flag == "clamp") {
      kind.clamp = true;
    } else if (flag == "exact") {
      kind.exact_filtering = true;
    } else {
      throw std::invalid_argument("unknown estimator flag: " + std::string(flag));
    }
    rest = next == std::string_view::npos ? std::string_view{} : rest.substr(next + 1);
  }
  return kind;
}

double sampling_pmf(FilterKind kind, SamplingMode mode, Vec2 lookup, Int2 texel) {
  const double w = get_filter_pmf(kind, lookup, texel);
  if (mode == SamplingMode::FilterWeighted || w <= 0.0) return w;
  int nonzero = 0;
  for (const FilterEntry& e : FilterSupport(kind, lookup).entries()) nonzero += e.weight > 0.0;
  return 1.0 / nonzero;
}

LaneSample sample_texel(const Texture& tex, const FilterSupport& support, double u,
                        SamplingMode mode, int texture_id) {
  const auto entries = support.entries();
  int nonzero = 0;
  for (const FilterEntry& e : entries) nonzero += e.weight > 0.0;
  const auto prob = [&](const FilterEntry& e) {
    if (e.weight <= 0.0) return 0.0;
    return mode == SamplingMode::FilterWeighted ? e.weight : 1.0 / nonzero;
  };

  const FilterEntry* chosen = nullptr;
  double cdf = 0.0;
  for (const FilterEntry& e : entries) {
    const double p = prob(e);
    if (p <= 0.0) continue;
    chosen = &e;  // falls through to the last nonzero entry if rounding leaves cdf < u
    cdf += p;
    if (u < cdf) break;
  }
  if (chosen == nullptr) throw std::logic_error("sample_texel: support has no positive weight");
  return LaneSample{chosen->texel, fetch_texel(tex, chosen->texel), prob(*chosen), texture_id,
                    support.lookup_point()};
}

TexelValue estimate_one_tap(const LaneSample& sample) {
  return sample.value;
}

TexelValue estimate_is(std::span<const LaneSample> shared, const EstimatorContext& ctx) {
  TexelValue sum{};
  for (const LaneSample& s : shared) sum += (ctx.weight_at(s) / s.pmf) * s.value;
  return sum / static_cast<double>(shared.size());
}

namespace {

double pmf_of_lane(const EstimatorContext& ctx, const LaneSample& lane, const LaneSample& at) {
  if (lane.texture_id != at.texture_id) return 0.0;
  return sampling_pmf(ctx.filter, ctx.sampling, lane.lookup, at.texel);
}

const LaneSample& own_sample(std::span<const LaneSample> shared, const EstimatorContext& ctx) {
  if (ctx.self_index >= shared.size()) throw std::out_of_range("self_index outside shared samples");
  return shared[ctx.self_index];
}

}  // namespace

TexelValue estimate_mis(std::span<const LaneSample> shared, const EstimatorContext& ctx) {
  TexelValue sum{};
  for (const LaneSample& s : shared) {
    const double fc = ctx.weight_at(s);
    if (fc == 0.0) continue;
    double denom = 0.0;
    for (const LaneSample& other : shared) denom += pmf_of_lane(ctx, other, s);
    sum += (fc / denom) * s.value;
  }
  return sum;
}

TexelValue estimate_pmis(std::span<const LaneSample> shared, const EstimatorContext& ctx) {
  const LaneSample& canon = own_sample(shared, ctx);
  const double m_count = static_cast<double>(shared.size()) - 1.0;
  if (m_count <= 0.0) return (ctx.weight_at(canon) / canon.pmf) * canon.value;

  const double pc_canon = sampling_pmf(ctx.filter, ctx.sampling, ctx.lookup_point, canon.texel);
  double canon_weight = 0.0;
  TexelValue sum{};
  for (std::size_t i = 0; i < shared.size(); ++i) {
    if (i == ctx.self_index) continue;
    const LaneSample& s = shared[i];
    // canonical sample evaluated under technique i
    const double pi_canon = pmf_of_lane(ctx, s, canon);
    canon_weight += pc_canon / (pc_canon + m_count * pi_canon);
    // non-canonical sample i under the canonical technique
    const double fc = ctx.weight_at(s);
    if (fc == 0.0) continue;
    const double pc = s.texture_id == ctx.texture_id
                          ? sampling_pmf(ctx.filter, ctx.sampling, ctx.lookup_point, s.texel)
                          : 0.0;
    const double mi = s.pmf / (pc + m_count * s.pmf);
    sum += (mi * fc / s.pmf) * s.value;
  }
  canon_weight /= m_count;
  sum += (canon_weight * ctx.weight_at(canon) / canon.pmf) * canon.value;
  return sum;
}

TexelValue estimate_regression(std::span<const LaneSample> shared, const EstimatorContext& ctx) {
  const double n = static_cast<double>(shared.size());
  // Control variate h_i = w_i / p_i with known mean 1; beta regresses f/p = h T on h.
  double h_mean = 0.0;
  TexelValue y_mean{};
  for (const LaneSample& s : shared) {
    const double h = ctx.weight_at(s) / s.pmf;
    h_mean += h;
    y_mean += h * s.value;
  }
  h_mean /= n;
  y_mean = y_mean / n;

  double denom = 0.0;
  TexelValue beta_num{};
  for (const LaneSample& s : shared) {
    const double h = ctx.weight_at(s) / s.pmf;
    denom += (h - h_mean) * (h - h_mean);
    beta_num += ((h - h_mean) * h) * s.value;
  }
  const TexelValue beta = denom < 1e-12 ? TexelValue{} : beta_num / denom;

  TexelValue out{};
  for (int c = 0; c < kMaxChannels; ++c) out[c] = y_mean[c] - beta[c] * (h_mean - 1.0);
  return out;
}

TexelValue estimate_wis(std::span<const LaneSample> shared, const EstimatorContext& ctx) {
  TexelValue sum_wt{};
  double sum_w = 0.0;
  for (const LaneSample& s : shared) {
    const double w = ctx.weight_at(s) / s.pmf;
    sum_wt += w * s.value;
    sum_w += w;
  }
  if (sum_w <= 0.0) return own_sample(shared, ctx).value;
  return sum_wt / sum_w;
}

std::pair<TexelValue, TexelValue> contributing_bounds(std::span<const LaneSample> shared,
                                                      const EstimatorContext& ctx) {
  bool any = false;
  TexelValue lo{};
  TexelValue hi{};
  for (const LaneSample& s : shared) {
    if (ctx.weight_at(s) <= 0.0) continue;
    lo = any ? cwise_min(lo, s.value) : s.value;
    hi = any ? cwise_max(hi, s.value) : s.value;
    any = true;
  }
  if (!any) {
    const TexelValue& own = own_sample(shared, ctx).value;
    return {own, own};
  }
  return {lo, hi};
}

TexelValue apply_clamp(const TexelValue& value, std::span<const LaneSample> shared,
                       const EstimatorContext& ctx) {
  const auto [lo, hi] = contributing_bounds(shared, ctx);
  return cwise_min(cwise_max(value, lo), hi);
}

std::optional<TexelValue> try_exact_filter(std::span<const LaneSample> shared,
                                           const EstimatorContext& ctx) {
  if (ctx.filter != FilterKind::Bilinear) {
    throw std::invalid_argument("exact filtering requires the bilinear filter");
  }
  TexelValue sum{};
  for (const FilterEntry& e : ctx.support.entries()) {
    if (e.weight <= 0.0) continue;
    const LaneSample* hit = nullptr;
    for (const LaneSample& s : shared) {
      if (s.texel == e.texel && s.texture_id == ctx.texture_id) {
        hit = &s;
        break;
      }
    }
    if (hit == nullptr) return std::nullopt;
    sum += e.weight * hit->value;
  }
  return sum;
}

TexelValue evaluate(const EstimatorKind& kind, std::span<const LaneSample> shared,
                    const EstimatorContext& ctx) {
  if (kind.exact_filtering) {
    if (auto exact = try_exact_filter(shared, ctx)) return *exact;
  }
  TexelValue v{};
  switch (kind.type) {
    case EstimatorType::OneTap: v = estimate_one_tap(own_sample(shared, ctx)); break;
    case EstimatorType::IS: v = estimate_is(shared, ctx); break;
    case EstimatorType::MIS: v = estimate_mis(shared, ctx); break;
    case EstimatorType::PairwiseMIS: v = estimate_pmis(shared, ctx); break;
    case EstimatorType::Regression: v = estimate_regression(shared, ctx); break;
    case EstimatorType::WIS: v = estimate_wis(shared, ctx); break;
  }
  return kind.clamp ? apply_clamp(v, shared, ctx) : v;
}

}  // namespace stf
