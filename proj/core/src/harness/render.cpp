#include "stf/harness/render.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>

#include "stf/harness/shading.hpp"
#include "stf/harness/temporal.hpp"

namespace stf {

namespace {

constexpr int kAlbedoId = 0;
constexpr int kNormalId = 1;

template <typename Fn>
void parallel_for(int count, Fn&& fn) {
  const int workers = std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, std::max(count, 1));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
}

int self_position(const FootprintTable& table, int lane) {
  const auto list = table.footprint(lane);
  return static_cast<int>(std::find(list.begin(), list.end(), lane) - list.begin());
}

}  // namespace

Image render_reference(const Scene& scene, FilterKind filter) {
  scene.validate();
  const Texture& albedo = *scene.albedo;
  Image out(scene.width, scene.height, albedo.channels());
  for (int y = 0; y < scene.height; ++y) {
    for (int x = 0; x < scene.width; ++x) {
      const TexelValue a = reference_filter(albedo, filter, scene.lookup_point(albedo, {x, y}));
      std::optional<TexelValue> n;
      if (scene.normal_map) {
        n = reference_filter(*scene.normal_map, filter, scene.lookup_point(*scene.normal_map, {x, y}));
      }
      out.store(x, y, shade(scene.shading, a, albedo.channels(), n));
    }
  }
  return out;
}

FrameResult render_frame(const Scene& scene, const RenderOptions& options) {
  scene.validate();
  if (options.footprints.empty()) throw std::invalid_argument("render: no footprint table");
  const auto frame_slot = static_cast<std::size_t>(options.frame_index) % options.footprints.size();
  const FootprintTable& table = options.footprints[frame_slot];
  if (!(table.config() == scene.wave)) throw std::invalid_argument("render: footprint does not match the wave shape");
  if (options.estimator.exact_filtering && options.filter != FilterKind::Bilinear) {
    throw std::invalid_argument("render: exact filtering requires the bilinear filter");
  }

  const Texture& albedo = *scene.albedo;
  const Texture* normal = scene.normal_map.get();
  const int channels = albedo.channels();
  const WaveConfig& wave = scene.wave;
  const int lanes = wave.lanes();
  const int waves_x = (scene.width + wave.cols - 1) / wave.cols;
  const int waves_y = (scene.height + wave.rows - 1) / wave.rows;

  FrameResult result;
  result.reference = options.reference ? *options.reference : render_reference(scene, options.filter);
  result.image = Image(scene.width, scene.height, channels);
  if (options.collect_diagnostics) {
    result.diagnostics = RenderDiagnostics{Image(scene.width, scene.height, channels),
                                           Image(scene.width, scene.height, channels),
                                           Image(scene.width, scene.height, channels), 0};
  }
  std::atomic<std::size_t> exact_hits{0};
  EstimatorKind base = options.estimator;
  base.exact_filtering = false;

  parallel_for(waves_x * waves_y, [&](int wave_index) {
    const Int2 origin{(wave_index % waves_x) * wave.cols, (wave_index / waves_x) * wave.rows};
    std::vector<LaneRecord> albedo_records(static_cast<std::size_t>(lanes));
    std::vector<LaneRecord> normal_records(normal ? static_cast<std::size_t>(lanes) : 0);
    std::vector<Vec2> albedo_lookup(static_cast<std::size_t>(lanes));
    std::vector<Vec2> normal_lookup(static_cast<std::size_t>(lanes));
    std::vector<LaneSample> shared;
    shared.reserve(static_cast<std::size_t>(table.footprint_size()));
    std::size_t hits = 0;

    // Phase 1: every lane draws one texel per texture with a single random value.
    for (int lane = 0; lane < lanes; ++lane) {
      const auto l = static_cast<std::size_t>(lane);
      const Int2 pixel = lane_to_pixel(wave, origin, lane);
      const double u = options.noise.value(options.seed, pixel, options.frame_index);
      albedo_lookup[l] = scene.lookup_point(albedo, pixel);
      albedo_records[l] = {lane, pixel,
                           sample_texel(albedo, FilterSupport(options.filter, albedo_lookup[l]), u,
                                        options.sampling, kAlbedoId),
                           true};
      if (normal) {
        normal_lookup[l] = scene.lookup_point(*normal, pixel);
        normal_records[l] = {lane, pixel,
                             sample_texel(*normal, FilterSupport(options.filter, normal_lookup[l]), u,
                                          options.sampling, kNormalId),
                             true};
      }
    }

    // Phase 2: share within the footprint and estimate.
    const auto estimate = [&](std::span<const LaneRecord> records, int lane, Vec2 lookup, int tex_id,
                              TexelValue* lo, TexelValue* hi) {
      wave_read(records, table, lane, shared);
      const EstimatorContext ctx(options.filter, lookup, tex_id, options.sampling,
                                 static_cast<std::size_t>(self_position(table, lane)));
      if (lo != nullptr) std::tie(*lo, *hi) = contributing_bounds(shared, ctx);
      if (options.estimator.exact_filtering) {
        if (auto exact = try_exact_filter(shared, ctx)) {
          if (tex_id == kAlbedoId) ++hits;
          return *exact;
        }
      }
      return evaluate(base, shared, ctx);
    };

    for (int lane = 0; lane < lanes; ++lane) {
      const auto l = static_cast<std::size_t>(lane);
      const Int2 pixel = albedo_records[l].pixel;
      if (pixel.x >= scene.width || pixel.y >= scene.height) continue;
      TexelValue lo{};
      TexelValue hi{};
      const bool diag = result.diagnostics.has_value();
      const TexelValue a = estimate(albedo_records, lane, albedo_lookup[l], kAlbedoId, diag ? &lo : nullptr,
                                    diag ? &hi : nullptr);
      std::optional<TexelValue> n;
      if (normal) n = estimate(normal_records, lane, normal_lookup[l], kNormalId, nullptr, nullptr);
      result.image.store(pixel.x, pixel.y, shade(scene.shading, a, channels, n));
      if (diag) {
        result.diagnostics->filtered.store(pixel.x, pixel.y, a);
        result.diagnostics->hull_lo.store(pixel.x, pixel.y, lo);
        result.diagnostics->hull_hi.store(pixel.x, pixel.y, hi);
      }
    }
    exact_hits += hits;
  });

  if (result.diagnostics) result.diagnostics->exact_hits = exact_hits.load();
  result.metrics = compute_metrics(result.image, result.reference);
  return result;
}

AccumulationResult render_accumulated(const Scene& scene, RenderOptions options, int frames, double alpha,
                                      bool neighborhood_clamp) {
  if (frames < 1) throw std::invalid_argument("render: frames must be positive");
  AccumulationResult acc;
  const int first = options.frame_index;
  Image reference = options.reference ? *options.reference : render_reference(scene, options.filter);
  options.reference = &reference;
  for (int f = 0; f < frames; ++f) {
    options.frame_index = first + f;
    FrameResult frame = render_frame(scene, options);
    if (f == 0) {
      acc.single_frame = frame.image;
      acc.single_metrics = frame.metrics;
      acc.accumulated = std::move(frame.image);
    } else {
      acc.accumulated = accumulate_ema(acc.accumulated, frame.image, alpha, neighborhood_clamp);
    }
    acc.per_frame.push_back(compute_metrics(acc.accumulated, reference));
  }
  acc.accumulated_metrics = acc.per_frame.back();
  acc.reference = std::move(reference);
  return acc;
}

std::vector<FootprintTable> footprints_from_spec(const WaveConfig& cfg, std::string_view spec) {
  if (spec == "quad") return {build_quad_footprint(cfg)};
  if (spec == "self") return {build_self_footprint(cfg)};
  if (spec.starts_with("square") && spec.size() == 7) {
    return {build_square_footprint(cfg, spec[6] - '0')};
  }
  if (spec.starts_with("sparse:")) {
    auto tables = load_footprints(std::string(spec.substr(7)));
    for (const auto& t : tables) {
      if (!(t.config() == cfg)) throw std::invalid_argument("footprint file does not match the wave shape");
    }
    return tables;
  }
  throw std::invalid_argument("unknown footprint spec: " + std::string(spec));
}

}  // namespace stf
