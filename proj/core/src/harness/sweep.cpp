#include "stf/harness/sweep.hpp"

#include <cstdio>
#include <stdexcept>

#include "stf/harness/render.hpp"

namespace stf {

namespace {

double unit_from_hash(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

}  // namespace

std::vector<SweepRow> zoom_sweep(const SweepConfig& config) {
  if (config.estimators.empty() || config.zooms.empty() || config.seeds.empty()) {
    throw std::invalid_argument("sweep: estimators, zooms and seeds must be non-empty");
  }
  for (double z : config.zooms) {
    if (!(z >= 1.0)) throw std::invalid_argument("sweep: zoom must be >= 1");
  }
  std::vector<SweepRow> rows;
  for (double zoom : config.zooms) {
    std::vector<double> psnr(config.estimators.size(), 0.0);
    std::vector<double> mse(config.estimators.size(), 0.0);
    for (std::uint64_t seed : config.seeds) {
      Scene scene = config.base;
      scene.zoom = zoom;
      if (config.jitter_uv) {
        const std::uint64_t h = mix64(seed ^ 0x5eedf00dULL);
        scene.uv_offset.x += unit_from_hash(h) / scene.albedo->width();
        scene.uv_offset.y += unit_from_hash(mix64(h)) / scene.albedo->height();
      }
      const Image reference = render_reference(scene, config.filter);
      for (std::size_t e = 0; e < config.estimators.size(); ++e) {
        RenderOptions opts;
        opts.estimator = config.estimators[e];
        opts.filter = config.filter;
        opts.footprints = config.footprints;
        opts.noise = config.noise;
        opts.seed = seed;
        opts.reference = &reference;
        const FrameResult frame = render_frame(scene, opts);
        psnr[e] += frame.metrics.psnr_db;
        mse[e] += frame.metrics.mse;
      }
    }
    const double n = static_cast<double>(config.seeds.size());
    for (std::size_t e = 0; e < config.estimators.size(); ++e) {
      rows.push_back({config.estimators[e].label(), zoom, psnr[e] / n, mse[e] / n});
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "estimator,zoom,psnr_db,mse\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.6g,%.17g,%.17g", r.zoom, r.mean_psnr_db, r.mean_mse);
    out << r.estimator << ',' << buf << '\n';
  }
}

double sweep_lookup(const std::vector<SweepRow>& rows, const std::string& estimator, double zoom) {
  for (const auto& r : rows) {
    if (r.estimator == estimator && r.zoom == zoom) return r.mean_psnr_db;
  }
  throw std::out_of_range("sweep: no row for " + estimator);
}

}  // namespace stf
