#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stf/footprint_opt.hpp"
#include "stf/harness/render.hpp"
#include "stf/harness/sweep.hpp"
#include "stf/harness/taylor.hpp"
#include "stf/harness/test_textures.hpp"
#include "stf/image_io.hpp"
#include "stf/noise.hpp"

namespace fs = std::filesystem;
using namespace stf;

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

WaveConfig parse_wave(const std::string& s) {
  const auto parts = split(s, 'x');
  if (parts.size() != 2) throw std::invalid_argument("wave must look like 8x4");
  WaveConfig cfg{std::stoi(parts[0]), std::stoi(parts[1])};
  cfg.validate();
  return cfg;
}

NoiseSource parse_noise(const std::string& spec, int cycle) {
  if (spec == "white") return NoiseSource::white();
  for (const std::string prefix : {"stbn:", "stbnquad:"}) {
    if (spec.starts_with(prefix)) {
      return NoiseSource::mask(std::make_shared<const NoiseMask>(load_mask(spec.substr(prefix.size()))), cycle);
    }
  }
  throw std::invalid_argument("unknown noise source: " + spec);
}

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

std::ofstream open_out(const fs::path& p) {
  ensure_parent(p);
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

EstimatorKind estimator_from_flags(const std::string& name, bool clamp, bool exact) {
  EstimatorKind k = EstimatorKind::parse(name);
  k.clamp = k.clamp || clamp;
  k.exact_filtering = k.exact_filtering || exact;
  return k;
}

struct RenderArgs {
  std::string scene;
  std::string estimator = "wis";
  bool clamp = false;
  bool exact = false;
  std::string filter = "bilinear";
  std::string footprint = "quad";
  std::string noise = "white";
  int noise_cycle = 0;
  int frames = 1;
  double ema_alpha = 0.1;
  bool ema_clamp = false;
  std::uint64_t seed = 0;
  std::string out = "out";
};

void run_render(const RenderArgs& a) {
  const Scene scene = load_scene(a.scene);
  RenderOptions opts;
  opts.estimator = estimator_from_flags(a.estimator, a.clamp, a.exact);
  opts.filter = parse_filter_kind(a.filter);
  opts.footprints = footprints_from_spec(scene.wave, a.footprint);
  opts.noise = parse_noise(a.noise, a.noise_cycle);
  opts.seed = a.seed;
  const AccumulationResult r = render_accumulated(scene, opts, a.frames, a.ema_alpha, a.ema_clamp);

  const fs::path dir = a.out;
  fs::create_directories(dir);
  save_png(dir / "frame.png", r.single_frame);
  save_png(dir / "accumulated.png", r.accumulated);
  save_png(dir / "reference.png", r.reference);

  auto csv = open_out(dir / "metrics.csv");
  csv << "frame,mse,psnr_db\n";
  for (std::size_t f = 0; f < r.per_frame.size(); ++f) {
    csv << f << ',' << num(r.per_frame[f].mse) << ',' << num(r.per_frame[f].psnr_db) << '\n';
  }

  nlohmann::ordered_json j;
  j["estimator"] = opts.estimator.label();
  j["filter"] = a.filter;
  j["footprint"] = a.footprint;
  j["noise"] = a.noise;
  j["frames"] = a.frames;
  j["ema_alpha"] = a.ema_alpha;
  j["ema_clamp"] = a.ema_clamp;
  j["seed"] = a.seed;
  j["single_frame"] = {{"mse", r.single_metrics.mse}, {"psnr_db", r.single_metrics.psnr_db}};
  j["accumulated"] = {{"mse", r.accumulated_metrics.mse}, {"psnr_db", r.accumulated_metrics.psnr_db}};
  open_out(dir / "metrics.json") << j.dump(2) << '\n';
  std::printf("single frame %.3f dB, accumulated %.3f dB\n", r.single_metrics.psnr_db,
              r.accumulated_metrics.psnr_db);
}

struct SweepArgs {
  std::string scene;
  std::string zooms = "1,1.5,2,4,8,16,32,64";
  std::string estimators = "onetap,is,is+clamp,mis,mis+clamp,pmis,pmis+clamp,regression,regression+clamp,wis";
  int trials = 8;
  std::uint64_t seed = 0;
  std::string filter = "bilinear";
  std::string footprint = "square3";
  std::string noise = "white";
  int resolution = 256;
  std::string out = "sweep.csv";
};

void run_sweep(const SweepArgs& a) {
  SweepConfig cfg;
  if (!a.scene.empty()) {
    cfg.base = load_scene(a.scene);
  } else {
    cfg.base.albedo = std::make_shared<const Texture>(make_noise_texture(64, 64, 3, 2024));
    cfg.base.width = a.resolution;
    cfg.base.height = a.resolution;
  }
  for (const auto& z : split(a.zooms, ',')) cfg.zooms.push_back(std::stod(z));
  for (const auto& e : split(a.estimators, ',')) cfg.estimators.push_back(EstimatorKind::parse(e));
  if (a.trials < 1) throw std::invalid_argument("trials must be positive");
  for (int t = 1; t <= a.trials; ++t) cfg.seeds.push_back(a.seed + static_cast<std::uint64_t>(t));
  cfg.filter = parse_filter_kind(a.filter);
  cfg.footprints = footprints_from_spec(cfg.base.wave, a.footprint);
  cfg.noise = parse_noise(a.noise, 0);
  const auto rows = zoom_sweep(cfg);
  auto out = open_out(a.out);
  write_sweep_csv(out, rows);
  write_sweep_csv(std::cout, rows);
}

struct FootprintArgs {
  OptParams params;
  int frames = 1;
  std::string wave = "8x4";
  std::string out = "footprints.json";
};

void run_gen_footprints(const FootprintArgs& a) {
  const WaveConfig cfg = parse_wave(a.wave);
  std::vector<FootprintTable> tables;
  if (a.frames == 1) {
    const OptResult r = optimize_sparse_footprints(cfg, a.params);
    std::printf("usage stddev %.6f (restart %d)\n", r.score, r.best_restart);
    tables.push_back(r.table);
  } else {
    tables = optimize_sparse_footprint_frames(cfg, a.params, a.frames);
    for (std::size_t f = 0; f < tables.size(); ++f) {
      std::printf("frame %zu usage stddev %.6f\n", f, usage_histogram(tables[f]).stddev);
    }
  }
  ensure_parent(a.out);
  save_footprints(a.out, tables);
}

struct NoiseArgs {
  std::string dims = "64x64x16";
  std::string variant = "scalar";
  double spatial_sigma = 1.9;
  double temporal_sigma = 0.8;
  std::uint64_t seed = 0;
  std::string out = "mask.bin";
};

void run_gen_noise(const NoiseArgs& a) {
  const auto parts = split(a.dims, 'x');
  if (parts.size() != 3) throw std::invalid_argument("dims must look like 64x64x16");
  const MaskDims dims{std::stoi(parts[0]), std::stoi(parts[1]), std::stoi(parts[2])};
  StbnParams p = a.variant == "quad" ? StbnParams::quad(a.seed) : StbnParams::scalar(a.seed);
  if (a.variant != "quad" && a.variant != "scalar") throw std::invalid_argument("variant must be scalar or quad");
  p.spatial_sigma = a.spatial_sigma;
  p.temporal_sigma = a.temporal_sigma;
  ensure_parent(a.out);
  save_mask(a.out, generate_stbn(dims, p));
}

void run_analyze_noise(const std::string& mask_path, const std::string& out_path) {
  const NoiseMask mask = load_mask(mask_path);
  if (mask.width != mask.height) throw std::invalid_argument("analyze-noise needs square slices");
  auto out = open_out(out_path);
  out << "slice,frequency,energy\n";
  for (int t = 0; t < mask.depth; ++t) {
    const auto psd = power_spectrum(mask, t);
    for (const auto& b : psd) out << t << ',' << b.frequency << ',' << num(b.energy) << '\n';
    std::printf("slice %d low/high energy ratio %.4f\n", t, low_high_energy_ratio(psd));
  }
}

struct TaylorArgs {
  std::string fn = "square";
  std::string texture;
  int size = 16;
  std::string filter = "bilinear";
  int points = 16;
  int trials = 0;
  std::uint64_t seed = 0;
  std::string out = "taylor.csv";
};

void run_taylor(const TaylorArgs& a) {
  const Texture tex = a.texture.empty() ? make_noise_texture(a.size, a.size, 1, a.seed + 1)
                                        : load_texture(a.texture, AddressMode::Wrap);
  const TaylorFn fn = parse_taylor_fn(a.fn);
  const FilterKind filter = parse_filter_kind(a.filter);
  auto out = open_out(a.out);
  out << "x,y,mu,var,expected_f,empirical_bias,predicted_bias,sampled_bias\n";
  for (int i = 0; i < a.points; ++i) {
    const std::uint64_t h = mix64(a.seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(i));
    const Vec2 p{static_cast<double>(h >> 40) / (1 << 24) * tex.width(),
                 static_cast<double>((h >> 16) & 0xffffff) / (1 << 24) * tex.height()};
    const TaylorReport r = taylor_bias_study(tex, filter, p, fn, a.trials, 0, h);
    out << num(p.x) << ',' << num(p.y) << ',' << num(r.mu) << ',' << num(r.var) << ',' << num(r.expected_f)
        << ',' << num(r.empirical_bias) << ',' << num(r.predicted_bias) << ','
        << (r.sampled_bias ? num(*r.sampled_bias) : "") << '\n';
    std::printf("(%.3f, %.3f) empirical %.6g predicted %.6g\n", p.x, p.y, r.empirical_bias, r.predicted_bias);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic texture filtering with sample reuse"};
  app.require_subcommand(1);

  RenderArgs ra;
  auto* render = app.add_subcommand("render", "Render a scene with one estimator and footprint");
  render->add_option("--scene", ra.scene, "Scene JSON")->required()->check(CLI::ExistingFile);
  render->add_option("--estimator", ra.estimator, "onetap|is|mis|pmis|regression|wis");
  render->add_flag("--clamp", ra.clamp, "Clamp to the contributing texel range");
  render->add_flag("--exact", ra.exact, "Exact bilinear filtering when the support is covered");
  render->add_option("--filter", ra.filter, "bilinear|bspline");
  render->add_option("--footprint", ra.footprint, "quad|square2|square3|square4|self|sparse:<json>");
  render->add_option("--noise", ra.noise, "white|stbn:<mask>|stbnquad:<mask>");
  render->add_option("--noise-cycle", ra.noise_cycle, "Use only the first N mask slices");
  render->add_option("--frames", ra.frames, "Frames to accumulate")->check(CLI::PositiveNumber);
  render->add_option("--ema-alpha", ra.ema_alpha, "EMA blend factor in (0, 1]");
  render->add_flag("--ema-clamp", ra.ema_clamp, "Clamp history to the 3x3 neighborhood");
  render->add_option("--seed", ra.seed, "Random seed");
  render->add_option("--out", ra.out, "Output directory");
  render->callback([&] { run_render(ra); });

  SweepArgs sa;
  auto* sweep = app.add_subcommand("sweep", "PSNR as a function of zoom");
  sweep->add_option("--scene", sa.scene, "Scene JSON (default: built-in noise texture)");
  sweep->add_option("--zooms", sa.zooms, "Comma-separated zoom factors");
  sweep->add_option("--estimators", sa.estimators, "Comma-separated labels such as wis,is+clamp");
  sweep->add_option("--trials", sa.trials, "Seeds per zoom");
  sweep->add_option("--seed", sa.seed, "Base seed");
  sweep->add_option("--filter", sa.filter, "bilinear|bspline");
  sweep->add_option("--footprint", sa.footprint, "Footprint spec");
  sweep->add_option("--noise", sa.noise, "Noise spec");
  sweep->add_option("--resolution", sa.resolution, "Square resolution of the built-in scene");
  sweep->add_option("--out", sa.out, "CSV path");
  sweep->callback([&] { run_sweep(sa); });

  FootprintArgs fa;
  auto* gen_fp = app.add_subcommand("gen-footprints", "Optimize sparse sharing footprints");
  gen_fp->add_option("--size", fa.params.footprint_size, "Lanes per footprint");
  gen_fp->add_option("--sigma", fa.params.sigma, "Candidate offset standard deviation");
  gen_fp->add_option("--candidates", fa.params.candidates_per_lane, "Candidates per lane");
  gen_fp->add_option("--trials", fa.params.stage2_trials, "Random selections per restart");
  gen_fp->add_option("--restarts", fa.params.restarts, "Restarts");
  gen_fp->add_option("--frames", fa.frames, "Tables to generate")->check(CLI::PositiveNumber);
  gen_fp->add_option("--seed", fa.params.seed, "Random seed");
  gen_fp->add_option("--wave", fa.wave, "Wave shape, e.g. 8x4");
  gen_fp->add_option("--out", fa.out, "JSON path");
  gen_fp->callback([&] { run_gen_footprints(fa); });

  NoiseArgs na;
  auto* gen_noise = app.add_subcommand("gen-noise", "Generate a spatiotemporal blue-noise mask");
  gen_noise->add_option("--dims", na.dims, "WxHxD");
  gen_noise->add_option("--variant", na.variant, "scalar|quad");
  gen_noise->add_option("--spatial-sigma", na.spatial_sigma, "Spatial energy sigma");
  gen_noise->add_option("--temporal-sigma", na.temporal_sigma, "Temporal energy sigma");
  gen_noise->add_option("--seed", na.seed, "Random seed");
  gen_noise->add_option("--out", na.out, "Mask path");
  gen_noise->callback([&] { run_gen_noise(na); });

  std::string mask_path;
  std::string psd_out = "psd.csv";
  auto* analyze = app.add_subcommand("analyze-noise", "Radial power spectrum of each mask slice");
  analyze->add_option("--mask", mask_path, "Mask path")->required()->check(CLI::ExistingFile);
  analyze->add_option("--out", psd_out, "CSV path");
  analyze->callback([&] { run_analyze_noise(mask_path, psd_out); });

  TaylorArgs ta;
  auto* taylor = app.add_subcommand("taylor", "Bias of shading after one-tap filtering");
  taylor->add_option("--fn", ta.fn, "square|exp");
  taylor->add_option("--texture", ta.texture, "Texture path (default: procedural noise)");
  taylor->add_option("--size", ta.size, "Procedural texture size");
  taylor->add_option("--filter", ta.filter, "bilinear|bspline");
  taylor->add_option("--points", ta.points, "Random lookup points");
  taylor->add_option("--trials", ta.trials, "Monte Carlo draws per point (0 = enumeration only)");
  taylor->add_option("--seed", ta.seed, "Random seed");
  taylor->add_option("--out", ta.out, "CSV path");
  taylor->callback([&] { run_taylor(ta); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
