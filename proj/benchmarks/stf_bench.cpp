#include <benchmark/benchmark.h>

#include <memory>

#include "stf/footprint_opt.hpp"
#include "stf/harness/render.hpp"
#include "stf/harness/test_textures.hpp"
#include "stf/noise.hpp"

namespace {

stf::Scene bench_scene(double zoom) {
  stf::Scene s;
  s.albedo = std::make_shared<const stf::Texture>(stf::make_noise_texture(64, 64, 3, 2024));
  s.zoom = zoom;
  s.width = 256;
  s.height = 256;
  return s;
}

void BM_RenderFrame(benchmark::State& state, const char* estimator) {
  const stf::Scene scene = bench_scene(static_cast<double>(state.range(0)));
  const stf::Image reference = stf::render_reference(scene, stf::FilterKind::Bilinear);
  stf::RenderOptions opt;
  opt.estimator = stf::EstimatorKind::parse(estimator);
  opt.footprints = {stf::build_square_footprint(scene.wave, 3)};
  opt.reference = &reference;
  for (auto _ : state) {
    benchmark::DoNotOptimize(stf::render_frame(scene, opt));
    ++opt.seed;
  }
  state.SetItemsProcessed(state.iterations() * scene.width * scene.height);
}
BENCHMARK_CAPTURE(BM_RenderFrame, onetap, "onetap")->Arg(4)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RenderFrame, wis, "wis")->Arg(4)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RenderFrame, mis, "mis")->Arg(4)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RenderFrame, pmis_clamp, "pmis+clamp")->Arg(4)->Unit(benchmark::kMillisecond);

void BM_RenderReference(benchmark::State& state) {
  const stf::Scene scene = bench_scene(8.0);
  for (auto _ : state) benchmark::DoNotOptimize(stf::render_reference(scene, stf::FilterKind::Bilinear));
}
BENCHMARK(BM_RenderReference)->Unit(benchmark::kMillisecond);

void BM_GenerateStbn(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(stf::generate_stbn({n, n, 4}, stf::StbnParams::scalar(1)));
}
BENCHMARK(BM_GenerateStbn)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_OptimizeFootprints(benchmark::State& state) {
  stf::OptParams params;
  params.restarts = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(stf::optimize_sparse_footprints({8, 4}, params));
    ++params.seed;
  }
}
BENCHMARK(BM_OptimizeFootprints)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
