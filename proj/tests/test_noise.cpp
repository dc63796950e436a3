#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <memory>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "stf/noise.hpp"
#include "test_util.hpp"

using namespace stf;

namespace {

bool has_rank_property(const NoiseMask& m) {
  const std::size_t n = static_cast<std::size_t>(m.width) * m.height;
  for (int t = 0; t < m.depth; ++t) {
    std::vector<float> v(m.slice(t).begin(), m.slice(t).end());
    std::sort(v.begin(), v.end());
    for (std::size_t k = 0; k < n; ++k) {
      if (v[k] != static_cast<float>((k + 0.5) / static_cast<double>(n))) return false;
    }
  }
  return true;
}

double quad_partner_difference(const NoiseMask& m) {
  double acc = 0.0;
  int count = 0;
  for (int t = 0; t < m.depth; ++t) {
    for (int y = 0; y < m.height; y += 2) {
      for (int x = 0; x < m.width; x += 2) {
        const float q[4] = {m.at(x, y, t), m.at(x + 1, y, t), m.at(x, y + 1, t), m.at(x + 1, y + 1, t)};
        for (int i = 0; i < 4; ++i) {
          for (int j = i + 1; j < 4; ++j) {
            acc += std::abs(q[i] - q[j]);
            ++count;
          }
        }
      }
    }
  }
  return acc / count;
}

// Number of DFT frequencies (excluding DC) whose rounded radius falls in each bin.
std::map<int, int> bin_counts(int n) {
  std::map<int, int> counts;
  for (int v = 0; v < n; ++v) {
    for (int u = 0; u < n; ++u) {
      if (u == 0 && v == 0) continue;
      const int fu = u <= n / 2 ? u : u - n;
      const int fv = v <= n / 2 ? v : v - n;
      const int r = static_cast<int>(std::lround(std::sqrt(double(fu * fu + fv * fv))));
      if (r >= 1 && r <= n / 2) ++counts[r];
    }
  }
  return counts;
}

}  // namespace

TEST_SUITE("noise") {
  TEST_CASE("white noise is deterministic, in range and frame dependent") {
    CHECK(white_noise(1, {3, 4}, 5) == white_noise(1, {3, 4}, 5));
    CHECK(white_noise(1, {3, 4}, 5) != white_noise(1, {3, 4}, 6));
    CHECK(white_noise(1, {3, 4}, 5) != white_noise(2, {3, 4}, 5));
    double sum = 0.0;
    for (int i = 0; i < 1000000; ++i) {
      const double u = white_noise(7, {i % 1000, i / 1000}, 0);
      REQUIRE(u >= 0.0);
      REQUIRE(u < 1.0);
      sum += u;
    }
    CHECK(std::abs(sum / 1e6 - 0.5) <= 0.002);
  }

  TEST_CASE("stbn rank property, determinism and validation") {
    const NoiseMask small = generate_stbn({8, 8, 1}, StbnParams::scalar(3));
    CHECK(small.values.size() == 64);
    CHECK(has_rank_property(small));
    const NoiseMask a = generate_stbn({16, 16, 4}, StbnParams::quad(5));
    CHECK(has_rank_property(a));
    CHECK(a.values == generate_stbn({16, 16, 4}, StbnParams::quad(5)).values);
    CHECK(a.values != generate_stbn({16, 16, 4}, StbnParams::quad(6)).values);
    CHECK(has_rank_property(generate_stbn({32, 8, 2}, StbnParams::scalar(1))));

    CHECK_THROWS(generate_stbn({6, 8, 1}, StbnParams::scalar()));
    CHECK_THROWS(generate_stbn({8, 8, 3}, StbnParams::scalar()));
    CHECK_THROWS(generate_stbn({256, 8, 1}, StbnParams::scalar()));
    StbnParams bad = StbnParams::scalar();
    bad.spatial_sigma = 0.0;
    CHECK_THROWS(generate_stbn({8, 8, 1}, bad));
    bad = StbnParams::scalar();
    bad.quad_boost = 0.5;
    CHECK_THROWS(generate_stbn({8, 8, 1}, bad));
  }

  TEST_CASE("single-slice scalar mask is a classic 2D blue-noise mask") {
    const NoiseMask m = generate_stbn({32, 32, 1}, StbnParams::scalar(2));
    CHECK(has_rank_property(m));
    const auto psd = power_spectrum(m, 0);
    CHECK(low_high_energy_ratio(psd) < 0.5);
  }

  TEST_CASE("quad boost spreads ranks inside quads") {
    const NoiseMask scalar = generate_stbn({32, 32, 2}, StbnParams::scalar(4));
    const NoiseMask quad = generate_stbn({32, 32, 2}, StbnParams::quad(4));
    CHECK(quad_partner_difference(quad) > quad_partner_difference(scalar));
  }

  TEST_CASE("sample_mask tiles in all dimensions") {
    const NoiseMask m = generate_stbn({8, 8, 2}, StbnParams::scalar(1));
    for (int t = 0; t < 2; ++t) {
      for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) {
          CHECK(sample_mask(m, {x, y}, t) == m.at(x, y, t));
          CHECK(sample_mask(m, {x + 8, y}, t) == m.at(x, y, t));
          CHECK(sample_mask(m, {x, y - 16}, t + 2) == m.at(x, y, t));
        }
      }
    }
  }

  TEST_CASE("power spectrum of constant and cosine slices") {
    const int n = 16;
    const std::vector<float> flat(n * n, 0.3f);
    for (const auto& b : power_spectrum(flat, n)) CHECK(b.energy == doctest::Approx(0.0));

    std::vector<float> wave(n * n);
    for (int y = 0; y < n; ++y) {
      for (int x = 0; x < n; ++x) wave[y * n + x] = static_cast<float>(std::cos(2 * std::numbers::pi * 4 * x / n));
    }
    const auto psd = power_spectrum(wave, n);
    REQUIRE(psd.size() == static_cast<std::size_t>(n / 2));
    for (const auto& b : psd) {
      CHECK(b.frequency >= 1);
      CHECK(b.frequency <= n / 2);
      if (b.frequency != 4) CHECK(b.energy == doctest::Approx(0.0).epsilon(1e-9).scale(1));
    }
    // Two peaks of |X|^2 / n^2 = n^2 / 4 each, averaged over the bin's frequencies.
    const auto counts = bin_counts(n);
    CHECK(psd[3].energy == doctest::Approx(2.0 * n * n / 4 / counts.at(4)).epsilon(1e-6));
  }

  TEST_CASE("white noise spectrum is flat") {
    const int n = 32;
    const int reps = 32;
    const auto counts = bin_counts(n);
    std::vector<double> mean(n / 2, 0.0);
    for (int r = 0; r < reps; ++r) {
      std::vector<float> slice(n * n);
      for (int i = 0; i < n * n; ++i) slice[i] = static_cast<float>(white_noise(100 + r, {i % n, i / n}, 0));
      const auto psd = power_spectrum(slice, n);
      for (const auto& b : psd) mean[b.frequency - 1] += b.energy / reps;
    }
    const double var = 1.0 / 12.0;
    for (int f = 1; f <= n / 2; ++f) {
      // Conjugate pairs halve the independent samples in a bin.
      const double independent = std::max(1.0, counts.at(f) / 2.0) * reps;
      CHECK(std::abs(mean[f - 1] - var) <= 3.0 * var / std::sqrt(independent) + 1e-3);
    }
  }

  TEST_CASE("blue-noise slices suppress low frequencies") {
    const NoiseMask m = generate_stbn({64, 64, 2}, StbnParams::scalar(9));
    for (int t = 0; t < m.depth; ++t) {
      const auto psd = power_spectrum(m, t);
      CHECK(low_high_energy_ratio(psd) < 1.0);
    }
  }

  TEST_CASE("mask file round trip") {
    const NoiseMask m = generate_stbn({8, 16, 2}, StbnParams::quad(2));
    const auto p = std::filesystem::temp_directory_path() / "stf_unit_mask.bin";
    save_mask(p, m);
    const NoiseMask back = load_mask(p);
    CHECK(back.width == 8);
    CHECK(back.height == 16);
    CHECK(back.depth == 2);
    CHECK(back.values == m.values);
    CHECK_THROWS(load_mask(std::filesystem::temp_directory_path() / "stf_missing_mask.bin"));
  }

  TEST_CASE("noise sources") {
    const NoiseSource white = NoiseSource::white();
    CHECK(white.is_white());
    CHECK(white.value(3, {1, 2}, 4) == white_noise(3, {1, 2}, 4));

    const auto mask = std::make_shared<const NoiseMask>(generate_stbn({8, 8, 4}, StbnParams::quad(1)));
    const NoiseSource src = NoiseSource::mask(mask);
    for (std::uint64_t seed : {0u, 1u, 2u, 77u}) {
      // The seed maps to an even spatial offset and some frame offset.
      bool found = false;
      for (int ot = 0; ot < 4 && !found; ++ot) {
        for (int oy = 0; oy < 8 && !found; oy += 2) {
          for (int ox = 0; ox < 8 && !found; ox += 2) {
            bool all = true;
            for (int y = 0; y < 8 && all; ++y) {
              for (int x = 0; x < 8 && all; ++x) {
                all = src.value(seed, {x, y}, 0) == sample_mask(*mask, {x + ox, y + oy}, ot);
              }
            }
            found = all;
          }
        }
      }
      CHECK(found);
    }
    const NoiseSource cycled = NoiseSource::mask(mask, 2);
    CHECK(cycled.value(5, {3, 3}, 1) == cycled.value(5, {3, 3}, 3));
    CHECK(cycled.value(5, {3, 3}, 0) != cycled.value(5, {3, 3}, 1));
  }
}
