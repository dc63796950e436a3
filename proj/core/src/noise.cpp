#include "stf/noise.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

namespace stf {

std::uint64_t mix64(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double white_noise(std::uint64_t seed, Int2 pixel, int frame) {
  const std::uint64_t xy = static_cast<std::uint32_t>(pixel.x) |
                           (static_cast<std::uint64_t>(static_cast<std::uint32_t>(pixel.y)) << 32);
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ xy);
  h = mix64(h ^ static_cast<std::uint32_t>(frame));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

namespace {

int wrap(int i, int n) {
  const int r = i % n;
  return r < 0 ? r + n : r;
}

struct AxisTap {
  int delta = 0;
  double dist2 = 0.0;
};

// Taps within `radius`; when the window covers the whole axis every site is
// visited once with its toroidal distance.
std::vector<AxisTap> axis_taps(int n, int radius) {
  std::vector<AxisTap> taps;
  if (2 * radius + 1 >= n) {
    for (int k = 0; k < n; ++k) {
      const int d = std::min(k, n - k);
      taps.push_back({k, static_cast<double>(d) * d});
    }
  } else {
    for (int k = -radius; k <= radius; ++k) taps.push_back({k, static_cast<double>(k) * k});
  }
  return taps;
}

class EnergyField {
 public:
  EnergyField(MaskDims dims, const StbnParams& p)
      : dims_(dims), boost_(p.quad_boost),
        taps_x_(axis_taps(dims.width, static_cast<int>(std::ceil(3.0 * p.spatial_sigma)))),
        taps_y_(axis_taps(dims.height, static_cast<int>(std::ceil(3.0 * p.spatial_sigma)))),
        taps_t_(axis_taps(dims.depth, static_cast<int>(std::ceil(3.0 * p.temporal_sigma)))),
        energy_(static_cast<std::size_t>(dims.width) * dims.height * dims.depth, 0.0),
        set_(energy_.size(), 0) {
    const double two_ss = 2.0 * p.spatial_sigma * p.spatial_sigma;
    const double two_st = 2.0 * p.temporal_sigma * p.temporal_sigma;
    for (const AxisTap& ty : taps_y_) {
      for (const AxisTap& tx : taps_x_) spatial_.push_back(std::exp(-(tx.dist2 + ty.dist2) / two_ss));
    }
    for (const AxisTap& tt : taps_t_) temporal_.push_back(std::exp(-tt.dist2 / two_st));
  }

  std::size_t slice_size() const { return static_cast<std::size_t>(dims_.width) * dims_.height; }
  bool is_set(std::size_t site) const { return set_[site] != 0; }

  void toggle(std::size_t site) {
    const double sign = set_[site] ? -1.0 : 1.0;
    set_[site] ^= 1;
    const int x = static_cast<int>(site % dims_.width);
    const int y = static_cast<int>((site / dims_.width) % dims_.height);
    const int t = static_cast<int>(site / slice_size());
    for (std::size_t it = 0; it < taps_t_.size(); ++it) {
      const int tz = wrap(t + taps_t_[it].delta, dims_.depth);
      const double wt = sign * temporal_[it];
      const bool same_frame = taps_t_[it].delta == 0;
      std::size_t k = 0;
      for (const AxisTap& ty : taps_y_) {
        const int yy = wrap(y + ty.delta, dims_.height);
        double* row = energy_.data() + (static_cast<std::size_t>(tz) * dims_.height + yy) * dims_.width;
        const bool same_quad_row = (yy >> 1) == (y >> 1);
        for (const AxisTap& tx : taps_x_) {
          const int xx = wrap(x + tx.delta, dims_.width);
          double e = spatial_[k++] * wt;
          if (same_frame && same_quad_row && (xx >> 1) == (x >> 1)) e *= boost_;
          row[xx] += e;
        }
      }
    }
  }

  // Highest energy among set sites (tightest cluster) or lowest among unset
  // sites (largest void) in one frame; first index wins ties.
  std::size_t find_in_slice(int t, bool cluster) const {
    const std::size_t begin = static_cast<std::size_t>(t) * slice_size();
    std::size_t best = begin + slice_size();
    double best_e = 0.0;
    for (std::size_t s = begin; s < begin + slice_size(); ++s) {
      if (is_set(s) != cluster) continue;
      const double e = energy_[s];
      if (best == begin + slice_size() || (cluster ? e > best_e : e < best_e)) {
        best = s;
        best_e = e;
      }
    }
    if (best == begin + slice_size()) throw std::logic_error("void-and-cluster: empty candidate set");
    return best;
  }

 private:
  MaskDims dims_;
  double boost_;
  std::vector<AxisTap> taps_x_, taps_y_, taps_t_;
  std::vector<double> spatial_;
  std::vector<double> temporal_;
  std::vector<double> energy_;
  std::vector<unsigned char> set_;
};

bool is_pow2_le_128(int v) {
  return v >= 1 && v <= 128 && std::has_single_bit(static_cast<unsigned>(v));
}

}  // namespace

NoiseMask generate_stbn(MaskDims dims, const StbnParams& params) {
  if (!is_pow2_le_128(dims.width) || !is_pow2_le_128(dims.height) || !is_pow2_le_128(dims.depth)) {
    throw std::invalid_argument("stbn: dimensions must be powers of two <= 128");
  }
  if (!(params.spatial_sigma > 0.0) || !(params.temporal_sigma > 0.0)) {
    throw std::invalid_argument("stbn: sigmas must be positive");
  }
  if (!(params.quad_boost >= 1.0)) throw std::invalid_argument("stbn: quad_boost must be >= 1");

  EnergyField field(dims, params);
  const std::size_t per_slice = field.slice_size();
  const std::size_t initial = std::max<std::size_t>(1, per_slice / 10);
  std::mt19937_64 rng(params.seed);

  // Initial random pattern, same point count in every frame.
  for (int t = 0; t < dims.depth; ++t) {
    std::vector<std::size_t> sites(per_slice);
    std::iota(sites.begin(), sites.end(), static_cast<std::size_t>(t) * per_slice);
    std::shuffle(sites.begin(), sites.end(), rng);
    for (std::size_t i = 0; i < initial; ++i) field.toggle(sites[i]);
  }

  // Relax: move the tightest cluster into the largest void until stable.
  std::vector<bool> converged(static_cast<std::size_t>(dims.depth), per_slice == initial);
  for (std::size_t round = 0; round < 8 * per_slice; ++round) {
    bool all = true;
    for (int t = 0; t < dims.depth; ++t) {
      if (converged[static_cast<std::size_t>(t)]) continue;
      const std::size_t cluster = field.find_in_slice(t, true);
      field.toggle(cluster);
      const std::size_t hole = field.find_in_slice(t, false);
      field.toggle(hole);
      if (hole == cluster) {
        converged[static_cast<std::size_t>(t)] = true;
      } else {
        all = false;
      }
    }
    if (all) break;
  }

  std::vector<std::size_t> rank(field.slice_size() * static_cast<std::size_t>(dims.depth), 0);

  // Ranks below the initial count: peel off tightest clusters on a copy.
  {
    EnergyField peel = field;
    for (std::size_t k = initial; k-- > 0;) {
      for (int t = 0; t < dims.depth; ++t) {
        const std::size_t site = peel.find_in_slice(t, true);
        peel.toggle(site);
        rank[site] = k;
      }
    }
  }

  // Remaining ranks: fill largest voids. Past half-full this is the same as
  // picking the tightest cluster of the complement, since every site's total
  // kernel mass is identical.
  for (std::size_t k = initial; k < per_slice; ++k) {
    for (int t = 0; t < dims.depth; ++t) {
      const std::size_t site = field.find_in_slice(t, false);
      field.toggle(site);
      rank[site] = k;
    }
  }

  NoiseMask mask{dims.width, dims.height, dims.depth, std::vector<float>(rank.size())};
  for (std::size_t i = 0; i < rank.size(); ++i) {
    mask.values[i] = static_cast<float>((static_cast<double>(rank[i]) + 0.5) / static_cast<double>(per_slice));
  }
  return mask;
}

float sample_mask(const NoiseMask& mask, Int2 pixel, int frame) {
  return mask.at(wrap(pixel.x, mask.width), wrap(pixel.y, mask.height), wrap(frame, mask.depth));
}

std::vector<SpectrumBin> power_spectrum(std::span<const float> slice, int n) {
  if (n < 2 || slice.size() != static_cast<std::size_t>(n) * n) {
    throw std::invalid_argument("power_spectrum: slice must be n x n");
  }
  using cd = std::complex<double>;
  const double mean = std::accumulate(slice.begin(), slice.end(), 0.0) / static_cast<double>(slice.size());
  std::vector<cd> twiddle(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) twiddle[static_cast<std::size_t>(k)] = std::polar(1.0, -2.0 * M_PI * k / n);

  const auto N = static_cast<std::size_t>(n);
  std::vector<cd> rows(N * N);
  for (std::size_t y = 0; y < N; ++y) {
    for (std::size_t kx = 0; kx < N; ++kx) {
      cd acc{};
      for (std::size_t x = 0; x < N; ++x) acc += (slice[y * N + x] - mean) * twiddle[(kx * x) % N];
      rows[y * N + kx] = acc;
    }
  }
  std::vector<double> power(N * N);
  for (std::size_t kx = 0; kx < N; ++kx) {
    for (std::size_t ky = 0; ky < N; ++ky) {
      cd acc{};
      for (std::size_t y = 0; y < N; ++y) acc += rows[y * N + kx] * twiddle[(ky * y) % N];
      power[ky * N + kx] = std::norm(acc) / static_cast<double>(N * N);
    }
  }

  const int bins = n / 2;
  std::vector<double> sum(static_cast<std::size_t>(bins) + 1, 0.0);
  std::vector<int> count(static_cast<std::size_t>(bins) + 1, 0);
  for (int ky = 0; ky < n; ++ky) {
    for (int kx = 0; kx < n; ++kx) {
      const int fx = kx <= n / 2 ? kx : kx - n;
      const int fy = ky <= n / 2 ? ky : ky - n;
      const int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(fx * fx + fy * fy))));
      if (r < 1 || r > bins) continue;
      sum[static_cast<std::size_t>(r)] += power[static_cast<std::size_t>(ky) * N + kx];
      ++count[static_cast<std::size_t>(r)];
    }
  }
  std::vector<SpectrumBin> out;
  for (int r = 1; r <= bins; ++r) {
    const auto i = static_cast<std::size_t>(r);
    out.push_back({r, count[i] ? sum[i] / count[i] : 0.0});
  }
  return out;
}

std::vector<SpectrumBin> power_spectrum(const NoiseMask& mask, int slice_t) {
  if (mask.width != mask.height) throw std::invalid_argument("power_spectrum: slice must be square");
  if (slice_t < 0 || slice_t >= mask.depth) throw std::out_of_range("power_spectrum: slice index");
  return power_spectrum(mask.slice(slice_t), mask.width);
}

double low_high_energy_ratio(std::span<const SpectrumBin> psd) {
  const std::size_t band = std::max<std::size_t>(1, psd.size() / 8);
  if (psd.size() < 2 * band) throw std::invalid_argument("spectrum too short for eighth bands");
  double low = 0.0;
  double high = 0.0;
  for (std::size_t i = 0; i < band; ++i) {
    low += psd[i].energy;
    high += psd[psd.size() - 1 - i].energy;
  }
  return low / high;
}

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(const unsigned char* p) {
  return p[0] | (std::uint32_t{p[1]} << 8) | (std::uint32_t{p[2]} << 16) | (std::uint32_t{p[3]} << 24);
}

}  // namespace

void save_mask(const std::filesystem::path& path, const NoiseMask& mask) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write("STFT", 4);
  put_u32(out, static_cast<std::uint32_t>(mask.width));
  put_u32(out, static_cast<std::uint32_t>(mask.height));
  put_u32(out, 1);
  put_u32(out, static_cast<std::uint32_t>(mask.depth));
  for (float v : mask.values) put_u32(out, std::bit_cast<std::uint32_t>(v));
}

NoiseMask load_mask(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("not found: " + path.string());
  unsigned char header[20];
  in.read(reinterpret_cast<char*>(header), 20);
  if (in.gcount() != 20 || std::memcmp(header, "STFT", 4) != 0) {
    throw std::runtime_error("mask: missing STFT header in " + path.string());
  }
  NoiseMask mask;
  mask.width = static_cast<int>(get_u32(header + 4));
  mask.height = static_cast<int>(get_u32(header + 8));
  const auto channels = get_u32(header + 12);
  mask.depth = static_cast<int>(get_u32(header + 16));
  if (channels != 1 || mask.width < 1 || mask.height < 1 || mask.depth < 1) {
    throw std::runtime_error("mask: bad dimensions in " + path.string());
  }
  const std::size_t count = static_cast<std::size_t>(mask.width) * mask.height * mask.depth;
  std::vector<unsigned char> raw(count * 4);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size()) throw std::runtime_error("mask: truncated");
  mask.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) mask.values[i] = std::bit_cast<float>(get_u32(raw.data() + i * 4));
  return mask;
}

double NoiseSource::value(std::uint64_t seed, Int2 pixel, int frame) const {
  if (!mask_) return white_noise(seed, pixel, frame);
  const NoiseMask& m = *mask_;
  const std::uint64_t h = mix64(seed ^ 0x5354465245555345ULL);
  const int half_w = std::max(1, m.width / 2);
  const int half_h = std::max(1, m.height / 2);
  const int ox = 2 * static_cast<int>(h % static_cast<std::uint64_t>(half_w));
  const int oy = 2 * static_cast<int>((h >> 20) % static_cast<std::uint64_t>(half_h));
  const int ot = static_cast<int>((h >> 40) % static_cast<std::uint64_t>(m.depth));
  const int f = cycle_ > 0 ? frame % cycle_ : frame;
  return sample_mask(m, {pixel.x + ox, pixel.y + oy}, f + ot);
}

}  // namespace stf
