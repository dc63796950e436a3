#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "stf/wave.hpp"

namespace stf {

struct OptParams {
  double sigma = 1.4;
  int candidates_per_lane = 32;
  int stage2_trials = 10000;
  int restarts = 30;
  int footprint_size = 9;
  std::uint64_t seed = 0;
  /// sigma multipliers for lanes on a wave edge / in a corner
  double edge_relax = 1.5;
  double corner_relax = 2.0;

  void validate(const WaveConfig& cfg) const;
};

struct UsageHistogram {
  std::vector<int> counts;  ///< counts[j]: how many lanes read lane j
  double mean = 0.0;
  double stddev = 0.0;  ///< population standard deviation
};

UsageHistogram usage_histogram(const WaveConfig& cfg, std::span<const std::vector<int>> selection);
UsageHistogram usage_histogram(const FootprintTable& table);

/// Score of a complete selection (one footprint per lane): the population
/// standard deviation of lane usage. Lower is more uniform.
double score_configuration(const WaveConfig& cfg, std::span<const std::vector<int>> selection);

/// Candidate footprints for one lane. Lanes are drawn at rounded Gaussian
/// offsets (sigma relaxed on edges and corners); out-of-wave draws are
/// rejected and repeats discarded. If 64 draws in a row add nothing, sigma
/// grows by 25% so tiny sigmas still terminate. Lists hold the owner first,
/// then the remaining lanes in ascending order.
std::vector<std::vector<int>> gen_candidates(int lane, const WaveConfig& cfg, const OptParams& params,
                                             std::mt19937_64& rng);
std::vector<std::vector<int>> gen_candidates(int lane, const WaveConfig& cfg, const OptParams& params);

struct OptResult {
  FootprintTable table;
  double score = 0.0;
  int best_restart = 0;
  /// Score after stage 2 and after every accepted descent move, for the winning restart.
  std::vector<double> descent_trace;
  /// Per restart: best stage-2 score and final score after descent.
  std::vector<double> stage2_scores;
  std::vector<double> final_scores;
};

/// Random restarts of {candidate generation, best of `stage2_trials` random
/// selections, coordinate descent until no lane improves}; keeps the lowest
/// score, ties going to the earliest restart.
OptResult optimize_sparse_footprints(const WaveConfig& cfg, const OptParams& params);

/// One optimized table per frame, each from a seed derived from params.seed.
std::vector<FootprintTable> optimize_sparse_footprint_frames(const WaveConfig& cfg, const OptParams& params,
                                                             int frames);

}  // namespace stf
