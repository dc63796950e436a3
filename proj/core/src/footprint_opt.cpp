#include "stf/footprint_opt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stf/noise.hpp"

namespace stf {

void OptParams::validate(const WaveConfig& cfg) const {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (footprint_size < 1 || footprint_size > cfg.lanes()) {
    throw std::invalid_argument("footprint_size must be in [1, lanes]");
  }
  if (candidates_per_lane < 1 || stage2_trials < 1 || restarts < 1) {
    throw std::invalid_argument("candidate, trial and restart counts must be positive");
  }
}

namespace {

double stddev_of(std::span<const int> counts, double mean) {
  double acc = 0.0;
  for (int c : counts) acc += (c - mean) * (c - mean);
  return std::sqrt(acc / static_cast<double>(counts.size()));
}

double mean_usage(std::span<const int> counts) {
  double total = 0.0;
  for (int c : counts) total += c;
  return total / static_cast<double>(counts.size());
}

}  // namespace

UsageHistogram usage_histogram(const WaveConfig& cfg, std::span<const std::vector<int>> selection) {
  UsageHistogram h;
  h.counts.assign(static_cast<std::size_t>(cfg.lanes()), 0);
  for (const auto& list : selection) {
    for (int j : list) ++h.counts.at(static_cast<std::size_t>(j));
  }
  h.mean = mean_usage(h.counts);
  h.stddev = stddev_of(h.counts, h.mean);
  return h;
}

UsageHistogram usage_histogram(const FootprintTable& table) {
  return usage_histogram(table.config(), table.lists());
}

double score_configuration(const WaveConfig& cfg, std::span<const std::vector<int>> selection) {
  if (static_cast<int>(selection.size()) != cfg.lanes()) {
    throw std::invalid_argument("selection needs one footprint per lane");
  }
  return usage_histogram(cfg, selection).stddev;
}

std::vector<std::vector<int>> gen_candidates(int lane, const WaveConfig& cfg, const OptParams& params,
                                             std::mt19937_64& rng) {
  params.validate(cfg);
  const Int2 p = lane_position(cfg, lane);
  const bool edge_x = p.x == 0 || p.x == cfg.cols - 1;
  const bool edge_y = p.y == 0 || p.y == cfg.rows - 1;
  const double base_sigma =
      params.sigma * (edge_x && edge_y ? params.corner_relax : (edge_x || edge_y ? params.edge_relax : 1.0));

  std::vector<std::vector<int>> out;
  out.reserve(static_cast<std::size_t>(params.candidates_per_lane));
  for (int c = 0; c < params.candidates_per_lane; ++c) {
    std::vector<int> picked{lane};
    std::vector<bool> used(static_cast<std::size_t>(cfg.lanes()), false);
    used[static_cast<std::size_t>(lane)] = true;
    double sigma = base_sigma;
    int stalled = 0;
    while (static_cast<int>(picked.size()) < params.footprint_size) {
      std::normal_distribution<double> normal(0.0, sigma);
      const int x = p.x + static_cast<int>(std::lround(normal(rng)));
      const int y = p.y + static_cast<int>(std::lround(normal(rng)));
      const bool inside = x >= 0 && x < cfg.cols && y >= 0 && y < cfg.rows;
      if (inside && !used[static_cast<std::size_t>(lane_at(cfg, {x, y}))]) {
        const int j = lane_at(cfg, {x, y});
        used[static_cast<std::size_t>(j)] = true;
        picked.push_back(j);
        stalled = 0;
      } else if (++stalled >= 64) {
        sigma *= 1.25;
        stalled = 0;
      }
    }
    std::sort(picked.begin() + 1, picked.end());
    out.push_back(std::move(picked));
  }
  return out;
}

std::vector<std::vector<int>> gen_candidates(int lane, const WaveConfig& cfg, const OptParams& params) {
  std::mt19937_64 rng(mix64(params.seed ^ mix64(static_cast<std::uint64_t>(lane) + 1)));
  return gen_candidates(lane, cfg, params, rng);
}

namespace {

// Tracks lane usage counts for the current selection.
class Tally {
 public:
  explicit Tally(int lanes) : counts_(static_cast<std::size_t>(lanes), 0) {}

  void add(std::span<const int> list, int delta) {
    for (int j : list) counts_[static_cast<std::size_t>(j)] += delta;
  }
  double score(double mean) const { return stddev_of(counts_, mean); }

 private:
  std::vector<int> counts_;
};

struct RestartResult {
  std::vector<std::vector<int>> selection;
  double stage2_score = 0.0;
  double score = 0.0;
  std::vector<double> trace;
};

RestartResult run_restart(const WaveConfig& cfg, const OptParams& params, std::mt19937_64& rng) {
  const int lanes = cfg.lanes();
  std::vector<std::vector<std::vector<int>>> candidates;
  for (int lane = 0; lane < lanes; ++lane) candidates.push_back(gen_candidates(lane, cfg, params, rng));
  const double mean = static_cast<double>(params.footprint_size);

  // Stage 2: best of many random selections.
  std::uniform_int_distribution<int> pick(0, params.candidates_per_lane - 1);
  std::vector<int> choice(static_cast<std::size_t>(lanes));
  std::vector<int> best_choice;
  double best = 0.0;
  for (int trial = 0; trial < params.stage2_trials; ++trial) {
    Tally tally(lanes);
    for (int lane = 0; lane < lanes; ++lane) {
      choice[static_cast<std::size_t>(lane)] = pick(rng);
      tally.add(candidates[static_cast<std::size_t>(lane)][static_cast<std::size_t>(choice[static_cast<std::size_t>(lane)])], 1);
    }
    const double s = tally.score(mean);
    if (best_choice.empty() || s < best) {
      best = s;
      best_choice = choice;
    }
  }

  // Stage 3: coordinate descent over lanes in ascending order, strict improvement only.
  RestartResult r;
  r.stage2_score = best;
  r.trace.push_back(best);
  Tally tally(lanes);
  for (int lane = 0; lane < lanes; ++lane) {
    tally.add(candidates[static_cast<std::size_t>(lane)][static_cast<std::size_t>(best_choice[static_cast<std::size_t>(lane)])], 1);
  }
  double current = best;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int lane = 0; lane < lanes; ++lane) {
      const auto& lane_cands = candidates[static_cast<std::size_t>(lane)];
      int& sel = best_choice[static_cast<std::size_t>(lane)];
      int best_alt = sel;
      double best_alt_score = current;
      tally.add(lane_cands[static_cast<std::size_t>(sel)], -1);
      for (int c = 0; c < static_cast<int>(lane_cands.size()); ++c) {
        if (c == sel) continue;
        tally.add(lane_cands[static_cast<std::size_t>(c)], 1);
        const double s = tally.score(mean);
        tally.add(lane_cands[static_cast<std::size_t>(c)], -1);
        if (s < best_alt_score) {
          best_alt_score = s;
          best_alt = c;
        }
      }
      tally.add(lane_cands[static_cast<std::size_t>(best_alt)], 1);
      if (best_alt != sel) {
        sel = best_alt;
        current = best_alt_score;
        r.trace.push_back(current);
        changed = true;
      }
    }
  }
  r.score = current;
  for (int lane = 0; lane < lanes; ++lane) {
    r.selection.push_back(candidates[static_cast<std::size_t>(lane)][static_cast<std::size_t>(best_choice[static_cast<std::size_t>(lane)])]);
  }
  return r;
}

}  // namespace

OptResult optimize_sparse_footprints(const WaveConfig& cfg, const OptParams& params) {
  cfg.validate();
  params.validate(cfg);
  std::vector<double> stage2;
  std::vector<double> finals;
  RestartResult best;
  int best_index = -1;
  for (int restart = 0; restart < params.restarts; ++restart) {
    std::mt19937_64 rng(mix64(params.seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(restart)));
    RestartResult r = run_restart(cfg, params, rng);
    stage2.push_back(r.stage2_score);
    finals.push_back(r.score);
    if (best_index < 0 || r.score < best.score) {
      best = std::move(r);
      best_index = restart;
    }
  }
  return OptResult{FootprintTable(cfg, FootprintKind::Sparse, std::move(best.selection)), best.score,
                   best_index, std::move(best.trace), std::move(stage2), std::move(finals)};
}

std::vector<FootprintTable> optimize_sparse_footprint_frames(const WaveConfig& cfg, const OptParams& params,
                                                             int frames) {
  if (frames < 1) throw std::invalid_argument("frames must be positive");
  std::vector<FootprintTable> out;
  for (int f = 0; f < frames; ++f) {
    OptParams p = params;
    p.seed = f == 0 ? params.seed : mix64(params.seed ^ mix64(static_cast<std::uint64_t>(f)));
    out.push_back(optimize_sparse_footprints(cfg, p).table);
  }
  return out;
}

}  // namespace stf
