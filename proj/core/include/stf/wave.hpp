#pragma once

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stf/types.hpp"

namespace stf {

/// Lane-to-pixel layout of one simulated wave. Lanes are numbered row-major.
struct WaveConfig {
  int cols = 8;
  int rows = 4;

  int lanes() const { return cols * rows; }
  void validate() const;
  friend bool operator==(const WaveConfig&, const WaveConfig&) = default;
};

/// Error for contract violations of the simulated wave (bad lane ids,
/// reads from inactive lanes, malformed footprint tables).
class WaveError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

Int2 lane_to_pixel(const WaveConfig& cfg, Int2 wave_origin, int lane);

/// Pixel offset of a lane inside its wave.
inline Int2 lane_position(const WaveConfig& cfg, int lane) { return {lane % cfg.cols, lane / cfg.cols}; }
inline int lane_at(const WaveConfig& cfg, Int2 pos) { return pos.y * cfg.cols + pos.x; }

enum class FootprintKind { Quad, SquareWave, Sparse, SelfOnly };

std::string_view to_string(FootprintKind kind);
FootprintKind parse_footprint_kind(std::string_view name);

/// For each lane, the ordered list of lanes it reads samples from. Every
/// list has the same length, contains its owner, and stays inside the wave.
class FootprintTable {
 public:
  FootprintTable(WaveConfig cfg, FootprintKind kind, std::vector<std::vector<int>> lists);

  const WaveConfig& config() const { return cfg_; }
  FootprintKind kind() const { return kind_; }
  int footprint_size() const { return size_; }
  int lanes() const { return cfg_.lanes(); }
  std::span<const int> footprint(int lane) const { return lists_.at(static_cast<std::size_t>(lane)); }
  const std::vector<std::vector<int>>& lists() const { return lists_; }

  friend bool operator==(const FootprintTable&, const FootprintTable&) = default;

 private:
  WaveConfig cfg_;
  FootprintKind kind_;
  int size_ = 0;
  std::vector<std::vector<int>> lists_;
};

/// Fixed 2x2 quads anchored at even coordinates. Requires an even wave shape.
FootprintTable build_quad_footprint(const WaveConfig& cfg);

/// size x size block containing each lane, centered where possible and shifted
/// to stay inside the wave near its edges.
FootprintTable build_square_footprint(const WaveConfig& cfg, int size);

/// Every lane reads only itself.
FootprintTable build_self_footprint(const WaveConfig& cfg);

/// One lane's stochastically chosen texel, as other lanes see it.
struct LaneSample {
  Int2 texel;
  TexelValue value{};
  double pmf = 0.0;  ///< probability with which the owning lane drew `texel`
  int texture_id = 0;
  Vec2 lookup;  ///< the owning lane's filter position, needed to evaluate its PMF elsewhere
};

struct LaneRecord {
  int lane = 0;
  Int2 pixel;
  LaneSample sample;
  bool active = true;
};

/// Samples of the lanes in `lane`'s footprint, in footprint order. Reading an
/// inactive lane throws WaveError.
void wave_read(std::span<const LaneRecord> records, const FootprintTable& table, int lane,
               std::vector<LaneSample>& out);
std::vector<LaneSample> wave_read(std::span<const LaneRecord> records, const FootprintTable& table,
                                  int lane);

/// JSON {lanes, shape, footprint_size, kind, table}.
std::string footprint_to_json(const FootprintTable& table);
FootprintTable footprint_from_json(std::string_view text);

/// A file holds either one table object or an array of them (one per frame).
void save_footprints(const std::filesystem::path& path, std::span<const FootprintTable> tables);
std::vector<FootprintTable> load_footprints(const std::filesystem::path& path);

}  // namespace stf
