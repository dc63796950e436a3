#include "stf/wave.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace stf {

using nlohmann::json;

void WaveConfig::validate() const {
  if (cols < 1 || rows < 1) throw WaveError("wave shape must be positive");
}

Int2 lane_to_pixel(const WaveConfig& cfg, Int2 wave_origin, int lane) {
  if (lane < 0 || lane >= cfg.lanes()) {
    throw WaveError("lane " + std::to_string(lane) + " out of range");
  }
  const Int2 pos = lane_position(cfg, lane);
  return {wave_origin.x + pos.x, wave_origin.y + pos.y};
}

std::string_view to_string(FootprintKind kind) {
  switch (kind) {
    case FootprintKind::Quad: return "quad";
    case FootprintKind::SquareWave: return "square";
    case FootprintKind::Sparse: return "sparse";
    case FootprintKind::SelfOnly: return "self";
  }
  return "unknown";
}

FootprintKind parse_footprint_kind(std::string_view name) {
  if (name == "quad") return FootprintKind::Quad;
  if (name == "square") return FootprintKind::SquareWave;
  if (name == "sparse") return FootprintKind::Sparse;
  if (name == "self") return FootprintKind::SelfOnly;
  throw WaveError("unknown footprint kind: " + std::string(name));
}

FootprintTable::FootprintTable(WaveConfig cfg, FootprintKind kind, std::vector<std::vector<int>> lists)
    : cfg_(cfg), kind_(kind), lists_(std::move(lists)) {
  cfg_.validate();
  if (static_cast<int>(lists_.size()) != cfg_.lanes()) {
    throw WaveError("footprint table needs one list per lane");
  }
  size_ = lists_.empty() ? 0 : static_cast<int>(lists_.front().size());
  if (size_ < 1) throw WaveError("footprint lists must not be empty");
  for (int lane = 0; lane < cfg_.lanes(); ++lane) {
    const auto& list = lists_[static_cast<std::size_t>(lane)];
    if (static_cast<int>(list.size()) != size_) throw WaveError("footprint sizes differ between lanes");
    if (std::find(list.begin(), list.end(), lane) == list.end()) {
      throw WaveError("lane " + std::to_string(lane) + " missing from its own footprint");
    }
    for (int j : list) {
      if (j < 0 || j >= cfg_.lanes()) throw WaveError("footprint references lane outside the wave");
    }
    std::vector<int> sorted = list;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw WaveError("footprint lists must not repeat lanes");
    }
  }
}

namespace {

// Owner first, then the rest in row-major order.
std::vector<int> block_list(const WaveConfig& cfg, int owner, Int2 origin, int w, int h) {
  std::vector<int> out{owner};
  for (int y = origin.y; y < origin.y + h; ++y) {
    for (int x = origin.x; x < origin.x + w; ++x) {
      const int lane = lane_at(cfg, {x, y});
      if (lane != owner) out.push_back(lane);
    }
  }
  return out;
}

}  // namespace

FootprintTable build_quad_footprint(const WaveConfig& cfg) {
  cfg.validate();
  if (cfg.cols % 2 != 0 || cfg.rows % 2 != 0) throw WaveError("quad footprints need an even wave shape");
  std::vector<std::vector<int>> lists;
  for (int lane = 0; lane < cfg.lanes(); ++lane) {
    const Int2 p = lane_position(cfg, lane);
    lists.push_back(block_list(cfg, lane, {p.x & ~1, p.y & ~1}, 2, 2));
  }
  return FootprintTable(cfg, FootprintKind::Quad, std::move(lists));
}

FootprintTable build_square_footprint(const WaveConfig& cfg, int size) {
  cfg.validate();
  if (size < 1 || size > std::min(cfg.cols, cfg.rows)) {
    throw WaveError("square footprint of size " + std::to_string(size) + " does not fit the wave");
  }
  const int back = (size - 1) / 2;
  std::vector<std::vector<int>> lists;
  for (int lane = 0; lane < cfg.lanes(); ++lane) {
    const Int2 p = lane_position(cfg, lane);
    const Int2 origin{std::clamp(p.x - back, 0, cfg.cols - size), std::clamp(p.y - back, 0, cfg.rows - size)};
    lists.push_back(block_list(cfg, lane, origin, size, size));
  }
  return FootprintTable(cfg, FootprintKind::SquareWave, std::move(lists));
}

FootprintTable build_self_footprint(const WaveConfig& cfg) {
  cfg.validate();
  std::vector<std::vector<int>> lists;
  for (int lane = 0; lane < cfg.lanes(); ++lane) lists.push_back({lane});
  return FootprintTable(cfg, FootprintKind::SelfOnly, std::move(lists));
}

void wave_read(std::span<const LaneRecord> records, const FootprintTable& table, int lane,
               std::vector<LaneSample>& out) {
  if (static_cast<int>(records.size()) != table.lanes()) {
    throw WaveError("record count does not match the footprint's wave");
  }
  if (lane < 0 || lane >= table.lanes()) throw WaveError("lane out of range");
  out.clear();
  for (int j : table.footprint(lane)) {
    const LaneRecord& rec = records[static_cast<std::size_t>(j)];
    if (!rec.active) throw WaveError("lane " + std::to_string(j) + " is inactive");
    out.push_back(rec.sample);
  }
}

std::vector<LaneSample> wave_read(std::span<const LaneRecord> records, const FootprintTable& table,
                                  int lane) {
  std::vector<LaneSample> out;
  wave_read(records, table, lane, out);
  return out;
}

namespace {

json table_to_json(const FootprintTable& t) {
  return json{{"lanes", t.lanes()},
              {"shape", {t.config().cols, t.config().rows}},
              {"footprint_size", t.footprint_size()},
              {"kind", std::string(to_string(t.kind()))},
              {"table", t.lists()}};
}

FootprintTable table_from_json(const json& j) {
  try {
    const WaveConfig cfg{j.at("shape").at(0).get<int>(), j.at("shape").at(1).get<int>()};
    if (j.at("lanes").get<int>() != cfg.lanes()) throw WaveError("lanes does not match shape");
    FootprintTable t(cfg, parse_footprint_kind(j.at("kind").get<std::string>()),
                     j.at("table").get<std::vector<std::vector<int>>>());
    if (t.footprint_size() != j.at("footprint_size").get<int>()) {
      throw WaveError("footprint_size does not match table");
    }
    return t;
  } catch (const json::exception& e) {
    throw WaveError(std::string("malformed footprint json: ") + e.what());
  }
}

}  // namespace

std::string footprint_to_json(const FootprintTable& table) {
  return table_to_json(table).dump();
}

FootprintTable footprint_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw WaveError(std::string("malformed footprint json: ") + e.what());
  }
  return table_from_json(j);
}

void save_footprints(const std::filesystem::path& path, std::span<const FootprintTable> tables) {
  if (tables.empty()) throw WaveError("no footprint tables to save");
  json out;
  if (tables.size() == 1) {
    out = table_to_json(tables.front());
  } else {
    out = json::array();
    for (const auto& t : tables) out.push_back(table_to_json(t));
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << out.dump(1) << '\n';
}

std::vector<FootprintTable> load_footprints(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("not found: " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::exception& e) {
    throw WaveError(std::string("malformed footprint json: ") + e.what());
  }
  std::vector<FootprintTable> tables;
  if (j.is_array()) {
    for (const auto& item : j) tables.push_back(table_from_json(item));
  } else {
    tables.push_back(table_from_json(j));
  }
  if (tables.empty()) throw WaveError("footprint file holds no tables");
  return tables;
}

}  // namespace stf
