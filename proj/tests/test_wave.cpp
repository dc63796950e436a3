#include <algorithm>
#include <filesystem>
#include <set>
#include <vector>

#include "doctest.h"
#include "stf/wave.hpp"

using namespace stf;

namespace {

std::set<int> as_set(std::span<const int> v) { return {v.begin(), v.end()}; }

std::set<int> block(const WaveConfig& cfg, int x0, int y0, int w, int h) {
  std::set<int> s;
  for (int y = y0; y < y0 + h; ++y) {
    for (int x = x0; x < x0 + w; ++x) s.insert(lane_at(cfg, {x, y}));
  }
  return s;
}

void check_invariants(const FootprintTable& t) {
  const int n = t.lanes();
  for (int lane = 0; lane < n; ++lane) {
    const auto list = t.footprint(lane);
    CHECK(static_cast<int>(list.size()) == t.footprint_size());
    CHECK(list.front() == lane);
    CHECK(as_set(list).size() == list.size());
    CHECK(std::is_sorted(list.begin() + 1, list.end()));
    for (int j : list) {
      CHECK(j >= 0);
      CHECK(j < n);
    }
  }
}

LaneRecord record(int lane, int texel_x) {
  LaneRecord r;
  r.lane = lane;
  r.sample.texel = {texel_x, 0};
  r.sample.pmf = 1.0;
  return r;
}

}  // namespace

TEST_SUITE("wave_sim") {
  TEST_CASE("lane_to_pixel is row-major") {
    const WaveConfig w84{8, 4};
    CHECK(lane_to_pixel(w84, {0, 0}, 0) == Int2{0, 0});
    CHECK(lane_to_pixel(w84, {0, 0}, 9) == Int2{1, 1});
    CHECK(lane_to_pixel(w84, {16, 8}, 31) == Int2{23, 11});
    CHECK(lane_to_pixel(WaveConfig{16, 2}, {0, 0}, 17) == Int2{1, 1});
    CHECK_THROWS_AS(lane_to_pixel(w84, {0, 0}, 32), WaveError);
    CHECK_THROWS_AS(lane_to_pixel(w84, {0, 0}, -1), WaveError);
  }

  TEST_CASE("quad footprints") {
    const FootprintTable q = build_quad_footprint({8, 4});
    CHECK(q.kind() == FootprintKind::Quad);
    CHECK(q.footprint_size() == 4);
    CHECK(std::vector<int>(q.footprint(0).begin(), q.footprint(0).end()) == std::vector<int>{0, 1, 8, 9});
    CHECK(std::vector<int>(q.footprint(9).begin(), q.footprint(9).end()) == std::vector<int>{9, 0, 1, 8});
    const FootprintTable q4 = build_quad_footprint({4, 4});
    CHECK(as_set(q4.footprint(5)) == std::set<int>{0, 1, 4, 5});
    CHECK_THROWS_AS(build_quad_footprint({3, 4}), WaveError);
    CHECK_THROWS_AS(build_quad_footprint({8, 1}), WaveError);
  }

  TEST_CASE("quad lanes share one footprint set") {
    for (const WaveConfig cfg : {WaveConfig{8, 4}, WaveConfig{4, 4}, WaveConfig{16, 2}, WaveConfig{2, 2}}) {
      const FootprintTable q = build_quad_footprint(cfg);
      check_invariants(q);
      for (int lane = 0; lane < cfg.lanes(); ++lane) {
        const Int2 p = lane_position(cfg, lane);
        CHECK(as_set(q.footprint(lane)) == block(cfg, p.x / 2 * 2, p.y / 2 * 2, 2, 2));
      }
    }
  }

  TEST_CASE("square footprint examples") {
    const WaveConfig cfg{8, 4};
    const FootprintTable s3 = build_square_footprint(cfg, 3);
    CHECK(s3.kind() == FootprintKind::SquareWave);
    CHECK(as_set(s3.footprint(lane_at(cfg, {3, 1}))) == block(cfg, 2, 0, 3, 3));
    CHECK(as_set(s3.footprint(0)) == block(cfg, 0, 0, 3, 3));
    const FootprintTable s2 = build_square_footprint(cfg, 2);
    CHECK(as_set(s2.footprint(lane_at(cfg, {7, 3}))) == block(cfg, 6, 2, 2, 2));
    CHECK_THROWS_AS(build_square_footprint(cfg, 5), WaveError);
  }

  TEST_CASE("square footprints translate and clamp") {
    for (const WaveConfig cfg : {WaveConfig{8, 4}, WaveConfig{4, 8}, WaveConfig{16, 4}}) {
      for (int size : {2, 3, 4}) {
        const FootprintTable t = build_square_footprint(cfg, size);
        check_invariants(t);
        CHECK(t.footprint_size() == size * size);
        for (int lane = 0; lane < cfg.lanes(); ++lane) {
          const Int2 p = lane_position(cfg, lane);
          const int ox = std::clamp(p.x - (size - 1) / 2, 0, cfg.cols - size);
          const int oy = std::clamp(p.y - (size - 1) / 2, 0, cfg.rows - size);
          CHECK(as_set(t.footprint(lane)) == block(cfg, ox, oy, size, size));
        }
        CHECK(t == build_square_footprint(cfg, size));
      }
    }
  }

  TEST_CASE("self footprint") {
    const FootprintTable t = build_self_footprint({8, 4});
    check_invariants(t);
    CHECK(t.footprint_size() == 1);
    CHECK(t.kind() == FootprintKind::SelfOnly);
  }

  TEST_CASE("table constructor rejects invalid lists") {
    const WaveConfig cfg{2, 2};
    CHECK_NOTHROW(FootprintTable(cfg, FootprintKind::Sparse, {{0, 1}, {1, 0}, {2, 3}, {3, 2}}));
    CHECK_THROWS_AS(FootprintTable(cfg, FootprintKind::Sparse, {{0, 1}, {1, 0}, {2, 3}}), WaveError);
    CHECK_THROWS_AS(FootprintTable(cfg, FootprintKind::Sparse, {{1, 2}, {1, 0}, {2, 3}, {3, 2}}), WaveError);
    CHECK_THROWS_AS(FootprintTable(cfg, FootprintKind::Sparse, {{0, 4}, {1, 0}, {2, 3}, {3, 2}}), WaveError);
    CHECK_THROWS_AS(FootprintTable(cfg, FootprintKind::Sparse, {{0, 1}, {1, 0, 2}, {2, 3}, {3, 2}}), WaveError);
    CHECK_THROWS_AS(FootprintTable(cfg, FootprintKind::Sparse, {{0, 0}, {1, 0}, {2, 3}, {3, 2}}), WaveError);
  }

  TEST_CASE("wave_read returns footprint samples in order") {
    const WaveConfig cfg{8, 4};
    const FootprintTable q = build_quad_footprint(cfg);
    std::vector<LaneRecord> records;
    for (int lane = 0; lane < 32; ++lane) records.push_back(record(lane, 100 + lane));
    const auto s = wave_read(records, q, 0);
    REQUIRE(s.size() == 4);
    CHECK(s[0].texel.x == 100);
    CHECK(s[1].texel.x == 101);
    CHECK(s[2].texel.x == 108);
    CHECK(s[3].texel.x == 109);

    for (auto& r : records) r.sample.texel = {5, 5};
    for (const auto& x : wave_read(records, q, 9)) CHECK(x.texel == Int2{5, 5});

    records[9].active = false;
    CHECK_THROWS_AS(wave_read(records, q, 0), WaveError);
    CHECK_NOTHROW(wave_read(records, q, 2));
    records.pop_back();
    CHECK_THROWS_AS(wave_read(records, q, 0), WaveError);
  }

  TEST_CASE("json round trip") {
    for (const FootprintTable& t : {build_quad_footprint({8, 4}), build_square_footprint({8, 4}, 3),
                                    build_self_footprint({4, 2})}) {
      CHECK(footprint_from_json(footprint_to_json(t)) == t);
    }
    CHECK_THROWS(footprint_from_json(R"({"lanes": 4, "shape": [2, 2], "footprint_size": 2, "kind": "sparse",
                                         "table": [[0, 1], [1, 0], [2, 3], [3, 3]]})"));
    CHECK_THROWS(footprint_from_json(R"({"lanes": 5, "shape": [2, 2], "footprint_size": 1, "kind": "self",
                                         "table": [[0], [1], [2], [3]]})"));
  }

  TEST_CASE("footprint files hold one table or a list") {
    const auto dir = std::filesystem::temp_directory_path() / "stf_unit_wave";
    std::filesystem::create_directories(dir);
    const std::vector<FootprintTable> one{build_square_footprint({8, 4}, 2)};
    save_footprints(dir / "one.json", one);
    CHECK(load_footprints(dir / "one.json") == one);
    const std::vector<FootprintTable> many{build_quad_footprint({8, 4}), build_square_footprint({8, 4}, 4)};
    save_footprints(dir / "many.json", many);
    CHECK(load_footprints(dir / "many.json") == many);
  }
}
