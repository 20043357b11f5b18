// Copyright 2026 The LUSA Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>

#include "doctest.h"
#include "lusa/mcdm.h"
#include "oracles.h"
#include "support.h"

using namespace lusa;
using namespace lusa::mcdm;
using nlohmann::json;

namespace {

// 5x5, cellsize 10: water in column 0, roads along row 4, land use codes.
LayerSet small_layers() {
  LayerSet layers;
  Raster water = raster::make_raster(5, 5, 10.0);
  water.cells.col(0).setConstant(1.0);
  Raster roads = raster::make_raster(5, 5, 10.0);
  roads.cells.row(4).setConstant(1.0);
  Raster landuse = raster::make_raster(5, 5, 10.0, 1.0);
  landuse.cells.col(0).setConstant(3.0);
  landuse.cells(0, 4) = 2.0;
  landuse.cells(1, 4) = 2.0;
  layers["water"] = water;
  layers["roads"] = roads;
  layers["landuse"] = landuse;
  return layers;
}

json small_scenario() {
  return json::parse(R"({
    "layers": {"water": "w.asc", "roads": "r.asc", "landuse": "l.asc"},
    "constraints": [
      {"name": "no_water", "layer": "landuse", "value_in": [3]}
    ],
    "factors": [
      {"name": "rating", "layer": "landuse", "weight": 2,
       "pipeline": [
         {"op": "reclassify", "table": [[1, 1, 200], [2, 2, 100]], "default": 0},
         {"op": "standardize", "direction": "increasing", "control_points": [0, 200]}]},
      {"name": "road", "layer": "roads", "weight": 1,
       "pipeline": [{"op": "distance"}, {"op": "standardize", "direction": "decreasing"}]}
    ],
    "layer_map": {"water_body": "water"}
  })");
}

// Independent evaluation of small_scenario over small_layers, plus an
// optional water buffer of `buffer_m` metres.
Raster expected_small(double w_rating, double w_road, double buffer_m) {
  LayerSet layers = small_layers();
  Raster out = raster::make_raster(5, 5, 10.0);
  double max_road = 0;
  for (int i = 0; i < 5; ++i) max_road = std::max(max_road, std::abs(4.0 - i) * 10.0);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const double lu = layers["landuse"].cells(i, j);
      const double rating = lu == 1 ? 255.0 : lu == 2 ? 127.5 : 0.0;
      const double dist_road = (4.0 - i) * 10.0;
      const double road = 255.0 - 255.0 * dist_road / max_road;
      double v = (w_rating * rating + w_road * road) / (w_rating + w_road);
      if (lu == 3) v = 0;
      if (buffer_m > 0 && j * 10.0 < buffer_m) v = 0;
      out.cells(i, j) = v;
    }
  }
  return out;
}

void check_close(const Raster &a, const Raster &b) {
  REQUIRE(a.nrows() == b.nrows());
  REQUIRE(a.ncols() == b.ncols());
  for (Eigen::Index c = 0; c < a.cells.size(); ++c) {
    CHECK(a.cells(c) == doctest::Approx(b.cells(c)));
  }
}

}  // namespace

TEST_CASE("constraint predicates") {
  LayerSet layers = small_layers();
  ConstraintSpec in{"c", "landuse", Predicate::kValueIn, {3}, 0, {}};
  Raster m = build_constraint(in, layers);
  CHECK(m.cells.col(0).isZero());
  CHECK((m.cells.rightCols(4) == 1.0).all());

  ConstraintSpec not_in{"c", "landuse", Predicate::kValueNotIn, {1}, 0, {}};
  Raster n = build_constraint(not_in, layers);
  CHECK(n.cells(2, 2) == 1.0);
  CHECK(n.cells(0, 4) == 0.0);
  CHECK(n.cells(0, 0) == 0.0);

  ConstraintSpec buffer{"b", "water", Predicate::kDistanceLt, {}, 25, {}};
  Raster b = build_constraint(buffer, layers);
  for (int j = 0; j < 5; ++j) {
    CHECK(b.cells(2, j) == (j * 10.0 < 25 ? 0.0 : 1.0));
  }

  ConstraintSpec none{"n", "landuse", Predicate::kValueIn, {99}, 0, {}};
  CHECK((build_constraint(none, layers).cells == 1.0).all());

  LayerSet with_nd = layers;
  with_nd["landuse"].cells(2, 2) = with_nd["landuse"].nodata;
  CHECK(build_constraint(none, with_nd).cells(2, 2) == 0.0);

  ConstraintSpec missing{"m", "nowhere", Predicate::kValueIn, {1}, 0, {}};
  CHECK_THROWS(build_constraint(missing, layers));
}

TEST_CASE("hand-built scenario matches an independent evaluation") {
  const ScenarioConfig cfg = parse_scenario(small_scenario(), "/tmp");
  CHECK(cfg.layers.at("water") == std::filesystem::path("/tmp/w.asc"));
  ScenarioResult res = run_scenario(cfg, small_layers());
  check_close(res.suitability, expected_small(2, 1, 0));
  CHECK(res.report.back().name == "wlc:suitability");
  bool saw_factor = false;
  for (const auto &[name, r] : res.intermediates) saw_factor |= name.rfind("rating_", 0) == 0;
  CHECK(saw_factor);
}

TEST_CASE("digest constraints add buffers") {
  json j = small_scenario();
  const ScenarioConfig cfg = parse_scenario(j, "/tmp");
  std::vector<std::string> warnings;
  json digest = json::parse(R"({"constraints": [
      {"object": "water_body", "distance_m": 20, "source_instance": "lusa:#Setback_1"},
      {"object": "pipeline", "distance_m": 50, "source_instance": "lusa:#Setback_2"}],
      "factors": [], "unresolved": []})");
  auto specs = constraints_from_digest(digest, cfg.layer_map, warnings);
  REQUIRE(specs.size() == 1);
  CHECK(specs[0].predicate == Predicate::kDistanceLt);
  CHECK(specs[0].distance_m == 20);
  CHECK(specs[0].layer == "water");
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("pipeline") != std::string::npos);

  ScenarioConfig with = cfg;
  with.constraints.insert(with.constraints.end(), specs.begin(), specs.end());
  check_close(run_scenario(with, small_layers()).suitability, expected_small(2, 1, 20));
}

TEST_CASE("one factor and no constraints yields the standardized factor") {
  json j = small_scenario();
  j["constraints"] = json::array();
  j["factors"].erase(0);
  const ScenarioConfig cfg = parse_scenario(j, "/tmp");
  LayerSet layers = small_layers();
  ScenarioResult res = run_scenario(cfg, layers);
  Raster dist = raster::distance_transform(layers["roads"], [](double v) { return v != 0; });
  Raster std_road = raster::standardize(dist, raster::Direction::kDecreasing);
  CHECK(res.suitability == std_road);
}

TEST_CASE("weights override") {
  const ScenarioConfig cfg = parse_scenario(small_scenario(), "/tmp");
  ScenarioResult base = run_scenario(cfg, small_layers());
  ScenarioResult alt = run_scenario(cfg, small_layers(), std::vector<double>{1, 3});
  check_close(alt.suitability, expected_small(1, 3, 0));
  CHECK_FALSE(alt.suitability == base.suitability);
  CHECK(alt.suitability.cells.col(0).isZero());
  CHECK_THROWS_AS(run_scenario(cfg, small_layers(), std::vector<double>{1}), ConfigError);
}

TEST_CASE("scenario validation") {
  json j = small_scenario();
  j["factors"][0]["layer"] = "nope";
  CHECK_THROWS_AS(parse_scenario(j, "/tmp"), ConfigError);
  json k = small_scenario();
  k["factors"] = json::array();
  CHECK_THROWS_AS(parse_scenario(k, "/tmp"), ConfigError);
  json op = small_scenario();
  op["factors"][0]["pipeline"][0]["op"] = "blur";
  CHECK_THROWS_AS(parse_scenario(op, "/tmp"), ConfigError);

  // Stage failures are reported by name.
  json flat = small_scenario();
  flat["factors"][1]["pipeline"] = json::parse(R"([{"op": "standardize", "direction": "increasing"}])");
  LayerSet layers = small_layers();
  layers["roads"].cells.setConstant(2.0);
  try {
    run_scenario(parse_scenario(flat, "/tmp"), layers);
    FAIL("expected StageError");
  } catch (const StageError &e) {
    CHECK(e.stage().find("road") != std::string::npos);
  }
}

TEST_CASE("missing layer file names the layer") {
  lusa::testing::TempDir dir("mcdm");
  const LayerSet layers = small_layers();
  lusa::testing::spit(dir.path() / "w.asc", raster::write_ascii_grid(layers.at("water")));
  lusa::testing::spit(dir.path() / "l.asc", raster::write_ascii_grid(layers.at("landuse")));
  const ScenarioConfig cfg = parse_scenario(small_scenario(), dir.path());
  try {
    run_scenario(cfg);
    FAIL("expected ConfigError");
  } catch (const ConfigError &e) {
    CHECK(std::string(e.what()).find("roads") != std::string::npos);
  }
  lusa::testing::spit(dir.path() / "r.asc", raster::write_ascii_grid(layers.at("roads")));
  check_close(run_scenario(cfg).suitability, expected_small(2, 1, 0));
}

TEST_CASE("bundled mini Regina scenario") {
  const ScenarioConfig cfg =
      load_scenario(lusa::testing::data_dir() / "scenarios" / "mini_regina.json");
  ScenarioResult res = run_scenario(cfg);
  CHECK(res.suitability.nrows() == 64);
  const raster::Stats s = raster::stats(res.suitability);
  CHECK(s.min == 0);
  CHECK(s.max <= 255);
  CHECK(s.max > 100);
  // Every cell within 100 m of water is forbidden.
  const Raster water = raster::load_ascii_grid(cfg.layers.at("water").string());
  const Raster d = oracle::brute_edt(water, [](double v) { return v != 0; });
  for (Eigen::Index c = 0; c < d.cells.size(); ++c) {
    if (d.cells(c) < 100) CHECK(res.suitability.cells(c) == 0);
  }
  CHECK_FALSE(format_report(res).empty());
}
