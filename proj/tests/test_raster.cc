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
#include <random>

#include "doctest.h"
#include "lusa/raster.h"
#include "oracles.h"

using namespace lusa::raster;

namespace {

Raster from_rows(std::initializer_list<std::initializer_list<double>> rows,
                 double cellsize = 1.0) {
  const auto nr = static_cast<Eigen::Index>(rows.size());
  const auto nc = static_cast<Eigen::Index>(rows.begin()->size());
  Raster r = make_raster(nr, nc, cellsize);
  Eigen::Index i = 0;
  for (const auto &row : rows) {
    Eigen::Index j = 0;
    for (double v : row) r.cells(i, j++) = v;
    ++i;
  }
  return r;
}

Raster random_raster(std::mt19937 &rng, Eigen::Index nr, Eigen::Index nc,
                     double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Raster r = make_raster(nr, nc, 1.0);
  for (Eigen::Index i = 0; i < nr; ++i) {
    for (Eigen::Index j = 0; j < nc; ++j) r.cells(i, j) = u(rng);
  }
  return r;
}

Raster mask_of(std::mt19937 &rng, Eigen::Index nr, Eigen::Index nc) {
  Raster m = make_raster(nr, nc, 1.0);
  for (Eigen::Index i = 0; i < nr; ++i) {
    for (Eigen::Index j = 0; j < nc; ++j) m.cells(i, j) = rng() % 4 ? 1.0 : 0.0;
  }
  return m;
}

}  // namespace

TEST_CASE("reclassify") {
  Raster r = from_rows({{1, 2, 7}});
  Raster out = reclassify(r, {{1, 1, 200}, {2, 2, 120}}, 0.0);
  CHECK(out.cells(0, 0) == 200);
  CHECK(out.cells(0, 1) == 120);
  CHECK(out.cells(0, 2) == 0);
  CHECK(reclassify(r, {{1, 1, 200}}).cells(0, 2) == r.nodata);
  CHECK_THROWS_AS(reclassify(r, {{0, 1.5, 5}, {1.5, 3, 6}}), ConfigError);  // closed ranges share 1.5

  CHECK_THROWS_AS(reclassify(r, {{1, 3, 1}, {2, 4, 2}}), ConfigError);
  CHECK_THROWS_AS(reclassify(r, {{3, 1, 1}}), ConfigError);

  Raster nd = from_rows({{1, kDefaultNodata}});
  CHECK(reclassify(nd, {{-1e9, 1e9, 5}}, 0.0).cells(0, 1) == kDefaultNodata);
}

TEST_CASE("distance transform examples") {
  Raster line = from_rows({{1, 0, 0}}, 10.0);
  Raster d = distance_transform(line, [](double v) { return v != 0; });
  CHECK(d.cells(0, 0) == 0);
  CHECK(d.cells(0, 1) == 10);
  CHECK(d.cells(0, 2) == 20);

  Raster tri = make_raster(4, 5, 1.0);
  tri.cells(0, 0) = 1;
  Raster e = distance_transform(tri, [](double v) { return v == 1; });
  CHECK(e.cells(3, 4) == 5.0);
  CHECK(e.cells(3, 0) == 3.0);

  CHECK_THROWS_AS(distance_transform(make_raster(3, 3, 1.0), [](double v) { return v != 0; }),
                  TransformError);

  Raster nd = from_rows({{1, kDefaultNodata, 0}});
  Raster f = distance_transform(nd, [](double v) { return v == 1; });
  CHECK(f.cells(0, 1) == kDefaultNodata);
  CHECK(f.cells(0, 2) == 2.0);
}

TEST_CASE("distance transform equals brute force") {
  std::mt19937 rng(23);
  for (int round = 0; round < 150; ++round) {
    const Eigen::Index nr = 1 + rng() % 14, nc = 1 + rng() % 14;
    Raster r = make_raster(nr, nc, 1.0 + static_cast<double>(rng() % 50));
    bool any = false;
    for (Eigen::Index i = 0; i < nr; ++i) {
      for (Eigen::Index j = 0; j < nc; ++j) {
        const unsigned k = rng() % 10;
        r.cells(i, j) = k == 0 ? 1.0 : (k == 1 ? r.nodata : 0.0);
        any = any || k == 0;
      }
    }
    auto target = [](double v) { return v == 1.0; };
    if (!any) {
      CHECK_THROWS_AS(distance_transform(r, target), TransformError);
      continue;
    }
    const Raster fast = distance_transform(r, target);
    const Raster slow = lusa::oracle::brute_edt(r, target);
    CHECK(fast == slow);
  }
}

TEST_CASE("standardize") {
  Raster r = from_rows({{10, 20, 30}});
  Raster up = standardize(r, Direction::kIncreasing);
  CHECK(up.cells(0, 0) == 0);
  CHECK(up.cells(0, 1) == 127.5);
  CHECK(up.cells(0, 2) == 255);
  Raster down = standardize(r, Direction::kDecreasing);
  CHECK(down.cells(0, 0) == 255);
  CHECK(down.cells(0, 2) == 0);

  Raster cp = standardize(from_rows({{-5, 0, 100, 250}}), Direction::kIncreasing,
                          ControlPoints{0, 200});
  CHECK(cp.cells(0, 0) == 0);
  CHECK(cp.cells(0, 2) == 127.5);
  CHECK(cp.cells(0, 3) == 255);

  CHECK_THROWS_AS(standardize(from_rows({{4, 4}}), Direction::kIncreasing), ConfigError);
  CHECK_NOTHROW(standardize(from_rows({{4, 4}}), Direction::kIncreasing, ControlPoints{0, 8}));
  CHECK_THROWS_AS(standardize(r, Direction::kIncreasing, ControlPoints{5, 5}), ConfigError);
  CHECK(parse_direction("decreasing") == Direction::kDecreasing);
  CHECK_FALSE(parse_direction("sideways").has_value());

  Raster nd = from_rows({{0, kDefaultNodata, 2}});
  CHECK(standardize(nd, Direction::kIncreasing).cells(0, 1) == kDefaultNodata);
}

TEST_CASE("standardize properties") {
  std::mt19937 rng(29);
  for (int round = 0; round < 100; ++round) {
    Raster r = random_raster(rng, 1 + rng() % 8, 2 + rng() % 8, -500, 500);
    const Raster up = standardize(r, Direction::kIncreasing);
    const Raster down = standardize(r, Direction::kDecreasing);
    CHECK((up.cells + down.cells - 255.0).abs().maxCoeff() < 1e-9);
    CHECK(up.cells.minCoeff() >= 0);
    CHECK(up.cells.maxCoeff() <= 255);
    for (Eigen::Index a = 0; a < r.cells.size(); ++a) {
      for (Eigen::Index b = 0; b < r.cells.size(); ++b) {
        if (r.cells(a) <= r.cells(b)) CHECK(up.cells(a) <= up.cells(b));
      }
    }
  }
}

TEST_CASE("weighted linear combination examples") {
  Raster a = from_rows({{200, 100}});
  Raster b = from_rows({{100, 200}});
  Raster c = from_rows({{1, 0}});
  Raster out = wlc_combine({{&a, 0.5}, {&b, 0.5}}, {});
  CHECK(out.cells(0, 0) == 150);

  Raster p = from_rows({{175}});
  Raster q = from_rows({{100}});
  CHECK(wlc_combine({{&p, 0.6}, {&q, 0.4}}, {}).cells(0, 0) == doctest::Approx(145));
  CHECK(wlc_combine({{&p, 3}, {&q, 2}}, {}).cells(0, 0) == doctest::Approx(145));

  Raster masked = wlc_combine({{&a, 1}, {&b, 1}}, {&c});
  CHECK(masked.cells(0, 0) == 150);
  CHECK(masked.cells(0, 1) == 0);

  Raster nd = from_rows({{kDefaultNodata, 100}});
  CHECK(wlc_combine({{&nd, 1}, {&b, 1}}, {}).cells(0, 0) == kDefaultNodata);

  Raster wrong = from_rows({{1, 2, 3}});
  CHECK_THROWS_AS(wlc_combine({{&a, 1}, {&wrong, 1}}, {}), ConfigError);
  CHECK_THROWS_AS(wlc_combine({}, {}), ConfigError);
  CHECK_THROWS_AS(wlc_combine({{&a, -1}}, {}), ConfigError);
}

TEST_CASE("weighted linear combination properties") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> w(0.01, 5.0);
  for (int round = 0; round < 100; ++round) {
    const Eigen::Index nr = 1 + rng() % 6, nc = 1 + rng() % 6;
    const int k = 1 + static_cast<int>(rng() % 4);
    std::vector<Raster> fs;
    for (int i = 0; i < k; ++i) fs.push_back(random_raster(rng, nr, nc, 0, 255));
    std::vector<lusa::raster::WeightedFactor> wf, scaled;
    for (auto &f : fs) {
      const double x = w(rng);
      wf.push_back({&f, x});
      scaled.push_back({&f, x * 7.0});
    }
    const Raster m1 = mask_of(rng, nr, nc), m2 = mask_of(rng, nr, nc);
    const Raster free = wlc_combine(wf, {});
    const Raster constrained = wlc_combine(wf, {&m1, &m2});

    for (Eigen::Index c = 0; c < free.cells.size(); ++c) {
      double lo = 1e300, hi = -1e300, num = 0, den = 0;
      for (const auto &x : wf) {
        lo = std::min(lo, x.raster->cells(c));
        hi = std::max(hi, x.raster->cells(c));
        num += x.weight * x.raster->cells(c);
        den += x.weight;
      }
      // Convexity and agreement with the direct formula.
      CHECK(free.cells(c) >= lo);
      CHECK(free.cells(c) <= hi);
      CHECK(free.cells(c) == doctest::Approx(num / den));
      // A zero anywhere in a constraint annihilates the cell.
      const bool allowed = m1.cells(c) != 0 && m2.cells(c) != 0;
      CHECK(constrained.cells(c) == (allowed ? free.cells(c) : 0.0));
    }
    // Weights only matter up to scale.
    CHECK(((wlc_combine(scaled, {}).cells - free.cells).abs() < 1e-9).all());

    // Raising one factor never lowers the result.
    Raster bumped = fs[0];
    bumped.cells += 10.0;
    std::vector<lusa::raster::WeightedFactor> wb = wf;
    wb[0].raster = &bumped;
    CHECK((wlc_combine(wb, {}).cells >= free.cells - 1e-9).all());
  }
}

TEST_CASE("ascii grid round trip") {
  std::mt19937 rng(37);
  for (int round = 0; round < 30; ++round) {
    Raster r = random_raster(rng, 1 + rng() % 6, 1 + rng() % 6, -1e6, 1e6);
    r.cellsize = 12.5;
    r.xllcorner = 520000;
    r.yllcorner = 5590000.25;
    r.cells(0, 0) = r.nodata;
    const std::string text = write_ascii_grid(r);
    const Raster back = read_ascii_grid(text);
    CHECK(back == r);
    CHECK(write_ascii_grid(back) == text);
  }
  const Raster lower = read_ascii_grid(
      "NCOLS 2\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize 5\nnodata_value -1\n3 -1\n");
  CHECK(lower.ncols() == 2);
  CHECK(lower.nodata == -1);
  CHECK(lower.cellsize == 5);

  CHECK_THROWS_AS(read_ascii_grid("ncols 2\nnrows 1\n1 2\n"), ParseError);
  CHECK_THROWS_AS(read_ascii_grid("ncols 2\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize 1\n"
                                  "nodata_value -9999\n1\n"),
                  ParseError);
  CHECK_THROWS_AS(read_ascii_grid("ncols x\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize 1\n"
                                  "nodata_value -9999\n1\n"),
                  ParseError);
  CHECK_THROWS_AS(read_ascii_grid(""), ParseError);
}

TEST_CASE("pgm export") {
  Raster r = from_rows({{255.4, 0, -3, 127.5}, {300, kDefaultNodata, 1.49, 254.6}});
  const std::string pgm = write_pgm(r);
  int w = 0, h = 0;
  const auto px = read_pgm(pgm, w, h);
  CHECK(w == 4);
  CHECK(h == 2);
  CHECK(pgm.rfind("P5", 0) == 0);
  REQUIRE(px.size() == 8);
  CHECK(px[0] == 255);
  CHECK(px[1] == 0);
  CHECK(px[2] == 0);
  CHECK(px[3] == 128);
  CHECK(px[4] == 255);
  CHECK(px[5] == 0);
  CHECK(px[6] == 1);
  CHECK(px[7] == 255);

  const auto white = read_pgm(write_pgm(make_raster(3, 3, 1.0, 255.0)), w, h);
  CHECK(std::all_of(white.begin(), white.end(), [](auto v) { return v == 255; }));
  CHECK_THROWS_AS(read_pgm("P2\n1 1\n255\n", w, h), ParseError);
}

TEST_CASE("stats skip nodata") {
  Raster r = from_rows({{1, kDefaultNodata, 3}});
  const Stats s = stats(r);
  CHECK(s.min == 1);
  CHECK(s.max == 3);
  CHECK(s.mean == 2);
  CHECK(s.valid == 2);
}
