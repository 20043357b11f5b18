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

#include <algorithm>
#include <cmath>
#include <limits>

#include "lusa/raster.h"

namespace lusa::raster {

bool Raster::operator==(const Raster &other) const {
  return same_grid(*this, other) && nodata == other.nodata &&
         (cells == other.cells).all();
}

Raster make_raster(Eigen::Index nrows, Eigen::Index ncols, double cellsize,
                   double fill) {
  if (nrows < 1 || ncols < 1) throw ConfigError("raster must be at least 1x1");
  if (!(cellsize > 0)) throw ConfigError("cellsize must be positive");
  Raster r;
  r.cells = Grid::Constant(nrows, ncols, fill);
  r.cellsize = cellsize;
  return r;
}

bool same_grid(const Raster &a, const Raster &b) {
  return a.nrows() == b.nrows() && a.ncols() == b.ncols() &&
         a.cellsize == b.cellsize && a.xllcorner == b.xllcorner &&
         a.yllcorner == b.yllcorner;
}

Raster map_cells(const Raster &like, const std::function<double(double)> &f) {
  Raster out = like;
  out.cells = like.cells.unaryExpr([&](double v) {
    return v == like.nodata ? like.nodata : f(v);
  });
  return out;
}

Stats stats(const Raster &r) {
  Stats s;
  const Mask ok = r.valid();
  s.valid = static_cast<std::size_t>(ok.count());
  if (s.valid == 0) return s;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  s.min = ok.select(r.cells, kInf).minCoeff();
  s.max = ok.select(r.cells, -kInf).maxCoeff();
  s.mean = ok.select(r.cells, 0.0).sum() / static_cast<double>(s.valid);
  return s;
}

Raster reclassify(const Raster &r, const std::vector<ReclassRange> &table,
                  std::optional<double> fallback) {
  std::vector<ReclassRange> sorted = table;
  for (const auto &e : sorted) {
    if (!(e.lo <= e.hi)) throw ConfigError("reclassify range has lo > hi");
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const auto &a, const auto &b) { return a.lo < b.lo; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].lo <= sorted[i - 1].hi) {
      throw ConfigError("reclassify ranges overlap");
    }
  }
  const double miss = fallback.value_or(r.nodata);
  return map_cells(r, [&](double v) {
    auto it = std::upper_bound(
        sorted.begin(), sorted.end(), v,
        [](double x, const ReclassRange &e) { return x < e.lo; });
    if (it != sorted.begin() && v <= std::prev(it)->hi) return std::prev(it)->value;
    return miss;
  });
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// d[i] = min_q f[q] + (i - q)^2, over the lower envelope of the finite
// parabolas only, so an infinite f never enters the arithmetic.
void envelope_1d(const std::vector<double> &f, std::vector<double> &d,
                 std::vector<Eigen::Index> &v, std::vector<double> &z) {
  const auto n = static_cast<Eigen::Index>(f.size());
  Eigen::Index k = -1;
  for (Eigen::Index q = 0; q < n; ++q) {
    if (f[q] == kInf) continue;
    const double fq = f[q] + static_cast<double>(q * q);
    double s = -kInf;
    while (k >= 0) {
      const Eigen::Index p = v[k];
      s = (fq - (f[p] + static_cast<double>(p * p))) /
          static_cast<double>(2 * (q - p));
      if (s > z[k]) break;
      --k;
    }
    if (k < 0) s = -kInf;
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  if (k < 0) {
    std::fill(d.begin(), d.end(), kInf);
    return;
  }
  Eigen::Index j = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    while (z[j + 1] < static_cast<double>(i)) ++j;
    const double dx = static_cast<double>(i - v[j]);
    d[i] = dx * dx + f[v[j]];
  }
}

}  // namespace

Raster distance_transform(const Raster &r,
                          const std::function<bool(double)> &target) {
  const Eigen::Index rows = r.nrows();
  const Eigen::Index cols = r.ncols();
  Mask is_target(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double v = r.cells(i, j);
      is_target(i, j) = v != r.nodata && target(v);
    }
  }
  if (!is_target.any()) throw TransformError("no target cells");

  // Squared vertical distance to the nearest target in each column.
  Grid g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    double last = -1;
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (is_target(i, j)) last = static_cast<double>(i);
      g(i, j) = last < 0 ? kInf : static_cast<double>(i) - last;
    }
    last = -1;
    for (Eigen::Index i = rows - 1; i >= 0; --i) {
      if (is_target(i, j)) last = static_cast<double>(i);
      if (last >= 0) g(i, j) = std::min(g(i, j), last - static_cast<double>(i));
    }
  }
  g = g.square();

  Raster out = r;
  std::vector<double> f(cols), d(cols), z(cols + 1);
  std::vector<Eigen::Index> v(cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) f[j] = g(i, j);
    envelope_1d(f, d, v, z);
    for (Eigen::Index j = 0; j < cols; ++j) {
      out.cells(i, j) = r.cells(i, j) == r.nodata
                            ? r.nodata
                            : std::sqrt(d[j]) * r.cellsize;
    }
  }
  return out;
}

std::optional<Direction> parse_direction(std::string_view name) {
  if (name == "increasing") return Direction::kIncreasing;
  if (name == "decreasing") return Direction::kDecreasing;
  return std::nullopt;
}

Raster standardize(const Raster &r, Direction direction,
                   std::optional<ControlPoints> control) {
  ControlPoints cp;
  if (control) {
    cp = *control;
    if (!(cp.lo < cp.hi)) throw ConfigError("control points need lo < hi");
  } else {
    const Stats s = stats(r);
    if (s.valid == 0 || !(s.min < s.max)) {
      throw ConfigError("degenerate range: raster is constant");
    }
    cp = {s.min, s.max};
  }
  const double span = cp.hi - cp.lo;
  return map_cells(r, [&](double v) {
    double x = 0;
    if (v <= cp.lo) {
      x = 0;
    } else if (v >= cp.hi) {
      x = 255;
    } else {
      x = 255.0 * (v - cp.lo) / span;
    }
    return direction == Direction::kIncreasing ? x : 255.0 - x;
  });
}

Raster wlc_combine(const std::vector<WeightedFactor> &factors,
                   const std::vector<const Raster *> &constraints) {
  if (factors.empty()) throw ConfigError("wlc needs at least one factor");
  const Raster &base = *factors.front().raster;
  double total = 0;
  for (const auto &f : factors) {
    if (!same_grid(base, *f.raster)) throw ConfigError("factor shape mismatch");
    if (!(f.weight >= 0)) throw ConfigError("factor weights must be >= 0");
    total += f.weight;
  }
  if (!(total > 0)) throw ConfigError("factor weights sum to zero");
  for (const Raster *c : constraints) {
    if (!same_grid(base, *c)) throw ConfigError("constraint shape mismatch");
  }

  const auto rows = base.nrows();
  const auto cols = base.ncols();
  Grid sum = Grid::Zero(rows, cols);
  Grid lo = Grid::Constant(rows, cols, kInf);
  Grid hi = Grid::Constant(rows, cols, -kInf);
  Mask missing = Mask::Constant(rows, cols, false);
  for (const auto &f : factors) {
    const Grid &x = f.raster->cells;
    missing = missing || (x == f.raster->nodata);
    sum += f.weight * x;
    lo = lo.min(x);
    hi = hi.max(x);
  }
  // Clamping to the factor range only absorbs rounding; the weighted mean
  // already lies inside it.
  Grid s = (sum / total).max(lo).min(hi);
  for (const Raster *c : constraints) {
    s *= (c->cells != 0).cast<double>();
  }
  Raster out = base;
  out.cells = missing.select(Grid::Constant(rows, cols, base.nodata), s);
  return out;
}

}  // namespace lusa::raster
