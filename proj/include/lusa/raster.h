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

#ifndef LUSA_RASTER_H_
#define LUSA_RASTER_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace lusa::raster {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TransformError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Grid = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr double kDefaultNodata = -9999.0;

// Row 0 is the northern edge, as in the ASCII grid body.
struct Raster {
  Grid cells;
  double cellsize = 1.0;
  double xllcorner = 0.0;
  double yllcorner = 0.0;
  double nodata = kDefaultNodata;

  Eigen::Index nrows() const { return cells.rows(); }
  Eigen::Index ncols() const { return cells.cols(); }
  Mask valid() const { return cells != nodata; }
  bool operator==(const Raster &other) const;
};

// Throws ConfigError when nrows/ncols < 1 or cellsize <= 0.
Raster make_raster(Eigen::Index nrows, Eigen::Index ncols, double cellsize,
                   double fill = 0.0);
// Same shape, cellsize and origin.
bool same_grid(const Raster &a, const Raster &b);
// Copy of `like` with every valid cell replaced by f(value).
Raster map_cells(const Raster &like, const std::function<double(double)> &f);

struct Stats {
  double min = 0;
  double max = 0;
  double mean = 0;
  std::size_t valid = 0;
};
Stats stats(const Raster &r);

// Closed range [lo, hi] -> value.
struct ReclassRange {
  double lo = 0;
  double hi = 0;
  double value = 0;
};
// Unmatched cells get `fallback`, or nodata when it is empty.
Raster reclassify(const Raster &r, const std::vector<ReclassRange> &table,
                  std::optional<double> fallback = std::nullopt);

// Exact Euclidean distance in map units to the nearest cell whose value
// satisfies `target`. Nodata cells never count as targets and stay nodata.
Raster distance_transform(const Raster &r,
                          const std::function<bool(double)> &target);

enum class Direction { kIncreasing, kDecreasing };
std::optional<Direction> parse_direction(std::string_view name);

struct ControlPoints {
  double lo = 0;
  double hi = 0;
};
Raster standardize(const Raster &r, Direction direction,
                   std::optional<ControlPoints> control = std::nullopt);

struct WeightedFactor {
  const Raster *raster = nullptr;
  double weight = 1.0;
};
Raster wlc_combine(const std::vector<WeightedFactor> &factors,
                   const std::vector<const Raster *> &constraints);

// ESRI ASCII grid.
std::string write_ascii_grid(const Raster &r);
Raster read_ascii_grid(std::string_view text);
Raster load_ascii_grid(const std::string &path);

// Binary PGM (P5); cells are rounded then clamped to [0, 255], nodata is 0.
std::string write_pgm(const Raster &r);
// Pixel values of a P5 image, row-major.
std::vector<std::uint8_t> read_pgm(std::string_view data, int &width,
                                   int &height);

}  // namespace lusa::raster

#endif  // LUSA_RASTER_H_
