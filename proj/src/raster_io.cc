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
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lusa/raster.h"

namespace lusa::raster {

namespace {

void append_number(std::string &out, double v) {
  std::array<char, 32> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.append(buf.data(), res.ptr);
}

class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  std::string_view line() {
    const auto nl = text_.find('\n', pos_);
    std::string_view out = text_.substr(
        pos_, nl == std::string_view::npos ? std::string_view::npos : nl - pos_);
    pos_ = nl == std::string_view::npos ? text_.size() : nl + 1;
    if (!out.empty() && out.back() == '\r') out.remove_suffix(1);
    return out;
  }

  // Next whitespace-separated token, or empty at end of input.
  std::string_view token() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    const auto begin = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    return text_.substr(begin, pos_ - begin);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

std::optional<double> parse_double(std::string_view s) {
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    return std::nullopt;
  }
  return v;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string write_ascii_grid(const Raster &r) {
  std::string out;
  out += "ncols " + std::to_string(r.ncols()) + "\n";
  out += "nrows " + std::to_string(r.nrows()) + "\n";
  out += "xllcorner ";
  append_number(out, r.xllcorner);
  out += "\nyllcorner ";
  append_number(out, r.yllcorner);
  out += "\ncellsize ";
  append_number(out, r.cellsize);
  out += "\nNODATA_value ";
  append_number(out, r.nodata);
  out += "\n";
  for (Eigen::Index i = 0; i < r.nrows(); ++i) {
    for (Eigen::Index j = 0; j < r.ncols(); ++j) {
      if (j > 0) out.push_back(' ');
      append_number(out, r.cells(i, j));
    }
    out.push_back('\n');
  }
  return out;
}

Raster read_ascii_grid(std::string_view text) {
  static constexpr std::array<std::string_view, 6> kKeys = {
      "ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "nodata_value"};
  Scanner sc(text);
  std::array<double, 6> values{};
  for (std::size_t k = 0; k < kKeys.size(); ++k) {
    const std::string_view line = sc.line();
    std::istringstream fields{std::string(line)};
    std::string key, value, extra;
    fields >> key >> value;
    if (lower(key) != kKeys[k] || value.empty() || (fields >> extra)) {
      throw ParseError("ascii grid header line " + std::to_string(k + 1) +
                       ": expected '" + std::string(kKeys[k]) + " <value>'");
    }
    auto v = parse_double(value);
    if (!v) {
      throw ParseError("ascii grid header line " + std::to_string(k + 1) +
                       ": bad number '" + value + "'");
    }
    values[k] = *v;
  }
  const double ncols = values[0];
  const double nrows = values[1];
  if (ncols < 1 || nrows < 1 || ncols != std::floor(ncols) ||
      nrows != std::floor(nrows)) {
    throw ParseError("ascii grid: ncols and nrows must be positive integers");
  }
  if (!(values[4] > 0)) throw ParseError("ascii grid: cellsize must be positive");

  Raster r;
  r.cells.resize(static_cast<Eigen::Index>(nrows), static_cast<Eigen::Index>(ncols));
  r.xllcorner = values[2];
  r.yllcorner = values[3];
  r.cellsize = values[4];
  r.nodata = values[5];
  for (Eigen::Index i = 0; i < r.nrows(); ++i) {
    for (Eigen::Index j = 0; j < r.ncols(); ++j) {
      const std::string_view tok = sc.token();
      if (tok.empty()) {
        throw ParseError("ascii grid: expected " +
                         std::to_string(r.nrows() * r.ncols()) + " cells, got " +
                         std::to_string(i * r.ncols() + j));
      }
      auto v = parse_double(tok);
      if (!v) throw ParseError("ascii grid: bad cell value '" + std::string(tok) + "'");
      r.cells(i, j) = *v;
    }
  }
  if (!sc.token().empty()) throw ParseError("ascii grid: trailing cell values");
  return r;
}

Raster load_ascii_grid(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read raster " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return read_ascii_grid(ss.str());
  } catch (const ParseError &e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string write_pgm(const Raster &r) {
  std::string out = "P5\n" + std::to_string(r.ncols()) + " " +
                    std::to_string(r.nrows()) + "\n255\n";
  out.reserve(out.size() + static_cast<std::size_t>(r.cells.size()));
  for (Eigen::Index i = 0; i < r.nrows(); ++i) {
    for (Eigen::Index j = 0; j < r.ncols(); ++j) {
      const double v = r.cells(i, j);
      double px = 0;
      if (v != r.nodata && !std::isnan(v)) px = std::clamp(std::round(v), 0.0, 255.0);
      out.push_back(static_cast<char>(static_cast<std::uint8_t>(px)));
    }
  }
  return out;
}

std::vector<std::uint8_t> read_pgm(std::string_view data, int &width,
                                   int &height) {
  std::size_t pos = 0;
  auto next_field = [&]() {
    for (;;) {
      while (pos < data.size() && std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
      if (pos < data.size() && data[pos] == '#') {
        while (pos < data.size() && data[pos] != '\n') ++pos;
        continue;
      }
      break;
    }
    const auto begin = pos;
    while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
    return data.substr(begin, pos - begin);
  };
  if (next_field() != "P5") throw ParseError("pgm: expected P5 magic");
  auto w = parse_double(next_field());
  auto h = parse_double(next_field());
  auto maxval = parse_double(next_field());
  if (!w || !h || !maxval || *w < 1 || *h < 1 || *maxval != 255) {
    throw ParseError("pgm: bad header");
  }
  ++pos;  // single whitespace before the raster
  width = static_cast<int>(*w);
  height = static_cast<int>(*h);
  const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (data.size() < pos + n) throw ParseError("pgm: truncated pixel data");
  std::vector<std::uint8_t> out(n);
  std::copy_n(reinterpret_cast<const std::uint8_t *>(data.data() + pos), n, out.begin());
  return out;
}

}  // namespace lusa::raster
