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

#include "lusa/mcdm.h"

#include <algorithm>
#include <cstdio>
#include <fstream>

namespace lusa::mcdm {

namespace {

using nlohmann::json;

std::vector<double> number_list(const json &j, const std::string &what) {
  if (!j.is_array()) throw ConfigError(what + " must be an array of numbers");
  std::vector<double> out;
  for (const auto &v : j) {
    if (!v.is_number()) throw ConfigError(what + " must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

FactorOp parse_op(const json &j, const std::string &factor) {
  const std::string where = "factor '" + factor + "'";
  if (!j.is_object() || !j.contains("op")) {
    throw ConfigError(where + ": pipeline step needs an 'op'");
  }
  const std::string op = j.at("op").get<std::string>();
  if (op == "reclassify") {
    ReclassifyOp r;
    for (const auto &row : j.value("table", json::array())) {
      auto v = number_list(row, where + " reclassify row");
      if (v.size() != 3) throw ConfigError(where + ": reclassify rows are [lo, hi, value]");
      r.table.push_back({v[0], v[1], v[2]});
    }
    if (j.contains("default") && !j.at("default").is_null()) {
      r.fallback = j.at("default").get<double>();
    }
    return r;
  }
  if (op == "distance") {
    DistanceOp d;
    if (j.contains("target_in")) d.target_in = number_list(j.at("target_in"), where + " target_in");
    return d;
  }
  if (op == "standardize") {
    StandardizeOp s;
    const std::string dir = j.value("direction", "increasing");
    auto parsed = raster::parse_direction(dir);
    if (!parsed) throw ConfigError(where + ": unknown direction '" + dir + "'");
    s.direction = *parsed;
    if (j.contains("control_points")) {
      auto cp = number_list(j.at("control_points"), where + " control_points");
      if (cp.size() != 2 || !(cp[0] < cp[1])) {
        throw ConfigError(where + ": control_points must be [lo, hi] with lo < hi");
      }
      s.control = raster::ControlPoints{cp[0], cp[1]};
    }
    return s;
  }
  throw ConfigError(where + ": unknown op '" + op + "'");
}

ConstraintSpec parse_constraint(const json &j, std::size_t index) {
  ConstraintSpec c;
  c.name = j.value("name", "constraint_" + std::to_string(index + 1));
  if (!j.contains("layer")) throw ConfigError("constraint '" + c.name + "' lacks a layer");
  c.layer = j.at("layer").get<std::string>();
  int predicates = 0;
  if (j.contains("value_in")) {
    c.predicate = Predicate::kValueIn;
    c.values = number_list(j.at("value_in"), "value_in");
    ++predicates;
  }
  if (j.contains("value_not_in")) {
    c.predicate = Predicate::kValueNotIn;
    c.values = number_list(j.at("value_not_in"), "value_not_in");
    ++predicates;
  }
  if (j.contains("distance_lt")) {
    c.predicate = Predicate::kDistanceLt;
    c.distance_m = j.at("distance_lt").get<double>();
    if (j.contains("target_in")) c.target_in = number_list(j.at("target_in"), "target_in");
    ++predicates;
  }
  if (predicates != 1) {
    throw ConfigError("constraint '" + c.name +
                      "' needs exactly one of value_in, value_not_in, distance_lt");
  }
  return c;
}

bool contains(const std::vector<double> &set, double v) {
  return std::find(set.begin(), set.end(), v) != set.end();
}

std::function<bool(double)> target_predicate(const std::vector<double> &target_in) {
  if (target_in.empty()) return [](double v) { return v != 0; };
  return [&target_in](double v) { return contains(target_in, v); };
}

const Raster &layer_of(const LayerSet &layers, const std::string &id,
                       const std::string &stage) {
  auto it = layers.find(id);
  if (it == layers.end()) throw StageError(stage, "layer '" + id + "' is not loaded");
  return it->second;
}

std::string op_name(const FactorOp &op) {
  switch (op.index()) {
    case 0: return "reclassify";
    case 1: return "distance";
    default: return "standardize";
  }
}

std::vector<ConstraintSpec> effective_constraints(const ScenarioConfig &config,
                                                  std::vector<std::string> &warnings) {
  std::vector<ConstraintSpec> out = config.constraints;
  if (config.from_ontology) {
    std::ifstream in(*config.from_ontology, std::ios::binary);
    if (!in) throw ConfigError("cannot read criteria digest " + config.from_ontology->string());
    json digest;
    try {
      in >> digest;
    } catch (const json::exception &e) {
      throw ConfigError("criteria digest " + config.from_ontology->string() + ": " + e.what());
    }
    auto extra = constraints_from_digest(digest, config.layer_map, warnings);
    out.insert(out.end(), extra.begin(), extra.end());
  }
  return out;
}

}  // namespace

ScenarioConfig parse_scenario(const nlohmann::json &j,
                              const std::filesystem::path &base_dir) {
  if (!j.is_object()) throw ConfigError("scenario must be a JSON object");
  ScenarioConfig c;
  try {
    const json layers = j.value("layers", json::object());
    for (const auto &[id, file] : layers.items()) {
      c.layers[id] = base_dir / file.get<std::string>();
    }
    const json constraints = j.value("constraints", json::array());
    for (std::size_t i = 0; i < constraints.size(); ++i) {
      c.constraints.push_back(parse_constraint(constraints[i], i));
    }
    const json factors = j.value("factors", json::array());
    for (std::size_t i = 0; i < factors.size(); ++i) {
      const json &fj = factors[i];
      FactorSpec f;
      f.name = fj.value("name", "factor_" + std::to_string(i + 1));
      if (!fj.contains("layer")) throw ConfigError("factor '" + f.name + "' lacks a layer");
      f.layer = fj.at("layer").get<std::string>();
      f.weight = fj.value("weight", 1.0);
      if (!(f.weight >= 0)) throw ConfigError("factor '" + f.name + "' has a negative weight");
      for (const auto &step : fj.value("pipeline", json::array())) {
        f.pipeline.push_back(parse_op(step, f.name));
      }
      c.factors.push_back(std::move(f));
    }
    c.output = j.value("output", "suitability");
    if (j.contains("from_ontology") && !j.at("from_ontology").is_null()) {
      c.from_ontology = base_dir / j.at("from_ontology").get<std::string>();
    }
    const json layer_map = j.value("layer_map", json::object());
    for (const auto &[object, layer] : layer_map.items()) {
      c.layer_map[object] = layer.get<std::string>();
    }
  } catch (const json::exception &e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }

  if (c.factors.empty()) throw ConfigError("scenario needs at least one factor");
  auto check = [&](const std::string &layer, const std::string &user) {
    if (c.layers.count(layer) == 0) {
      throw ConfigError(user + " references unknown layer '" + layer + "'");
    }
  };
  for (const auto &f : c.factors) check(f.layer, "factor '" + f.name + "'");
  for (const auto &k : c.constraints) check(k.layer, "constraint '" + k.name + "'");
  for (const auto &[object, layer] : c.layer_map) check(layer, "layer_map entry '" + object + "'");
  return c;
}

ScenarioConfig load_scenario(const std::filesystem::path &file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("cannot read scenario " + file.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception &e) {
    throw ConfigError(file.string() + ": " + e.what());
  }
  return parse_scenario(j, file.parent_path());
}

Raster build_constraint(const ConstraintSpec &spec, const LayerSet &layers) {
  const std::string stage = "constraint:" + spec.name;
  const Raster &layer = layer_of(layers, spec.layer, stage);
  Raster out = layer;
  out.nodata = raster::kDefaultNodata;
  // Nodata cells are treated as forbidden so the mask stays strictly 0/1.
  const raster::Mask valid = layer.valid();
  raster::Mask forbidden;
  switch (spec.predicate) {
    case Predicate::kValueIn:
    case Predicate::kValueNotIn: {
      const bool in = spec.predicate == Predicate::kValueIn;
      forbidden = layer.cells.unaryExpr([&](double v) {
        return contains(spec.values, v) == in;
      });
      break;
    }
    case Predicate::kDistanceLt: {
      Raster dist;
      try {
        dist = raster::distance_transform(layer, target_predicate(spec.target_in));
      } catch (const raster::TransformError &e) {
        throw StageError(stage, e.what());
      }
      forbidden = dist.cells < spec.distance_m;
      break;
    }
  }
  forbidden = forbidden || !valid;
  out.cells = (!forbidden).cast<double>();
  return out;
}

std::vector<ConstraintSpec> constraints_from_digest(
    const nlohmann::json &digest, const std::map<std::string, std::string> &layer_map,
    std::vector<std::string> &warnings) {
  std::vector<ConstraintSpec> out;
  for (const auto &c : digest.value("constraints", json::array())) {
    const std::string object = c.at("object").get<std::string>();
    const double d = c.at("distance_m").get<double>();
    auto it = layer_map.find(object);
    if (it == layer_map.end()) {
      warnings.push_back("digest object '" + object + "' has no layer mapping");
      continue;
    }
    ConstraintSpec spec;
    spec.name = "digest_" + std::to_string(out.size() + 1) + "_" + object;
    spec.layer = it->second;
    spec.predicate = Predicate::kDistanceLt;
    spec.distance_m = d;
    out.push_back(std::move(spec));
  }
  return out;
}

ScenarioResult run_scenario(const ScenarioConfig &config, const LayerSet &layers,
                            const std::optional<std::vector<double>> &weights) {
  if (config.factors.empty()) throw ConfigError("scenario needs at least one factor");
  if (weights && weights->size() != config.factors.size()) {
    throw ConfigError("expected " + std::to_string(config.factors.size()) +
                      " weights, got " + std::to_string(weights->size()));
  }
  ScenarioResult result;
  for (const auto &[id, r] : layers) result.report.push_back({"input:" + id, raster::stats(r)});

  std::vector<Raster> factor_out;
  for (const auto &f : config.factors) {
    const std::string stage = "factor:" + f.name;
    Raster cur = layer_of(layers, f.layer, stage);
    std::size_t step = 0;
    for (const auto &op : f.pipeline) {
      ++step;
      try {
        if (const auto *r = std::get_if<ReclassifyOp>(&op)) {
          cur = raster::reclassify(cur, r->table, r->fallback);
        } else if (const auto *d = std::get_if<DistanceOp>(&op)) {
          cur = raster::distance_transform(cur, target_predicate(d->target_in));
        } else {
          const auto &s = std::get<StandardizeOp>(op);
          cur = raster::standardize(cur, s.direction, s.control);
        }
      } catch (const StageError &) {
        throw;
      } catch (const std::exception &e) {
        throw StageError(stage + ":" + op_name(op), e.what());
      }
      const std::string name = f.name + "_" + std::to_string(step) + "_" + op_name(op);
      result.report.push_back({stage + ":" + op_name(op), raster::stats(cur)});
      result.intermediates.emplace_back(name, cur);
    }
    factor_out.push_back(std::move(cur));
  }

  std::vector<Raster> masks;
  for (const auto &spec : effective_constraints(config, result.warnings)) {
    masks.push_back(build_constraint(spec, layers));
    result.report.push_back({"constraint:" + spec.name, raster::stats(masks.back())});
    result.intermediates.emplace_back("constraint_" + spec.name, masks.back());
  }

  std::vector<raster::WeightedFactor> wf;
  for (std::size_t i = 0; i < factor_out.size(); ++i) {
    wf.push_back({&factor_out[i], weights ? (*weights)[i] : config.factors[i].weight});
  }
  std::vector<const Raster *> mask_ptrs;
  for (const auto &m : masks) mask_ptrs.push_back(&m);
  try {
    result.suitability = raster::wlc_combine(wf, mask_ptrs);
  } catch (const std::exception &e) {
    throw StageError("wlc", e.what());
  }
  result.report.push_back({"wlc:" + config.output, raster::stats(result.suitability)});
  return result;
}

ScenarioResult run_scenario(const ScenarioConfig &config,
                            const std::optional<std::vector<double>> &weights) {
  LayerSet layers;
  for (const auto &[id, path] : config.layers) {
    try {
      layers.emplace(id, raster::load_ascii_grid(path.string()));
    } catch (const raster::ParseError &e) {
      throw ConfigError("layer '" + id + "': " + e.what());
    }
  }
  return run_scenario(config, layers, weights);
}

std::string format_report(const ScenarioResult &result) {
  std::size_t width = 5;
  for (const auto &r : result.report) width = std::max(width, r.name.size());
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s %12s %12s %12s %8s\n", static_cast<int>(width),
                "layer", "min", "max", "mean", "cells");
  out += buf;
  for (const auto &r : result.report) {
    std::snprintf(buf, sizeof buf, "%-*s %12.3f %12.3f %12.3f %8zu\n",
                  static_cast<int>(width), r.name.c_str(), r.stats.min, r.stats.max,
                  r.stats.mean, r.stats.valid);
    out += buf;
  }
  return out;
}

}  // namespace lusa::mcdm
