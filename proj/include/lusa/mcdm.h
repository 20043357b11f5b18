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

#ifndef LUSA_MCDM_H_
#define LUSA_MCDM_H_

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "lusa/raster.h"

namespace lusa::mcdm {

using raster::ConfigError;
using raster::Raster;

// A failure inside one scenario stage, e.g. "constraint:water_buffer".
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string &message)
      : std::runtime_error("stage '" + stage + "': " + message),
        stage_(std::move(stage)) {}
  const std::string &stage() const { return stage_; }

 private:
  std::string stage_;
};

struct ReclassifyOp {
  std::vector<raster::ReclassRange> table;
  std::optional<double> fallback;
};
// Empty target_in means every nonzero cell is a target.
struct DistanceOp {
  std::vector<double> target_in;
};
struct StandardizeOp {
  raster::Direction direction = raster::Direction::kIncreasing;
  std::optional<raster::ControlPoints> control;
};
using FactorOp = std::variant<ReclassifyOp, DistanceOp, StandardizeOp>;

struct FactorSpec {
  std::string name;
  std::string layer;
  std::vector<FactorOp> pipeline;
  double weight = 1.0;
};

enum class Predicate { kValueIn, kValueNotIn, kDistanceLt };

// Cells matching the predicate are forbidden (0).
struct ConstraintSpec {
  std::string name;
  std::string layer;
  Predicate predicate = Predicate::kValueIn;
  std::vector<double> values;
  double distance_m = 0;
  std::vector<double> target_in;  // for kDistanceLt; empty means nonzero
};

struct ScenarioConfig {
  std::map<std::string, std::filesystem::path> layers;
  std::vector<ConstraintSpec> constraints;
  std::vector<FactorSpec> factors;
  std::string output = "suitability";
  std::optional<std::filesystem::path> from_ontology;
  std::map<std::string, std::string> layer_map;
};

// Relative layer and digest paths resolve against base_dir.
ScenarioConfig parse_scenario(const nlohmann::json &j,
                              const std::filesystem::path &base_dir);
ScenarioConfig load_scenario(const std::filesystem::path &file);

using LayerSet = std::map<std::string, Raster>;

Raster build_constraint(const ConstraintSpec &spec, const LayerSet &layers);

struct LayerReport {
  std::string name;
  raster::Stats stats;
};

struct ScenarioResult {
  Raster suitability;
  std::vector<std::pair<std::string, Raster>> intermediates;
  std::vector<LayerReport> report;
  std::vector<std::string> warnings;
};

// Buffer constraints for each digest object that has a layer mapping;
// unmapped objects are returned as warnings.
std::vector<ConstraintSpec> constraints_from_digest(
    const nlohmann::json &digest, const std::map<std::string, std::string> &layer_map,
    std::vector<std::string> &warnings);

ScenarioResult run_scenario(const ScenarioConfig &config, const LayerSet &layers,
                            const std::optional<std::vector<double>> &weights =
                                std::nullopt);
// Loads every layer file first; a missing one raises ConfigError naming it.
ScenarioResult run_scenario(const ScenarioConfig &config,
                            const std::optional<std::vector<double>> &weights =
                                std::nullopt);

std::string format_report(const ScenarioResult &result);

}  // namespace lusa::mcdm

#endif  // LUSA_MCDM_H_
