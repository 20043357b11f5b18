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

#ifndef LUSA_PIPELINE_H_
#define LUSA_PIPELINE_H_

#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lusa::pipeline {

// Startup problems: bad config, missing resources, unreadable rules.
class PipelineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PipelineConfig {
  std::filesystem::path corpus_dir;
  std::filesystem::path gazetteer_index;
  std::vector<std::filesystem::path> rule_files;
  std::filesystem::path ontology_schema;
  std::filesystem::path resources_dir;
  std::filesystem::path factor_map;
  std::filesystem::path scenario;
  // Relative to the working directory, unlike the inputs above, which
  // resolve against the config file's directory.
  std::filesystem::path output_dir = "lusa_out";
};

PipelineConfig load_config(const std::filesystem::path &file);
// The bundled fixtures under the data directory.
PipelineConfig default_config();

struct RunOptions {
  std::optional<std::filesystem::path> out;
  std::optional<std::vector<double>> weights;
  std::optional<std::filesystem::path> digest;
  unsigned jobs = 1;
};

// Each returns a process exit code; diagnostics go to `log`, human-facing
// summaries to `out`.
int cmd_extract(const PipelineConfig &config, const RunOptions &options,
                std::ostream &out, std::ostream &log);
int cmd_populate(const PipelineConfig &config, const RunOptions &options,
                 std::ostream &out, std::ostream &log);
int cmd_suitability(const PipelineConfig &config, const RunOptions &options,
                    std::ostream &out, std::ostream &log);
// extract -> populate -> suitability, with the fresh criteria digest
// feeding the scenario.
int cmd_demo(const PipelineConfig &config, const RunOptions &options,
             std::ostream &out, std::ostream &log);

std::vector<double> parse_weights(const std::string &csv);

}  // namespace lusa::pipeline

#endif  // LUSA_PIPELINE_H_
