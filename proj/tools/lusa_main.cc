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

// Command-line front end: lusa extract|populate|suitability|demo.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "lusa/pipeline.h"

namespace pl = lusa::pipeline;

int main(int argc, char **argv) {
  CLI::App app{"LUSA land use suitability pipeline"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string weights;
  std::string digest;
  unsigned jobs = 1;
  app.add_option("--config", config_path, "pipeline config (default: bundled fixtures)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--jobs", jobs, "documents processed in parallel")->check(CLI::Range(1u, 256u));

  auto *extract = app.add_subcommand("extract", "annotate the corpus");
  auto *populate = app.add_subcommand("populate", "populate the ontology and write the criteria digest");
  auto *suitability = app.add_subcommand("suitability", "run the MCE scenario");
  auto *demo = app.add_subcommand("demo", "extract, populate and suitability on the bundled fixtures");
  for (auto *sub : {suitability, demo}) {
    sub->add_option("--weights", weights, "factor weights, comma separated");
  }
  suitability->add_option("--digest", digest, "criteria digest overriding the scenario's");
  // Global flags are also accepted after the subcommand.
  for (auto *sub : {extract, populate, suitability, demo}) {
    sub->fallthrough();
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const pl::PipelineConfig config =
        config_path.empty() ? pl::default_config() : pl::load_config(config_path);
    pl::RunOptions options;
    options.jobs = jobs;
    if (!out_dir.empty()) options.out = out_dir;
    if (!weights.empty()) options.weights = pl::parse_weights(weights);
    if (!digest.empty()) options.digest = digest;

    if (extract->parsed()) return pl::cmd_extract(config, options, std::cout, std::cerr);
    if (populate->parsed()) return pl::cmd_populate(config, options, std::cout, std::cerr);
    if (suitability->parsed()) return pl::cmd_suitability(config, options, std::cout, std::cerr);
    return pl::cmd_demo(config, options, std::cout, std::cerr);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
