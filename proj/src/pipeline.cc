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

#include "lusa/pipeline.h"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "lusa/data_dir.h"
#include "lusa/document.h"
#include "lusa/gazetteer.h"
#include "lusa/linguistic.h"
#include "lusa/mcdm.h"
#include "lusa/ontology.h"
#include "lusa/raster.h"
#include "lusa/rules.h"
#include "lusa/unicode.h"

namespace lusa::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path &file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw PipelineError("cannot read " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path &file, std::string_view data) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw PipelineError("cannot write " + file.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw PipelineError("cannot write " + file.string());
}

void require_file(const fs::path &p, const char *what) {
  if (!fs::is_regular_file(p)) {
    throw PipelineError(std::string(what) + " not found: " + p.string());
  }
}

void require_dir(const fs::path &p, const char *what) {
  if (!fs::is_directory(p)) {
    throw PipelineError(std::string(what) + " not found: " + p.string());
  }
}

fs::path out_dir(const PipelineConfig &config, const RunOptions &options) {
  return options.out.value_or(config.output_dir);
}

// Corpus files in name order; the extension picks the ingest format.
std::vector<fs::path> corpus_files(const fs::path &dir) {
  std::vector<fs::path> out;
  for (const auto &entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension();
    if (ext == ".txt" || ext == ".html" || ext == ".htm") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct Extractor {
  linguistic::Resources resources;
  gazetteer::CompiledGazetteer gazetteer;
  std::vector<rules::CompiledPhase> phases;
  std::vector<std::string> concept_types;
};

Extractor load_extractor(const PipelineConfig &config, std::ostream &log) {
  require_dir(config.resources_dir, "resources directory");
  require_file(config.gazetteer_index, "gazetteer index");
  if (config.rule_files.empty()) throw PipelineError("no rule files configured");
  for (const auto &f : config.rule_files) require_file(f, "rule file");

  Extractor ex;
  try {
    ex.resources = linguistic::Resources::load(config.resources_dir);
    const auto index = gazetteer::load_index(config.gazetteer_index);
    for (const auto &w : index.warnings) log << "warning: " << w << "\n";
    ex.gazetteer = gazetteer::compile(index);
    std::set<std::string> types;
    for (const auto &f : config.rule_files) {
      ex.phases.push_back(rules::compile_phase(rules::load_rules(f)));
      for (const auto &r : ex.phases.back().phase.rules) {
        for (const auto &a : r.actions) types.insert(a.type);
      }
    }
    ex.concept_types.assign(types.begin(), types.end());
  } catch (const PipelineError &) {
    throw;
  } catch (const std::exception &e) {
    throw PipelineError(e.what());
  }
  return ex;
}

struct DocResult {
  bool ok = false;
  std::string id;
  std::string error;
  std::string text;
  std::string standoff;
  std::string xml;
  std::map<std::string, std::size_t> counts;
};

DocResult extract_one(const Extractor &ex, const fs::path &file) {
  DocResult r;
  r.id = file.stem().string();
  try {
    const auto format = file.extension() == ".txt" ? InputFormat::kPlain
                                                   : InputFormat::kHtml;
    Document doc = ingest_text(r.id, read_file(file), format);
    linguistic::preprocess(doc, ex.resources);
    ex.gazetteer.annotate(doc);
    rules::run_cascade(doc, ex.phases);
    r.text = doc.text_utf8();
    r.standoff = export_standoff(doc, "");
    r.xml = export_inline_xml(doc, "", ex.concept_types);
    for (const auto &a : doc.query("")) ++r.counts[a.type];
    r.ok = true;
  } catch (const std::exception &e) {
    r.error = e.what();
  }
  return r;
}

std::string count_line(const std::map<std::string, std::size_t> &counts) {
  std::string out;
  for (const auto &[type, n] : counts) {
    if (!out.empty()) out += ' ';
    out += type + "=" + std::to_string(n);
  }
  return out;
}

}  // namespace

PipelineConfig load_config(const fs::path &file) {
  json j;
  try {
    j = json::parse(read_file(file));
  } catch (const json::exception &e) {
    throw PipelineError(file.string() + ": " + e.what());
  }
  const fs::path base = file.parent_path();
  PipelineConfig c;
  try {
    auto path = [&](const char *key) -> fs::path {
      if (!j.contains(key)) return {};
      return base / j.at(key).get<std::string>();
    };
    c.corpus_dir = path("corpus_dir");
    c.gazetteer_index = path("gazetteer_index");
    c.ontology_schema = path("ontology_schema");
    c.resources_dir = path("resources_dir");
    c.factor_map = path("factor_map");
    c.scenario = path("scenario");
    for (const auto &r : j.value("rule_files", json::array())) {
      c.rule_files.push_back(base / r.get<std::string>());
    }
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  } catch (const json::exception &e) {
    throw PipelineError(file.string() + ": " + e.what());
  }
  return c;
}

PipelineConfig default_config() {
  return load_config(default_data_dir() / "pipeline.json");
}

std::vector<double> parse_weights(const std::string &csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double w = std::stod(item, &used);
      if (used != item.size() || !(w >= 0)) throw std::invalid_argument(item);
      out.push_back(w);
    } catch (const std::exception &) {
      throw PipelineError("bad weight '" + item + "'");
    }
  }
  if (out.empty()) throw PipelineError("empty weight list");
  return out;
}

int cmd_extract(const PipelineConfig &config, const RunOptions &options,
                std::ostream &out, std::ostream &log) {
  Extractor ex;
  std::vector<fs::path> files;
  try {
    require_dir(config.corpus_dir, "corpus directory");
    ex = load_extractor(config, log);
    files = corpus_files(config.corpus_dir);
  } catch (const std::exception &e) {
    log << "error: " << e.what() << "\n";
    return 2;
  }
  if (files.empty()) {
    log << "warning: no documents in " << config.corpus_dir.string() << "\n";
    return 0;
  }

  std::vector<DocResult> results(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      results[i] = extract_one(ex, files[i]);
    }
  };
  const unsigned jobs = std::clamp<unsigned>(options.jobs, 1,
                                             static_cast<unsigned>(files.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto &t : pool) t.join();

  const fs::path dir = out_dir(config, options) / "extract";
  int failures = 0;
  std::map<std::string, std::size_t> totals;
  try {
    fs::create_directories(dir);
    for (const auto &r : results) {
      if (!r.ok) {
        ++failures;
        log << "error: " << r.id << ": " << r.error << "\n";
        continue;
      }
      write_file(dir / (r.id + ".txt"), r.text);
      write_file(dir / (r.id + ".standoff"), r.standoff);
      write_file(dir / (r.id + ".xml"), r.xml);
      log << "extract " << r.id << ": " << count_line(r.counts) << "\n";
      for (const auto &type : ex.concept_types) {
        if (auto it = r.counts.find(type); it != r.counts.end()) totals[type] += it->second;
      }
    }
  } catch (const std::exception &e) {
    log << "error: " << e.what() << "\n";
    return 2;
  }
  out << "extracted " << (files.size() - failures) << "/" << files.size()
      << " documents";
  if (!totals.empty()) out << " (" << count_line(totals) << ")";
  out << "\n";
  return failures == 0 ? 0 : 1;
}

int cmd_populate(const PipelineConfig &config, const RunOptions &options,
                 std::ostream &out, std::ostream &log) {
  const fs::path root = out_dir(config, options);
  const fs::path extract_dir = root / "extract";
  try {
    require_file(config.ontology_schema, "ontology schema");
    require_file(config.factor_map, "factor map");
    require_dir(extract_dir, "extraction output (run extract first)");

    std::vector<fs::path> standoffs;
    for (const auto &entry : fs::directory_iterator(extract_dir)) {
      if (entry.path().extension() == ".standoff") standoffs.push_back(entry.path());
    }
    std::sort(standoffs.begin(), standoffs.end());
    std::vector<Document> corpus;
    for (const auto &s : standoffs) {
      fs::path text = s;
      text.replace_extension(".txt");
      corpus.push_back(import_standoff(read_file(s), utf8_decode(read_file(text))));
    }

    ontology::Ontology onto = ontology::load_schema(config.ontology_schema);
    const auto report = ontology::populate(onto, corpus);
    for (const auto &skip : report.skips) {
      log << "skipped " << skip.doc << "#" << skip.annotation << ": " << skip.reason << "\n";
    }
    for (const auto &issue : report.property_issues) log << "property skipped " << issue << "\n";

    const auto digest = ontology::criteria_summary(
        onto, ontology::load_factor_map(config.factor_map));
    for (const auto &u : digest.unresolved) {
      log << "unresolved " << u.source_instance << ": " << u.reason << "\n";
    }
    write_file(root / "ontology.xml", ontology::export_ontology(onto, ontology::ExportFormat::kXml));
    write_file(root / "ontology.tsv", ontology::export_ontology(onto, ontology::ExportFormat::kTsv));
    write_file(root / "criteria.json", digest.to_json().dump(2) + "\n");

    out << "populated " << report.created << " instances from " << report.total_mentions
        << " mentions (" << report.skipped << " skipped, " << report.skipped_properties
        << " properties skipped); digest: " << digest.constraints.size()
        << " constraints, " << digest.factors.size() << " factors, "
        << digest.unresolved.size() << " unresolved\n";
  } catch (const std::exception &e) {
    log << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

int cmd_suitability(const PipelineConfig &config, const RunOptions &options,
                    std::ostream &out, std::ostream &log) {
  try {
    require_file(config.scenario, "scenario");
    mcdm::ScenarioConfig scenario = mcdm::load_scenario(config.scenario);
    if (options.digest) scenario.from_ontology = *options.digest;
    const auto result = mcdm::run_scenario(scenario, options.weights);
    for (const auto &w : result.warnings) log << "warning: " << w << "\n";

    const fs::path dir = out_dir(config, options) / "suitability";
    fs::create_directories(dir / "layers");
    write_file(dir / (scenario.output + ".asc"), raster::write_ascii_grid(result.suitability));
    write_file(dir / (scenario.output + ".pgm"), raster::write_pgm(result.suitability));
    for (const auto &[name, r] : result.intermediates) {
      write_file(dir / "layers" / (name + ".asc"), raster::write_ascii_grid(r));
      write_file(dir / "layers" / (name + ".pgm"), raster::write_pgm(r));
    }
    const std::string table = mcdm::format_report(result);
    write_file(dir / "report.txt", table);
    out << table;
  } catch (const std::exception &e) {
    log << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

int cmd_demo(const PipelineConfig &config, const RunOptions &options,
             std::ostream &out, std::ostream &log) {
  out << "[1/3] text -> annotations (tokenize, split, tag, morph, gazetteer, rules)\n";
  if (int rc = cmd_extract(config, options, out, log); rc != 0) {
    log << "demo failed at extract\n";
    return rc;
  }
  out << "[2/3] annotations -> ontology instances -> criteria digest\n";
  if (int rc = cmd_populate(config, options, out, log); rc != 0) {
    log << "demo failed at populate\n";
    return rc;
  }
  out << "[3/3] criteria + layers -> constraints, factors, WLC -> suitability map\n";
  RunOptions suit = options;
  suit.digest = out_dir(config, options) / "criteria.json";
  if (int rc = cmd_suitability(config, suit, out, log); rc != 0) {
    log << "demo failed at suitability\n";
    return rc;
  }
  return 0;
}

}  // namespace lusa::pipeline
