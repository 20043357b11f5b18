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

#ifndef LUSA_TESTS_SUPPORT_H_
#define LUSA_TESTS_SUPPORT_H_

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lusa/document.h"
#include "lusa/gazetteer.h"
#include "lusa/linguistic.h"
#include "lusa/rules.h"

namespace lusa::testing {

inline std::filesystem::path data_dir() { return LUSA_TEST_DATA_DIR; }
inline std::filesystem::path golden_dir() { return LUSA_TEST_GOLDEN_DIR; }

inline std::string slurp(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path &p, const std::string &s) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << s;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string &tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("lusa_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;
  const std::filesystem::path &path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline const linguistic::Resources &resources() {
  static const linguistic::Resources r =
      linguistic::Resources::load(data_dir() / "resources");
  return r;
}

// The bundled extraction stack: preprocessing, gazetteer, three rule phases.
struct Stack {
  gazetteer::CompiledGazetteer gaz;
  std::vector<rules::CompiledPhase> phases;
};

inline const Stack &bundled_stack() {
  static const Stack s = [] {
    Stack st;
    st.gaz = gazetteer::compile(gazetteer::load_index(data_dir() / "gazetteer" / "lists.def"));
    for (const char *f : {"01_setback_object.rul", "02_concepts.rul", "03_mentions.rul"}) {
      st.phases.push_back(rules::compile_phase(rules::load_rules(data_dir() / "rules" / f)));
    }
    return st;
  }();
  return s;
}

inline Document extract(const std::string &id, const std::string &text,
                        InputFormat format = InputFormat::kPlain) {
  Document doc = ingest_text(id, text, format);
  linguistic::preprocess(doc, resources());
  bundled_stack().gaz.annotate(doc);
  rules::run_cascade(doc, bundled_stack().phases);
  return doc;
}

inline std::vector<Annotation> of_type(const Document &doc, const std::string &type) {
  AnnotationFilter f;
  f.type = type;
  return doc.query("", f);
}

inline std::string covered(const Document &doc, const Annotation &a) {
  return doc.text_utf8(a.span);
}

}  // namespace lusa::testing

#endif  // LUSA_TESTS_SUPPORT_H_
