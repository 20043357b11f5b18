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

#ifndef LUSA_GAZETTEER_H_
#define LUSA_GAZETTEER_H_

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lusa/document.h"

namespace lusa::gazetteer {

class IndexError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One line of a lists.def index: `file.lst:major[:minor[:language[:type]]]`.
struct ListSpec {
  std::filesystem::path file;
  std::string name;  // file name as written in the index
  std::string major_type;
  std::string minor_type;
  std::string language;
  std::string annotation_type = "Lookup";
  std::vector<std::string> terms;
};

struct GazetteerIndex {
  std::vector<ListSpec> lists;
  std::vector<std::string> warnings;
};

// Reads an index and every list it names. List paths are relative to the
// index file. Blank lines and '#' comments are skipped in both; duplicate
// lines produce a warning and are dropped.
GazetteerIndex load_index(const std::filesystem::path &index_file);

struct CompileOptions {
  bool case_sensitive = false;
  bool match_on_root = true;
};

// Trie over token sequences. Each node is keyed by the normalized string of
// one token; accepting nodes record the lists that contain the entry.
class CompiledGazetteer {
 public:
  CompiledGazetteer() = default;
  CompiledGazetteer(const GazetteerIndex &index, CompileOptions options);

  const CompileOptions &options() const { return options_; }
  const std::vector<ListSpec> &lists() const { return lists_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t longest_entry() const { return longest_entry_; }

  // Lists accepting exactly this sequence of normalized token strings.
  std::vector<int> lookup(const std::vector<std::string> &keys) const;

  // Adds Lookup annotations for the longest entry at every token start;
  // previous annotations of the produced types are replaced.
  void annotate(Document &doc, std::string_view set = "") const;

  std::string normalize(std::string_view token) const;

 private:
  struct Node {
    std::map<std::string, int, std::less<>> children;
    std::vector<int> lists;
  };

  CompileOptions options_;
  std::vector<ListSpec> lists_;
  std::vector<Node> nodes_;
  std::size_t longest_entry_ = 0;
};

inline CompiledGazetteer compile(const GazetteerIndex &index,
                                 CompileOptions options = {}) {
  return CompiledGazetteer(index, options);
}

inline void annotate_lookups(Document &doc, const CompiledGazetteer &gaz,
                             std::string_view set = "") {
  gaz.annotate(doc, set);
}

// Surface strings of the non-space tokens of an entry, as produced by the
// document tokenizer.
std::vector<std::string> entry_tokens(std::string_view entry);

// Index of the sentence segment each token belongs to, counted by the Split
// annotations that end at or before the token start.
std::vector<int> token_segments(const std::vector<Annotation> &tokens,
                                const std::vector<Annotation> &splits);

}  // namespace lusa::gazetteer

#endif  // LUSA_GAZETTEER_H_
