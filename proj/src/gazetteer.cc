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

#include "lusa/gazetteer.h"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>

#include "lusa/linguistic.h"
#include "lusa/unicode.h"

namespace lusa::gazetteer {
namespace {

std::vector<std::string> read_entries(const std::filesystem::path &file,
                                      std::vector<std::string> &warnings) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IndexError("gazetteer list not found: " + file.string());
  std::vector<std::string> out;
  std::set<std::string> seen;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    auto last = line.find_last_not_of(" \t");
    line = line.substr(first, last - first + 1);
    if (!seen.insert(line).second) {
      warnings.push_back(file.filename().string() + ": duplicate line '" +
                         line + "' ignored");
      continue;
    }
    out.push_back(line);
  }
  return out;
}

}  // namespace

GazetteerIndex load_index(const std::filesystem::path &index_file) {
  GazetteerIndex index;
  const auto lines = [&] {
    std::vector<std::string> w;
    auto lines = read_entries(index_file, w);
    for (auto &msg : w) index.warnings.push_back(std::move(msg));
    return lines;
  }();
  const auto base = index_file.parent_path();
  for (const auto &line : lines) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      auto colon = line.find(':', start);
      fields.push_back(line.substr(start, colon - start));
      if (colon == std::string::npos) break;
      start = colon + 1;
    }
    if (fields.size() < 2 || fields.size() > 5 || fields[0].empty() ||
        fields[1].empty()) {
      throw IndexError(index_file.string() + ": malformed index line '" +
                       line + "'");
    }
    ListSpec spec;
    spec.name = fields[0];
    spec.file = base / fields[0];
    spec.major_type = fields[1];
    if (fields.size() > 2) spec.minor_type = fields[2];
    if (fields.size() > 3) spec.language = fields[3];
    if (fields.size() > 4 && !fields[4].empty()) spec.annotation_type = fields[4];
    spec.terms = read_entries(spec.file, index.warnings);
    if (spec.terms.empty()) {
      throw IndexError("gazetteer list is empty: " + spec.file.string());
    }
    index.lists.push_back(std::move(spec));
  }
  return index;
}

std::vector<std::string> entry_tokens(std::string_view entry) {
  const std::u32string text = utf8_decode(entry);
  std::vector<std::string> out;
  for (const auto &tok : linguistic::segment(text)) {
    if (tok.kind == linguistic::TokenKind::kSpace) continue;
    out.push_back(utf8_encode(
        std::u32string_view(text).substr(tok.span.start, tok.span.length())));
  }
  return out;
}

std::vector<int> token_segments(const std::vector<Annotation> &tokens,
                                const std::vector<Annotation> &splits) {
  std::vector<std::size_t> ends;
  for (const auto &s : splits) ends.push_back(s.span.end);
  std::sort(ends.begin(), ends.end());
  std::vector<int> out;
  out.reserve(tokens.size());
  for (const auto &t : tokens) {
    // A token inside a split (the terminator itself) stays with the
    // sentence it closes.
    out.push_back(static_cast<int>(
        std::upper_bound(ends.begin(), ends.end(), t.span.start) -
        ends.begin()));
  }
  return out;
}

CompiledGazetteer::CompiledGazetteer(const GazetteerIndex &index,
                                     CompileOptions options)
    : options_(options), lists_(index.lists) {
  nodes_.emplace_back();
  for (std::size_t li = 0; li < lists_.size(); ++li) {
    for (const auto &term : lists_[li].terms) {
      auto toks = entry_tokens(term);
      if (toks.empty()) continue;
      int node = 0;
      for (const auto &t : toks) {
        std::string key = normalize(t);
        auto it = nodes_[node].children.find(key);
        if (it == nodes_[node].children.end()) {
          nodes_.emplace_back();
          const int child = static_cast<int>(nodes_.size() - 1);
          nodes_[node].children.emplace(std::move(key), child);
          node = child;
        } else {
          node = it->second;
        }
      }
      auto &accepting = nodes_[node].lists;
      if (std::find(accepting.begin(), accepting.end(), li) == accepting.end()) {
        accepting.push_back(static_cast<int>(li));
      }
      longest_entry_ = std::max(longest_entry_, toks.size());
    }
  }
  // Free the term storage; only list metadata is needed at match time.
  for (auto &l : lists_) l.terms.clear();
}

std::string CompiledGazetteer::normalize(std::string_view token) const {
  return options_.case_sensitive ? std::string(token) : to_lower_utf8(token);
}

std::vector<int> CompiledGazetteer::lookup(
    const std::vector<std::string> &keys) const {
  int node = 0;
  for (const auto &k : keys) {
    auto it = nodes_[node].children.find(k);
    if (it == nodes_[node].children.end()) return {};
    node = it->second;
  }
  return nodes_[node].lists;
}

void CompiledGazetteer::annotate(Document &doc, std::string_view set) const {
  std::set<std::string, std::less<>> produced;
  for (const auto &l : lists_) produced.insert(l.annotation_type);
  doc.remove_types(set, produced);
  if (nodes_.size() == 1) return;

  AnnotationFilter tf;
  tf.type = std::string(linguistic::kToken);
  const auto tokens = doc.query(set, tf);
  AnnotationFilter sf;
  sf.type = std::string(linguistic::kSplit);
  const auto segments = token_segments(tokens, doc.query(set, sf));

  std::vector<std::vector<std::string>> keys(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (const auto *s = std::get_if<std::string>(tokens[i].feature("string"))) {
      keys[i].push_back(normalize(*s));
    }
    if (options_.match_on_root) {
      if (const auto *r = std::get_if<std::string>(tokens[i].feature("root"))) {
        std::string rk = normalize(*r);
        if (keys[i].empty() || keys[i][0] != rk) keys[i].push_back(rk);
      }
    }
  }

  struct Hit {
    std::size_t start;
    std::size_t end_token;
    int list;
  };
  std::vector<Hit> hits;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::size_t best_end = 0;
    std::set<int> best_lists;
    // Depth-first walk; a token may follow either its surface or its root.
    std::vector<std::pair<int, std::size_t>> stack = {{0, i}};
    while (!stack.empty()) {
      auto [node, next] = stack.back();
      stack.pop_back();
      if (next > i && !nodes_[node].lists.empty()) {
        if (next > best_end) {
          best_end = next;
          best_lists.clear();
        }
        if (next == best_end) {
          best_lists.insert(nodes_[node].lists.begin(),
                            nodes_[node].lists.end());
        }
      }
      if (next >= tokens.size() || segments[next] != segments[i]) continue;
      for (const auto &k : keys[next]) {
        auto it = nodes_[node].children.find(k);
        if (it != nodes_[node].children.end()) {
          stack.emplace_back(it->second, next + 1);
        }
      }
    }
    for (int li : best_lists) hits.push_back({i, best_end - 1, li});
  }

  for (const auto &h : hits) {
    const ListSpec &l = lists_[h.list];
    FeatureMap f;
    f["majorType"] = l.major_type;
    if (!l.minor_type.empty()) f["minorType"] = l.minor_type;
    if (!l.language.empty()) f["language"] = l.language;
    f["list"] = l.name;
    doc.add_annotation(set, l.annotation_type,
                       {tokens[h.start].span.start, tokens[h.end_token].span.end},
                       std::move(f));
  }
}

}  // namespace lusa::gazetteer
