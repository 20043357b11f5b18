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

#include "lusa/linguistic.h"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include "lusa/unicode.h"

namespace lusa::linguistic {
namespace {

std::vector<std::string> read_lines(const std::filesystem::path &file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ResourceError("cannot open resource file " + file.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    lines.push_back(line);
  }
  return lines;
}

std::pair<std::string, std::string> split_tab(const std::string &line,
                                              const std::filesystem::path &f) {
  auto tab = line.find('\t');
  if (tab == std::string::npos) {
    throw ResourceError(f.string() + ": expected '<key>\\t<value>' in line '" +
                        line + "'");
  }
  return {line.substr(0, tab), line.substr(tab + 1)};
}

bool is_terminator(std::u32string_view s) {
  return s == U"." || s == U"!" || s == U"?";
}

bool is_closer(char32_t c) {
  return c == U'"' || c == U'\'' || c == U')' || c == U']' || c == 0x201D ||
         c == 0x2019;
}

std::string orth_of(std::u32string_view word) {
  std::size_t upper = 0;
  for (char32_t c : word) upper += is_upper(c) ? 1 : 0;
  if (upper == 0) return "lowercase";
  if (is_upper(word[0])) {
    if (upper == 1) return "upperInitial";
    if (upper == word.size()) return "allCaps";
  }
  return "mixedCaps";
}

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

bool is_consonant(char c) { return c >= 'a' && c <= 'z' && !is_vowel(c); }

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

int vowel_groups(std::string_view s) {
  int groups = 0;
  bool in_group = false;
  for (char c : s) {
    bool v = is_vowel(c) || (c == 'y' && in_group);
    if (v && !in_group) ++groups;
    in_group = v;
  }
  return groups;
}

// Undoes consonant doubling and restores a dropped final 'e'.
std::string verb_stem(std::string stem) {
  const std::size_t n = stem.size();
  if (n >= 3 && stem[n - 1] == stem[n - 2] && is_consonant(stem[n - 1]) &&
      std::string_view("lsz").find(stem[n - 1]) == std::string_view::npos) {
    stem.pop_back();
    return stem;
  }
  if (n == 0) return stem;
  const char last = stem[n - 1];
  if (last == 'v' || last == 'z' || (last == 'u' && n >= 2 && stem[n - 2] != 'u')) {
    return stem + "e";
  }
  if (n >= 3 && last == 'l' &&
      std::string_view("bcdfgkptz").find(stem[n - 2]) !=
          std::string_view::npos) {
    return stem + "e";
  }
  if (n >= 4 && ends_with(stem, "at") && is_consonant(stem[n - 3])) {
    return stem + "e";
  }
  if (n >= 3 && vowel_groups(stem) == 1 && is_consonant(last) &&
      std::string_view("wxy").find(last) == std::string_view::npos &&
      is_vowel(stem[n - 2]) && is_consonant(stem[n - 3])) {
    return stem + "e";
  }
  return stem;
}

// Collects annotations of one type in canonical order.
std::vector<Annotation> of_type(const Document &doc, std::string_view set,
                                std::string_view type) {
  AnnotationFilter f;
  f.type = std::string(type);
  return doc.query(set, f);
}

}  // namespace

std::string_view kind_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::kWord: return "word";
    case TokenKind::kNumber: return "number";
    case TokenKind::kPunctuation: return "punctuation";
    case TokenKind::kSymbol: return "symbol";
    case TokenKind::kSpace: return "space";
  }
  return "word";
}

std::vector<TokenSpan> segment(std::u32string_view text) {
  std::vector<TokenSpan> out;
  const std::size_t n = text.size();
  std::size_t i = 0;
  auto is_mark = [](char32_t c) { return c >= 0x300 && c <= 0x36F; };
  while (i < n) {
    const std::size_t start = i;
    const char32_t c = text[i];
    TokenKind kind;
    if (is_space(c)) {
      while (i < n && is_space(text[i])) ++i;
      kind = TokenKind::kSpace;
    } else if (is_letter(c)) {
      while (i < n && (is_letter(text[i]) || is_mark(text[i]))) ++i;
      kind = TokenKind::kWord;
    } else if (is_digit(c)) {
      while (i < n && is_digit(text[i])) ++i;
      if (i + 1 < n && text[i] == U'.' && is_digit(text[i + 1])) {
        ++i;
        while (i < n && is_digit(text[i])) ++i;
      }
      kind = TokenKind::kNumber;
    } else {
      ++i;
      kind = is_punctuation(c) ? TokenKind::kPunctuation : TokenKind::kSymbol;
    }
    out.push_back({{start, i}, kind});
  }
  return out;
}

const std::set<std::string, std::less<>> &tagset() {
  static const std::set<std::string, std::less<>> tags = {
      "NN", "NNS", "NNP", "VB", "VBD", "VBG", "VBN", "JJ",
      "RB", "IN",  "DT",  "CD", "CC", "PRP", "other"};
  return tags;
}

std::string Lexicon::lookup(std::string_view lower) const {
  if (auto it = entries.find(std::string(lower)); it != entries.end()) {
    return it->second;
  }
  for (const auto &rule : suffix_rules) {
    // Require a stem of at least two characters.
    if (lower.size() >= rule.suffix.size() + 2 && ends_with(lower, rule.suffix)) {
      return rule.tag;
    }
  }
  return {};
}

Lexicon load_lexicon(const std::filesystem::path &lexicon_file,
                     const std::filesystem::path &suffix_file) {
  Lexicon lex;
  auto check_tag = [](const std::string &tag, const std::filesystem::path &f) {
    if (tagset().count(tag) == 0) {
      throw ResourceError(f.string() + ": tag '" + tag +
                          "' is not in the tag set");
    }
  };
  for (const auto &line : read_lines(lexicon_file)) {
    auto [word, tag] = split_tab(line, lexicon_file);
    check_tag(tag, lexicon_file);
    lex.entries.emplace(to_lower_utf8(word), tag);
  }
  for (const auto &line : read_lines(suffix_file)) {
    auto [suffix, tag] = split_tab(line, suffix_file);
    check_tag(tag, suffix_file);
    if (!suffix.empty() && suffix.front() == '-') suffix.erase(0, 1);
    if (suffix.empty()) {
      throw ResourceError(suffix_file.string() + ": empty suffix");
    }
    lex.suffix_rules.push_back({to_lower_utf8(suffix), tag});
  }
  return lex;
}

std::unordered_set<std::string> load_abbreviations(
    const std::filesystem::path &file) {
  std::unordered_set<std::string> out;
  for (auto &line : read_lines(file)) {
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) {
      line.pop_back();
    }
    out.insert(to_lower_utf8(line));
  }
  return out;
}

std::unordered_map<std::string, std::string> load_irregular_lemmas(
    const std::filesystem::path &file) {
  std::unordered_map<std::string, std::string> out;
  for (const auto &line : read_lines(file)) {
    auto [form, lemma] = split_tab(line, file);
    out.emplace(to_lower_utf8(form), to_lower_utf8(lemma));
  }
  return out;
}

Resources Resources::load(const std::filesystem::path &dir) {
  Resources r;
  r.lexicon = load_lexicon(dir / "lexicon.tsv", dir / "suffixes.tsv");
  r.abbreviations = load_abbreviations(dir / "abbreviations.txt");
  r.irregular_lemmas = load_irregular_lemmas(dir / "irregular.tsv");
  return r;
}

void tokenize(Document &doc, std::string_view set) {
  doc.remove_types(set, {std::string(kToken), std::string(kSpaceToken)});
  doc.annotation_set(set);
  const std::u32string &text = doc.text();
  for (const auto &tok : segment(text)) {
    std::u32string_view surface =
        std::u32string_view(text).substr(tok.span.start, tok.span.length());
    FeatureMap f;
    f["string"] = utf8_encode(surface);
    f["length"] = static_cast<std::int64_t>(tok.span.length());
    if (tok.kind == TokenKind::kSpace) {
      f["kind"] = std::string(surface.find(U'\n') == std::u32string_view::npos
                                  ? "space"
                                  : "control");
      doc.add_annotation(set, std::string(kSpaceToken), tok.span, std::move(f));
      continue;
    }
    f["kind"] = std::string(kind_name(tok.kind));
    f["orth"] = tok.kind == TokenKind::kWord ? orth_of(surface) : "other";
    doc.add_annotation(set, std::string(kToken), tok.span, std::move(f));
  }
}

void split_sentences(Document &doc,
                     const std::unordered_set<std::string> &abbreviations,
                     std::string_view set) {
  doc.remove_types(set, {std::string(kSentence), std::string(kSplit)});
  const std::u32string &text = doc.text();
  const auto tokens = of_type(doc, set, kToken);
  const auto spaces = of_type(doc, set, kSpaceToken);

  struct Boundary {
    Span split;
    bool internal;  // terminator punctuation, part of the sentence
  };
  std::vector<Boundary> boundaries;

  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Span s = tokens[i].span;
    std::u32string_view surface(text.data() + s.start, s.length());
    if (!is_terminator(surface)) continue;
    // Extend over a run of terminators and closing quotes/brackets.
    std::size_t j = i;
    while (j + 1 < tokens.size() &&
           tokens[j + 1].span.start == tokens[j].span.end &&
           (is_terminator(std::u32string_view(
                text.data() + tokens[j + 1].span.start,
                tokens[j + 1].span.length())) ||
            (tokens[j + 1].span.length() == 1 &&
             is_closer(text[tokens[j + 1].span.start])))) {
      ++j;
    }
    const std::size_t run_end = tokens[j].span.end;
    const bool at_break = run_end == text.size() || is_space(text[run_end]);
    if (!at_break) {
      i = j;
      continue;
    }
    if (surface == U".") {
      std::size_t chunk_start = s.start;
      while (chunk_start > 0 && !is_space(text[chunk_start - 1])) --chunk_start;
      while (chunk_start < s.start &&
             (text[chunk_start] == U'(' || text[chunk_start] == U'"' ||
              text[chunk_start] == U'[')) {
        ++chunk_start;
      }
      std::string chunk = utf8_encode(to_lower(
          std::u32string_view(text).substr(chunk_start, s.end - chunk_start)));
      if (abbreviations.count(chunk) != 0) {
        i = j;
        continue;
      }
    }
    boundaries.push_back({{s.start, run_end}, true});
    i = j;
  }
  for (const auto &sp : spaces) {
    std::u32string_view surface(text.data() + sp.span.start, sp.span.length());
    if (std::count(surface.begin(), surface.end(), U'\n') >= 2) {
      boundaries.push_back({sp.span, false});
    }
  }
  std::sort(boundaries.begin(), boundaries.end(),
            [](const Boundary &a, const Boundary &b) {
              return a.split.start < b.split.start;
            });

  std::vector<Span> sentences;
  std::size_t b = 0;
  std::optional<Span> current;
  for (const auto &tok : tokens) {
    while (b < boundaries.size() && boundaries[b].split.end <= tok.span.start) {
      if (current) sentences.push_back(*current);
      current.reset();
      ++b;
    }
    if (current) {
      current->end = tok.span.end;
    } else {
      current = tok.span;
    }
  }
  if (current) sentences.push_back(*current);

  for (const auto &bd : boundaries) {
    doc.add_annotation(set, std::string(kSplit), bd.split,
                       {{"kind", std::string(bd.internal ? "internal"
                                                         : "external")}});
  }
  for (const auto &s : sentences) {
    doc.add_annotation(set, std::string(kSentence), s);
  }
}

void pos_tag(Document &doc, const Lexicon &lexicon, std::string_view set) {
  const std::u32string &text = doc.text();
  const auto tokens = of_type(doc, set, kToken);
  std::unordered_map<AnnotationId, std::string> tags;
  bool sentence_initial = true;
  std::size_t prev_end = 0;
  for (const auto &tok : tokens) {
    std::u32string_view gap(text.data() + prev_end, tok.span.start - prev_end);
    if (std::count(gap.begin(), gap.end(), U'\n') >= 2) sentence_initial = true;
    prev_end = tok.span.end;
    const auto *kind = std::get_if<std::string>(tok.feature("kind"));
    std::u32string_view surface(text.data() + tok.span.start,
                                tok.span.length());
    if (kind != nullptr && *kind == "number") {
      tags[tok.id] = lexicon.number_tag;
      sentence_initial = false;
    } else if (kind != nullptr && *kind == "word") {
      std::string tag = lexicon.lookup(utf8_encode(to_lower(surface)));
      if (tag.empty()) {
        const auto *orth = std::get_if<std::string>(tok.feature("orth"));
        tag = (!sentence_initial && orth != nullptr && *orth == "upperInitial")
                  ? lexicon.proper_tag
                  : lexicon.unknown_tag;
      }
      tags[tok.id] = tag;
      sentence_initial = false;
    } else {
      const bool opener = surface.size() == 1 &&
                          (surface[0] == U'(' || surface[0] == U'[' ||
                           surface[0] == U'"' || surface[0] == 0x201C);
      if (is_terminator(surface)) {
        sentence_initial = true;
      } else if (!opener) {
        sentence_initial = false;
      }
    }
  }
  doc.update_features(set, [&](const Annotation &a, FeatureMap &f) {
    if (auto it = tags.find(a.id); it != tags.end()) f["category"] = it->second;
  });
}

std::string lemmatize(
    std::string_view lower, std::string_view tag,
    const std::unordered_map<std::string, std::string> &irregular) {
  std::string w(lower);
  if (auto it = irregular.find(w); it != irregular.end()) return it->second;
  if (tag == "NNS") {
    if (w.size() > 4 && ends_with(w, "ies")) return w.substr(0, w.size() - 3) + "y";
    for (std::string_view es : {"sses", "shes", "ches", "xes", "zes"}) {
      if (w.size() > es.size() && ends_with(w, es)) {
        return w.substr(0, w.size() - 2);
      }
    }
    if (ends_with(w, "ss") || ends_with(w, "us") || ends_with(w, "is")) return w;
    if (w.size() > 3 && ends_with(w, "s")) return w.substr(0, w.size() - 1);
    return w;
  }
  if (tag == "VBG" && w.size() > 4 && ends_with(w, "ing")) {
    return verb_stem(w.substr(0, w.size() - 3));
  }
  if (tag == "VBD" || tag == "VBN") {
    if (w.size() > 4 && ends_with(w, "ied")) return w.substr(0, w.size() - 3) + "y";
    if (w.size() > 3 && ends_with(w, "ed")) return verb_stem(w.substr(0, w.size() - 2));
  }
  return w;
}

void morph_analyze(
    Document &doc,
    const std::unordered_map<std::string, std::string> &irregular,
    std::string_view set) {
  doc.update_features(set, [&](const Annotation &a, FeatureMap &f) {
    if (a.type != kToken) return;
    const auto *kind = std::get_if<std::string>(a.feature("kind"));
    if (kind == nullptr || *kind != "word") return;
    const auto *surface = std::get_if<std::string>(a.feature("string"));
    const auto *tag = std::get_if<std::string>(a.feature("category"));
    if (surface == nullptr) return;
    f["root"] = lemmatize(to_lower_utf8(*surface),
                          tag != nullptr ? std::string_view(*tag) : "",
                          irregular);
  });
}

void preprocess(Document &doc, const Resources &resources,
                std::string_view set) {
  tokenize(doc, set);
  split_sentences(doc, resources.abbreviations, set);
  pos_tag(doc, resources.lexicon, set);
  morph_analyze(doc, resources.irregular_lemmas, set);
}

}  // namespace lusa::linguistic
