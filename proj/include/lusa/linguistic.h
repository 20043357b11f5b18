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

#ifndef LUSA_LINGUISTIC_H_
#define LUSA_LINGUISTIC_H_

#include <filesystem>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lusa/document.h"

// Preprocessing cascade: tokenizer, sentence splitter, part-of-speech tagger
// and morphological analyzer. Each stage writes annotations or features
// into a document set and replaces its own earlier output when rerun.
namespace lusa::linguistic {

inline constexpr std::string_view kToken = "Token";
inline constexpr std::string_view kSpaceToken = "SpaceToken";
inline constexpr std::string_view kSentence = "Sentence";
inline constexpr std::string_view kSplit = "Split";

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TokenKind { kWord, kNumber, kPunctuation, kSymbol, kSpace };

std::string_view kind_name(TokenKind kind);

struct TokenSpan {
  Span span;
  TokenKind kind = TokenKind::kWord;
};

// Segments text into maximal letter runs, number runs (digits with at most
// one internal '.' followed by a digit), whitespace runs and single
// punctuation/symbol characters. The spans tile the text.
std::vector<TokenSpan> segment(std::u32string_view text);

// Closed tag set produced by the tagger.
const std::set<std::string, std::less<>> &tagset();

struct SuffixRule {
  std::string suffix;
  std::string tag;
};

struct Lexicon {
  std::unordered_map<std::string, std::string> entries;
  std::vector<SuffixRule> suffix_rules;
  std::string number_tag = "CD";
  std::string unknown_tag = "NN";
  std::string proper_tag = "NNP";

  // Tag for a lowercase word form: lexicon, then suffix rules (first match
  // wins), then empty if neither applies.
  std::string lookup(std::string_view lower) const;
};

struct Resources {
  Lexicon lexicon;
  std::unordered_set<std::string> abbreviations;
  std::unordered_map<std::string, std::string> irregular_lemmas;

  // Loads lexicon.tsv, suffixes.tsv, abbreviations.txt and irregular.tsv
  // from `dir`.
  static Resources load(const std::filesystem::path &dir);
};

Lexicon load_lexicon(const std::filesystem::path &lexicon_file,
                     const std::filesystem::path &suffix_file);
std::unordered_set<std::string> load_abbreviations(
    const std::filesystem::path &file);
std::unordered_map<std::string, std::string> load_irregular_lemmas(
    const std::filesystem::path &file);

void tokenize(Document &doc, std::string_view set = "");
void split_sentences(Document &doc,
                     const std::unordered_set<std::string> &abbreviations,
                     std::string_view set = "");
void pos_tag(Document &doc, const Lexicon &lexicon, std::string_view set = "");
void morph_analyze(
    Document &doc,
    const std::unordered_map<std::string, std::string> &irregular,
    std::string_view set = "");

// tokenize -> split_sentences -> pos_tag -> morph_analyze.
void preprocess(Document &doc, const Resources &resources,
                std::string_view set = "");

// Rule-based lemma of a lowercase word given its tag. The irregular table
// is consulted first; nouns tagged NNS lose plural endings, verbs tagged
// VBG/VBD/VBN lose -ing/-ed with undoubling and e-restoration.
std::string lemmatize(
    std::string_view lower, std::string_view tag,
    const std::unordered_map<std::string, std::string> &irregular = {});

}  // namespace lusa::linguistic

#endif  // LUSA_LINGUISTIC_H_
