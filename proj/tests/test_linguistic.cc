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

#include <random>

#include "doctest.h"
#include "support.h"

using namespace lusa;
using lusa::testing::of_type;
using lusa::testing::resources;

namespace {

Document tokenized(const std::string &text) {
  Document doc = ingest_text("t", text, InputFormat::kPlain);
  linguistic::tokenize(doc);
  return doc;
}

Document processed(const std::string &text) {
  Document doc = ingest_text("t", text, InputFormat::kPlain);
  linguistic::preprocess(doc, resources());
  return doc;
}

std::string str(const Annotation &a, const char *key) {
  const auto *v = std::get_if<std::string>(a.feature(key));
  return v ? *v : std::string("<none>");
}

const Annotation *token_with(const Document &doc, const std::string &surface) {
  static thread_local std::vector<Annotation> keep;
  keep = of_type(doc, "Token");
  for (const auto &t : keep) {
    if (str(t, "string") == surface) return &t;
  }
  return nullptr;
}

std::string random_text(std::mt19937 &rng) {
  static const std::vector<std::string> pieces = {
      "soil", "Soils", "e.g.", "4.5", "457", "km", ".", "!", "?", " ", "  ",
      "\n", "\n\n", ",", "Regina", "ÉTÉ", "(", ")", "\"", "no.", "x", "$"};
  std::string out;
  const int n = static_cast<int>(rng() % 30);
  for (int i = 0; i < n; ++i) {
    out += pieces[rng() % pieces.size()];
    if (rng() % 2) out += " ";
  }
  return out;
}

}  // namespace

TEST_CASE("tokenizer features") {
  Document doc = tokenized("500 meters");
  auto toks = doc.query("");
  REQUIRE(toks.size() == 3);
  CHECK(toks[0].type == "Token");
  CHECK(str(toks[0], "string") == "500");
  CHECK(str(toks[0], "kind") == "number");
  CHECK(toks[1].type == "SpaceToken");
  CHECK(str(toks[2], "string") == "meters");
  CHECK(str(toks[2], "kind") == "word");
  CHECK(str(toks[2], "orth") == "lowercase");
  CHECK(std::get<std::int64_t>(*toks[2].feature("length")) == 6);

  Document regina = tokenized("Regina.");
  auto r = regina.query("");
  REQUIRE(r.size() == 2);
  CHECK(str(r[0], "orth") == "upperInitial");
  CHECK(str(r[1], "kind") == "punctuation");

  CHECK(tokenized("").query("").empty());
  CHECK(str(tokenized("SETBACK").query("")[0], "orth") == "allCaps");
  CHECK(str(tokenized("iPhone").query("")[0], "orth") == "mixedCaps");
  CHECK(str(tokenized("$").query("")[0], "kind") == "symbol");
  CHECK(str(tokenized("4.5").query("")[0], "kind") == "number");
  CHECK(tokenized("4.").query("").size() == 2);
}

TEST_CASE("accented letters are word characters") {
  auto toks = tokenized("Qu\xc3\xa9" "bec caf\xc3\xa9").query("");
  REQUIRE(toks.size() == 3);
  CHECK(str(toks[0], "string") == "Qu\xc3\xa9" "bec");
  CHECK(str(toks[0], "kind") == "word");
}

TEST_CASE("tokens and space tokens tile the text") {
  std::mt19937 rng(3);
  for (int round = 0; round < 300; ++round) {
    const std::string text = random_text(rng);
    Document doc = tokenized(text);
    std::string rebuilt;
    std::size_t pos = 0;
    for (const auto &a : doc.query("")) {
      CHECK(a.span.start == pos);
      CHECK(std::get<std::int64_t>(*a.feature("length")) ==
            static_cast<std::int64_t>(a.span.length()));
      rebuilt += str(a, "string");
      pos = a.span.end;
    }
    CHECK(pos == doc.text().size());
    CHECK(rebuilt == doc.text_utf8());
  }
}

TEST_CASE("every stage is idempotent") {
  Document doc = processed("Loose soils shifting. It floods!\n\nNew text e.g. here.");
  const auto once = doc.query("");
  linguistic::preprocess(doc, resources());
  const auto twice = doc.query("");
  REQUIRE(once.size() == twice.size());
  for (std::size_t i = 0; i < once.size(); ++i) {
    CHECK(once[i].type == twice[i].type);
    CHECK(once[i].span == twice[i].span);
    CHECK(once[i].features == twice[i].features);
  }
}

TEST_CASE("sentence splitting") {
  Document two = processed("It slopes. It floods.");
  CHECK(of_type(two, "Sentence").size() == 2);
  CHECK(of_type(two, "Split").size() == 2);

  CHECK(of_type(processed("within 4.5 km of roads."), "Sentence").size() == 1);
  CHECK(of_type(processed("e.g. swampy soil"), "Sentence").size() == 1);
  CHECK(of_type(processed("Use clay, e.g. loam. Then stop."), "Sentence").size() == 2);

  Document blank = processed("Heading\n\nBody text");
  auto sentences = of_type(blank, "Sentence");
  REQUIRE(sentences.size() == 2);
  CHECK(blank.text_utf8(sentences[0].span) == "Heading");
  auto splits = of_type(blank, "Split");
  REQUIRE(splits.size() == 1);
  CHECK(str(splits[0], "kind") == "external");

  CHECK(of_type(processed("Is it \"wet?\" Yes."), "Sentence").size() == 2);
  CHECK(of_type(processed(""), "Sentence").empty());
}

TEST_CASE("sentences hold tokens and never overlap") {
  std::mt19937 rng(5);
  for (int round = 0; round < 300; ++round) {
    Document doc = processed(random_text(rng));
    auto sentences = of_type(doc, "Sentence");
    auto tokens = of_type(doc, "Token");
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      if (i > 0) CHECK(sentences[i - 1].span.end <= sentences[i].span.start);
      int inside = 0;
      for (const auto &t : tokens) {
        inside += sentences[i].span.start <= t.span.start && t.span.end <= sentences[i].span.end;
      }
      CHECK(inside >= 1);
    }
    // Every token belongs to some sentence.
    for (const auto &t : tokens) {
      bool found = false;
      for (const auto &s : sentences) {
        found = found || (s.span.start <= t.span.start && t.span.end <= s.span.end);
      }
      CHECK(found);
    }
  }
}

TEST_CASE("pos tagging") {
  Document doc = processed("the steeply sloping land near Regina has 457 soils.");
  CHECK(str(*token_with(doc, "the"), "category") == "DT");
  CHECK(str(*token_with(doc, "457"), "category") == "CD");
  CHECK(str(*token_with(doc, "sloping"), "category") == "VBG");
  CHECK(str(*token_with(doc, "steeply"), "category") == "RB");
  CHECK(str(*token_with(doc, "Regina"), "category") == "NNP");
  CHECK(str(*token_with(doc, "soils"), "category") == "NNS");
  // Unknown lowercase word falls back to NN; a capital at sentence start
  // is not a proper-noun cue.
  CHECK(str(*token_with(processed("zorb"), "zorb"), "category") == "NN");
  CHECK(str(*token_with(processed("Zorb here."), "Zorb"), "category") == "NN");
}

TEST_CASE("tags come from the closed tag set") {
  std::mt19937 rng(9);
  for (int round = 0; round < 200; ++round) {
    Document doc = processed(random_text(rng));
    for (const auto &t : of_type(doc, "Token")) {
      const std::string kind = str(t, "kind");
      if (kind != "word" && kind != "number") continue;
      const auto *cat = std::get_if<std::string>(t.feature("category"));
      REQUIRE(cat != nullptr);
      CHECK(linguistic::tagset().count(*cat) == 1);
    }
  }
}

TEST_CASE("lemmatizer") {
  const auto &irr = resources().irregular_lemmas;
  CHECK(linguistic::lemmatize("soils", "NNS", irr) == "soil");
  CHECK(linguistic::lemmatize("cracking", "VBG", irr) == "crack");
  CHECK(linguistic::lemmatize("run", "VB", irr) == "run");
  CHECK(linguistic::lemmatize("bodies", "NNS", irr) == "body");
  CHECK(linguistic::lemmatize("classes", "NNS", irr) == "class");
  CHECK(linguistic::lemmatize("boxes", "NNS", irr) == "box");
  CHECK(linguistic::lemmatize("marshes", "NNS", irr) == "marsh");
  CHECK(linguistic::lemmatize("grass", "NNS", irr) == "grass");
  CHECK(linguistic::lemmatize("meters", "NNS", irr) == "meter");
  CHECK(linguistic::lemmatize("feet", "NNS", irr) == "foot");
  CHECK(linguistic::lemmatize("running", "VBG", irr) == "run");
  CHECK(linguistic::lemmatize("sloping", "VBG", irr) == "slope");
  CHECK(linguistic::lemmatize("shifting", "VBG", irr) == "shift");
  CHECK(linguistic::lemmatize("heaving", "VBG", irr) == "heave");
  CHECK(linguistic::lemmatize("heaving", "VBG") == "heave");
  CHECK(linguistic::lemmatize("filled", "VBD", irr) == "fill");
  CHECK(linguistic::lemmatize("stopped", "VBD", irr) == "stop");
  CHECK(linguistic::lemmatize("studied", "VBD", irr) == "study");
  CHECK(linguistic::lemmatize("located", "VBN", irr) == "locate");

  Document doc = processed("Soils shifting");
  CHECK(str(*token_with(doc, "Soils"), "root") == "soil");
  CHECK(str(*token_with(doc, "shifting"), "root") == "shift");
}

TEST_CASE("resource loading validates tags") {
  lusa::testing::TempDir dir("res");
  lusa::testing::spit(dir.path() / "lexicon.tsv", "soil\tNOUN\n");
  lusa::testing::spit(dir.path() / "suffixes.tsv", "-ing\tVBG\n");
  lusa::testing::spit(dir.path() / "abbreviations.txt", "e.g.\n");
  lusa::testing::spit(dir.path() / "irregular.tsv", "feet\tfoot\n");
  CHECK_THROWS_AS(linguistic::Resources::load(dir.path()), linguistic::ResourceError);
  lusa::testing::spit(dir.path() / "lexicon.tsv", "soil\tNN\n");
  CHECK_NOTHROW(linguistic::Resources::load(dir.path()));
  std::filesystem::remove(dir.path() / "irregular.tsv");
  CHECK_THROWS_AS(linguistic::Resources::load(dir.path()), linguistic::ResourceError);
}

TEST_CASE("bundled suffix table maps -ing to VBG") {
  CHECK(resources().lexicon.lookup("sloping") == "VBG");
  CHECK(resources().lexicon.lookup("the") == "DT");
}
