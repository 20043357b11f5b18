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
#include "oracles.h"
#include "support.h"

using namespace lusa;
using lusa::testing::of_type;
using lusa::testing::spit;
using lusa::testing::TempDir;

namespace {

std::string str(const Annotation &a, const char *key) {
  const auto *v = std::get_if<std::string>(a.feature(key));
  return v ? *v : std::string("<none>");
}

Document prepared(const std::string &text) {
  Document doc = ingest_text("g", text, InputFormat::kPlain);
  linguistic::preprocess(doc, lusa::testing::resources());
  return doc;
}

gazetteer::CompiledGazetteer small_gazetteer(const TempDir &dir,
                                             gazetteer::CompileOptions opts = {}) {
  spit(dir.path() / "lists.def",
       "# test lists\nwater.lst:hydro:body\nland.lst:land_use\n");
  spit(dir.path() / "water.lst", "water\nwater body\nlake\n");
  spit(dir.path() / "land.lst", "landfill\nsewage lagoon\nwater body\n");
  return gazetteer::compile(gazetteer::load_index(dir.path() / "lists.def"), opts);
}

std::set<oracle::LookupKey> keys_of(const Document &doc) {
  std::set<oracle::LookupKey> out;
  for (const auto &a : of_type(doc, "Lookup")) {
    out.emplace(a.span.start, a.span.end, str(a, "list"));
  }
  return out;
}

}  // namespace

TEST_CASE("index parsing") {
  TempDir dir("gaz");
  spit(dir.path() / "lists.def",
       "\n# comment\nsoil.lst:soil_type:texture:en\nsoil.lst:soil_type:texture:en\n"
       "units.lst:distance_unit\n");
  spit(dir.path() / "soil.lst", "clay\nclay\n# ignored\nsandy loam\n");
  spit(dir.path() / "units.lst", "m\nkm\n");
  auto index = gazetteer::load_index(dir.path() / "lists.def");
  REQUIRE(index.lists.size() == 2);
  CHECK(index.lists[0].major_type == "soil_type");
  CHECK(index.lists[0].minor_type == "texture");
  CHECK(index.lists[0].language == "en");
  CHECK(index.lists[0].terms == std::vector<std::string>{"clay", "sandy loam"});
  CHECK(index.lists[1].minor_type.empty());
  CHECK(index.warnings.size() >= 2);

  spit(dir.path() / "bad.def", "missing.lst:thing\n");
  try {
    gazetteer::load_index(dir.path() / "bad.def");
    FAIL("expected IndexError");
  } catch (const gazetteer::IndexError &e) {
    CHECK(std::string(e.what()).find("missing.lst") != std::string::npos);
  }
}

TEST_CASE("empty index leaves documents untouched") {
  TempDir dir("gaz");
  spit(dir.path() / "lists.def", "# nothing here\n");
  auto gaz = gazetteer::compile(gazetteer::load_index(dir.path() / "lists.def"));
  Document doc = prepared("water body near a lake");
  const Document before = doc;
  gaz.annotate(doc);
  CHECK(doc == before);
}

TEST_CASE("longest match wins and every list reaching it contributes") {
  TempDir dir("gaz");
  auto gaz = small_gazetteer(dir);
  Document doc = prepared("Keep 100 m from any water body or water.");
  auto lookups = of_type(doc, "Lookup");
  CHECK(lookups.empty());
  gaz.annotate(doc);
  lookups = of_type(doc, "Lookup");
  REQUIRE(lookups.size() == 3);
  CHECK(lusa::testing::covered(doc, lookups[0]) == "water body");
  CHECK(lusa::testing::covered(doc, lookups[1]) == "water body");
  std::set<std::string> lists = {str(lookups[0], "list"), str(lookups[1], "list")};
  CHECK(lists == std::set<std::string>{"water.lst", "land.lst"});
  CHECK(lusa::testing::covered(doc, lookups[2]) == "water");
  CHECK(str(lookups[2], "majorType") == "hydro");
  CHECK(str(lookups[2], "minorType") == "body");
}

TEST_CASE("case folding and root matching") {
  TempDir dir("gaz");
  auto gaz = small_gazetteer(dir);
  Document doc = prepared("LAKES and Sewage Lagoons.");
  gaz.annotate(doc);
  auto lookups = of_type(doc, "Lookup");
  REQUIRE(lookups.size() == 2);
  CHECK(lusa::testing::covered(doc, lookups[0]) == "LAKES");
  CHECK(lusa::testing::covered(doc, lookups[1]) == "Sewage Lagoons");

  TempDir strict_dir("gaz");
  auto strict = small_gazetteer(strict_dir, {.case_sensitive = true, .match_on_root = false});
  Document doc2 = prepared("LAKES and Sewage Lagoons and lake.");
  strict.annotate(doc2);
  auto only = of_type(doc2, "Lookup");
  REQUIRE(only.size() == 1);
  CHECK(lusa::testing::covered(doc2, only[0]) == "lake");
}

TEST_CASE("matches stop at sentence boundaries") {
  TempDir dir("gaz");
  auto gaz = small_gazetteer(dir);
  Document doc = prepared("Avoid water.\n\nBody text follows.");
  gaz.annotate(doc);
  auto lookups = of_type(doc, "Lookup");
  REQUIRE(lookups.size() == 1);
  CHECK(lusa::testing::covered(doc, lookups[0]) == "water");

  Document heading = prepared("Water\n\nBody");
  gaz.annotate(heading);
  REQUIRE(of_type(heading, "Lookup").size() == 1);
}

TEST_CASE("annotation is idempotent") {
  TempDir dir("gaz");
  auto gaz = small_gazetteer(dir);
  Document doc = prepared("lake water body landfill water");
  gaz.annotate(doc);
  const Document once = doc;
  gaz.annotate(doc);
  CHECK(keys_of(doc) == keys_of(once));
  CHECK(of_type(doc, "Lookup").size() == of_type(once, "Lookup").size());
}

TEST_CASE("trie agrees with a brute-force scan") {
  const std::vector<std::string> vocab = {"water", "body", "bodies", "lake", "soil",
                                          "clay", "land", "fill", "slope", "the"};
  std::mt19937 rng(11);
  for (int round = 0; round < 60; ++round) {
    std::vector<oracle::OracleList> lists(1 + rng() % 3);
    TempDir dir("gazr");
    std::string def;
    for (std::size_t li = 0; li < lists.size(); ++li) {
      lists[li].name = "l" + std::to_string(li) + ".lst";
      std::string body;
      std::set<std::string> seen;
      const int n = 1 + static_cast<int>(rng() % 6);
      for (int e = 0; e < n; ++e) {
        std::string term;
        const int words = 1 + static_cast<int>(rng() % 3);
        for (int w = 0; w < words; ++w) {
          if (w) term += ' ';
          term += vocab[rng() % vocab.size()];
        }
        if (!seen.insert(term).second) continue;
        lists[li].terms.push_back(term);
        body += term + "\n";
      }
      spit(dir.path() / lists[li].name, body);
      def += lists[li].name + ":major" + std::to_string(li) + "\n";
    }
    spit(dir.path() / "lists.def", def);
    auto gaz = gazetteer::compile(gazetteer::load_index(dir.path() / "lists.def"));

    for (int d = 0; d < 5; ++d) {
      std::string text;
      const int n = static_cast<int>(rng() % 25);
      for (int i = 0; i < n; ++i) {
        std::string w = vocab[rng() % vocab.size()];
        if (rng() % 5 == 0) w[0] = static_cast<char>(w[0] - 'a' + 'A');
        text += w;
        text += (rng() % 8 == 0) ? ". " : " ";
      }
      Document doc = prepared(text);
      gaz.annotate(doc);
      CHECK_MESSAGE(keys_of(doc) == oracle::gazetteer_scan(doc, lists), text);
    }
  }
}

TEST_CASE("bundled gazetteer loads") {
  const auto &gaz = lusa::testing::bundled_stack().gaz;
  CHECK(gaz.lists().size() >= 10);
  Document doc = prepared("Less than 457 meters from a landfill.");
  gaz.annotate(doc);
  std::set<std::string> majors;
  for (const auto &a : of_type(doc, "Lookup")) majors.insert(str(a, "majorType"));
  CHECK(majors.count("distance_unit") == 1);
  CHECK(majors.count("setback_object") == 1);
  CHECK(majors.count("spatial_relation") == 1);
}
