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

#ifndef LUSA_ONTOLOGY_H_
#define LUSA_ONTOLOGY_H_

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "lusa/document.h"

namespace lusa::ontology {

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QueryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ValueKind { kString, kNumber, kBoolean };

std::string_view kind_name(ValueKind kind);
std::optional<ValueKind> parse_kind(std::string_view name);

using Value = std::variant<std::string, double, bool>;

struct PropertyDecl {
  std::string name;
  ValueKind kind = ValueKind::kString;
  bool operator==(const PropertyDecl &) const = default;
};

// A class with no parent hangs off the implicit root Thing.
struct OntologyClass {
  std::string name;
  std::string parent;
  std::vector<PropertyDecl> properties;
  std::string description;
  bool inferred = false;
  bool operator==(const OntologyClass &) const = default;
};

struct Provenance {
  std::string doc;
  std::size_t start = 0;
  std::size_t end = 0;
  AnnotationId annotation = 0;
  bool operator==(const Provenance &) const = default;
};

struct Instance {
  std::string id;
  std::string class_name;
  std::map<std::string, Value> values;
  std::optional<Provenance> provenance;
  bool operator==(const Instance &) const = default;
};

class Ontology {
 public:
  explicit Ontology(std::string name = "LUSA") : name_(std::move(name)) {}

  const std::string &name() const { return name_; }
  const std::vector<OntologyClass> &classes() const { return classes_; }
  const std::vector<Instance> &instances() const { return instances_; }

  // The parent must already be declared; property names may not repeat
  // anywhere along the ancestor chain.
  void add_class(OntologyClass cls);
  void add_instance(Instance inst);

  const OntologyClass *find_class(std::string_view name) const;
  bool is_subclass_of(std::string_view cls, std::string_view ancestor) const;
  // Declared and inherited properties, root-most first.
  std::vector<PropertyDecl> all_properties(std::string_view cls) const;
  std::optional<PropertyDecl> find_property(std::string_view cls,
                                            std::string_view property) const;

  // `<prefix>:#<Class>_<n>` with the smallest unused n >= 1.
  std::string next_instance_id(std::string_view cls) const;

  bool operator==(const Ontology &other) const {
    return name_ == other.name_ && classes_ == other.classes_ &&
           instances_ == other.instances_;
  }

 private:
  std::string name_;
  std::vector<OntologyClass> classes_;
  std::map<std::string, std::size_t, std::less<>> class_index_;
  std::vector<Instance> instances_;
  std::set<std::string, std::less<>> instance_ids_;
};

Ontology load_schema(const std::filesystem::path &file);
// Bundled schema from the data directory.
Ontology load_lusa_schema();

struct SkipRecord {
  std::string doc;
  AnnotationId annotation = 0;
  std::string reason;
};

struct PopulationReport {
  std::size_t total_mentions = 0;
  std::size_t created = 0;
  std::size_t skipped = 0;
  std::size_t skipped_properties = 0;
  std::vector<SkipRecord> skips;
  std::vector<std::string> property_issues;
  std::vector<std::string> created_ids;
};

// One instance per Mention whose `ontology` feature names this ontology and
// whose `class` feature names a known class. Features matching declared
// properties are copied; everything else is reported, never fatal.
PopulationReport populate(Ontology &ontology,
                          const std::vector<Document> &corpus,
                          std::string_view mention_type = "Mention",
                          std::string_view set = "");

std::vector<Instance> query_instances(const Ontology &ontology,
                                      std::string_view cls,
                                      bool include_subclasses);

enum class ExportFormat { kXml, kTsv };

std::string export_ontology(const Ontology &ontology, ExportFormat format);
Ontology import_ontology_xml(std::string_view xml);

// --- criteria digest --------------------------------------------------------

struct BufferConstraint {
  std::string object;
  double distance_m = 0;
  std::string source_instance;
  bool operator==(const BufferConstraint &) const = default;
};

struct FactorEntry {
  std::string class_name;
  std::string kind;
  std::string source_instance;
  bool operator==(const FactorEntry &) const = default;
};

struct UnresolvedEntry {
  std::string source_instance;
  std::string reason;
  bool operator==(const UnresolvedEntry &) const = default;
};

struct CriteriaSet {
  std::vector<BufferConstraint> constraints;
  std::vector<FactorEntry> factors;
  std::vector<UnresolvedEntry> unresolved;

  nlohmann::ordered_json to_json() const;
  static CriteriaSet from_json(const nlohmann::json &j);
  bool operator==(const CriteriaSet &) const = default;
};

// Ontology class -> factor kind, read from `Class\tkind` lines.
using FactorMap = std::map<std::string, std::string, std::less<>>;
FactorMap load_factor_map(const std::filesystem::path &file);

// Meters per unit for the recognized distance units.
std::optional<double> meters_per_unit(std::string_view unit);

// "Water Bodies" -> "water_body".
std::string normalize_object(std::string_view object);

// Setback instances with a numeric distance and a `within`/`less than`
// relation become buffer constraints; instances of classes in the factor
// map become factors; unknown units are reported as unresolved.
CriteriaSet criteria_summary(const Ontology &ontology,
                             const FactorMap &factor_map);

}  // namespace lusa::ontology

#endif  // LUSA_ONTOLOGY_H_
