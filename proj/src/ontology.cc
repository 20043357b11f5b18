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

#include "lusa/ontology.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "lusa/data_dir.h"
#include "lusa/linguistic.h"
#include "lusa/unicode.h"

namespace lusa::ontology {

std::string_view kind_name(ValueKind kind) {
  switch (kind) {
    case ValueKind::kString: return "string";
    case ValueKind::kNumber: return "number";
    case ValueKind::kBoolean: return "boolean";
  }
  return "string";
}

std::optional<ValueKind> parse_kind(std::string_view name) {
  if (name == "string") return ValueKind::kString;
  if (name == "number") return ValueKind::kNumber;
  if (name == "boolean") return ValueKind::kBoolean;
  return std::nullopt;
}

namespace {

ValueKind kind_of(const Value &v) {
  switch (v.index()) {
    case 1: return ValueKind::kNumber;
    case 2: return ValueKind::kBoolean;
    default: return ValueKind::kString;
  }
}

std::string render(const Value &v) {
  if (const auto *d = std::get_if<double>(&v)) return format_number(*d);
  if (const auto *b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  return std::get<std::string>(v);
}

std::optional<Value> parse_value(std::string_view text, ValueKind kind) {
  switch (kind) {
    case ValueKind::kString: return Value(std::string(text));
    case ValueKind::kNumber: {
      double d = 0;
      auto res = std::from_chars(text.data(), text.data() + text.size(), d);
      if (text.empty() || res.ec != std::errc() ||
          res.ptr != text.data() + text.size()) {
        return std::nullopt;
      }
      return Value(d);
    }
    case ValueKind::kBoolean:
      if (text == "true") return Value(true);
      if (text == "false") return Value(false);
      return std::nullopt;
  }
  return std::nullopt;
}

// Feature value converted to the declared kind, if compatible.
std::optional<Value> convert(const FeatureValue &f, ValueKind kind) {
  switch (kind) {
    case ValueKind::kString:
      if (const auto *s = std::get_if<std::string>(&f)) return Value(*s);
      return std::nullopt;
    case ValueKind::kNumber:
      if (const auto *i = std::get_if<std::int64_t>(&f)) {
        return Value(static_cast<double>(*i));
      }
      if (const auto *d = std::get_if<double>(&f)) return Value(*d);
      return std::nullopt;
    case ValueKind::kBoolean:
      if (const auto *b = std::get_if<bool>(&f)) return Value(*b);
      return std::nullopt;
  }
  return std::nullopt;
}

std::string id_prefix(const std::string &ontology_name) {
  return to_lower_utf8(ontology_name) + ":#";
}

void xml_escape(std::string &out, std::string_view s) {
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\n': out += "&#10;"; break;
      case '\t': out += "&#9;"; break;
      case '\r': out += "&#13;"; break;
      default: out.push_back(c);
    }
  }
}

std::string attr(std::string_view key, std::string_view value) {
  std::string out = " ";
  out += key;
  out += "=\"";
  xml_escape(out, value);
  out += "\"";
  return out;
}

void tsv_escape(std::string &out, std::string_view s) {
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
}

std::string tsv_row(std::initializer_list<std::string_view> fields) {
  std::string out;
  bool first = true;
  for (auto f : fields) {
    if (!first) out.push_back('\t');
    first = false;
    tsv_escape(out, f);
  }
  out.push_back('\n');
  return out;
}

}  // namespace

void Ontology::add_class(OntologyClass cls) {
  if (cls.name.empty()) throw SchemaError("class name must be non-empty");
  if (cls.name == "Thing") throw SchemaError("'Thing' is the implicit root");
  if (class_index_.count(cls.name) != 0) {
    throw SchemaError("duplicate class '" + cls.name + "'");
  }
  if (!cls.parent.empty() && cls.parent != "Thing" &&
      class_index_.count(cls.parent) == 0) {
    throw SchemaError("class '" + cls.name + "' has undeclared parent '" +
                      cls.parent + "'");
  }
  if (cls.parent == "Thing") cls.parent.clear();
  std::set<std::string> names;
  for (const auto &p : all_properties(cls.parent)) names.insert(p.name);
  for (const auto &p : cls.properties) {
    if (!names.insert(p.name).second) {
      throw SchemaError("class '" + cls.name + "' redeclares property '" +
                        p.name + "'");
    }
  }
  class_index_.emplace(cls.name, classes_.size());
  classes_.push_back(std::move(cls));
}

const OntologyClass *Ontology::find_class(std::string_view name) const {
  auto it = class_index_.find(name);
  return it == class_index_.end() ? nullptr : &classes_[it->second];
}

bool Ontology::is_subclass_of(std::string_view cls,
                              std::string_view ancestor) const {
  const OntologyClass *c = find_class(cls);
  while (c != nullptr) {
    if (c->name == ancestor) return true;
    c = c->parent.empty() ? nullptr : find_class(c->parent);
  }
  return ancestor == "Thing" && find_class(cls) != nullptr;
}

std::vector<PropertyDecl> Ontology::all_properties(std::string_view cls) const {
  std::vector<const OntologyClass *> chain;
  for (const OntologyClass *c = find_class(cls); c != nullptr;
       c = c->parent.empty() ? nullptr : find_class(c->parent)) {
    chain.push_back(c);
  }
  std::vector<PropertyDecl> out;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    out.insert(out.end(), (*it)->properties.begin(), (*it)->properties.end());
  }
  return out;
}

std::optional<PropertyDecl> Ontology::find_property(
    std::string_view cls, std::string_view property) const {
  for (const auto &p : all_properties(cls)) {
    if (p.name == property) return p;
  }
  return std::nullopt;
}

std::string Ontology::next_instance_id(std::string_view cls) const {
  const std::string base = id_prefix(name_) + std::string(cls) + "_";
  std::size_t n = 1;
  for (const auto &inst : instances_) n += inst.class_name == cls ? 1 : 0;
  while (instance_ids_.count(base + std::to_string(n)) != 0) ++n;
  return base + std::to_string(n);
}

void Ontology::add_instance(Instance inst) {
  if (find_class(inst.class_name) == nullptr) {
    throw SchemaError("instance '" + inst.id + "' of unknown class '" +
                      inst.class_name + "'");
  }
  if (inst.id.empty() || instance_ids_.count(inst.id) != 0) {
    throw SchemaError("duplicate or empty instance id '" + inst.id + "'");
  }
  for (const auto &[prop, value] : inst.values) {
    auto decl = find_property(inst.class_name, prop);
    if (!decl) {
      throw SchemaError("class '" + inst.class_name + "' has no property '" +
                        prop + "'");
    }
    if (decl->kind != kind_of(value)) {
      throw SchemaError("property '" + prop + "' expects " +
                        std::string(kind_name(decl->kind)));
    }
  }
  instance_ids_.insert(inst.id);
  instances_.push_back(std::move(inst));
}

Ontology load_schema(const std::filesystem::path &file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw SchemaError("cannot read ontology schema " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return import_ontology_xml(ss.str());
}

Ontology load_lusa_schema() {
  return load_schema(default_data_dir() / "ontology" / "lusa_schema.xml");
}

PopulationReport populate(Ontology &ontology,
                          const std::vector<Document> &corpus,
                          std::string_view mention_type,
                          std::string_view set) {
  PopulationReport report;
  AnnotationFilter filter;
  filter.type = std::string(mention_type);
  for (const auto &doc : corpus) {
    for (const auto &m : doc.query(set, filter)) {
      ++report.total_mentions;
      auto skip = [&](std::string reason) {
        ++report.skipped;
        report.skips.push_back({doc.id(), m.id, std::move(reason)});
      };
      const auto *onto = std::get_if<std::string>(m.feature("ontology"));
      const auto *cls = std::get_if<std::string>(m.feature("class"));
      if (onto == nullptr) {
        skip("missing 'ontology' feature");
        continue;
      }
      if (*onto != ontology.name()) {
        skip("ontology '" + *onto + "' is not '" + ontology.name() + "'");
        continue;
      }
      if (cls == nullptr) {
        skip("missing 'class' feature");
        continue;
      }
      if (ontology.find_class(*cls) == nullptr) {
        skip("unknown class '" + *cls + "'");
        continue;
      }
      Instance inst;
      inst.class_name = *cls;
      inst.id = ontology.next_instance_id(*cls);
      for (const auto &[key, value] : m.features) {
        if (key == "class" || key == "ontology") continue;
        auto decl = ontology.find_property(*cls, key);
        if (!decl) continue;
        if (auto v = convert(value, decl->kind)) {
          inst.values.emplace(key, std::move(*v));
        } else {
          ++report.skipped_properties;
          report.property_issues.push_back(
              doc.id() + "#" + std::to_string(m.id) + ": property '" + key +
              "' expects " + std::string(kind_name(decl->kind)) + ", got '" +
              to_string(value) + "'");
        }
      }
      inst.provenance = Provenance{doc.id(), m.span.start, m.span.end, m.id};
      report.created_ids.push_back(inst.id);
      ontology.add_instance(std::move(inst));
      ++report.created;
    }
  }
  return report;
}

std::vector<Instance> query_instances(const Ontology &ontology,
                                      std::string_view cls,
                                      bool include_subclasses) {
  if (ontology.find_class(cls) == nullptr) {
    throw QueryError("unknown class '" + std::string(cls) + "'");
  }
  std::vector<Instance> out;
  for (const auto &inst : ontology.instances()) {
    if (inst.class_name == cls ||
        (include_subclasses && ontology.is_subclass_of(inst.class_name, cls))) {
      out.push_back(inst);
    }
  }
  return out;
}

std::string export_ontology(const Ontology &ontology, ExportFormat format) {
  std::string out;
  if (format == ExportFormat::kTsv) {
    out += tsv_row({"ontology", ontology.name()});
    for (const auto &c : ontology.classes()) {
      out += tsv_row({"class", c.name, c.parent.empty() ? "Thing" : c.parent,
                      c.inferred ? "inferred" : "declared", c.description});
      for (const auto &p : c.properties) {
        out += tsv_row({"property", c.name, p.name, kind_name(p.kind)});
      }
    }
    for (const auto &inst : ontology.instances()) {
      if (inst.provenance) {
        const auto &pv = *inst.provenance;
        out += tsv_row({"instance", inst.id, inst.class_name, pv.doc,
                        std::to_string(pv.start), std::to_string(pv.end),
                        std::to_string(pv.annotation)});
      } else {
        out += tsv_row({"instance", inst.id, inst.class_name});
      }
      for (const auto &[prop, value] : inst.values) {
        out += tsv_row({"value", inst.id, prop, render(value)});
      }
    }
    return out;
  }

  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<ontology" + attr("name", ontology.name()) + ">\n";
  for (const auto &c : ontology.classes()) {
    out += "  <class" + attr("name", c.name);
    if (!c.parent.empty()) out += attr("parent", c.parent);
    if (c.inferred) out += attr("inferred", "true");
    if (c.description.empty() && c.properties.empty()) {
      out += "/>\n";
      continue;
    }
    out += ">\n";
    if (!c.description.empty()) {
      out += "    <description>";
      xml_escape(out, c.description);
      out += "</description>\n";
    }
    for (const auto &p : c.properties) {
      out += "    <property" + attr("name", p.name) +
             attr("kind", kind_name(p.kind)) + "/>\n";
    }
    out += "  </class>\n";
  }
  for (const auto &inst : ontology.instances()) {
    out += "  <instance" + attr("id", inst.id) + attr("class", inst.class_name) +
           ">\n";
    for (const auto &[prop, value] : inst.values) {
      out += "    <value" + attr("property", prop) + ">";
      xml_escape(out, render(value));
      out += "</value>\n";
    }
    if (inst.provenance) {
      const auto &pv = *inst.provenance;
      out += "    <provenance" + attr("doc", pv.doc) +
             attr("start", std::to_string(pv.start)) +
             attr("end", std::to_string(pv.end)) +
             attr("ann", std::to_string(pv.annotation)) + "/>\n";
    }
    out += "  </instance>\n";
  }
  out += "</ontology>\n";
  return out;
}

Ontology import_ontology_xml(std::string_view xml) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in{std::string(xml)};
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error &e) {
    throw SchemaError(std::string("malformed ontology XML: ") + e.what());
  }
  auto root = tree.get_child_optional("ontology");
  if (!root) throw SchemaError("missing <ontology> root element");
  Ontology onto(root->get<std::string>("<xmlattr>.name", "LUSA"));

  auto require = [](const pt::ptree &node, const std::string &key,
                     const std::string &where) {
    auto v = node.get_optional<std::string>("<xmlattr>." + key);
    if (!v) throw SchemaError(where + " lacks attribute '" + key + "'");
    return *v;
  };
  auto parse_size = [](const std::string &s, const std::string &what) {
    std::size_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      throw SchemaError("bad " + what + " '" + s + "'");
    }
    return v;
  };

  for (const auto &[tag, node] : *root) {
    if (tag == "class") {
      OntologyClass c;
      c.name = require(node, "name", "<class>");
      c.parent = node.get<std::string>("<xmlattr>.parent", "");
      c.inferred = node.get<std::string>("<xmlattr>.inferred", "false") == "true";
      c.description = node.get<std::string>("description", "");
      for (const auto &[ctag, child] : node) {
        if (ctag != "property") continue;
        PropertyDecl p;
        p.name = require(child, "name", "<property>");
        const std::string kind = require(child, "kind", "<property>");
        auto k = parse_kind(kind);
        if (!k) throw SchemaError("unknown property kind '" + kind + "'");
        p.kind = *k;
        c.properties.push_back(std::move(p));
      }
      onto.add_class(std::move(c));
    } else if (tag == "instance") {
      Instance inst;
      inst.id = require(node, "id", "<instance>");
      inst.class_name = require(node, "class", "<instance>");
      if (onto.find_class(inst.class_name) == nullptr) {
        throw SchemaError("instance '" + inst.id + "' of unknown class '" +
                          inst.class_name + "'");
      }
      for (const auto &[ctag, child] : node) {
        if (ctag == "value") {
          const std::string prop = require(child, "property", "<value>");
          auto decl = onto.find_property(inst.class_name, prop);
          if (!decl) {
            throw SchemaError("class '" + inst.class_name +
                              "' has no property '" + prop + "'");
          }
          auto v = parse_value(child.data(), decl->kind);
          if (!v) {
            throw SchemaError("bad " + std::string(kind_name(decl->kind)) +
                              " value '" + child.data() + "' for '" + prop +
                              "'");
          }
          inst.values.emplace(prop, std::move(*v));
        } else if (ctag == "provenance") {
          Provenance pv;
          pv.doc = require(child, "doc", "<provenance>");
          pv.start = parse_size(require(child, "start", "<provenance>"), "start");
          pv.end = parse_size(require(child, "end", "<provenance>"), "end");
          const std::string ann = require(child, "ann", "<provenance>");
          std::int64_t a = 0;
          auto res = std::from_chars(ann.data(), ann.data() + ann.size(), a);
          if (res.ec != std::errc() || res.ptr != ann.data() + ann.size()) {
            throw SchemaError("bad annotation id '" + ann + "'");
          }
          pv.annotation = a;
          inst.provenance = pv;
        }
      }
      onto.add_instance(std::move(inst));
    }
  }
  return onto;
}

// --- criteria digest --------------------------------------------------------

nlohmann::ordered_json CriteriaSet::to_json() const {
  nlohmann::ordered_json j;
  j["constraints"] = nlohmann::ordered_json::array();
  for (const auto &c : constraints) {
    j["constraints"].push_back({{"object", c.object},
                                {"distance_m", c.distance_m},
                                {"source_instance", c.source_instance}});
  }
  j["factors"] = nlohmann::ordered_json::array();
  for (const auto &f : factors) {
    j["factors"].push_back({{"class", f.class_name},
                            {"kind", f.kind},
                            {"source_instance", f.source_instance}});
  }
  j["unresolved"] = nlohmann::ordered_json::array();
  for (const auto &u : unresolved) {
    j["unresolved"].push_back(
        {{"source_instance", u.source_instance}, {"reason", u.reason}});
  }
  return j;
}

CriteriaSet CriteriaSet::from_json(const nlohmann::json &j) {
  CriteriaSet out;
  for (const auto &c : j.value("constraints", nlohmann::json::array())) {
    out.constraints.push_back({c.at("object").get<std::string>(),
                               c.at("distance_m").get<double>(),
                               c.value("source_instance", "")});
  }
  for (const auto &f : j.value("factors", nlohmann::json::array())) {
    out.factors.push_back({f.at("class").get<std::string>(),
                           f.at("kind").get<std::string>(),
                           f.value("source_instance", "")});
  }
  for (const auto &u : j.value("unresolved", nlohmann::json::array())) {
    out.unresolved.push_back(
        {u.value("source_instance", ""), u.value("reason", "")});
  }
  return out;
}

FactorMap load_factor_map(const std::filesystem::path &file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw SchemaError("cannot read factor map " + file.string());
  FactorMap out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw SchemaError(file.string() + ": expected 'Class\\tkind' in '" +
                        line + "'");
    }
    out[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return out;
}

std::optional<double> meters_per_unit(std::string_view unit) {
  static const std::map<std::string, double, std::less<>> table = {
      {"m", 1.0},          {"meter", 1.0},       {"meters", 1.0},
      {"metre", 1.0},      {"metres", 1.0},      {"km", 1000.0},
      {"kilometer", 1000.0}, {"kilometers", 1000.0}, {"kilometre", 1000.0},
      {"kilometres", 1000.0}, {"ft", 0.3048},    {"foot", 0.3048},
      {"feet", 0.3048}};
  auto it = table.find(to_lower_utf8(unit));
  if (it == table.end()) return std::nullopt;
  return it->second;
}

std::string normalize_object(std::string_view object) {
  std::string out;
  std::istringstream words{to_lower_utf8(object)};
  std::string w;
  while (words >> w) {
    if (!out.empty()) out.push_back('_');
    out += linguistic::lemmatize(w, "NNS");
  }
  return out;
}

namespace {

std::string collapse_spaces(std::string_view s) {
  std::istringstream words{to_lower_utf8(s)};
  std::string out;
  std::string w;
  while (words >> w) {
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

const std::string *string_value(const Instance &inst, const std::string &key) {
  auto it = inst.values.find(key);
  if (it == inst.values.end()) return nullptr;
  return std::get_if<std::string>(&it->second);
}

std::optional<std::string> factor_kind(const Ontology &ontology,
                                       const FactorMap &map,
                                       std::string_view cls) {
  for (const OntologyClass *c = ontology.find_class(cls); c != nullptr;
       c = c->parent.empty() ? nullptr : ontology.find_class(c->parent)) {
    if (auto it = map.find(c->name); it != map.end()) return it->second;
  }
  return std::nullopt;
}

}  // namespace

CriteriaSet criteria_summary(const Ontology &ontology,
                             const FactorMap &factor_map) {
  CriteriaSet out;
  for (const auto &inst : ontology.instances()) {
    auto dist_it = inst.values.find("distance");
    const bool quantitative =
        ontology.is_subclass_of(inst.class_name, "Setback") &&
        dist_it != inst.values.end() &&
        std::holds_alternative<double>(dist_it->second);
    if (quantitative) {
      const std::string *rel = string_value(inst, "spatial_relation");
      const std::string *unit = string_value(inst, "unit");
      const std::string *obj = string_value(inst, "setback_from");
      const std::string relation = rel ? collapse_spaces(*rel) : "";
      if (relation == "within" || relation == "less than") {
        std::optional<double> factor = unit ? meters_per_unit(*unit) : std::nullopt;
        if (!factor) {
          out.unresolved.push_back(
              {inst.id, "unknown unit '" + (unit ? *unit : std::string()) + "'"});
          continue;
        }
        if (obj == nullptr || obj->empty()) {
          out.unresolved.push_back({inst.id, "missing setback_from"});
          continue;
        }
        out.constraints.push_back({normalize_object(*obj),
                                   std::get<double>(dist_it->second) * *factor,
                                   inst.id});
        continue;
      }
    }
    if (auto kind = factor_kind(ontology, factor_map, inst.class_name)) {
      out.factors.push_back({inst.class_name, *kind, inst.id});
    }
  }
  return out;
}

}  // namespace lusa::ontology
