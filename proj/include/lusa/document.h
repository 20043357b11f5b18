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

#ifndef LUSA_DOCUMENT_H_
#define LUSA_DOCUMENT_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

namespace lusa {

using AnnotationId = std::int64_t;

// Feature values carried by annotations. Integers and floats are kept
// apart so that serialized documents re-import with identical types.
using FeatureValue = std::variant<std::string, std::int64_t, double, bool>;
using FeatureMap = std::map<std::string, FeatureValue, std::less<>>;

// Shortest decimal form that parses back to the same double.
std::string format_number(double value);

// Human-readable rendering: strings verbatim, numbers in shortest form.
std::string to_string(const FeatureValue &value);

// Numeric view of a feature: integers and floats convert, strings are
// parsed if they hold a complete number, booleans never convert.
std::optional<double> as_number(const FeatureValue &value);

class SpanError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ExportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StandoffError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Half-open [start, end) range of code point offsets into Document::text.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start; }
  bool contains(Span other) const {
    return start <= other.start && other.end <= end;
  }
  bool overlaps(Span other) const {
    return start < other.end && other.start < end;
  }
  auto operator<=>(const Span &) const = default;
};

struct Annotation {
  AnnotationId id = 0;
  std::string type;
  Span span;
  FeatureMap features;

  const FeatureValue *feature(std::string_view key) const;
  bool operator==(const Annotation &) const = default;
};

// Canonical order: ascending start, longest first, then ascending id.
bool canonical_less(const Annotation &a, const Annotation &b);

struct AnnotationFilter {
  std::optional<std::string> type;
  std::optional<Span> overlapping;
  std::optional<Span> contained_in;
  FeatureMap feature_equals;

  bool matches(const Annotation &a) const;
};

// Annotations kept in canonical order at all times.
class AnnotationSet {
 public:
  explicit AnnotationSet(std::string name = {}) : name_(std::move(name)) {}

  const std::string &name() const { return name_; }
  const std::vector<Annotation> &annotations() const { return items_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }

  void insert(Annotation a);
  std::vector<Annotation> query(const AnnotationFilter &filter) const;
  const Annotation *find(AnnotationId id) const;
  std::size_t erase_if(const std::function<bool(const Annotation &)> &pred);
  // Features may change; type, span and id may not.
  void update_features(
      const std::function<void(const Annotation &, FeatureMap &)> &fn);

  bool operator==(const AnnotationSet &) const = default;

 private:
  std::string name_;
  std::vector<Annotation> items_;
};

class Document {
 public:
  Document() = default;
  Document(std::string id, std::u32string text)
      : id_(std::move(id)), text_(std::move(text)) {}

  const std::string &id() const { return id_; }
  const std::u32string &text() const { return text_; }
  std::string text_utf8() const;
  std::string text_utf8(Span span) const;

  // Stores a copy of `ann` under a fresh id; ann.id is ignored.
  AnnotationId add_annotation(std::string_view set, Annotation ann);
  AnnotationId add_annotation(std::string_view set, std::string type,
                              Span span, FeatureMap features = {});
  // Stores `ann` keeping its id (used by importers).
  void restore_annotation(std::string_view set, Annotation ann);

  // Removes every annotation of the listed types from a set.
  std::size_t remove_types(std::string_view set,
                           const std::set<std::string, std::less<>> &types);

  void update_features(
      std::string_view set,
      const std::function<void(const Annotation &, FeatureMap &)> &fn);

  AnnotationSet &annotation_set(std::string_view name);
  const AnnotationSet *find_set(std::string_view name) const;
  const std::map<std::string, AnnotationSet, std::less<>> &sets() const {
    return sets_;
  }

  std::vector<Annotation> query(std::string_view set,
                                const AnnotationFilter &filter = {}) const;

  AnnotationId next_id() const { return next_id_; }

  // An empty named set compares equal to an absent one.
  bool operator==(const Document &other) const;

 private:
  void check_span(Span span) const;

  std::string id_;
  std::u32string text_;
  std::map<std::string, AnnotationSet, std::less<>> sets_;
  std::unordered_set<AnnotationId> ids_;
  AnnotationId next_id_ = 0;
};

enum class InputFormat { kPlain, kHtml };

// Decodes UTF-8 and normalizes line endings; HTML input additionally has
// markup stripped, entities decoded and block-level tags turned into
// newlines. Invalid UTF-8 raises IngestError.
Document ingest_text(std::string id, std::string_view raw, InputFormat format);

// Wraps every annotation of the selected types in an XML element named after
// its type, with features as attributes. Crossing spans raise ExportError.
std::string export_inline_xml(const Document &doc, std::string_view set,
                              const std::vector<std::string> &types);

// Line-oriented standoff serialization of one annotation set:
//   # doc <id>
//   # set <name>
//   <id>\t<type>\t<start>\t<end>\t<k1=v1;k2=v2>
std::string export_standoff(const Document &doc, std::string_view set);
Document import_standoff(std::string_view standoff, std::u32string text);

}  // namespace lusa

#endif  // LUSA_DOCUMENT_H_
