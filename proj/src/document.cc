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

#include "lusa/document.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "lusa/unicode.h"

namespace lusa {

std::string format_number(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string to_string(const FeatureValue &value) {
  struct Visitor {
    std::string operator()(const std::string &s) const { return s; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
  };
  return std::visit(Visitor{}, value);
}

std::optional<double> as_number(const FeatureValue &value) {
  if (const auto *i = std::get_if<std::int64_t>(&value)) {
    return static_cast<double>(*i);
  }
  if (const auto *d = std::get_if<double>(&value)) return *d;
  if (const auto *s = std::get_if<std::string>(&value)) {
    double out = 0;
    const char *first = s->data();
    const char *last = first + s->size();
    auto res = std::from_chars(first, last, out);
    if (!s->empty() && res.ec == std::errc() && res.ptr == last) return out;
  }
  return std::nullopt;
}

const FeatureValue *Annotation::feature(std::string_view key) const {
  auto it = features.find(key);
  return it == features.end() ? nullptr : &it->second;
}

bool canonical_less(const Annotation &a, const Annotation &b) {
  if (a.span.start != b.span.start) return a.span.start < b.span.start;
  if (a.span.end != b.span.end) return a.span.end > b.span.end;
  return a.id < b.id;
}

bool AnnotationFilter::matches(const Annotation &a) const {
  if (type && a.type != *type) return false;
  if (overlapping && !overlapping->overlaps(a.span)) return false;
  if (contained_in && !contained_in->contains(a.span)) return false;
  for (const auto &[key, value] : feature_equals) {
    const FeatureValue *f = a.feature(key);
    if (f == nullptr || *f != value) return false;
  }
  return true;
}

void AnnotationSet::insert(Annotation a) {
  auto pos = std::upper_bound(items_.begin(), items_.end(), a, canonical_less);
  items_.insert(pos, std::move(a));
}

std::vector<Annotation> AnnotationSet::query(
    const AnnotationFilter &filter) const {
  std::vector<Annotation> out;
  for (const auto &a : items_) {
    if (filter.matches(a)) out.push_back(a);
  }
  return out;
}

const Annotation *AnnotationSet::find(AnnotationId id) const {
  for (const auto &a : items_) {
    if (a.id == id) return &a;
  }
  return nullptr;
}

std::size_t AnnotationSet::erase_if(
    const std::function<bool(const Annotation &)> &pred) {
  return std::erase_if(items_, pred);
}

void AnnotationSet::update_features(
    const std::function<void(const Annotation &, FeatureMap &)> &fn) {
  for (auto &a : items_) fn(a, a.features);
}

std::string Document::text_utf8() const { return utf8_encode(text_); }

std::string Document::text_utf8(Span span) const {
  check_span(span);
  return utf8_encode(std::u32string_view(text_).substr(span.start,
                                                       span.length()));
}

void Document::check_span(Span span) const {
  if (span.start > span.end || span.end > text_.size()) {
    throw SpanError("span [" + std::to_string(span.start) + "," +
                    std::to_string(span.end) + ") outside document '" + id_ +
                    "' of length " + std::to_string(text_.size()));
  }
}

AnnotationId Document::add_annotation(std::string_view set, Annotation ann) {
  ann.id = next_id_;
  restore_annotation(set, std::move(ann));
  return next_id_ - 1;
}

AnnotationId Document::add_annotation(std::string_view set, std::string type,
                                      Span span, FeatureMap features) {
  return add_annotation(set,
                        Annotation{0, std::move(type), span, std::move(features)});
}

void Document::restore_annotation(std::string_view set, Annotation ann) {
  check_span(ann.span);
  if (ann.type.empty()) {
    throw std::invalid_argument("annotation type must be non-empty");
  }
  if (ann.id < 0 || ids_.count(ann.id) != 0) {
    throw std::invalid_argument("duplicate annotation id " +
                                std::to_string(ann.id) + " in document '" +
                                id_ + "'");
  }
  ids_.insert(ann.id);
  next_id_ = std::max(next_id_, ann.id + 1);
  annotation_set(set).insert(std::move(ann));
}

std::size_t Document::remove_types(
    std::string_view set, const std::set<std::string, std::less<>> &types) {
  auto it = sets_.find(set);
  if (it == sets_.end()) return 0;
  return it->second.erase_if([&](const Annotation &a) {
    if (types.count(a.type) == 0) return false;
    ids_.erase(a.id);
    return true;
  });
}

void Document::update_features(
    std::string_view set,
    const std::function<void(const Annotation &, FeatureMap &)> &fn) {
  auto it = sets_.find(set);
  if (it != sets_.end()) it->second.update_features(fn);
}

AnnotationSet &Document::annotation_set(std::string_view name) {
  auto it = sets_.find(name);
  if (it == sets_.end()) {
    it = sets_.emplace(std::string(name), AnnotationSet(std::string(name)))
             .first;
  }
  return it->second;
}

const AnnotationSet *Document::find_set(std::string_view name) const {
  auto it = sets_.find(name);
  return it == sets_.end() ? nullptr : &it->second;
}

std::vector<Annotation> Document::query(std::string_view set,
                                        const AnnotationFilter &filter) const {
  const AnnotationSet *s = find_set(set);
  if (s == nullptr) return {};
  return s->query(filter);
}

// ---------------------------------------------------------------------------
// Ingestion

namespace {

std::u32string normalize_newlines(std::u32string_view in) {
  std::u32string out;
  out.reserve(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (in[i] == U'\r') {
      out.push_back(U'\n');
      if (i + 1 < in.size() && in[i + 1] == U'\n') ++i;
    } else {
      out.push_back(in[i]);
    }
  }
  return out;
}

const std::unordered_map<std::u32string, char32_t> &named_entities() {
  static const std::unordered_map<std::u32string, char32_t> table = {
      {U"amp", U'&'},     {U"lt", U'<'},      {U"gt", U'>'},
      {U"quot", U'"'},    {U"apos", U'\''},   {U"nbsp", 0xA0},
      {U"ndash", 0x2013}, {U"mdash", 0x2014}, {U"lsquo", 0x2018},
      {U"rsquo", 0x2019}, {U"ldquo", 0x201C}, {U"rdquo", 0x201D},
      {U"hellip", 0x2026}, {U"deg", 0xB0},    {U"copy", 0xA9},
      {U"reg", 0xAE},     {U"sect", 0xA7},    {U"para", 0xB6},
      {U"middot", 0xB7},  {U"eacute", 0xE9},  {U"egrave", 0xE8},
      {U"agrave", 0xE0},  {U"ccedil", 0xE7},  {U"ocirc", 0xF4},
      {U"frac12", 0xBD},  {U"times", 0xD7},
  };
  return table;
}

bool is_block_tag(std::u32string_view name) {
  static const std::set<std::u32string, std::less<>> blocks = {
      U"address", U"article", U"aside", U"blockquote", U"body", U"br",
      U"caption", U"dd", U"div", U"dl", U"dt", U"fieldset", U"figcaption",
      U"figure", U"footer", U"form", U"h1", U"h2", U"h3", U"h4", U"h5",
      U"h6", U"head", U"header", U"hr", U"html", U"li", U"main", U"nav",
      U"ol", U"p", U"pre", U"section", U"table", U"tbody", U"td", U"tfoot",
      U"th", U"thead", U"title", U"tr", U"ul"};
  return blocks.count(name) != 0;
}

class HtmlStripper {
 public:
  explicit HtmlStripper(std::u32string_view in) : in_(in) {}

  std::u32string run() {
    while (pos_ < in_.size()) {
      char32_t c = in_[pos_];
      if (c == U'<' && starts_markup()) {
        consume_markup();
      } else if (c == U'&') {
        emit_text(decode_entity());
      } else {
        emit_text(c);
        ++pos_;
      }
    }
    trim_trailing_spaces();
    return std::move(out_);
  }

 private:
  bool starts_markup() const {
    if (pos_ + 1 >= in_.size()) return false;
    char32_t n = in_[pos_ + 1];
    return is_letter(n) || n == U'/' || n == U'!' || n == U'?';
  }

  bool lookahead_ci(std::u32string_view s) const {
    if (pos_ + s.size() > in_.size()) return false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (to_lower(in_[pos_ + i]) != s[i]) return false;
    }
    return true;
  }

  void skip_past(std::u32string_view terminator) {
    auto at = in_.find(terminator, pos_);
    pos_ = at == std::u32string_view::npos ? in_.size()
                                            : at + terminator.size();
  }

  void skip_past_ci(std::u32string_view terminator) {
    while (pos_ < in_.size() && !lookahead_ci(terminator)) ++pos_;
    pos_ = std::min(in_.size(), pos_ + terminator.size());
  }

  void consume_markup() {
    if (lookahead_ci(U"<!--")) {
      skip_past(U"-->");
      return;
    }
    // Tag: read name, then skip attributes honoring quotes.
    std::size_t p = pos_ + 1;
    bool closing = false;
    if (p < in_.size() && in_[p] == U'/') {
      closing = true;
      ++p;
    }
    std::u32string name;
    while (p < in_.size() && (is_letter(in_[p]) || is_digit(in_[p]))) {
      name.push_back(to_lower(in_[p]));
      ++p;
    }
    char32_t quote = 0;
    while (p < in_.size()) {
      char32_t c = in_[p];
      if (quote != 0) {
        if (c == quote) quote = 0;
      } else if (c == U'"' || c == U'\'') {
        quote = c;
      } else if (c == U'>') {
        break;
      }
      ++p;
    }
    pos_ = std::min(in_.size(), p + 1);
    if (!closing && (name == U"script" || name == U"style")) {
      skip_past_ci(U"</" + name);
      while (pos_ < in_.size() && in_[pos_ - 1] != U'>') ++pos_;
      return;
    }
    if (name == U"pre") in_pre_ = !closing;
    if (name == U"br") {
      trim_trailing_spaces();
      out_.push_back(U'\n');
    } else if (is_block_tag(name)) {
      newline();
    }
  }

  char32_t decode_entity() {
    std::size_t semi = in_.find(U';', pos_);
    if (semi != std::u32string_view::npos && semi - pos_ <= 10) {
      std::u32string_view body = in_.substr(pos_ + 1, semi - pos_ - 1);
      std::optional<char32_t> cp;
      if (!body.empty() && body[0] == U'#') {
        std::string digits = utf8_encode(body.substr(1));
        int base = 10;
        if (!digits.empty() && (digits[0] == 'x' || digits[0] == 'X')) {
          base = 16;
          digits.erase(0, 1);
        }
        unsigned long v = 0;
        auto res = std::from_chars(digits.data(), digits.data() + digits.size(),
                                   v, base);
        if (!digits.empty() && res.ec == std::errc() &&
            res.ptr == digits.data() + digits.size() && v > 0 &&
            v <= 0x10FFFF && !(v >= 0xD800 && v <= 0xDFFF)) {
          cp = static_cast<char32_t>(v);
        }
      } else {
        auto it = named_entities().find(std::u32string(body));
        if (it != named_entities().end()) cp = it->second;
      }
      if (cp) {
        pos_ = semi + 1;
        return *cp;
      }
    }
    ++pos_;
    return U'&';
  }

  void emit_text(char32_t c) {
    if (in_pre_) {
      out_.push_back(c);
      return;
    }
    if (is_space(c) && c != 0xA0) {
      if (out_.empty() || out_.back() == U'\n' || out_.back() == U' ') return;
      out_.push_back(U' ');
      return;
    }
    out_.push_back(c);
  }

  void trim_trailing_spaces() {
    while (!out_.empty() && out_.back() == U' ') out_.pop_back();
  }

  void newline() {
    trim_trailing_spaces();
    if (!out_.empty() && out_.back() != U'\n') out_.push_back(U'\n');
  }

  std::u32string_view in_;
  std::size_t pos_ = 0;
  std::u32string out_;
  bool in_pre_ = false;
};

}  // namespace

bool Document::operator==(const Document &other) const {
  if (id_ != other.id_ || text_ != other.text_) return false;
  auto non_empty = [](const auto &sets) {
    std::vector<const AnnotationSet *> out;
    for (const auto &[name, set] : sets) {
      if (!set.empty()) out.push_back(&set);
    }
    return out;
  };
  const auto a = non_empty(sets_);
  const auto b = non_empty(other.sets_);
  return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                    [](const AnnotationSet *x, const AnnotationSet *y) { return *x == *y; });
}

Document ingest_text(std::string id, std::string_view raw,
                     InputFormat format) {
  std::u32string decoded;
  try {
    decoded = utf8_decode(raw);
  } catch (const EncodingError &e) {
    throw IngestError("document '" + id + "': " + e.what());
  }
  if (!decoded.empty() && decoded.front() == 0xFEFF) decoded.erase(0, 1);
  std::u32string text = normalize_newlines(decoded);
  if (format == InputFormat::kHtml) text = HtmlStripper(text).run();
  return Document(std::move(id), std::move(text));
}

// ---------------------------------------------------------------------------
// Inline XML

namespace {

void xml_escape(std::string &out, std::string_view s, bool attribute) {
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"':
        if (attribute) {
          out += "&quot;";
        } else {
          out.push_back(c);
        }
        break;
      case '\n':
        if (attribute) {
          out += "&#10;";
        } else {
          out.push_back(c);
        }
        break;
      case '\t':
        if (attribute) {
          out += "&#9;";
        } else {
          out.push_back(c);
        }
        break;
      default: out.push_back(c);
    }
  }
}

}  // namespace

std::string export_inline_xml(const Document &doc, std::string_view set,
                              const std::vector<std::string> &types) {
  std::vector<Annotation> selected;
  if (const AnnotationSet *s = doc.find_set(set)) {
    for (const auto &a : s->annotations()) {
      if (std::find(types.begin(), types.end(), a.type) != types.end()) {
        selected.push_back(a);
      }
    }
  }
  // Canonical order puts outer elements before inner ones at equal starts.
  for (std::size_t i = 0; i < selected.size(); ++i) {
    for (std::size_t j = i + 1; j < selected.size(); ++j) {
      const Span a = selected[i].span;
      const Span b = selected[j].span;
      if (b.start >= a.end) break;
      if (b.end > a.end) {
        throw ExportError("crossing annotations " +
                          std::to_string(selected[i].id) + " (" +
                          selected[i].type + ") and " +
                          std::to_string(selected[j].id) + " (" +
                          selected[j].type + ")");
      }
    }
  }

  const std::u32string &text = doc.text();
  std::string out;
  std::vector<const Annotation *> open;
  std::size_t next = 0;
  std::size_t pos = 0;
  auto emit_text_to = [&](std::size_t until) {
    if (until > pos) {
      xml_escape(out, utf8_encode(std::u32string_view(text).substr(
                          pos, until - pos)),
                 false);
      pos = until;
    }
  };
  auto close_until = [&](std::size_t offset) {
    while (!open.empty() && open.back()->span.end <= offset) {
      emit_text_to(open.back()->span.end);
      out += "</" + open.back()->type + ">";
      open.pop_back();
    }
  };
  while (next < selected.size()) {
    const Annotation &a = selected[next];
    close_until(a.span.start);
    emit_text_to(a.span.start);
    out += "<" + a.type;
    for (const auto &[key, value] : a.features) {
      out += " " + key + "=\"";
      xml_escape(out, to_string(value), true);
      out += "\"";
    }
    out += ">";
    open.push_back(&a);
    ++next;
  }
  close_until(text.size());
  emit_text_to(text.size());
  return out;
}

// ---------------------------------------------------------------------------
// Standoff

namespace {

void standoff_escape(std::string &out, std::string_view s) {
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case ';': out += "\\;"; break;
      case '=': out += "\\="; break;
      case '"': out += "\\\""; break;
      default: out.push_back(c);
    }
  }
}

void standoff_value(std::string &out, const FeatureValue &value) {
  if (const auto *s = std::get_if<std::string>(&value)) {
    out.push_back('"');
    standoff_escape(out, *s);
    out.push_back('"');
  } else if (const auto *d = std::get_if<double>(&value)) {
    std::string num = format_number(*d);
    if (num.find_first_of(".eEn") == std::string::npos) num += ".0";
    out += num;
  } else {
    out += to_string(value);
  }
}

// Splits on an unescaped delimiter and keeps escapes intact.
std::vector<std::string> split_escaped(std::string_view s, char delim) {
  std::vector<std::string> parts(1);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      parts.back().push_back(s[i]);
      parts.back().push_back(s[++i]);
    } else if (s[i] == delim) {
      parts.emplace_back();
    } else {
      parts.back().push_back(s[i]);
    }
  }
  return parts;
}

std::string standoff_unescape(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 == s.size()) {
      out.push_back(s[i]);
      continue;
    }
    char c = s[++i];
    switch (c) {
      case 't': out.push_back('\t'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      default: out.push_back(c);
    }
  }
  return out;
}

FeatureValue parse_standoff_value(std::string_view raw, std::size_t line) {
  if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
    return standoff_unescape(raw.substr(1, raw.size() - 2));
  }
  if (raw == "true") return true;
  if (raw == "false") return false;
  const char *first = raw.data();
  const char *last = first + raw.size();
  std::int64_t i = 0;
  auto ri = std::from_chars(first, last, i);
  if (!raw.empty() && ri.ec == std::errc() && ri.ptr == last) return i;
  double d = 0;
  auto rd = std::from_chars(first, last, d);
  if (!raw.empty() && rd.ec == std::errc() && rd.ptr == last) return d;
  throw StandoffError("line " + std::to_string(line) +
                      ": unparseable feature value '" + std::string(raw) +
                      "'");
}

std::size_t parse_offset(std::string_view s, std::size_t line) {
  std::size_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw StandoffError("line " + std::to_string(line) + ": bad integer '" +
                        std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::string export_standoff(const Document &doc, std::string_view set) {
  std::string out = "# doc ";
  standoff_escape(out, doc.id());
  out += "\n# set ";
  standoff_escape(out, set);
  out += "\n";
  const AnnotationSet *s = doc.find_set(set);
  if (s == nullptr) return out;
  for (const auto &a : s->annotations()) {
    out += std::to_string(a.id);
    out.push_back('\t');
    standoff_escape(out, a.type);
    out += "\t" + std::to_string(a.span.start) + "\t" +
           std::to_string(a.span.end) + "\t";
    bool first = true;
    for (const auto &[key, value] : a.features) {
      if (!first) out.push_back(';');
      first = false;
      standoff_escape(out, key);
      out.push_back('=');
      standoff_value(out, value);
    }
    out.push_back('\n');
  }
  return out;
}

Document import_standoff(std::string_view standoff, std::u32string text) {
  std::string id;
  std::string set;
  bool have_doc = false;
  std::vector<Annotation> pending;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < standoff.size()) {
    std::size_t eol = standoff.find('\n', pos);
    if (eol == std::string_view::npos) eol = standoff.size();
    std::string_view line = standoff.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line.rfind("# doc ", 0) == 0) {
      id = standoff_unescape(line.substr(6));
      have_doc = true;
      continue;
    }
    if (line.rfind("# set ", 0) == 0) {
      set = standoff_unescape(line.substr(6));
      continue;
    }
    if (line.front() == '#') continue;
    auto fields = split_escaped(line, '\t');
    if (fields.size() != 5) {
      throw StandoffError("line " + std::to_string(line_no) +
                          ": expected 5 tab-separated fields, got " +
                          std::to_string(fields.size()));
    }
    Annotation a;
    std::int64_t ann_id = 0;
    auto res = std::from_chars(fields[0].data(),
                               fields[0].data() + fields[0].size(), ann_id);
    if (res.ec != std::errc() || res.ptr != fields[0].data() + fields[0].size()) {
      throw StandoffError("line " + std::to_string(line_no) +
                          ": bad annotation id '" + fields[0] + "'");
    }
    a.id = ann_id;
    a.type = standoff_unescape(fields[1]);
    a.span = {parse_offset(fields[2], line_no), parse_offset(fields[3], line_no)};
    if (!fields[4].empty()) {
      for (const auto &pair : split_escaped(fields[4], ';')) {
        auto kv = split_escaped(pair, '=');
        if (kv.size() != 2) {
          throw StandoffError("line " + std::to_string(line_no) +
                              ": malformed feature '" + pair + "'");
        }
        a.features[standoff_unescape(kv[0])] =
            parse_standoff_value(kv[1], line_no);
      }
    }
    pending.push_back(std::move(a));
  }
  if (!have_doc) throw StandoffError("missing '# doc' header");
  Document doc(std::move(id), std::move(text));
  doc.annotation_set(set);
  for (auto &a : pending) {
    try {
      doc.restore_annotation(set, std::move(a));
    } catch (const std::exception &e) {
      throw StandoffError(e.what());
    }
  }
  return doc;
}

}  // namespace lusa
