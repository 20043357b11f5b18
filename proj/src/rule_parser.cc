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

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "lusa/rules.h"

namespace lusa::rules {
namespace {

struct Lexeme {
  enum class Kind { kIdent, kString, kNumber, kPunct, kEnd };
  Kind kind = Kind::kEnd;
  std::string text;
  FeatureValue number;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Lexeme> run() {
    std::vector<Lexeme> out;
    while (true) {
      skip_space_and_comments();
      Lexeme lx;
      lx.line = line_;
      lx.column = column_;
      if (pos_ >= src_.size()) {
        out.push_back(lx);
        return out;
      }
      const char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        lx.kind = Lexeme::Kind::kIdent;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                src_[pos_] == '_')) {
          lx.text.push_back(advance());
        }
      } else if (c == '"') {
        lx.kind = Lexeme::Kind::kString;
        advance();
        while (true) {
          if (pos_ >= src_.size() || src_[pos_] == '\n') {
            throw RuleSyntaxError("unterminated string literal", lx.line,
                                  lx.column);
          }
          char d = advance();
          if (d == '"') break;
          if (d == '\\') {
            if (pos_ >= src_.size()) {
              throw RuleSyntaxError("unterminated string literal", lx.line,
                                    lx.column);
            }
            char e = advance();
            d = e == 'n' ? '\n' : e == 't' ? '\t' : e;
          }
          lx.text.push_back(d);
        }
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && pos_ + 1 < src_.size() &&
                  std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        lx.kind = Lexeme::Kind::kNumber;
        lx.text.push_back(advance());
        bool is_float = false;
        while (pos_ < src_.size()) {
          const char d = src_[pos_];
          if (std::isdigit(static_cast<unsigned char>(d))) {
            lx.text.push_back(advance());
          } else if (d == '.' && !is_float && pos_ + 1 < src_.size() &&
                     std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
            is_float = true;
            lx.text.push_back(advance());
          } else {
            break;
          }
        }
        const char *first = lx.text.data();
        const char *last = first + lx.text.size();
        if (is_float) {
          double v = 0;
          std::from_chars(first, last, v);
          lx.number = v;
        } else {
          std::int64_t v = 0;
          if (std::from_chars(first, last, v).ec != std::errc()) {
            throw RuleSyntaxError("integer literal out of range", lx.line,
                                  lx.column);
          }
          lx.number = v;
        }
      } else {
        lx.kind = Lexeme::Kind::kPunct;
        static const char *const multi[] = {"-->", "=>", "==", "!=", "=~", ".."};
        bool matched = false;
        for (const char *m : multi) {
          std::string_view mv(m);
          if (src_.substr(pos_, mv.size()) == mv) {
            for (std::size_t k = 0; k < mv.size(); ++k) lx.text.push_back(advance());
            matched = true;
            break;
          }
        }
        if (!matched) {
          if (std::string_view("{}()[],.:|?*+=@").find(c) ==
              std::string_view::npos) {
            throw RuleSyntaxError(std::string("unexpected character '") + c +
                                      "'",
                                  lx.line, lx.column);
          }
          lx.text.push_back(advance());
        }
      }
      out.push_back(std::move(lx));
    }
  }

 private:
  char advance() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (src_.substr(pos_, 2) == "//") {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (src_.substr(pos_, 2) == "/*") {
        const int line = line_;
        const int column = column_;
        advance();
        advance();
        while (pos_ < src_.size() && src_.substr(pos_, 2) != "*/") advance();
        if (pos_ >= src_.size()) {
          throw RuleSyntaxError("unterminated comment", line, column);
        }
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

bool is_header_keyword(const std::string &s) {
  return s == "phase" || s == "input" || s == "control" || s == "bound" ||
         s == "rule";
}

class Parser {
 public:
  explicit Parser(std::vector<Lexeme> lexemes) : lx_(std::move(lexemes)) {}

  RulePhase parse() {
    RulePhase phase;
    expect_keyword("phase");
    phase.name = expect_ident("phase name");
    bool have_input = false;
    while (peek().kind == Lexeme::Kind::kIdent && peek().text != "rule") {
      const Lexeme kw = next();
      if (kw.text == "input") {
        have_input = true;
        while (peek().kind == Lexeme::Kind::kIdent &&
               !is_header_keyword(peek().text)) {
          phase.input_types.push_back(next().text);
        }
        if (phase.input_types.empty()) error("input list is empty", kw);
      } else if (kw.text == "control") {
        const Lexeme style = next();
        if (style.kind != Lexeme::Kind::kIdent) error("expected control style", style);
        if (style.text == "appelt") {
          phase.control = Control::kAppelt;
        } else if (style.text == "brill") {
          phase.control = Control::kBrill;
        } else if (style.text == "all") {
          phase.control = Control::kAll;
        } else {
          error("unknown control style '" + style.text + "'", style);
        }
      } else if (kw.text == "bound") {
        const Lexeme n = next();
        const auto *v = std::get_if<std::int64_t>(&n.number);
        if (n.kind != Lexeme::Kind::kNumber || v == nullptr || *v < 1) {
          error("bound must be a positive integer", n);
        }
        phase.quantifier_bound = static_cast<int>(*v);
      } else {
        error("unexpected '" + kw.text + "' in phase header", kw);
      }
    }
    if (!have_input) error("phase declares no input types", peek());
    while (peek().kind != Lexeme::Kind::kEnd) {
      phase.rules.push_back(parse_rule());
    }
    check_semantics(phase);
    return phase;
  }

 private:
  const Lexeme &peek(std::size_t ahead = 0) const {
    return lx_[std::min(pos_ + ahead, lx_.size() - 1)];
  }
  Lexeme next() {
    Lexeme l = peek();
    if (pos_ < lx_.size() - 1) ++pos_;
    return l;
  }
  bool is_punct(std::string_view p, std::size_t ahead = 0) const {
    return peek(ahead).kind == Lexeme::Kind::kPunct && peek(ahead).text == p;
  }
  [[noreturn]] static void error(const std::string &msg, const Lexeme &at) {
    throw RuleSyntaxError(msg, at.line, at.column);
  }
  static std::string describe(const Lexeme &l) {
    switch (l.kind) {
      case Lexeme::Kind::kEnd: return "end of input";
      case Lexeme::Kind::kString: return "string \"" + l.text + "\"";
      default: return "'" + l.text + "'";
    }
  }
  void expect_punct(std::string_view p) {
    if (!is_punct(p)) {
      error("expected '" + std::string(p) + "' but found " + describe(peek()),
            peek());
    }
    next();
  }
  void expect_keyword(std::string_view kw) {
    if (peek().kind != Lexeme::Kind::kIdent || peek().text != kw) {
      error("expected '" + std::string(kw) + "' but found " + describe(peek()),
            peek());
    }
    next();
  }
  std::string expect_ident(std::string_view what) {
    if (peek().kind != Lexeme::Kind::kIdent) {
      error("expected " + std::string(what) + " but found " + describe(peek()),
            peek());
    }
    return next().text;
  }

  Rule parse_rule() {
    expect_keyword("rule");
    Rule rule;
    rule.name = expect_ident("rule name");
    if (peek().kind == Lexeme::Kind::kIdent && peek().text == "priority") {
      next();
      const Lexeme n = next();
      const auto *v = std::get_if<std::int64_t>(&n.number);
      if (n.kind != Lexeme::Kind::kNumber || v == nullptr) {
        error("priority must be an integer", n);
      }
      rule.priority = static_cast<int>(*v);
    }
    expect_punct(":");
    rule.lhs = parse_sequence();
    expect_punct("-->");
    while (is_punct(":")) rule.actions.push_back(parse_action());
    if (peek().kind != Lexeme::Kind::kEnd &&
        !(peek().kind == Lexeme::Kind::kIdent && peek().text == "rule")) {
      error("expected action or next rule but found " + describe(peek()),
            peek());
    }
    return rule;
  }

  PatternNode parse_sequence() {
    PatternNode seq;
    seq.kind = PatternNode::Kind::kSequence;
    while (is_punct("{") || is_punct("(")) {
      seq.children.push_back(parse_element());
    }
    if (seq.children.empty()) {
      error("expected pattern element but found " + describe(peek()), peek());
    }
    return seq;
  }

  PatternNode parse_element() {
    PatternNode node;
    const Lexeme start = peek();
    if (is_punct("{")) {
      if (peek(1).kind == Lexeme::Kind::kNumber) {
        error("quantifier without a preceding element", start);
      }
      next();
      node.kind = PatternNode::Kind::kElement;
      node.test = parse_test();
      expect_punct("}");
    } else {
      next();  // '('
      PatternNode alt;
      alt.kind = PatternNode::Kind::kAlternation;
      alt.children.push_back(parse_sequence());
      while (is_punct("|")) {
        next();
        alt.children.push_back(parse_sequence());
      }
      expect_punct(")");
      // A single-branch group is its own sequence node so that quantifiers
      // and labels apply to the whole group.
      if (alt.children.size() == 1) {
        node = std::move(alt.children.front());
      } else {
        node = std::move(alt);
      }
    }
    parse_quantifier(node);
    if (is_punct(":") && peek(1).kind == Lexeme::Kind::kIdent) {
      next();
      node.label = next().text;
    }
    return node;
  }

  void parse_quantifier(PatternNode &node) {
    if (is_punct("?")) {
      next();
      node.min = 0;
      node.max = 1;
    } else if (is_punct("*")) {
      next();
      node.min = 0;
      node.max = PatternNode::kUnbounded;
    } else if (is_punct("+")) {
      next();
      node.min = 1;
      node.max = PatternNode::kUnbounded;
    } else if (is_punct("{") && peek(1).kind == Lexeme::Kind::kNumber) {
      const Lexeme open = next();
      auto read_count = [&]() {
        const Lexeme n = next();
        const auto *v = std::get_if<std::int64_t>(&n.number);
        if (n.kind != Lexeme::Kind::kNumber || v == nullptr || *v < 0 ||
            *v > 1000000) {
          error("malformed quantifier", n);
        }
        return static_cast<int>(*v);
      };
      node.min = read_count();
      node.max = node.min;
      if (is_punct(",")) {
        next();
        node.max = is_punct("}") ? PatternNode::kUnbounded : read_count();
      }
      if (!is_punct("}")) error("malformed quantifier", peek());
      next();
      if (node.max != PatternNode::kUnbounded &&
          (node.max < node.min || node.max == 0)) {
        error("malformed quantifier {" + std::to_string(node.min) + "," +
                  std::to_string(node.max) + "}",
              open);
      }
    }
  }

  FeatureValue parse_literal() {
    const Lexeme l = next();
    switch (l.kind) {
      case Lexeme::Kind::kString: return l.text;
      case Lexeme::Kind::kNumber: return l.number;
      case Lexeme::Kind::kIdent:
        if (l.text == "true") return true;
        if (l.text == "false") return false;
        break;
      default: break;
    }
    error("expected literal but found " + describe(l), l);
  }

  AnnotationTest parse_test() {
    AnnotationTest test;
    while (true) {
      const Lexeme type_lx = peek();
      std::string type = expect_ident("annotation type");
      if (test.type.empty()) {
        test.type = type;
      } else if (type != test.type) {
        error("constraints in one element must name the same type ('" +
                  test.type + "' vs '" + type + "')",
              type_lx);
      }
      if (is_punct(".")) {
        next();
        Constraint c;
        c.feature = expect_ident("feature name");
        if (is_punct(",") || is_punct("}")) {
          c.op = Op::kExists;
          test.constraints.push_back(std::move(c));
          if (!is_punct(",")) break;
          next();
          continue;
        }
        const Lexeme op = next();
        if (op.kind == Lexeme::Kind::kPunct && op.text == "==") {
          c.op = Op::kEq;
        } else if (op.kind == Lexeme::Kind::kPunct && op.text == "!=") {
          c.op = Op::kNe;
        } else if (op.kind == Lexeme::Kind::kPunct && op.text == "=~") {
          c.op = Op::kContains;
        } else if (op.kind == Lexeme::Kind::kIdent && op.text == "in") {
          c.op = Op::kIn;
        } else {
          error("expected comparison operator but found " + describe(op), op);
        }
        if (c.op == Op::kIn) {
          expect_punct("[");
          c.values.push_back(parse_literal());
          while (is_punct(",")) {
            next();
            c.values.push_back(parse_literal());
          }
          expect_punct("]");
        } else {
          c.values.push_back(parse_literal());
        }
        test.constraints.push_back(std::move(c));
      }
      if (!is_punct(",")) break;
      next();
    }
    return test;
  }

  Action parse_action() {
    expect_punct(":");
    Action action;
    action.first_label = expect_ident("binding label");
    action.last_label = action.first_label;
    if (is_punct("..")) {
      next();
      action.last_label = expect_ident("binding label");
    }
    expect_punct("=>");
    action.type = expect_ident("annotation type");
    expect_punct("{");
    while (!is_punct("}")) {
      std::string key = expect_ident("feature name");
      expect_punct("=");
      if (is_punct(":")) {
        next();
        Capture cap;
        cap.label = expect_ident("binding label");
        if (is_punct(".")) {
          next();
          const Lexeme kind = next();
          if (kind.kind == Lexeme::Kind::kIdent && kind.text == "string") {
            cap.kind = Capture::Kind::kString;
          } else if (kind.kind == Lexeme::Kind::kIdent &&
                     kind.text == "numeric") {
            cap.kind = Capture::Kind::kNumeric;
          } else {
            error("expected 'string' or 'numeric' after '.'", kind);
          }
        } else if (is_punct("@")) {
          next();
          cap.kind = Capture::Kind::kFeature;
          cap.feature = expect_ident("feature name");
        } else {
          error("expected '.string', '.numeric' or '@feature'", peek());
        }
        action.features.emplace_back(std::move(key), std::move(cap));
      } else {
        action.features.emplace_back(std::move(key), parse_literal());
      }
      if (!is_punct(",")) break;
      next();
    }
    expect_punct("}");
    return action;
  }

  static void collect_types(const PatternNode &n, std::set<std::string> &out) {
    if (n.kind == PatternNode::Kind::kElement) out.insert(n.test.type);
    for (const auto &c : n.children) collect_types(c, out);
  }

  static void check_semantics(const RulePhase &phase) {
    std::set<std::string> names;
    for (const auto &rule : phase.rules) {
      if (!names.insert(rule.name).second) {
        throw RuleSemanticError(rule.name, "duplicate rule name");
      }
      const auto labels = pattern_labels(rule.lhs);
      auto bound = [&](const std::string &l) {
        return std::find(labels.begin(), labels.end(), l) != labels.end();
      };
      for (const auto &a : rule.actions) {
        for (const auto *l : {&a.first_label, &a.last_label}) {
          if (!bound(*l)) {
            throw RuleSemanticError(rule.name, "unbound label ':" + *l + "'");
          }
        }
        for (const auto &[key, expr] : a.features) {
          if (const auto *cap = std::get_if<Capture>(&expr)) {
            if (!bound(cap->label)) {
              throw RuleSemanticError(rule.name,
                                      "unbound label ':" + cap->label + "'");
            }
          }
        }
      }
      std::set<std::string> types;
      collect_types(rule.lhs, types);
      for (const auto &t : types) {
        if (!phase.has_input(t)) {
          throw RuleSemanticError(rule.name, "type '" + t +
                                                 "' is not an input of phase " +
                                                 phase.name);
        }
      }
    }
  }

  std::vector<Lexeme> lx_;
  std::size_t pos_ = 0;
};

void collect_labels(const PatternNode &n, std::vector<std::string> &out) {
  if (!n.label.empty() &&
      std::find(out.begin(), out.end(), n.label) == out.end()) {
    out.push_back(n.label);
  }
  for (const auto &c : n.children) collect_labels(c, out);
}

}  // namespace

bool RulePhase::has_input(std::string_view type) const {
  return std::find(input_types.begin(), input_types.end(), type) !=
         input_types.end();
}

std::vector<std::string> pattern_labels(const PatternNode &node) {
  std::vector<std::string> out;
  collect_labels(node, out);
  return out;
}

RulePhase parse_rules(std::string_view source) {
  return Parser(Lexer(source).run()).parse();
}

RulePhase load_rules(const std::filesystem::path &file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read rule file " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_rules(ss.str());
  } catch (const RuleSyntaxError &e) {
    throw RuleSyntaxError(e.message(), e.line(), e.column(),
                          file.filename().string());
  }
}

}  // namespace lusa::rules
