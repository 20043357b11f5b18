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

#ifndef LUSA_RULES_H_
#define LUSA_RULES_H_

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lusa/document.h"

// Pattern rules over annotations. A phase is a list of rules; each rule's
// left-hand side is a regular expression whose symbols are single
// annotations constrained by type and features, and whose right-hand side
// creates new annotations over labeled parts of the match.
namespace lusa::rules {

class RuleSyntaxError : public std::runtime_error {
 public:
  RuleSyntaxError(const std::string &message, int line, int column,
                  const std::string &source = {})
      : std::runtime_error((source.empty() ? "" : source + ":") +
                           std::to_string(line) + ":" +
                           std::to_string(column) + ": " + message),
        message_(message),
        line_(line),
        column_(column) {}
  const std::string &message() const { return message_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string message_;
  int line_;
  int column_;
};

class RuleSemanticError : public std::runtime_error {
 public:
  RuleSemanticError(const std::string &rule, const std::string &message)
      : std::runtime_error("rule " + rule + ": " + message), rule_(rule) {}
  const std::string &rule() const { return rule_; }

 private:
  std::string rule_;
};

class CompileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PhaseError : public std::runtime_error {
 public:
  PhaseError(const std::string &phase, const std::string &message)
      : std::runtime_error("phase " + phase + ": " + message), phase_(phase) {}
  const std::string &phase() const { return phase_; }

 private:
  std::string phase_;
};

enum class Control { kAppelt, kBrill, kAll };

enum class Op { kExists, kEq, kNe, kContains, kIn };

struct Constraint {
  std::string feature;
  Op op = Op::kExists;
  std::vector<FeatureValue> values;

  bool operator==(const Constraint &) const = default;
};

// `{Type}` or `{Type.f == v, Type.g != w, ...}`; all constraints refer to
// the one annotation being consumed.
struct AnnotationTest {
  std::string type;
  std::vector<Constraint> constraints;

  bool matches(const Annotation &a) const;
  bool operator==(const AnnotationTest &) const = default;
};

struct PatternNode {
  enum class Kind { kElement, kSequence, kAlternation };

  Kind kind = Kind::kSequence;
  AnnotationTest test;
  std::vector<PatternNode> children;
  int min = 1;
  int max = 1;  // kUnbounded for * and +
  std::string label;

  static constexpr int kUnbounded = -1;
  bool operator==(const PatternNode &) const = default;
};

struct Capture {
  enum class Kind { kString, kNumeric, kFeature };
  std::string label;
  Kind kind = Kind::kString;
  std::string feature;

  bool operator==(const Capture &) const = default;
};

using FeatureExpr = std::variant<FeatureValue, Capture>;

// `:first..last => Type { key = expr, ... }`; first == last for `:label`.
struct Action {
  std::string first_label;
  std::string last_label;
  std::string type;
  std::vector<std::pair<std::string, FeatureExpr>> features;

  bool operator==(const Action &) const = default;
};

struct Rule {
  std::string name;
  int priority = 0;
  PatternNode lhs;  // always a sequence
  std::vector<Action> actions;

  bool operator==(const Rule &) const = default;
};

struct RulePhase {
  std::string name;
  std::vector<std::string> input_types;
  Control control = Control::kAppelt;
  int quantifier_bound = 10;
  std::vector<Rule> rules;

  bool has_input(std::string_view type) const;
};

RulePhase parse_rules(std::string_view source);
RulePhase load_rules(const std::filesystem::path &file);

// Labels bound anywhere in a pattern.
std::vector<std::string> pattern_labels(const PatternNode &node);

// Epsilon-free NFA whose symbols are annotation tests. Every pattern
// element occurrence (after quantifier expansion) is its own symbol and
// remembers the labels of the groups enclosing it.
struct Machine {
  struct Symbol {
    AnnotationTest test;
    std::vector<std::string> labels;
  };
  struct Edge {
    int symbol;
    int target;
  };

  std::vector<Symbol> symbols;
  std::vector<std::vector<Edge>> edges;  // per state; state 0 is the start
  std::vector<bool> accepting;

  std::size_t state_count() const { return edges.size(); }
  // Runs the machine over a plain sequence of annotations.
  bool accepts(const std::vector<Annotation> &sequence) const;
};

Machine compile_pattern(const PatternNode &pattern, int quantifier_bound);

struct CompiledRule {
  Rule rule;
  Machine machine;
};

struct CompiledPhase {
  RulePhase phase;
  std::vector<CompiledRule> rules;
};

CompiledPhase compile_phase(const RulePhase &phase);

// One fired rule application.
struct Match {
  int rule = 0;
  Span span;
  // Label -> consumed annotations bound to it, in consumption order.
  std::map<std::string, std::vector<Annotation>> bindings;
};

// Runs the matcher and resolves overlaps according to the control style.
std::vector<Match> find_matches(const Document &doc, std::string_view set,
                                const CompiledPhase &phase);

// Annotation a rule action would create for a match, or nothing when a
// referenced label is unbound.
std::optional<Annotation> evaluate_action(const Document &doc,
                                          const Action &action,
                                          const Match &match);

// Matches, then creates annotations in `output_set` (defaults to `set`).
// Returns the number of annotations created.
std::size_t apply_phase(Document &doc, std::string_view set,
                        const CompiledPhase &phase,
                        std::optional<std::string_view> output_set = {});

void run_cascade(Document &doc, const std::vector<CompiledPhase> &phases,
                 std::string_view set = "");

}  // namespace lusa::rules

#endif  // LUSA_RULES_H_
