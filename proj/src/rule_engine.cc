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
#include <charconv>
#include <functional>
#include <set>
#include <string>

#include "lusa/linguistic.h"
#include "lusa/rules.h"
#include "lusa/unicode.h"

namespace lusa::rules {
namespace {

bool values_equal(const FeatureValue &a, const FeatureValue &b) {
  if (a.index() == b.index()) return a == b;
  const bool a_num = std::holds_alternative<std::int64_t>(a) ||
                     std::holds_alternative<double>(a);
  const bool b_num = std::holds_alternative<std::int64_t>(b) ||
                     std::holds_alternative<double>(b);
  if (a_num && b_num) return *as_number(a) == *as_number(b);
  return to_string(a) == to_string(b);
}

bool constraint_holds(const Constraint &c, const Annotation &a) {
  const FeatureValue *v = a.feature(c.feature);
  switch (c.op) {
    case Op::kExists: return v != nullptr;
    case Op::kEq: return v != nullptr && values_equal(*v, c.values.front());
    case Op::kNe: return v == nullptr || !values_equal(*v, c.values.front());
    case Op::kContains:
      return v != nullptr &&
             to_string(*v).find(to_string(c.values.front())) != std::string::npos;
    case Op::kIn:
      return v != nullptr &&
             std::any_of(c.values.begin(), c.values.end(),
                         [&](const FeatureValue &x) { return values_equal(*v, x); });
  }
  return false;
}

// Thompson construction followed by epsilon elimination.
class MachineBuilder {
 public:
  explicit MachineBuilder(int bound) : bound_(bound) {}

  Machine build(const PatternNode &pattern) {
    auto [start, end] = fragment(pattern, {});
    return eliminate_epsilons(start, end);
  }

 private:
  int new_state() {
    eps_.emplace_back();
    sym_.emplace_back();
    return static_cast<int>(eps_.size() - 1);
  }

  std::pair<int, int> fragment(const PatternNode &node,
                               std::vector<std::string> labels) {
    if (!node.label.empty()) labels.push_back(node.label);
    int min = node.min;
    int max = node.max;
    if (max == PatternNode::kUnbounded) {
      if (min > bound_) {
        throw CompileError("quantifier minimum " + std::to_string(min) +
                           " exceeds bound " + std::to_string(bound_));
      }
      max = bound_;
    } else if (max > bound_) {
      throw CompileError("quantifier maximum " + std::to_string(max) +
                         " exceeds bound " + std::to_string(bound_));
    }
    if (min == 1 && max == 1) return once(node, labels);
    const int start = new_state();
    int cur = start;
    for (int i = 0; i < min; ++i) {
      auto [s, e] = once(node, labels);
      eps_[cur].push_back(s);
      cur = e;
    }
    const int end = new_state();
    for (int i = min; i < max; ++i) {
      auto [s, e] = once(node, labels);
      eps_[cur].push_back(s);
      eps_[cur].push_back(end);
      cur = e;
    }
    eps_[cur].push_back(end);
    return {start, end};
  }

  std::pair<int, int> once(const PatternNode &node,
                           const std::vector<std::string> &labels) {
    const int start = new_state();
    switch (node.kind) {
      case PatternNode::Kind::kElement: {
        const int end = new_state();
        symbols_.push_back({node.test, labels});
        sym_[start].push_back({static_cast<int>(symbols_.size() - 1), end});
        return {start, end};
      }
      case PatternNode::Kind::kSequence: {
        int cur = start;
        for (const auto &child : node.children) {
          auto [s, e] = fragment(child, labels);
          eps_[cur].push_back(s);
          cur = e;
        }
        return {start, cur};
      }
      case PatternNode::Kind::kAlternation: {
        const int end = new_state();
        for (const auto &child : node.children) {
          auto [s, e] = fragment(child, labels);
          eps_[start].push_back(s);
          eps_[e].push_back(end);
        }
        return {start, end};
      }
    }
    return {start, start};
  }

  // Epsilon closure in backtracking order: ordered depth-first preorder,
  // so a state's symbol edges come out in the order a backtracking matcher
  // would try them. The graph is acyclic since quantifiers are unrolled.
  std::vector<int> closure(int state) const {
    std::vector<int> out;
    std::vector<bool> seen(eps_.size(), false);
    std::function<void(int)> visit = [&](int s) {
      if (seen[s]) return;
      seen[s] = true;
      out.push_back(s);
      for (int t : eps_[s]) visit(t);
    };
    visit(state);
    return out;
  }

  Machine eliminate_epsilons(int start, int final_state) {
    Machine m;
    m.symbols = symbols_;
    std::vector<int> renumber(eps_.size(), -1);
    std::vector<int> order = {start};
    renumber[start] = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      const int old = order[i];
      std::vector<Machine::Edge> edges;
      bool accepting = false;
      for (int s : closure(old)) {
        if (s == final_state) accepting = true;
        for (const auto &e : sym_[s]) {
          if (renumber[e.target] < 0) {
            renumber[e.target] = static_cast<int>(order.size());
            order.push_back(e.target);
          }
          edges.push_back({e.symbol, renumber[e.target]});
        }
      }
      m.edges.push_back(std::move(edges));
      m.accepting.push_back(accepting);
    }
    return m;
  }

  struct SymEdge {
    int symbol;
    int target;
  };

  int bound_;
  std::vector<std::vector<int>> eps_;
  std::vector<std::vector<SymEdge>> sym_;
  std::vector<Machine::Symbol> symbols_;
};

struct Candidate {
  std::size_t end = 0;
  std::vector<std::pair<int, int>> consumed;  // (symbol, input index)
};

class Matcher {
 public:
  Matcher(const Document &doc, std::string_view set, const CompiledPhase &phase)
      : phase_(phase) {
    if (const AnnotationSet *s = doc.find_set(set)) {
      for (const auto &a : s->annotations()) {
        if (phase.phase.has_input(a.type)) inputs_.push_back(&a);
      }
    }
    for (std::size_t i = 0; i < inputs_.size(); ++i) {
      const std::size_t start = inputs_[i]->span.start;
      if (nodes_.empty() || nodes_.back() != start) {
        nodes_.push_back(start);
        at_node_.emplace_back();
      }
      at_node_.back().push_back(static_cast<int>(i));
    }
    implicit_space_ = phase.phase.has_input(linguistic::kSpaceToken);
  }

  std::vector<Match> run() {
    std::vector<Match> out;
    std::size_t k = 0;
    while (k < nodes_.size()) {
      auto per_rule = candidates_at(k);
      switch (phase_.phase.control) {
        case Control::kAppelt: {
          int best_rule = -1;
          const Candidate *best = nullptr;
          for (std::size_t r = 0; r < per_rule.size(); ++r) {
            if (per_rule[r].empty()) continue;
            const Candidate &c = std::prev(per_rule[r].end())->second;
            if (best == nullptr || better(c, static_cast<int>(r), *best, best_rule)) {
              best = &c;
              best_rule = static_cast<int>(r);
            }
          }
          if (best == nullptr) {
            ++k;
            break;
          }
          out.push_back(to_match(best_rule, *best));
          const std::size_t resume = std::max(best->end, nodes_[k] + 1);
          k = static_cast<std::size_t>(
              std::lower_bound(nodes_.begin(), nodes_.end(), resume) -
              nodes_.begin());
          break;
        }
        case Control::kBrill:
          for (std::size_t r = 0; r < per_rule.size(); ++r) {
            if (per_rule[r].empty()) continue;
            out.push_back(to_match(static_cast<int>(r),
                                   std::prev(per_rule[r].end())->second));
          }
          ++k;
          break;
        case Control::kAll:
          for (std::size_t r = 0; r < per_rule.size(); ++r) {
            for (const auto &[end, c] : per_rule[r]) {
              out.push_back(to_match(static_cast<int>(r), c));
            }
          }
          ++k;
          break;
      }
    }
    return out;
  }

 private:
  // Longest, then higher priority, then earlier rule.
  bool better(const Candidate &a, int rule_a, const Candidate &b,
              int rule_b) const {
    if (a.end != b.end) return a.end > b.end;
    const int pa = phase_.rules[rule_a].rule.priority;
    const int pb = phase_.rules[rule_b].rule.priority;
    if (pa != pb) return pa > pb;
    return rule_a < rule_b;
  }

  std::size_t node_at_or_after(std::size_t offset) const {
    return static_cast<std::size_t>(
        std::lower_bound(nodes_.begin(), nodes_.end(), offset) -
        nodes_.begin());
  }

  std::vector<std::size_t> positions_after(std::size_t end) const {
    std::vector<std::size_t> out;
    const std::size_t first = node_at_or_after(end);
    if (first >= nodes_.size()) return out;
    out.push_back(first);
    if (!implicit_space_) return out;
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (int idx : at_node_[out[i]]) {
        if (inputs_[idx]->type != linguistic::kSpaceToken) continue;
        const std::size_t k = node_at_or_after(inputs_[idx]->span.end);
        if (k < nodes_.size() && std::find(out.begin(), out.end(), k) == out.end()) {
          out.push_back(k);
        }
      }
    }
    // Annotations are tried in document order, like the input stream.
    std::sort(out.begin(), out.end());
    return out;
  }

  // Per rule: end offset -> first candidate ending there.
  std::vector<std::map<std::size_t, Candidate>> candidates_at(std::size_t k) {
    std::vector<std::map<std::size_t, Candidate>> per_rule(phase_.rules.size());
    std::vector<std::pair<int, int>> path;
    for (std::size_t r = 0; r < phase_.rules.size(); ++r) {
      const Machine &m = phase_.rules[r].machine;
      auto &results = per_rule[r];
      // Edges are ordered as a backtracking matcher would try them, so the
      // first path to reach an end is the one backtracking would report.
      // Any later path through an already visited (state, offset) pair is
      // a worse prefix with the same completions, so it is pruned; this
      // keeps matching polynomial.
      std::set<std::pair<int, std::size_t>> seen;
      std::function<void(int, std::size_t, bool)> dfs =
          [&](int state, std::size_t pos, bool first) {
            if (!first && !seen.emplace(state, pos).second) return;
            for (const auto &edge : m.edges[state]) {
              const auto &test = m.symbols[edge.symbol].test;
              std::vector<std::size_t> nodes =
                  first ? std::vector<std::size_t>{k} : positions_after(pos);
              for (std::size_t nk : nodes) {
                for (int idx : at_node_[nk]) {
                  if (!test.matches(*inputs_[idx])) continue;
                  path.emplace_back(edge.symbol, idx);
                  const std::size_t end = inputs_[idx]->span.end;
                  if (m.accepting[edge.target]) record(end, path, results);
                  dfs(edge.target, end, false);
                  path.pop_back();
                }
              }
            }
          };
      dfs(0, nodes_[k], true);
    }
    return per_rule;
  }

  static void record(std::size_t end, const std::vector<std::pair<int, int>> &path,
                     std::map<std::size_t, Candidate> &results) {
    if (results.count(end) == 0) results.emplace(end, Candidate{end, path});
  }

  Match to_match(int rule, const Candidate &c) const {
    const Machine &m = phase_.rules[rule].machine;
    Match match;
    match.rule = rule;
    match.span = {inputs_[c.consumed.front().second]->span.start, c.end};
    for (const auto &[symbol, idx] : c.consumed) {
      for (const auto &label : m.symbols[symbol].labels) {
        match.bindings[label].push_back(*inputs_[idx]);
      }
    }
    return match;
  }

  const CompiledPhase &phase_;
  std::vector<const Annotation *> inputs_;
  std::vector<std::size_t> nodes_;
  std::vector<std::vector<int>> at_node_;
  bool implicit_space_ = false;
};

std::optional<Span> hull_of(const Match &match, const std::string &label) {
  auto it = match.bindings.find(label);
  if (it == match.bindings.end() || it->second.empty()) return std::nullopt;
  Span s = it->second.front().span;
  for (const auto &a : it->second) {
    s.start = std::min(s.start, a.span.start);
    s.end = std::max(s.end, a.span.end);
  }
  return s;
}

std::optional<double> parse_double(std::string_view s) {
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    return std::nullopt;
  }
  return v;
}

std::optional<FeatureValue> evaluate_capture(const Document &doc,
                                             const Capture &cap,
                                             const Match &match) {
  auto hull = hull_of(match, cap.label);
  if (!hull) return std::nullopt;
  const auto &bound = match.bindings.at(cap.label);
  switch (cap.kind) {
    case Capture::Kind::kString:
      return doc.text_utf8(*hull);
    case Capture::Kind::kNumeric: {
      for (const auto &a : bound) {
        if (a.type != linguistic::kToken) continue;
        const auto *kind = std::get_if<std::string>(a.feature("kind"));
        const auto *str = std::get_if<std::string>(a.feature("string"));
        if (kind != nullptr && *kind == "number" && str != nullptr) {
          if (auto v = parse_double(*str)) return *v;
        }
      }
      std::u32string_view text(doc.text().data() + hull->start,
                               hull->length());
      for (const auto &tok : linguistic::segment(text)) {
        if (tok.kind != linguistic::TokenKind::kNumber) continue;
        if (auto v = parse_double(
                utf8_encode(text.substr(tok.span.start, tok.span.length())))) {
          return *v;
        }
      }
      return std::nullopt;
    }
    case Capture::Kind::kFeature:
      for (const auto &a : bound) {
        if (const FeatureValue *v = a.feature(cap.feature)) return *v;
      }
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

bool AnnotationTest::matches(const Annotation &a) const {
  if (a.type != type) return false;
  for (const auto &c : constraints) {
    if (!constraint_holds(c, a)) return false;
  }
  return true;
}

bool Machine::accepts(const std::vector<Annotation> &sequence) const {
  std::set<int> states = {0};
  for (const auto &a : sequence) {
    std::set<int> next;
    for (int s : states) {
      for (const auto &e : edges[s]) {
        if (symbols[e.symbol].test.matches(a)) next.insert(e.target);
      }
    }
    states = std::move(next);
    if (states.empty()) return false;
  }
  return std::any_of(states.begin(), states.end(),
                     [&](int s) { return accepting[s]; });
}

Machine compile_pattern(const PatternNode &pattern, int quantifier_bound) {
  return MachineBuilder(quantifier_bound).build(pattern);
}

CompiledPhase compile_phase(const RulePhase &phase) {
  CompiledPhase out;
  out.phase = phase;
  for (const auto &rule : phase.rules) {
    try {
      out.rules.push_back({rule, compile_pattern(rule.lhs, phase.quantifier_bound)});
    } catch (const CompileError &e) {
      throw CompileError("phase " + phase.name + ", rule " + rule.name + ": " +
                         e.what());
    }
  }
  return out;
}

std::vector<Match> find_matches(const Document &doc, std::string_view set,
                                const CompiledPhase &phase) {
  return Matcher(doc, set, phase).run();
}

std::optional<Annotation> evaluate_action(const Document &doc,
                                          const Action &action,
                                          const Match &match) {
  auto first = hull_of(match, action.first_label);
  auto last = hull_of(match, action.last_label);
  if (!first || !last) return std::nullopt;
  Annotation out;
  out.type = action.type;
  out.span = {std::min(first->start, last->start),
              std::max(first->end, last->end)};
  for (const auto &[key, expr] : action.features) {
    if (const auto *lit = std::get_if<FeatureValue>(&expr)) {
      out.features[key] = *lit;
    } else if (auto v = evaluate_capture(doc, std::get<Capture>(expr), match)) {
      out.features[key] = std::move(*v);
    }
  }
  return out;
}

std::size_t apply_phase(Document &doc, std::string_view set,
                        const CompiledPhase &phase,
                        std::optional<std::string_view> output_set) {
  const auto matches = find_matches(doc, set, phase);
  std::vector<Annotation> created;
  for (const auto &m : matches) {
    for (const auto &action : phase.rules[m.rule].rule.actions) {
      if (auto a = evaluate_action(doc, action, m)) created.push_back(std::move(*a));
    }
  }
  const std::string_view out = output_set.value_or(set);
  for (auto &a : created) doc.add_annotation(out, std::move(a));
  return created.size();
}

void run_cascade(Document &doc, const std::vector<CompiledPhase> &phases,
                 std::string_view set) {
  for (const auto &phase : phases) {
    try {
      apply_phase(doc, set, phase);
    } catch (const PhaseError &) {
      throw;
    } catch (const std::exception &e) {
      throw PhaseError(phase.phase.name, e.what());
    }
  }
}

}  // namespace lusa::rules
