#pragma once

// Random predicate ASTs with their own reference semantics, independent of
// the production parser/evaluator. Tests render an AST to source text, run
// it through the library, and compare against the evaluation implemented
// here — two implementations agreeing is the oracle.

#include <cassert>
#include <cmath>
#include <cstdio>
#include <memory>
#include <random>
#include <string>

#include "silgan/data.hpp"

namespace astgen {

struct Value {
  bool is_const = false;
  double constant = 0.0;
  int agg = 0;  // 0 mean, 1 max, 2 min
  int channel = 0;
  std::size_t begin = 0, end = 1;
};

struct Node {
  enum Kind { Compare, And, Or, Not } kind = Compare;
  int cmp = 0;  // 0 '<', 1 '>'
  Value lhs, rhs;
  std::unique_ptr<Node> a, b;
};

inline Value random_value(std::mt19937_64& rng, std::size_t t_len) {
  Value v;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (unit(rng) < 0.35) {
    v.is_const = true;
    std::uniform_real_distribution<double> c(-1.2, 1.2);
    v.constant = c(rng);
    return v;
  }
  std::uniform_int_distribution<int> agg(0, 2), chan(0, 2);
  v.agg = agg(rng);
  v.channel = chan(rng);
  std::uniform_int_distribution<std::size_t> pos(0, t_len - 1);
  std::size_t a = pos(rng), b = pos(rng);
  if (a > b) std::swap(a, b);
  v.begin = a;
  v.end = b + 1;
  return v;
}

inline std::unique_ptr<Node> random_node(std::mt19937_64& rng, int depth,
                                         std::size_t t_len) {
  auto node = std::make_unique<Node>();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double roll = unit(rng);
  if (depth <= 0 || roll < 0.4) {
    node->kind = Node::Compare;
    node->cmp = unit(rng) < 0.5 ? 0 : 1;
    node->lhs = random_value(rng, t_len);
    node->rhs = random_value(rng, t_len);
    if (node->lhs.is_const && node->rhs.is_const) node->lhs.is_const = false;
    return node;
  }
  if (roll < 0.6) {
    node->kind = Node::Not;
    node->a = random_node(rng, depth - 1, t_len);
    return node;
  }
  node->kind = roll < 0.8 ? Node::And : Node::Or;
  node->a = random_node(rng, depth - 1, t_len);
  node->b = random_node(rng, depth - 1, t_len);
  return node;
}

inline std::string render(const Value& v) {
  if (v.is_const) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9g", v.constant);
    return buf;
  }
  static const char* kAgg[] = {"mean", "max", "min"};
  return std::string(kAgg[v.agg]) + "(" + silgan::kSignalNames[v.channel] + "[" +
         std::to_string(v.begin) + ":" + std::to_string(v.end) + "])";
}

inline std::string render(const Node& n) {
  switch (n.kind) {
    case Node::Compare:
      return render(n.lhs) + (n.cmp == 0 ? " < " : " > ") + render(n.rhs);
    case Node::And:
      return "(" + render(*n.a) + " and " + render(*n.b) + ")";
    case Node::Or:
      return "(" + render(*n.a) + " or " + render(*n.b) + ")";
    case Node::Not:
      return "not (" + render(*n.a) + ")";
  }
  return {};
}

inline double eval_value(const Value& v, const silgan::Maneuver& m) {
  if (v.is_const) return v.constant;
  std::span<const float> ch = m.channel(static_cast<std::size_t>(v.channel));
  double acc = v.agg == 0 ? 0.0 : static_cast<double>(ch[v.begin]);
  for (std::size_t t = v.begin; t < v.end; ++t) {
    const double x = ch[t];
    if (v.agg == 0) acc += x;
    else if (v.agg == 1) acc = std::max(acc, x);
    else acc = std::min(acc, x);
  }
  return v.agg == 0 ? acc / static_cast<double>(v.end - v.begin) : acc;
}

/// Difference-function semantics: negative certifies the predicate.
inline double indicator(const Node& n, const silgan::Maneuver& m) {
  switch (n.kind) {
    case Node::Compare: {
      const double l = eval_value(n.lhs, m), r = eval_value(n.rhs, m);
      return n.cmp == 0 ? l - r : r - l;
    }
    case Node::And:
      return std::max(indicator(*n.a, m), indicator(*n.b, m));
    case Node::Or:
      return std::min(indicator(*n.a, m), indicator(*n.b, m));
    case Node::Not:
      return -indicator(*n.a, m);
  }
  return 0.0;
}

inline bool truth(const Node& n, const silgan::Maneuver& m) {
  switch (n.kind) {
    case Node::Compare: {
      const double l = eval_value(n.lhs, m), r = eval_value(n.rhs, m);
      return n.cmp == 0 ? l < r : l > r;
    }
    case Node::And:
      return truth(*n.a, m) && truth(*n.b, m);
    case Node::Or:
      return truth(*n.a, m) || truth(*n.b, m);
    case Node::Not:
      return !truth(*n.a, m);
  }
  return false;
}

/// Smallest |lhs - rhs| over all comparison nodes — used to discard trials
/// whose comparisons sit on the boundary.
inline double min_abs_compare(const Node& n, const silgan::Maneuver& m) {
  switch (n.kind) {
    case Node::Compare:
      return std::abs(eval_value(n.lhs, m) - eval_value(n.rhs, m));
    case Node::And:
    case Node::Or:
      return std::min(min_abs_compare(*n.a, m), min_abs_compare(*n.b, m));
    case Node::Not:
      return min_abs_compare(*n.a, m);
  }
  return 0.0;
}

inline silgan::Maneuver random_maneuver(std::mt19937_64& rng, std::size_t t_len) {
  silgan::Maneuver m(3, t_len);
  std::uniform_real_distribution<float> unit(0.0f, 1.0f);
  for (float& v : m.values) v = unit(rng);
  return m;
}

}  // namespace astgen
