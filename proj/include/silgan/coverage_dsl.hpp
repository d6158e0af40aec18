#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include <torch/torch.h>

#include "silgan/data.hpp"

namespace silgan::dsl {

// Grammar (one predicate per nonempty line, each line = one branch):
//   pred    := or_expr
//   or_expr := and_expr ("or" and_expr)*
//   and_expr:= unary ("and" unary)*
//   unary   := "not" unary | "(" pred ")" | cmp
//   cmp     := value ("<" | ">") value
//   value   := NUMBER | ("mean"|"max"|"min") "(" IDENT "[" INT ":" INT "]" ")"

enum class AggOp { Mean, Max, Min };
enum class CmpOp { Less, Greater };

struct Aggregate {
  AggOp op = AggOp::Mean;
  std::string channel;
  std::size_t channel_index = 0;
  std::size_t begin = 0, end = 0;  // slice [begin, end)
};

struct Value {
  bool is_constant = true;
  double constant = 0.0;
  Aggregate agg;
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  enum class Kind { Compare, And, Or, Not } kind = Kind::Compare;
  CmpOp cmp = CmpOp::Less;  // Compare only
  Value lhs, rhs;           // Compare only
  NodePtr a, b;             // And/Or children; Not uses a
};

struct Predicate {
  NodePtr root;
  std::string source;  // the originating line, for reports
};

/// Syntax error with 1-based line/column position.
struct parse_error : param_error {
  parse_error(const std::string& msg, std::size_t line, std::size_t col);
  std::size_t line, col;
};

/// Parses one predicate per nonempty line. Channel names are validated
/// against the maneuver signal set; == and != are rejected as not
/// expressible as difference functions.
std::vector<Predicate> parse(const std::string& source);

/// Reference boolean semantics with strict comparisons.
bool eval_bool(const Predicate& p, const Maneuver& m);

/// Differentiable coverage indicators for a list of branch predicates:
/// a < b -> a-b, a > b -> b-a, and -> max, or -> min, not -> negation;
/// aggregates reduce as exact mean/max/min. A value < 0 certifies that the
/// branch condition holds.
class SearchFn {
 public:
  std::size_t branches() const { return predicates_.size(); }
  const Predicate& predicate(std::size_t branch) const { return predicates_.at(branch); }

  /// Indicator vector evaluated in double precision (reference path).
  std::vector<double> operator()(const Maneuver& m) const;

  /// Indicator for one branch on an (L,T) tensor; differentiable w.r.t. x.
  torch::Tensor eval(const torch::Tensor& x, std::size_t branch) const;
  /// All branch indicators on an (L,T) tensor, shape (B).
  torch::Tensor eval_all(const torch::Tensor& x) const;

 private:
  friend SearchFn compile_indicators(std::vector<Predicate> predicates);
  std::vector<Predicate> predicates_;
};

SearchFn compile_indicators(std::vector<Predicate> predicates);

/// Convenience: indicator vector of `fn` on a maneuver (reference path).
std::vector<double> eval_search(const SearchFn& fn, const Maneuver& m);

}  // namespace silgan::dsl
