#include "silgan/coverage_dsl.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace silgan::dsl {

parse_error::parse_error(const std::string& msg, std::size_t line_no, std::size_t col_no)
    : param_error("line " + std::to_string(line_no) + ", column " +
                  std::to_string(col_no) + ": " + msg),
      line(line_no),
      col(col_no) {}

namespace {

struct Token {
  enum class Kind { Ident, Number, Integer, LParen, RParen, LBracket, RBracket,
                    Colon, Less, Greater, End } kind;
  std::string text;
  double number = 0.0;
  std::size_t col = 0;  // 1-based
};

class Lexer {
 public:
  Lexer(const std::string& text, std::size_t line_no) : text_(text), line_(line_no) {
    advance();
  }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg, std::size_t col) const {
    throw parse_error(msg, line_, col);
  }
  [[noreturn]] void fail(const std::string& msg) const { fail(msg, tok_.col); }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    tok_ = {};
    tok_.col = pos_ + 1;
    if (pos_ >= text_.size()) {
      tok_.kind = Token::Kind::End;
      return;
    }
    const char c = text_[pos_];
    if (c == '=' || c == '!') {
      std::string op(1, c);
      if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') op += '=';
      fail("operator '" + op + "' is not expressible as a difference function",
           pos_ + 1);
    }
    const auto single = [&](Token::Kind k) {
      tok_.kind = k;
      tok_.text = c;
      ++pos_;
    };
    switch (c) {
      case '(': single(Token::Kind::LParen); return;
      case ')': single(Token::Kind::RParen); return;
      case '[': single(Token::Kind::LBracket); return;
      case ']': single(Token::Kind::RBracket); return;
      case ':': single(Token::Kind::Colon); return;
      case '<': single(Token::Kind::Less); return;
      case '>': single(Token::Kind::Greater); return;
      default: break;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
        ++end;
      tok_.kind = Token::Kind::Ident;
      tok_.text = text_.substr(pos_, end - pos_);
      pos_ = end;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && pos_ + 1 < text_.size() &&
         std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
      std::size_t end = pos_ + 1;
      bool is_integer = c != '-';  // negative constants are numbers, not slice ints
      while (end < text_.size()) {
        const char d = text_[end];
        if (std::isdigit(static_cast<unsigned char>(d))) {
          ++end;
        } else if (d == '.' || d == 'e' || d == 'E' ||
                   ((d == '+' || d == '-') &&
                    (text_[end - 1] == 'e' || text_[end - 1] == 'E'))) {
          is_integer = false;
          ++end;
        } else {
          break;
        }
      }
      tok_.kind = is_integer ? Token::Kind::Integer : Token::Kind::Number;
      tok_.text = text_.substr(pos_, end - pos_);
      try {
        tok_.number = std::stod(tok_.text);
      } catch (const std::exception&) {
        fail("bad numeric literal '" + tok_.text + "'", pos_ + 1);
      }
      pos_ = end;
      return;
    }
    fail(std::string("unexpected character '") + c + "'", pos_ + 1);
  }

  const std::string& text_;
  std::size_t line_;
  std::size_t pos_ = 0;
  Token tok_;
};

class Parser {
 public:
  Parser(const std::string& text, std::size_t line_no) : lex_(text, line_no) {}

  NodePtr parse() {
    NodePtr root = parse_or();
    if (lex_.peek().kind != Token::Kind::End)
      lex_.fail("unexpected trailing input '" + lex_.peek().text + "'");
    return root;
  }

 private:
  bool keyword(const char* kw) const {
    return lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == kw;
  }

  NodePtr parse_or() {
    NodePtr left = parse_and();
    while (keyword("or")) {
      lex_.take();
      auto node = std::make_shared<Node>();
      node->kind = Node::Kind::Or;
      node->a = left;
      node->b = parse_and();
      left = node;
    }
    return left;
  }

  NodePtr parse_and() {
    NodePtr left = parse_unary();
    while (keyword("and")) {
      lex_.take();
      auto node = std::make_shared<Node>();
      node->kind = Node::Kind::And;
      node->a = left;
      node->b = parse_unary();
      left = node;
    }
    return left;
  }

  NodePtr parse_unary() {
    if (keyword("not")) {
      lex_.take();
      auto node = std::make_shared<Node>();
      node->kind = Node::Kind::Not;
      node->a = parse_unary();
      return node;
    }
    if (lex_.peek().kind == Token::Kind::LParen) {
      lex_.take();
      NodePtr inner = parse_or();
      if (lex_.peek().kind != Token::Kind::RParen) lex_.fail("expected ')'");
      lex_.take();
      return inner;
    }
    return parse_compare();
  }

  NodePtr parse_compare() {
    auto node = std::make_shared<Node>();
    node->kind = Node::Kind::Compare;
    node->lhs = parse_value();
    const Token op = lex_.take();
    if (op.kind == Token::Kind::Less) {
      node->cmp = CmpOp::Less;
    } else if (op.kind == Token::Kind::Greater) {
      node->cmp = CmpOp::Greater;
    } else {
      lex_.fail("expected '<' or '>' after comparison operand", op.col);
    }
    node->rhs = parse_value();
    return node;
  }

  Value parse_value() {
    const Token t = lex_.take();
    Value v;
    if (t.kind == Token::Kind::Number || t.kind == Token::Kind::Integer) {
      v.is_constant = true;
      v.constant = t.number;
      return v;
    }
    if (t.kind != Token::Kind::Ident)
      lex_.fail("expected a number or an aggregate, got '" + t.text + "'", t.col);
    AggOp op;
    if (t.text == "mean") {
      op = AggOp::Mean;
    } else if (t.text == "max") {
      op = AggOp::Max;
    } else if (t.text == "min") {
      op = AggOp::Min;
    } else {
      lex_.fail("unknown aggregate '" + t.text + "' (want mean/max/min)", t.col);
    }
    expect(Token::Kind::LParen, "expected '(' after aggregate name");
    const Token chan = lex_.take();
    if (chan.kind != Token::Kind::Ident)
      lex_.fail("expected a channel name", chan.col);
    const auto it = std::find(kSignalNames.begin(), kSignalNames.end(), chan.text);
    if (it == kSignalNames.end())
      lex_.fail("unknown channel '" + chan.text + "'", chan.col);
    expect(Token::Kind::LBracket, "expected '[' after channel name");
    const std::size_t begin = expect_int();
    expect(Token::Kind::Colon, "expected ':' in slice");
    const std::size_t end = expect_int();
    expect(Token::Kind::RBracket, "expected ']' after slice");
    expect(Token::Kind::RParen, "expected ')' after aggregate");
    if (begin >= end) lex_.fail("empty slice [" + std::to_string(begin) + ":" +
                                std::to_string(end) + "]", chan.col);
    v.is_constant = false;
    v.agg.op = op;
    v.agg.channel = chan.text;
    v.agg.channel_index = static_cast<std::size_t>(it - kSignalNames.begin());
    v.agg.begin = begin;
    v.agg.end = end;
    return v;
  }

  void expect(Token::Kind kind, const char* msg) {
    const Token t = lex_.take();
    if (t.kind != kind) lex_.fail(msg, t.col);
  }

  std::size_t expect_int() {
    const Token t = lex_.take();
    if (t.kind != Token::Kind::Integer)
      lex_.fail("expected a nonnegative integer slice bound", t.col);
    return static_cast<std::size_t>(t.number);
  }

  Lexer lex_;
};

double eval_aggregate(const Aggregate& a, const Maneuver& m) {
  if (a.channel_index >= m.channels || a.end > m.length)
    throw param_error("aggregate slice " + a.channel + "[" + std::to_string(a.begin) +
                      ":" + std::to_string(a.end) + "] out of range for length " +
                      std::to_string(m.length));
  const std::span<const float> c = m.channel(a.channel_index);
  switch (a.op) {
    case AggOp::Mean: {
      double sum = 0.0;
      for (std::size_t i = a.begin; i < a.end; ++i) sum += c[i];
      return sum / static_cast<double>(a.end - a.begin);
    }
    case AggOp::Max:
      return *std::max_element(c.begin() + a.begin, c.begin() + a.end);
    case AggOp::Min:
      return *std::min_element(c.begin() + a.begin, c.begin() + a.end);
  }
  throw param_error("aggregate: bad op");
}

double eval_value(const Value& v, const Maneuver& m) {
  return v.is_constant ? v.constant : eval_aggregate(v.agg, m);
}

bool eval_node_bool(const NodePtr& n, const Maneuver& m) {
  switch (n->kind) {
    case Node::Kind::Compare: {
      const double a = eval_value(n->lhs, m);
      const double b = eval_value(n->rhs, m);
      return n->cmp == CmpOp::Less ? a < b : a > b;
    }
    case Node::Kind::And: return eval_node_bool(n->a, m) && eval_node_bool(n->b, m);
    case Node::Kind::Or: return eval_node_bool(n->a, m) || eval_node_bool(n->b, m);
    case Node::Kind::Not: return !eval_node_bool(n->a, m);
  }
  throw param_error("predicate: bad node kind");
}

double eval_node_indicator(const NodePtr& n, const Maneuver& m) {
  switch (n->kind) {
    case Node::Kind::Compare: {
      const double a = eval_value(n->lhs, m);
      const double b = eval_value(n->rhs, m);
      return n->cmp == CmpOp::Less ? a - b : b - a;
    }
    case Node::Kind::And:
      return std::max(eval_node_indicator(n->a, m), eval_node_indicator(n->b, m));
    case Node::Kind::Or:
      return std::min(eval_node_indicator(n->a, m), eval_node_indicator(n->b, m));
    case Node::Kind::Not:
      return -eval_node_indicator(n->a, m);
  }
  throw param_error("predicate: bad node kind");
}

torch::Tensor eval_value_tensor(const Value& v, const torch::Tensor& x) {
  if (v.is_constant) return torch::full({}, v.constant, x.options());
  const Aggregate& a = v.agg;
  if (static_cast<std::int64_t>(a.channel_index) >= x.size(0) ||
      static_cast<std::int64_t>(a.end) > x.size(1))
    throw param_error("aggregate slice " + a.channel + "[" + std::to_string(a.begin) +
                      ":" + std::to_string(a.end) + "] out of range for length " +
                      std::to_string(x.size(1)));
  const torch::Tensor s = x[static_cast<std::int64_t>(a.channel_index)].slice(
      0, static_cast<std::int64_t>(a.begin), static_cast<std::int64_t>(a.end));
  switch (a.op) {
    case AggOp::Mean: return s.mean();
    case AggOp::Max: return s.max();
    case AggOp::Min: return s.min();
  }
  throw param_error("aggregate: bad op");
}

torch::Tensor eval_node_tensor(const NodePtr& n, const torch::Tensor& x) {
  switch (n->kind) {
    case Node::Kind::Compare: {
      const torch::Tensor a = eval_value_tensor(n->lhs, x);
      const torch::Tensor b = eval_value_tensor(n->rhs, x);
      return n->cmp == CmpOp::Less ? a - b : b - a;
    }
    case Node::Kind::And:
      return torch::maximum(eval_node_tensor(n->a, x), eval_node_tensor(n->b, x));
    case Node::Kind::Or:
      return torch::minimum(eval_node_tensor(n->a, x), eval_node_tensor(n->b, x));
    case Node::Kind::Not:
      return -eval_node_tensor(n->a, x);
  }
  throw param_error("predicate: bad node kind");
}

}  // namespace

std::vector<Predicate> parse(const std::string& source) {
  std::vector<Predicate> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= source.size()) {
    std::size_t nl = source.find('\n', start);
    if (nl == std::string::npos) nl = source.size();
    const std::string line = source.substr(start, nl - start);
    ++line_no;
    const bool blank =
        std::all_of(line.begin(), line.end(),
                    [](unsigned char c) { return std::isspace(c); });
    if (!blank) {
      Predicate p;
      p.root = Parser(line, line_no).parse();
      p.source = line;
      out.push_back(std::move(p));
    }
    start = nl + 1;
  }
  if (out.empty()) throw parse_error("no predicate found", 1, 1);
  return out;
}

bool eval_bool(const Predicate& p, const Maneuver& m) {
  return eval_node_bool(p.root, m);
}

std::vector<double> SearchFn::operator()(const Maneuver& m) const {
  std::vector<double> out;
  out.reserve(predicates_.size());
  for (const Predicate& p : predicates_) out.push_back(eval_node_indicator(p.root, m));
  return out;
}

torch::Tensor SearchFn::eval(const torch::Tensor& x, std::size_t branch) const {
  if (x.dim() != 2) throw shape_error("SearchFn::eval: expected an (L, T) tensor");
  return eval_node_tensor(predicates_.at(branch).root, x);
}

torch::Tensor SearchFn::eval_all(const torch::Tensor& x) const {
  std::vector<torch::Tensor> vals;
  vals.reserve(predicates_.size());
  for (std::size_t b = 0; b < predicates_.size(); ++b) vals.push_back(eval(x, b));
  return torch::stack(vals);
}

SearchFn compile_indicators(std::vector<Predicate> predicates) {
  if (predicates.empty()) throw param_error("compile_indicators: no predicates");
  for (const Predicate& p : predicates)
    if (!p.root) throw param_error("compile_indicators: empty predicate");
  SearchFn fn;
  fn.predicates_ = std::move(predicates);
  return fn;
}

std::vector<double> eval_search(const SearchFn& fn, const Maneuver& m) { return fn(m); }

}  // namespace silgan::dsl
