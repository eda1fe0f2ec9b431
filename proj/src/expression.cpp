#include "bulkface/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "bulkface/errors.hpp"

namespace bulkface {

struct Expression::Node {
  enum class Op { Num, VarX, VarY, Neg, Add, Sub, Mul, Div, Sin, Cos, Exp };
  Op op = Op::Num;
  double value = 0.0;
  std::shared_ptr<const Node> a, b;

  double eval(double x, double y) const {
    switch (op) {
      case Op::Num: return value;
      case Op::VarX: return x;
      case Op::VarY: return y;
      case Op::Neg: return -a->eval(x, y);
      case Op::Add: return a->eval(x, y) + b->eval(x, y);
      case Op::Sub: return a->eval(x, y) - b->eval(x, y);
      case Op::Mul: return a->eval(x, y) * b->eval(x, y);
      case Op::Div: return a->eval(x, y) / b->eval(x, y);
      case Op::Sin: return std::sin(a->eval(x, y));
      case Op::Cos: return std::cos(a->eval(x, y));
      case Op::Exp: return std::exp(a->eval(x, y));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("initial.expression: " + what + " at position " +
                      std::to_string(pos_));
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr make(Expression::Node::Op op, NodePtr a = nullptr, NodePtr b = nullptr,
               double value = 0.0) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->value = value;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  }

  NodePtr expr() {
    NodePtr e = term();
    for (;;) {
      if (consume('+')) {
        e = make(Expression::Node::Op::Add, e, term());
      } else if (consume('-')) {
        e = make(Expression::Node::Op::Sub, e, term());
      } else {
        return e;
      }
    }
  }

  NodePtr term() {
    NodePtr e = factor();
    for (;;) {
      if (consume('*')) {
        e = make(Expression::Node::Op::Mul, e, factor());
      } else if (consume('/')) {
        e = make(Expression::Node::Op::Div, e, factor());
      } else {
        return e;
      }
    }
  }

  NodePtr factor() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '+') {
      ++pos_;
      return factor();
    }
    if (c == '-') {
      ++pos_;
      return make(Expression::Node::Op::Neg, factor());
    }
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!consume(')')) fail("missing ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      char* end = nullptr;
      const double v = std::strtod(s_.c_str() + pos_, &end);
      if (end == s_.c_str() + pos_) fail("malformed number");
      pos_ = static_cast<std::size_t>(end - s_.c_str());
      return make(Expression::Node::Op::Num, nullptr, nullptr, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (name == "x") return make(Expression::Node::Op::VarX);
      if (name == "y") return make(Expression::Node::Op::VarY);
      Expression::Node::Op op;
      if (name == "sin") {
        op = Expression::Node::Op::Sin;
      } else if (name == "cos") {
        op = Expression::Node::Op::Cos;
      } else if (name == "exp") {
        op = Expression::Node::Op::Exp;
      } else {
        pos_ = start;
        fail("unknown identifier '" + name + "'");
      }
      if (!consume('(')) fail("expected '(' after function name");
      NodePtr arg = expr();
      if (!consume(')')) fail("missing ')'");
      return make(op, arg);
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

}  // namespace

Expression::Expression() = default;
Expression::Expression(const Expression&) = default;
Expression::Expression(Expression&&) noexcept = default;
Expression& Expression::operator=(const Expression&) = default;
Expression& Expression::operator=(Expression&&) noexcept = default;
Expression::~Expression() = default;

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.root_ = Parser(text).parse();
  e.text_ = text;
  return e;
}

double Expression::eval(double x, double y) const {
  if (!root_) throw Error("expression: evaluating an empty expression");
  return root_->eval(x, y);
}

}  // namespace bulkface
