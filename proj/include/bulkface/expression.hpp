#pragma once

#include <memory>
#include <string>

namespace bulkface {

// Tiny arithmetic grammar for portable initial data:
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := ('+' | '-') factor | number | 'x' | 'y'
//           | ('sin' | 'cos' | 'exp') '(' expr ')' | '(' expr ')'
// Numbers are decimal literals. Throws ConfigError with the offending
// position on parse failure.
class Expression {
 public:
  static Expression parse(const std::string& text);

  double eval(double x, double y) const;
  const std::string& text() const { return text_; }

  Expression();
  Expression(const Expression&);
  Expression(Expression&&) noexcept;
  Expression& operator=(const Expression&);
  Expression& operator=(Expression&&) noexcept;
  ~Expression();

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace bulkface
