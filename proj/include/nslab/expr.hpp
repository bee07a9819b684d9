#pragma once

// Expression grammar for W, C, H and gauge functions:
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' unary)?            right associative
//   primary := number | name | func '(' expr ')' | '(' expr ')'
//
// Names: x1 .. xn (position components), v (speed), w (free variable of
// gauge functions), pi. Functions: exp ln sqrt sin cos tan atan sinh cosh tanh.

#include <memory>
#include <string>

namespace nslab::expr {

/// Variable slots: position components are 0..n-1, then the two scalars.
inline constexpr int kVarV = -1;
inline constexpr int kVarW = -2;

struct Node;

class Expr {
 public:
  Expr();  // the constant 0
  /// Empty handle, for node internals only.
  struct Empty {};
  explicit Expr(Empty) {}
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Expr constant(double c);
  static Expr variable(int slot);

  const Node& node() const { return *node_; }
  std::shared_ptr<const Node> ptr() const { return node_; }

  bool is_constant() const;
  double constant_value() const;
  /// Highest x index used (1-based), 0 when none.
  int max_position_index() const;
  bool uses(int slot) const;

 private:
  std::shared_ptr<const Node> node_;
};

struct Env {
  const double* x = nullptr;
  int n = 0;
  double v = 0.0;
  double w = 0.0;
};

/// Throws SchemaError("", ...) with the offending column on bad syntax.
Expr parse(const std::string& text);
double eval(const Expr& e, const Env& env);
Expr diff(const Expr& e, int slot);
/// Replaces every occurrence of `slot` by `with`.
Expr substitute(const Expr& e, int slot, const Expr& with);
std::string to_string(const Expr& e);

}  // namespace nslab::expr
