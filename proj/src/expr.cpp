#include "nslab/expr.hpp"

#include "nslab/types.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace nslab::expr {

enum class Kind { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Func };
enum class Fn { Exp, Ln, Sqrt, Sin, Cos, Tan, Atan, Sinh, Cosh, Tanh };

struct Node {
  Kind kind = Kind::Const;
  double value = 0.0;
  int slot = 0;
  Fn fn = Fn::Exp;
  Expr a{Expr::Empty{}};
  Expr b{Expr::Empty{}};
};

namespace {

struct FnName {
  const char* name;
  Fn fn;
};
constexpr FnName kFunctions[] = {{"exp", Fn::Exp},   {"ln", Fn::Ln},     {"sqrt", Fn::Sqrt},
                                 {"sin", Fn::Sin},   {"cos", Fn::Cos},   {"tan", Fn::Tan},
                                 {"atan", Fn::Atan}, {"sinh", Fn::Sinh}, {"cosh", Fn::Cosh},
                                 {"tanh", Fn::Tanh}};

const char* fn_name(Fn f) {
  for (const auto& e : kFunctions)
    if (e.fn == f) return e.name;
  return "?";
}

Expr make(Kind k, Expr a, Expr b = Expr(Expr::Empty{})) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return Expr(std::move(n));
}

Expr func(Fn f, Expr a) {
  if (a.is_constant()) {
    Env env;
    auto n = std::make_shared<Node>();
    n->kind = Kind::Func;
    n->fn = f;
    n->a = a;
    return Expr::constant(eval(Expr(n), env));
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Func;
  n->fn = f;
  n->a = std::move(a);
  return Expr(std::move(n));
}

bool is(const Expr& e, double c) { return e.is_constant() && e.constant_value() == c; }

Expr neg(Expr a) {
  if (a.is_constant()) return Expr::constant(-a.constant_value());
  if (a.node().kind == Kind::Neg) return a.node().a;
  return make(Kind::Neg, std::move(a));
}

Expr add(Expr a, Expr b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.constant_value() + b.constant_value());
  if (is(a, 0.0)) return b;
  if (is(b, 0.0)) return a;
  return make(Kind::Add, std::move(a), std::move(b));
}

Expr sub(Expr a, Expr b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.constant_value() - b.constant_value());
  if (is(b, 0.0)) return a;
  if (is(a, 0.0)) return neg(std::move(b));
  return make(Kind::Sub, std::move(a), std::move(b));
}

Expr mul(Expr a, Expr b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.constant_value() * b.constant_value());
  if (is(a, 0.0) || is(b, 0.0)) return Expr::constant(0.0);
  if (is(a, 1.0)) return b;
  if (is(b, 1.0)) return a;
  return make(Kind::Mul, std::move(a), std::move(b));
}

Expr div(Expr a, Expr b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.constant_value() / b.constant_value());
  if (is(a, 0.0)) return Expr::constant(0.0);
  if (is(b, 1.0)) return a;
  return make(Kind::Div, std::move(a), std::move(b));
}

Expr pow(Expr a, Expr b) {
  if (a.is_constant() && b.is_constant())
    return Expr::constant(std::pow(a.constant_value(), b.constant_value()));
  if (is(b, 1.0)) return a;
  if (is(b, 0.0)) return Expr::constant(1.0);
  return make(Kind::Pow, std::move(a), std::move(b));
}

// ---------------------------------------------------------------------------

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  Expr run() {
    Expr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw SchemaError("", "expression '" + s_ + "' at column " + std::to_string(pos_ + 1) + ": " + what);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (accept('+')) e = add(e, term());
      else if (accept('-')) e = sub(e, term());
      else return e;
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) e = mul(e, unary());
      else if (accept('/')) e = div(e, unary());
      else return e;
    }
  }

  Expr unary() {
    if (accept('-')) return neg(unary());
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) return pow(base, unary());
    return base;
  }

  Expr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (accept('(')) {
      Expr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return name();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr number() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin) fail("bad number");
    pos_ += static_cast<std::size_t>(end - begin);
    return Expr::constant(value);
  }

  Expr name() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string id = s_.substr(start, pos_ - start);
    for (const auto& f : kFunctions) {
      if (id == f.name) {
        if (!accept('(')) fail("expected '(' after " + id);
        Expr arg = expr();
        if (!accept(')')) fail("expected ')'");
        return func(f.fn, arg);
      }
    }
    if (id == "v") return Expr::variable(kVarV);
    if (id == "w") return Expr::variable(kVarW);
    if (id == "pi") return Expr::constant(std::numbers::pi);
    if (id.size() >= 2 && id[0] == 'x') {
      bool digits = true;
      for (std::size_t i = 1; i < id.size(); ++i) digits = digits && std::isdigit(static_cast<unsigned char>(id[i]));
      if (digits && id[1] != '0') return Expr::variable(std::stoi(id.substr(1)) - 1);
    }
    pos_ = start;
    fail("unknown name '" + id + "'");
  }
};

double apply(Fn f, double a) {
  switch (f) {
    case Fn::Exp: return std::exp(a);
    case Fn::Ln: return std::log(a);
    case Fn::Sqrt: return std::sqrt(a);
    case Fn::Sin: return std::sin(a);
    case Fn::Cos: return std::cos(a);
    case Fn::Tan: return std::tan(a);
    case Fn::Atan: return std::atan(a);
    case Fn::Sinh: return std::sinh(a);
    case Fn::Cosh: return std::cosh(a);
    case Fn::Tanh: return std::tanh(a);
  }
  return 0.0;
}

std::string fmt_number(double c) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", c);
  return buf;
}

}  // namespace

Expr::Expr() : node_(std::make_shared<Node>()) {}

Expr Expr::constant(double c) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->value = c;
  return Expr(std::move(n));
}

Expr Expr::variable(int slot) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->slot = slot;
  return Expr(std::move(n));
}

bool Expr::is_constant() const { return node_->kind == Kind::Const; }
double Expr::constant_value() const { return node_->value; }

int Expr::max_position_index() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Const: return 0;
    case Kind::Var: return n.slot >= 0 ? n.slot + 1 : 0;
    case Kind::Neg:
    case Kind::Func: return n.a.max_position_index();
    default: return std::max(n.a.max_position_index(), n.b.max_position_index());
  }
}

bool Expr::uses(int slot) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Const: return false;
    case Kind::Var: return n.slot == slot;
    case Kind::Neg:
    case Kind::Func: return n.a.uses(slot);
    default: return n.a.uses(slot) || n.b.uses(slot);
  }
}

Expr parse(const std::string& text) { return Parser(text).run(); }

double eval(const Expr& e, const Env& env) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::Const: return n.value;
    case Kind::Var:
      if (n.slot == kVarV) return env.v;
      if (n.slot == kVarW) return env.w;
      if (n.slot >= env.n) throw DomainError("expression uses x" + std::to_string(n.slot + 1) +
                                             " beyond dimension " + std::to_string(env.n));
      return env.x[n.slot];
    case Kind::Neg: return -eval(n.a, env);
    case Kind::Add: return eval(n.a, env) + eval(n.b, env);
    case Kind::Sub: return eval(n.a, env) - eval(n.b, env);
    case Kind::Mul: return eval(n.a, env) * eval(n.b, env);
    case Kind::Div: return eval(n.a, env) / eval(n.b, env);
    case Kind::Pow: {
      const double base = eval(n.a, env);
      if (n.b.is_constant()) {
        const double p = n.b.constant_value();
        if (p == 2.0) return base * base;
        if (p == 3.0) return base * base * base;
      }
      return std::pow(base, eval(n.b, env));
    }
    case Kind::Func: return apply(n.fn, eval(n.a, env));
  }
  return 0.0;
}

Expr diff(const Expr& e, int slot) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::Const: return Expr::constant(0.0);
    case Kind::Var: return Expr::constant(n.slot == slot ? 1.0 : 0.0);
    case Kind::Neg: return neg(diff(n.a, slot));
    case Kind::Add: return add(diff(n.a, slot), diff(n.b, slot));
    case Kind::Sub: return sub(diff(n.a, slot), diff(n.b, slot));
    case Kind::Mul: return add(mul(diff(n.a, slot), n.b), mul(n.a, diff(n.b, slot)));
    case Kind::Div:
      return div(sub(mul(diff(n.a, slot), n.b), mul(n.a, diff(n.b, slot))), pow(n.b, Expr::constant(2.0)));
    case Kind::Pow: {
      const Expr da = diff(n.a, slot);
      if (!n.b.uses(slot)) {
        // d(a^b) = b a^(b-1) a'
        return mul(mul(n.b, pow(n.a, sub(n.b, Expr::constant(1.0)))), da);
      }
      // d(a^b) = a^b (b' ln a + b a' / a)
      return mul(e, add(mul(diff(n.b, slot), func(Fn::Ln, n.a)), div(mul(n.b, da), n.a)));
    }
    case Kind::Func: {
      const Expr da = diff(n.a, slot);
      if (is(da, 0.0)) return Expr::constant(0.0);
      Expr outer;
      switch (n.fn) {
        case Fn::Exp: outer = e; break;
        case Fn::Ln: outer = div(Expr::constant(1.0), n.a); break;
        case Fn::Sqrt: outer = div(Expr::constant(0.5), e); break;
        case Fn::Sin: outer = func(Fn::Cos, n.a); break;
        case Fn::Cos: outer = neg(func(Fn::Sin, n.a)); break;
        case Fn::Tan: outer = add(Expr::constant(1.0), pow(e, Expr::constant(2.0))); break;
        case Fn::Atan:
          outer = div(Expr::constant(1.0), add(Expr::constant(1.0), pow(n.a, Expr::constant(2.0))));
          break;
        case Fn::Sinh: outer = func(Fn::Cosh, n.a); break;
        case Fn::Cosh: outer = func(Fn::Sinh, n.a); break;
        case Fn::Tanh: outer = sub(Expr::constant(1.0), pow(e, Expr::constant(2.0))); break;
      }
      return mul(outer, da);
    }
  }
  return Expr::constant(0.0);
}

Expr substitute(const Expr& e, int slot, const Expr& with) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::Const: return e;
    case Kind::Var: return n.slot == slot ? with : e;
    case Kind::Neg: return neg(substitute(n.a, slot, with));
    case Kind::Add: return add(substitute(n.a, slot, with), substitute(n.b, slot, with));
    case Kind::Sub: return sub(substitute(n.a, slot, with), substitute(n.b, slot, with));
    case Kind::Mul: return mul(substitute(n.a, slot, with), substitute(n.b, slot, with));
    case Kind::Div: return div(substitute(n.a, slot, with), substitute(n.b, slot, with));
    case Kind::Pow: return pow(substitute(n.a, slot, with), substitute(n.b, slot, with));
    case Kind::Func: return func(n.fn, substitute(n.a, slot, with));
  }
  return e;
}

std::string to_string(const Expr& e) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::Const: return n.value < 0 ? "(" + fmt_number(n.value) + ")" : fmt_number(n.value);
    case Kind::Var:
      if (n.slot == kVarV) return "v";
      if (n.slot == kVarW) return "w";
      return "x" + std::to_string(n.slot + 1);
    case Kind::Neg: return "(-" + to_string(n.a) + ")";
    case Kind::Add: return "(" + to_string(n.a) + " + " + to_string(n.b) + ")";
    case Kind::Sub: return "(" + to_string(n.a) + " - " + to_string(n.b) + ")";
    case Kind::Mul: return "(" + to_string(n.a) + " * " + to_string(n.b) + ")";
    case Kind::Div: return "(" + to_string(n.a) + " / " + to_string(n.b) + ")";
    case Kind::Pow: return "(" + to_string(n.a) + " ^ " + to_string(n.b) + ")";
    case Kind::Func: return std::string(fn_name(n.fn)) + "(" + to_string(n.a) + ")";
  }
  return "?";
}

}  // namespace nslab::expr
