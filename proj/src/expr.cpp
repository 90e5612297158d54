// Copyright 2026 The dualgeom Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dualgeom/expr.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

#include "dualgeom/error.hpp"

namespace dualgeom {

struct Expr::Node {
  Kind kind = Kind::Constant;
  double value = 0.0;
  std::string name;
  std::size_t index = 0;
  std::vector<Expr> args;
};

namespace {

using Kind = Expr::Kind;

bool is_unary(Kind k) {
  switch (k) {
    case Kind::Neg:
    case Kind::Sin:
    case Kind::Cos:
    case Kind::Tan:
    case Kind::Sinh:
    case Kind::Cosh:
    case Kind::Tanh:
    case Kind::Exp:
    case Kind::Log:
    case Kind::Sqrt:
      return true;
    default:
      return false;
  }
}

struct FunctionName {
  const char* name;
  Kind kind;
};

constexpr std::array<FunctionName, 9> kFunctions{{
    {"sin", Kind::Sin},
    {"cos", Kind::Cos},
    {"tan", Kind::Tan},
    {"sinh", Kind::Sinh},
    {"cosh", Kind::Cosh},
    {"tanh", Kind::Tanh},
    {"exp", Kind::Exp},
    {"log", Kind::Log},
    {"sqrt", Kind::Sqrt},
}};

const char* function_name(Kind k) {
  for (const auto& f : kFunctions)
    if (f.kind == k) return f.name;
  return "?";
}

double checked(double v, const char* what) {
  if (!std::isfinite(v))
    throw DomainError(std::string("non-finite result in ") + what);
  return v;
}

double apply_unary(Kind k, double a) {
  switch (k) {
    case Kind::Neg:
      return -a;
    case Kind::Sin:
      return std::sin(a);
    case Kind::Cos:
      return std::cos(a);
    case Kind::Tan:
      return checked(std::tan(a), "tan");
    case Kind::Sinh:
      return checked(std::sinh(a), "sinh");
    case Kind::Cosh:
      return checked(std::cosh(a), "cosh");
    case Kind::Tanh:
      return std::tanh(a);
    case Kind::Exp:
      return checked(std::exp(a), "exp");
    case Kind::Log:
      if (!(a > 0.0))
        throw DomainError("log of non-positive value " + std::to_string(a));
      return std::log(a);
    case Kind::Sqrt:
      if (a < 0.0)
        throw DomainError("sqrt of negative value " + std::to_string(a));
      return std::sqrt(a);
    default:
      throw DomainError("not a unary operator");
  }
}

bool is_integer(double v) { return std::floor(v) == v && std::abs(v) < 1e15; }

double apply_binary(Kind k, double a, double b) {
  switch (k) {
    case Kind::Add:
      return checked(a + b, "addition");
    case Kind::Sub:
      return checked(a - b, "subtraction");
    case Kind::Mul:
      return checked(a * b, "multiplication");
    case Kind::Div:
      if (b == 0.0) throw DomainError("division by zero");
      return checked(a / b, "division");
    case Kind::Pow:
      if (a < 0.0 && !is_integer(b))
        throw DomainError("negative base with non-integer exponent");
      if (a == 0.0 && b < 0.0) throw DomainError("division by zero in power");
      return checked(std::pow(a, b), "power");
    default:
      throw DomainError("not a binary operator");
  }
}

}  // namespace

Expr::Expr() : Expr(constant(0.0)) {}

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable(std::string name, std::size_t index) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->name = std::move(name);
  n->index = index;
  return Expr(std::move(n));
}

Expr Expr::unary(Kind kind, const Expr& arg) {
  if (arg.is_constant()) {
    // Fold only where the result is representable; domain errors stay
    // deferred to evaluation so that parse never throws them.
    try {
      return constant(apply_unary(kind, arg.value()));
    } catch (const DomainError&) {
    }
  }
  if (kind == Kind::Neg && arg.kind() == Kind::Neg) return arg.operand(0);
  if (kind == Kind::Log && arg.kind() == Kind::Exp) return arg.operand(0);
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->args = {arg};
  return Expr(std::move(n));
}

Expr Expr::binary(Kind kind, const Expr& lhs, const Expr& rhs) {
  if (lhs.is_constant() && rhs.is_constant()) {
    try {
      return constant(apply_binary(kind, lhs.value(), rhs.value()));
    } catch (const DomainError&) {
    }
  }
  switch (kind) {
    case Kind::Add:
      if (lhs.is_constant(0.0)) return rhs;
      if (rhs.is_constant(0.0)) return lhs;
      break;
    case Kind::Sub:
      if (rhs.is_constant(0.0)) return lhs;
      if (lhs.is_constant(0.0)) return unary(Kind::Neg, rhs);
      break;
    case Kind::Mul:
      if (lhs.is_constant(0.0) || rhs.is_constant(0.0)) return constant(0.0);
      if (lhs.is_constant(1.0)) return rhs;
      if (rhs.is_constant(1.0)) return lhs;
      if (lhs.is_constant(-1.0)) return unary(Kind::Neg, rhs);
      if (rhs.is_constant(-1.0)) return unary(Kind::Neg, lhs);
      break;
    case Kind::Div:
      if (rhs.is_constant(1.0)) return lhs;
      if (lhs.is_constant(0.0) && !rhs.is_constant(0.0)) return constant(0.0);
      break;
    case Kind::Pow:
      if (!rhs.is_constant())
        return unary(Kind::Exp, binary(Kind::Mul, rhs, unary(Kind::Log, lhs)));
      if (rhs.is_constant(0.0)) return constant(1.0);
      if (rhs.is_constant(1.0)) return lhs;
      break;
    default:
      break;
  }
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->args = {lhs, rhs};
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }

bool Expr::is_constant(double v) const {
  return node_->kind == Kind::Constant && node_->value == v;
}

double Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
std::size_t Expr::index() const { return node_->index; }
std::size_t Expr::arity() const { return node_->args.size(); }
const Expr& Expr::operand(std::size_t i) const { return node_->args.at(i); }

double Expr::eval(std::span<const double> x) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Constant:
      return n.value;
    case Kind::Variable:
      if (n.index >= x.size())
        throw DomainError("no value for coordinate '" + n.name + "'");
      return x[n.index];
    default:
      break;
  }
  if (n.args.size() == 1) return apply_unary(n.kind, n.args[0].eval(x));
  return apply_binary(n.kind, n.args[0].eval(x), n.args[1].eval(x));
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::binary(Kind::Add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::binary(Kind::Sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::binary(Kind::Mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::binary(Kind::Div, a, b); }
Expr operator-(const Expr& a) { return Expr::unary(Kind::Neg, a); }
Expr pow(const Expr& base, const Expr& exponent) {
  return Expr::binary(Kind::Pow, base, exponent);
}
Expr exp(const Expr& a) { return Expr::unary(Kind::Exp, a); }
Expr log(const Expr& a) { return Expr::unary(Kind::Log, a); }
Expr sqrt(const Expr& a) { return Expr::unary(Kind::Sqrt, a); }

// ---------------------------------------------------------------------------
// Differentiation

Expr differentiate(const Expr& e, std::size_t index) {
  const auto c = [](double v) { return Expr::constant(v); };
  switch (e.kind()) {
    case Kind::Constant:
      return c(0.0);
    case Kind::Variable:
      return c(e.index() == index ? 1.0 : 0.0);
    default:
      break;
  }
  const Expr& a = e.operand(0);
  const Expr da = differentiate(a, index);
  if (e.arity() == 1) {
    if (da.is_constant(0.0)) return c(0.0);
    switch (e.kind()) {
      case Kind::Neg:
        return -da;
      case Kind::Sin:
        return Expr::unary(Kind::Cos, a) * da;
      case Kind::Cos:
        return -(Expr::unary(Kind::Sin, a) * da);
      case Kind::Tan: {
        const Expr cosa = Expr::unary(Kind::Cos, a);
        return da / (cosa * cosa);
      }
      case Kind::Sinh:
        return Expr::unary(Kind::Cosh, a) * da;
      case Kind::Cosh:
        return Expr::unary(Kind::Sinh, a) * da;
      case Kind::Tanh: {
        const Expr t = Expr::unary(Kind::Tanh, a);
        return (c(1.0) - t * t) * da;
      }
      case Kind::Exp:
        return e * da;
      case Kind::Log:
        return da / a;
      case Kind::Sqrt:
        return da / (c(2.0) * e);
      default:
        break;
    }
  }
  const Expr& b = e.operand(1);
  const Expr db = differentiate(b, index);
  switch (e.kind()) {
    case Kind::Add:
      return da + db;
    case Kind::Sub:
      return da - db;
    case Kind::Mul:
      return da * b + a * db;
    case Kind::Div:
      return (da * b - a * db) / (b * b);
    case Kind::Pow: {
      // Exponent is constant here; non-constant exponents were rewritten.
      const double p = b.value();
      return c(p) * pow(a, c(p - 1.0)) * da;
    }
    default:
      break;
  }
  return c(0.0);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (v < 0.0) return "(" + s + ")";
  return s;
}

void print(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case Kind::Constant:
      out += format_number(e.value());
      return;
    case Kind::Variable:
      out += e.name();
      return;
    case Kind::Neg:
      out += "(-";
      print(e.operand(0), out);
      out += ")";
      return;
    default:
      break;
  }
  if (is_unary(e.kind())) {
    out += function_name(e.kind());
    out += "(";
    print(e.operand(0), out);
    out += ")";
    return;
  }
  const char* op = "+";
  switch (e.kind()) {
    case Kind::Sub:
      op = " - ";
      break;
    case Kind::Mul:
      op = " * ";
      break;
    case Kind::Div:
      op = " / ";
      break;
    case Kind::Pow:
      op = " ^ ";
      break;
    default:
      op = " + ";
      break;
  }
  out += "(";
  print(e.operand(0), out);
  out += op;
  print(e.operand(1), out);
  out += ")";
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  Parser(std::string_view src, const std::vector<std::string>& coords)
      : src_(src), coords_(coords) {}

  Expr run() {
    Expr e = expr();
    skip_space();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size()) fail(std::string("expected '") + c + "' but input ended");
      fail(std::string("expected '") + c + "'");
    }
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = lhs + term();
      else if (accept('-'))
        lhs = lhs - term();
      else
        return lhs;
    }
  }

  Expr term() {
    Expr lhs = factor();
    for (;;) {
      if (accept('*'))
        lhs = lhs * factor();
      else if (accept('/'))
        lhs = lhs / factor();
      else
        return lhs;
    }
  }

  Expr factor() {
    Expr base = unary();
    if (accept('^')) return pow(base, factor());
    return base;
  }

  Expr unary() {
    if (accept('-')) return -unary();
    return atom();
  }

  Expr atom() {
    skip_space();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    std::string text(src_.substr(pos_));
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    const std::size_t len = static_cast<std::size_t>(end - text.c_str());
    if (len == 0) fail("malformed number");
    pos_ = start + len;
    return Expr::constant(v);
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string id(src_.substr(start, pos_ - start));
    for (const auto& f : kFunctions) {
      if (id != f.name) continue;
      skip_space();
      if (pos_ >= src_.size() || src_[pos_] != '(')
        fail("function '" + id + "' requires one argument");
      ++pos_;
      skip_space();
      if (pos_ < src_.size() && src_[pos_] == ')')
        fail("arity mismatch: '" + id + "' takes 1 argument, got 0");
      Expr arg = expr();
      skip_space();
      if (pos_ < src_.size() && src_[pos_] == ',')
        fail("arity mismatch: '" + id + "' takes 1 argument");
      expect(')');
      return Expr::unary(f.kind, arg);
    }
    for (std::size_t i = 0; i < coords_.size(); ++i)
      if (coords_[i] == id) return Expr::variable(id, i);
    if (id == "pi") return Expr::constant(std::numbers::pi);
    pos_ = start;
    fail("unknown identifier '" + id + "'");
  }

  std::string_view src_;
  const std::vector<std::string>& coords_;
  std::size_t pos_ = 0;
};

Expr rebuild(const Expr& e, const std::vector<Expr>& args) {
  if (args.size() == 1) return Expr::unary(e.kind(), args[0]);
  return Expr::binary(e.kind(), args[0], args[1]);
}

template <class LeafFn>
Expr transform(const Expr& e, const LeafFn& leaf) {
  if (e.kind() == Kind::Variable) return leaf(e);
  if (e.arity() == 0) return e;
  std::vector<Expr> args;
  args.reserve(e.arity());
  for (std::size_t i = 0; i < e.arity(); ++i) args.push_back(transform(e.operand(i), leaf));
  return rebuild(e, args);
}

void collect(const Expr& e, std::set<std::size_t>& out) {
  if (e.kind() == Kind::Variable) out.insert(e.index());
  for (std::size_t i = 0; i < e.arity(); ++i) collect(e.operand(i), out);
}

void collect_names(const Expr& e, std::map<std::size_t, std::string>& out) {
  if (e.kind() == Kind::Variable) out.emplace(e.index(), e.name());
  for (std::size_t i = 0; i < e.arity(); ++i) collect_names(e.operand(i), out);
}

}  // namespace

Expr parse(std::string_view source, const std::vector<std::string>& coords) {
  return Parser(source, coords).run();
}

double eval(const Expr& e, const std::map<std::string, double>& env) {
  std::map<std::size_t, std::string> names;
  collect_names(e, names);
  std::size_t size = names.empty() ? 0 : names.rbegin()->first + 1;
  std::vector<double> x(size, 0.0);
  for (const auto& [idx, name] : names) {
    auto it = env.find(name);
    if (it == env.end()) throw DomainError("no value for coordinate '" + name + "'");
    x[idx] = it->second;
  }
  return e.eval(x);
}

Expr rebind(const Expr& e, const std::vector<std::string>& coords) {
  return transform(e, [&](const Expr& v) {
    for (std::size_t i = 0; i < coords.size(); ++i)
      if (coords[i] == v.name()) return Expr::variable(v.name(), i);
    throw SpecError("coordinate '" + v.name() + "' not present after rebinding");
  });
}

Expr substitute(const Expr& e, std::size_t index, double value) {
  return transform(e, [&](const Expr& v) {
    return v.index() == index ? Expr::constant(value) : v;
  });
}

std::set<std::size_t> variables(const Expr& e) {
  std::set<std::size_t> out;
  collect(e, out);
  return out;
}

bool depends_on(const Expr& e, std::size_t index) { return variables(e).contains(index); }

}  // namespace dualgeom
