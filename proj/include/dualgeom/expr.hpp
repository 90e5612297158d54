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

#ifndef DUALGEOM_EXPR_HPP
#define DUALGEOM_EXPR_HPP

#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dualgeom {

/// Immutable scalar expression over an ordered list of named coordinates.
///
/// Variables carry both their name and their index into the coordinate list
/// the expression was parsed against; evaluation is by index. Nodes are shared
/// between expressions, so copies are cheap and thread-safe to evaluate.
class Expr {
 public:
  enum class Kind {
    Constant,
    Variable,
    Neg,
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Log,
    Sqrt,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
  };

  /// The zero constant.
  Expr();

  static Expr constant(double value);
  static Expr variable(std::string name, std::size_t index);
  /// Builds a unary function node with light simplification.
  static Expr unary(Kind kind, const Expr& arg);
  /// Builds a binary node with constant folding and 0/1 identities.
  /// Pow with a non-constant exponent is rewritten as exp(b*log(a)).
  static Expr binary(Kind kind, const Expr& lhs, const Expr& rhs);

  Kind kind() const;
  bool is_constant() const { return kind() == Kind::Constant; }
  bool is_constant(double value) const;
  /// Value of a Constant node; 0 for any other kind.
  double value() const;
  const std::string& name() const;
  std::size_t index() const;
  /// Operand count: 0, 1 or 2.
  std::size_t arity() const;
  const Expr& operand(std::size_t i) const;

  /// Evaluates at the coordinate values `x` (indexed like the coordinate list).
  /// Throws DomainError for log/sqrt of invalid arguments, division by zero
  /// and non-finite results.
  double eval(std::span<const double> x) const;

  /// Same node identity (not structural equality).
  bool same(const Expr& other) const { return node_ == other.node_; }

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, const Expr& exponent);
Expr exp(const Expr& a);
Expr log(const Expr& a);
Expr sqrt(const Expr& a);

/// Parses `source` against the ordered coordinate names.
///
/// Grammar:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := unary ('^' factor)?
///   unary  := '-' unary | atom
///   atom   := number | ident | ident '(' expr ')' | '(' expr ')'
///
/// Throws ParseError (with byte offset) on syntax errors, unknown
/// identifiers and arity mismatches.
Expr parse(std::string_view source, const std::vector<std::string>& coords);

/// Exact symbolic derivative with respect to the coordinate with `index`.
Expr differentiate(const Expr& e, std::size_t index);

/// Fully parenthesised source text; parse(to_string(e)) evaluates identically.
std::string to_string(const Expr& e);

/// Evaluates with a name -> value assignment. Every variable in `e` must be
/// assigned, otherwise DomainError.
double eval(const Expr& e, const std::map<std::string, double>& env);

/// Re-resolves variable indices by name against a new coordinate list.
/// Throws SpecError if a variable name is missing from `coords`.
Expr rebind(const Expr& e, const std::vector<std::string>& coords);

/// Replaces the variable with `index` by a constant and re-simplifies.
Expr substitute(const Expr& e, std::size_t index, double value);

/// Indices of the variables that occur in `e`.
std::set<std::size_t> variables(const Expr& e);

bool depends_on(const Expr& e, std::size_t index);

}  // namespace dualgeom

#endif  // DUALGEOM_EXPR_HPP
