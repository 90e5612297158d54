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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "dualgeom/error.hpp"
#include "dualgeom/expr.hpp"
#include "dualgeom/manifold.hpp"

using namespace dualgeom;

namespace {

double at(const Expr& e, std::vector<double> x) { return e.eval(x); }

double fd(const Expr& e, std::vector<double> x, std::size_t q, double h = 1e-4) {
  auto shifted = [&](double t) {
    std::vector<double> y = x;
    y[q] += t;
    return e.eval(y);
  };
  return (shifted(-2 * h) - 8 * shifted(-h) + 8 * shifted(h) - shifted(2 * h)) / (12 * h);
}

}  // namespace

TEST_CASE("literal evaluation") {
  CHECK(at(parse("x + 1", {"x"}), {2.0}) == doctest::Approx(3.0));
  CHECK(at(parse("sin(th)^2", {"th"}), {std::numbers::pi / 2}) == doctest::Approx(1.0));
  CHECK(at(parse("exp(x*u)", {"x", "u"}), {0.5, 0.0}) == doctest::Approx(1.0));
  CHECK(eval(parse("log(y)", {"y"}), {{"y", 1.0}}) == doctest::Approx(0.0));
  CHECK(eval(parse("1/y^2", {"y"}), {{"y", 2.0}}) == doctest::Approx(0.25));
}

TEST_CASE("precedence and unary minus") {
  // Unary minus binds tighter than '^'.
  CHECK(at(parse("-x^2", {"x"}), {3.0}) == doctest::Approx(9.0));
  CHECK(at(parse("-(x^2)", {"x"}), {3.0}) == doctest::Approx(-9.0));
  CHECK(at(parse("tanh(0)", {}), {}) == doctest::Approx(0.0));
  CHECK(at(parse("2^3^2", {}), {}) == doctest::Approx(512.0));
  CHECK(at(parse("1 - 2 - 3", {}), {}) == doctest::Approx(-4.0));
  CHECK(at(parse("8 / 4 / 2", {}), {}) == doctest::Approx(1.0));
  CHECK(at(parse("2*pi", {}), {}) == doctest::Approx(2 * std::numbers::pi));
  CHECK(at(parse("1.5e-1 + sqrt(4) + tan(0) + cosh(0) + sinh(0)", {}), {}) ==
        doctest::Approx(3.15));
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(at(parse("log(y)", {"y"}), {0.0}), DomainError);
  CHECK_THROWS_AS(at(parse("sqrt(y)", {"y"}), {-1.0}), DomainError);
  CHECK_THROWS_AS(at(parse("1/y", {"y"}), {0.0}), DomainError);
}

TEST_CASE("parse errors carry a position") {
  CHECK_THROWS_AS(parse("x +", {"x"}), ParseError);
  CHECK_THROWS_AS(parse("foo(x)", {"x"}), ParseError);
  CHECK_THROWS_AS(parse("z", {"x"}), ParseError);
  CHECK_THROWS_AS(parse("(x", {"x"}), ParseError);
  try {
    parse("x + * 2", {"x"});
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
}

TEST_CASE("derivatives") {
  CHECK(at(differentiate(parse("x^2", {"x"}), 0), {3.0}) == doctest::Approx(6.0));
  const Expr xu = differentiate(differentiate(parse("x*u", {"x", "u"}), 0), 1);
  for (double x : {-1.0, 0.3, 2.0}) CHECK(at(xu, {x, -x}) == doctest::Approx(1.0));
  const Expr s2 = parse("sin(th)^2", {"th"});
  const double d = at(differentiate(s2, 0), {std::numbers::pi / 4});
  CHECK(d == doctest::Approx(fd(s2, {std::numbers::pi / 4}, 0)).epsilon(1e-9));
  CHECK(d == doctest::Approx(1.0));
}

TEST_CASE("derivatives agree with finite differences") {
  const std::vector<std::string> coords{"x", "y"};
  const char* sources[] = {"exp(x*y)", "log(1 + x^2) * cos(y)", "x^y", "sqrt(2 + sin(x*y))",
                           "tan(0.3*x) / (1 + y^2)", "(1 + x^2)*(1 + y^2)", "cosh(x) - sinh(y)"};
  Rng rng(3);
  for (const char* s : sources) {
    const Expr e = parse(s, coords);
    for (int t = 0; t < 20; ++t) {
      const std::vector<double> p{rng.uniform(0.2, 1.0), rng.uniform(0.2, 1.0)};
      for (std::size_t q = 0; q < 2; ++q) {
        const double exact = at(differentiate(e, q), p);
        CHECK_MESSAGE(std::abs(exact - fd(e, p, q)) < 1e-8, s);
      }
    }
  }
}

TEST_CASE("print and reparse round trip") {
  const std::vector<std::string> coords{"x", "u"};
  const char* sources[] = {"-x^2 + 3*u", "exp(x*u)", "(1 + x^2)*(1 + u^2)", "x - (u - 1)",
                           "x / (u / 2)", "2^-x", "-(x + u)^3", "log(2 + sin(x)) / sqrt(3 + u)"};
  Rng rng(11);
  for (const char* s : sources) {
    const Expr e = parse(s, coords);
    const Expr back = parse(to_string(e), coords);
    for (int t = 0; t < 100; ++t) {
      const std::vector<double> p{rng.uniform(-1, 1), rng.uniform(-1, 1)};
      CHECK_MESSAGE(std::abs(at(e, p) - at(back, p)) < 1e-12, to_string(e));
    }
  }
}

TEST_CASE("dependency queries and substitution") {
  const Expr e = parse("exp(x) * (1 + u^2)", {"x", "u", "v"});
  CHECK(depends_on(e, 0));
  CHECK(depends_on(e, 1));
  CHECK_FALSE(depends_on(e, 2));
  CHECK(variables(e) == std::set<std::size_t>{0, 1});
  const Expr s = substitute(e, 0, 0.0);
  CHECK_FALSE(depends_on(s, 0));
  CHECK(at(s, {5.0, 2.0, 0.0}) == doctest::Approx(5.0));
  CHECK(differentiate(parse("3 + u", {"x", "u"}), 0).is_constant(0.0));
}

TEST_CASE("rebinding to a larger coordinate list") {
  const Expr e = parse("u^2", {"u"});
  const Expr r = rebind(e, {"x", "u"});
  CHECK(at(r, {7.0, 3.0}) == doctest::Approx(9.0));
  CHECK_THROWS(rebind(parse("w", {"w"}), {"x", "u"}));
}
