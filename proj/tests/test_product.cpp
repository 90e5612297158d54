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

#include "dualgeom/curvature.hpp"
#include "dualgeom/error.hpp"
#include "dualgeom/fixtures.hpp"
#include "dualgeom/product.hpp"
#include "oracles.hpp"

using namespace dualgeom;
using oracle::dev;

namespace {

Vector pt(std::initializer_list<double> v) {
  Vector p(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) p(i++) = x;
  return p;
}

Manifold flat(std::size_t d, bool base) {
  if (base) return d == 1 ? fixtures::euclidean(1, {"x"}) : fixtures::euclidean(2, {"x", "y"});
  return d == 1 ? fixtures::euclidean(1, {"u"}) : fixtures::euclidean(2, {"u", "v"});
}

/// diag(1, ..., 1, b², ..., b²) written directly on the product chart.
Manifold by_hand(std::size_t r, std::size_t s, const std::string& twist) {
  std::vector<std::string> coords = flat(r, true).coords();
  const Manifold fiber = flat(s, false);
  for (const auto& c : fiber.coords()) coords.push_back(c);
  const std::size_t n = r + s;
  std::vector<std::vector<Expr>> g(n, std::vector<Expr>(n, Expr::constant(0.0)));
  for (std::size_t i = 0; i < n; ++i)
    g[i][i] = i < r ? Expr::constant(1.0) : parse("(" + twist + ")^2", coords);
  return Manifold("by-hand", coords, std::vector<Interval>(n, {-1.0, 1.0}), g);
}

const char* const kTwists[] = {"1", "exp(x)", "exp(x*u)", "(1 + x^2)*(1 + u^2)"};

}  // namespace

TEST_CASE("metric and classification") {
  const Manifold x = flat(1, true), u = flat(1, false);
  const ProductSpec d = twisted_product(x, u, "1");
  CHECK(d.classification() == TwistClass::Direct);
  CHECK(dev(metric_at(d.product(), pt({0.3, 0.4})) - Matrix::Identity(2, 2)) == 0.0);
  const ProductSpec w = twisted_product(x, u, "exp(x)");
  CHECK(w.classification() == TwistClass::Warped);
  CHECK(metric_at(w.product(), pt({0.3, 0.4}))(1, 1) == doctest::Approx(std::exp(0.6)));
  const ProductSpec t = twisted_product(x, u, "exp(x*u)");
  CHECK(t.classification() == TwistClass::ProperTwisted);
  CHECK(metric_at(t.product(), pt({0.3, 0.4}))(1, 1) == doctest::Approx(std::exp(0.24)));
  CHECK(to_string(TwistClass::ProperTwisted) == "proper-twisted");
}

TEST_CASE("invalid products") {
  const Manifold x = flat(1, true);
  CHECK_THROWS_AS(twisted_product(x, x, "1"), SpecError);
  CHECK_THROWS_AS(twisted_product(x, flat(1, false), "x"), GeometryError);
  CHECK_THROWS_AS(twisted_product(x, flat(1, false), "log(x)"), GeometryError);
}

TEST_CASE("lifts and projections") {
  const ProductSpec p = twisted_product(flat(2, true), flat(1, false), "1");
  CHECK(dev(lift_horizontal(p, pt({1.0, 0.0})) - pt({1.0, 0.0, 0.0})) == 0.0);
  CHECK(dev(lift_vertical(p, pt({2.0})) - pt({0.0, 0.0, 2.0})) == 0.0);
  const Vector v = pt({1.0, 2.0, 3.0});
  CHECK(dev(project_base(p, v) - pt({1.0, 2.0})) == 0.0);
  CHECK(dev(project_fiber(p, v) - pt({3.0})) == 0.0);
}

TEST_CASE("lifted metric derivatives") {
  const ProductSpec w = twisted_product(flat(2, true), flat(2, false), "exp(x)");
  const auto lw = lift_check(w, sample_points(w.product(), 8, 1), 3);
  CHECK(lw.base < 1e-12);
  CHECK(lw.fiber_weighted < 1e-12);
  const ProductSpec t = twisted_product(flat(2, true), flat(2, false), "exp(x*u)");
  const auto lt = lift_check(t, sample_points(t.product(), 8, 1), 3);
  CHECK(lt.base < 1e-12);
  CHECK(lt.fiber_weighted > 1e-3);
}

TEST_CASE("block Levi-Civita against the direct-chart oracle") {
  for (std::size_t r : {1u, 2u})
    for (std::size_t s : {1u, 2u})
      for (const char* b : kTwists) {
        const ProductSpec p = twisted_product(flat(r, true), flat(s, false), b);
        const Manifold hand = by_hand(r, s, b);
        for (const Vector& q : sample_points(p.product(), 8, 42)) {
          CHECK_MESSAGE(block_levi_civita_defect(p, q) < 1e-8, b);
          CHECK_MESSAGE(max_abs_diff(block_levi_civita(p, q), oracle::christoffel(hand, q)) < 1e-8, b);
        }
      }
}

TEST_CASE("mixed Christoffel symbols") {
  const Manifold x = flat(1, true), u = flat(1, false);
  const Vector q = pt({0.3, 0.4});
  CHECK(block_levi_civita(twisted_product(x, u, "exp(x)"), q)(1, 0, 1) == doctest::Approx(1.0));
  CHECK(block_levi_civita(twisted_product(x, u, "exp(x*u)"), q)(1, 0, 1) == doctest::Approx(0.4));
}

TEST_CASE("Hessian of k") {
  const ProductSpec t = twisted_product(flat(1, true), flat(1, false), "exp(x*u)");
  const HessianData h = hessian_at(t, pt({0.5, 0.3}));
  CHECK(h.mixed_block(0, 0) == doctest::Approx(0.85));
  CHECK(h.full(0, 1) == doctest::Approx(0.85));
  CHECK(h.full(1, 0) == doctest::Approx(0.85));
}

TEST_CASE("curvature blocks against direct curvature") {
  for (std::size_t r : {1u, 2u})
    for (std::size_t s : {1u, 2u})
      for (const char* b : kTwists) {
        const ProductSpec p = twisted_product(flat(r, true), flat(s, false), b);
        const auto pts = sample_points(p.product(), 8, 42);
        const auto rows = curvature_block_report(p, pts, 7, 1e-7);
        REQUIRE(rows.size() >= 5);
        for (std::size_t i = 0; i < 5; ++i) CHECK_MESSAGE(rows[i].pass, rows[i].block << " b=" << b);
        const Manifold hand = by_hand(r, s, b);
        for (const Vector& q : sample_points(p.product(), 2, 3)) {
          const Tensor4 expect =
              oracle::riemann([&](const Vector& y) { return oracle::christoffel(hand, y); }, q, 1e-3);
          CHECK(max_abs_diff(riemann_at(levi_civita(p.product()), q), expect) < 1e-5);
        }
      }
}

TEST_CASE("curvature blocks over a curved base") {
  const Manifold s = fixtures::sphere2();
  const ProductSpec p = twisted_product(s, flat(2, false), "exp(0.3*cos(th)*u)");
  const auto rows = curvature_block_report(p, sample_points(p.product(), 8, 42), 7, 1e-7);
  for (std::size_t i = 0; i < 5; ++i) CHECK_MESSAGE(rows[i].pass, rows[i].block);
}

TEST_CASE("mixed Ricci") {
  const ProductSpec sep = twisted_product(flat(1, true), flat(2, false), "exp(x)*(1 + u^2)");
  const auto ss = mixed_ricci_summary(sep, sample_points(sep.product(), 16, 42));
  CHECK(ss.max_direct < 1e-9);
  CHECK(ss.max_closed_form < 1e-9);

  const ProductSpec t = twisted_product(flat(2, true), flat(2, false), "exp(x*u)");
  for (const Vector& q : sample_points(t.product(), 8, 42)) {
    const MixedRicci m = mixed_ricci_at(t, q, pt({1.0, 0.0}), pt({1.0, 0.0}));
    CHECK(std::abs(m.closed_form) == doctest::Approx(1.0));
    CHECK(m.direct == doctest::Approx(-1.0));
    CHECK(m.direct == doctest::Approx(oracle::ricci(riemann_at(levi_civita(t.product()), q))(0, 2)));
  }
  CHECK(mixed_ricci_summary(t, sample_points(t.product(), 8, 42)).sign == -1);

  const ProductSpec one = twisted_product(flat(2, true), flat(1, false), "exp(x*u)");
  for (const Vector& q : sample_points(one.product(), 4, 1))
    CHECK(mixed_ricci_at(one, q, pt({1.0, 0.0}), pt({1.0})).closed_form == 0.0);
}

TEST_CASE("Ricci base block") {
  const ProductSpec d = twisted_product(fixtures::sphere2(), flat(2, false), "1");
  CHECK(ricci_base_block_residual(d, sample_points(d.product(), 8, 1)) < 1e-8);
  const ProductSpec w = twisted_product(flat(1, true), fixtures::sphere2(), "exp(x)");
  CHECK(ricci_base_block_residual(w, sample_points(w.product(), 8, 1)) < 1e-7);
}

TEST_CASE("mixed Weyl blocks") {
  const ProductSpec sep = twisted_product(flat(2, true), flat(2, false), "(1 + x^2)*(1 + u^2)");
  const auto s = mixed_weyl_report(sep, sample_points(sep.product(), 8, 42), 1e-7);
  CHECK(s.max_c_xyv < 1e-7);
  CHECK(s.max_c_vwx < 1e-7);
  CHECK(s.fiber_flat_along_base);
  CHECK(s.base_flat_along_fiber);

  const ProductSpec t = twisted_product(flat(2, true), flat(2, false), "exp(x*u)");
  const auto pts = sample_points(t.product(), 8, 42);
  const auto w = mixed_weyl_report(t, pts, 1e-7);
  CHECK(w.residual_xyv < 1e-6);
  CHECK(w.residual_vwx < 1e-6);
  CHECK_FALSE(w.fiber_flat_along_base);
  // C(∂x, ∂y)∂u from the Kulkarni-Nomizu oracle: -(1/2)[XV(k) ∂y - YV(k) ∂x] = -(1/2)∂y.
  for (const Vector& q : pts) {
    const Matrix g = metric_at(t.product(), q);
    const Tensor4 c = oracle::weyl_lowered(riemann_at(levi_civita(t.product()), q), g);
    for (std::size_t l = 0; l < 4; ++l) {
      double expect = 0.0;
      for (std::size_t m = 0; m < 4; ++m) expect += g(l, m) * (m == 1 ? -0.5 : 0.0);
      CHECK(std::abs(c(0, 1, 2, l) - expect) < 1e-8);
    }
  }

  const ProductSpec d = twisted_product(flat(2, true), flat(2, false), "1");
  const auto dw = mixed_weyl_report(d, sample_points(d.product(), 4, 1), 1e-10);
  CHECK(dw.mixed_weyl_flat);
  CHECK(dw.max_c_xv == 0.0);
  CHECK_THROWS_AS(mixed_weyl_report(twisted_product(flat(1, true), flat(1, false), "1"),
                                    sample_points(flat(2, true), 1, 1), 1e-7),
                  DimensionError);
}

TEST_CASE("separability") {
  const Manifold x = flat(1, true), u = flat(1, false);
  const auto check = [&](const char* b) {
    const ProductSpec p = twisted_product(x, u, b);
    return separability_test(p, sample_points(p.product(), 16, 42), 1e-10);
  };
  const Separability add = check("exp(x)*exp(u)");
  CHECK(add.separable);
  CHECK(add.max_cross_derivative < 1e-14);
  const Separability prod = check("exp(x*u)");
  CHECK_FALSE(prod.separable);
  CHECK(prod.max_cross_derivative == doctest::Approx(1.0).epsilon(1e-10));
  const Separability poly = check("(1 + x^2)*(1 + u^2)");
  CHECK(poly.separable);
  CHECK(poly.reconstruction_residual < 1e-10);
}

TEST_CASE("warped reduction") {
  const Manifold x = flat(1, true), u = flat(1, false);
  for (const char* b : {"exp(x)*exp(u)", "1", "(1 + x^2)*(1 + u^2)"}) {
    const ProductSpec p = twisted_product(x, u, b);
    const auto pts = sample_points(p.product(), 16, 42);
    const Separability sep = separability_test(p, pts, 1e-10);
    const ProductSpec w = to_warped(p, sep);
    CHECK(w.classification() != TwistClass::ProperTwisted);
    CHECK(metric_reconstruction_residual(p, w, pts) < 1e-10);
    for (const Vector& q : pts) CHECK(dev(metric_at(p.product(), q) - metric_at(w.product(), q)) < 1e-10);
  }
  const ProductSpec e = twisted_product(x, u, "exp(x)*exp(u)");
  const ProductSpec we = to_warped(e, separability_test(e, sample_points(e.product(), 4, 1), 1e-10));
  CHECK(we.classification() == TwistClass::Warped);
  CHECK_FALSE(depends_on(we.twist(), 1));
  CHECK(we.product().metric(1, 1).eval(std::vector<double>{0.2, 0.5}) ==
        doctest::Approx(std::exp(2 * 0.2 + 2 * 0.5)));
  const ProductSpec t = twisted_product(x, u, "exp(x*u)");
  CHECK_THROWS_AS(to_warped(t, separability_test(t, sample_points(t.product(), 4, 1), 1e-10)),
                  GeometryError);
}

TEST_CASE("Hessian condition") {
  const Manifold x = flat(1, true), u = flat(1, false);
  const ProductSpec c = twisted_product(x, u, "2");
  const auto hc = hessian_condition_defect(c, sample_points(c.product(), 8, 1), 1e-10);
  CHECK(hc.holds);
  CHECK(hc.max_defect == 0.0);
  const ProductSpec w = twisted_product(x, u, "exp(x)");
  const auto hw = hessian_condition_defect(w, sample_points(w.product(), 8, 1), 1e-10);
  CHECK_FALSE(hw.holds);
  CHECK(hw.max_defect == doctest::Approx(1.0));
  const ProductSpec s = twisted_product(x, u, "(1 + x^2)*(1 + u^2)");
  CHECK(hessian_condition_defect(s, sample_points(s.product(), 8, 1), 1e-10).max_defect > 0.1);
}

TEST_CASE("parallel Weyl defect") {
  const ProductSpec e4 = twisted_product(flat(2, true), flat(2, false), "1");
  CHECK(weyl_parallel_defect(e4, sample_points(e4.product(), 4, 1)) == 0.0);
  // dt² + e^{2t}|dx|² is hyperbolic 4-space.
  const ProductSpec h4 =
      twisted_product(fixtures::euclidean(1, {"t"}), fixtures::euclidean(3, {"a", "b", "c"}), "exp(t)");
  CHECK(weyl_parallel_defect(h4, sample_points(h4.product(), 4, 1)) < 1e-4);
  const ProductSpec t = twisted_product(flat(2, true), flat(2, false), "exp(x*u + 0.3*y*v^2)");
  CHECK(weyl_parallel_defect(t, sample_points(t.product(), 4, 1)) > 1e-2);
  CHECK_THROWS_AS(weyl_parallel_defect(twisted_product(flat(2, true), flat(1, false), "1"),
                                       sample_points(flat(2, true), 1, 1)),
                  DimensionError);
}
