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
#include <string>

#include "dualgeom/curvature.hpp"
#include "dualgeom/dualistic.hpp"
#include "dualgeom/error.hpp"
#include "dualgeom/fixtures.hpp"
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

bool contains(const std::string& s, const std::string& part) {
  return s.find(part) != std::string::npos;
}

Manifold line(const std::string& c) { return fixtures::euclidean(1, {c}); }

DualisticStructure lc(const Manifold& m) { return make_dualistic(m, levi_civita(m)); }

DualisticStructure constant_pair(const Manifold& m, double c) {
  return make_dualistic(m, fixtures::constant_connection(m, c),
                        fixtures::constant_connection(m, -c));
}

DualisticStructure flat_pair(const Manifold& m) {
  return make_dualistic(m, explicit_connection(m, {}, "zero"), explicit_connection(m, {}, "zero"));
}

ProductDualistic build(const DualisticStructure& b, const DualisticStructure& f,
                       const std::string& twist) {
  return make_product_dualistic(b, f, twisted_product(b.manifold(), f.manifold(), twist));
}

/// The induced coefficients assembled entry by entry, with ∂k and the
/// product gradient taken from finite differences of log b.
Tensor3 induced_by_hand(const ProductSpec& p, const Connection& base, const Connection& fiber,
                        const Vector& q) {
  const std::size_t r = p.r(), s = p.s(), n = p.n();
  const Matrix g = oracle::metric(p.product(), q);
  Vector dk(n);
  for (std::size_t mu = 0; mu < n; ++mu) {
    auto k = [&](double t) {
      Vector y = q;
      y(mu) += t;
      return std::log(p.twist().eval(std::span<const double>(y.data(), n)));
    };
    const double h = 1e-4;
    dk(mu) = (k(-2 * h) - 8 * k(-h) + 8 * k(h) - k(2 * h)) / (12 * h);
  }
  const Vector grad = g.ldlt().solve(dk);
  const Tensor3 gb = base.coefficients(q.head(r));
  const Tensor3 gf = fiber.coefficients(q.tail(s));
  Tensor3 d(n);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b)
      for (std::size_t c = 0; c < r; ++c) d(c, a, b) = gb(c, a, b);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t al = 0; al < s; ++al) {
      d(r + al, a, r + al) = dk(a);
      d(r + al, r + al, a) = dk(a);
    }
  for (std::size_t al = 0; al < s; ++al)
    for (std::size_t be = 0; be < s; ++be) {
      for (std::size_t c = 0; c < n; ++c) d(c, r + al, r + be) -= g(r + al, r + be) * grad(c);
      for (std::size_t ga = 0; ga < s; ++ga) d(r + ga, r + al, r + be) += gf(ga, al, be);
      d(r + be, r + al, r + be) += dk(r + al);
      d(r + al, r + al, r + be) += dk(r + be);
    }
  return d;
}

}  // namespace

TEST_CASE("dualistic structure validation") {
  const Manifold s = fixtures::sphere2();
  const DualisticStructure d = lc(s);
  for (const Vector& p : sample_points(s, 8, 1))
    CHECK(max_abs_diff(d.dual().coefficients(p), d.primal().coefficients(p)) < 1e-12);
  CHECK(d.max_residual() < 1e-10);

  const Manifold x = line("x");
  CHECK(constant_pair(x, 0.7).max_residual() < 1e-12);
  try {
    make_dualistic(x, fixtures::constant_connection(x, 0.7), fixtures::constant_connection(x, 0.7));
    FAIL("expected ConjugacyError");
  } catch (const ConjugacyError& e) {
    CHECK(e.residual() == doctest::Approx(1.4));
  }
  const DualisticStructure auto_dual = make_dualistic(x, fixtures::constant_connection(x, 0.7));
  CHECK(auto_dual.dual().coefficients(pt({0.1}))(0, 0, 0) == doctest::Approx(-0.7));
  CHECK(auto_dual.involution_defect() < 1e-12);
}

TEST_CASE("induced connection of flat and Levi-Civita factors") {
  const ProductDualistic z = build(flat_pair(fixtures::euclidean(2, {"x", "y"})),
                                   flat_pair(line("u")), "1");
  for (const Vector& q : sample_points(z.product.product(), 8, 1)) {
    CHECK(max_abs(z.induced.primal().coefficients(q).data()) == 0.0);
    CHECK(max_abs(z.induced.dual().coefficients(q).data()) < 1e-15);
  }
  CHECK(z.induced.primal().provenance() == Provenance::InducedProduct);

  for (const char* b : {"1", "exp(x)", "exp(x*u)", "(1 + x^2)*(1 + u^2)"}) {
    const ProductDualistic p = build(lc(line("x")), lc(fixtures::euclidean(2, {"u", "v"})), b);
    for (const Vector& q : sample_points(p.product.product(), 8, 2)) {
      CHECK(max_abs_diff(p.induced.primal().coefficients(q), block_levi_civita(p.product, q)) < 1e-12);
      CHECK(max_abs_diff(p.induced.dual().coefficients(q), p.induced.primal().coefficients(q)) < 1e-12);
    }
  }
}

TEST_CASE("induced base block of a constant pair") {
  const ProductDualistic p = build(constant_pair(line("x"), 0.7), lc(line("u")), "1");
  const Vector q = pt({0.1, 0.2});
  CHECK(p.induced.primal().coefficients(q)(0, 0, 0) == doctest::Approx(0.7));
  CHECK(p.induced.dual().coefficients(q)(0, 0, 0) == doctest::Approx(-0.7));
}

TEST_CASE("induced connection against the entry-wise assembly") {
  const Manifold f = fixtures::fisher_normal();
  const Manifold uv = fixtures::euclidean(2, {"u", "v"});
  const DualisticStructure fisher = make_dualistic(f, fixtures::fisher_alpha_connection(f, 0.5));
  const DualisticStructure fib = make_dualistic(uv, fixtures::symmetric_test_connection(uv));
  for (const char* b : {"exp(m*u)", "(1 + m^2)*(2 + sin(v))", "s"}) {
    const ProductDualistic p = build(fisher, fib, b);
    for (const Vector& q : sample_points(p.product.product(), 6, 3)) {
      const Tensor3 d = p.induced.primal().coefficients(q);
      CHECK_MESSAGE(max_abs_diff(d, induced_by_hand(p.product, fisher.primal(), fib.primal(), q)) < 1e-8, b);
      const Tensor3 ds = oracle::conjugate(metric_at(p.product.product(), q),
                                           metric_derivatives_at(p.product.product(), q), d);
      CHECK(max_abs_diff(p.induced.dual().coefficients(q), ds) < 1e-10);
      CHECK(max_abs_diff(p.induced.dual().coefficients(q),
                         induced_by_hand(p.product, fisher.dual(), fib.dual(), q)) < 1e-8);
      CHECK(derivative_cross_check(p.product.product(), p.induced.primal(), q) < 1e-5);
    }
    CHECK(p.induced.max_residual() < 1e-10);
    CHECK(p.induced.involution_defect() < 1e-10);
  }
}

TEST_CASE("projections recover the factor connections") {
  const auto pts = [](const ProductDualistic& p) { return sample_points(p.product.product(), 16, 42); };
  const ProductDualistic d = build(constant_pair(line("x"), 0.7), constant_pair(line("u"), 0.3), "1");
  CHECK(projection_check(d, pts(d)).max_recovery() == 0.0);
  const ProductDualistic w = build(constant_pair(line("x"), 0.7), constant_pair(line("u"), 0.3), "exp(x)");
  const ProjectionReport pw = projection_check(w, pts(w));
  CHECK(pw.base_primal == 0.0);
  CHECK(pw.base_dual == 0.0);
  CHECK(pw.max_recovery() < 1e-9);
  CHECK(pw.dual_pattern < 1e-12);
  const ProductDualistic t = build(constant_pair(line("x"), 0.7), lc(fixtures::euclidean(2, {"u", "v"})),
                                   "exp(x*u)");
  const ProjectionReport pt_ = projection_check(t, pts(t));
  CHECK(pt_.base_primal < 1e-12);
  CHECK(pt_.fiber_primal > 1e-3);
  CHECK(pt_.fiber_weighted_conjugacy < 1e-10);
  CHECK(pt_.dual_pattern < 1e-12);
}

TEST_CASE("torsion-free inheritance") {
  const Manifold f = fixtures::fisher_normal();
  const auto check = [](const ProductDualistic& p) {
    return torsion_inheritance_check(p, sample_points(p.product.product(), 16, 42));
  };
  const TorsionInheritance a = check(build(lc(line("x")), lc(line("u")), "exp(x*u)"));
  CHECK(a.premise);
  CHECK(a.inherited);
  const TorsionInheritance b = check(build(constant_pair(line("x"), 0.7), constant_pair(line("u"), -0.2), "exp(x)"));
  CHECK(b.premise);
  CHECK(b.inherited);
  CHECK(b.max_torsion_primal == 0.0);
  const TorsionInheritance c =
      check(build(make_dualistic(f, fixtures::fisher_alpha_connection(f, 0.5)), lc(line("u")), "exp(m)"));
  CHECK(c.premise);
  CHECK(c.inherited);
  const Manifold s = fixtures::sphere2();
  const TorsionInheritance t =
      check(build(make_dualistic(s, fixtures::torsionful_test_connection(s)), lc(line("u")), "1"));
  CHECK_FALSE(t.premise);
  CHECK(t.max_torsion_primal > 1e-2);
  CHECK(t.max_torsion_dual > 1e-2);
}

TEST_CASE("dually flat verdicts") {
  const FlatnessVerdict e = dually_flat_verdict(flat_pair(fixtures::euclidean(2)), 16, 42, 1e-9);
  CHECK(e.dually_flat);
  CHECK(e.flags_agree);
  const FlatnessVerdict c = dually_flat_verdict(constant_pair(line("x"), 0.7), 16, 42, 1e-9);
  CHECK(c.dually_flat);
  const FlatnessVerdict s = dually_flat_verdict(lc(fixtures::sphere2()), 16, 42, 1e-9);
  CHECK_FALSE(s.dually_flat);
  CHECK(s.max_curvature_primal == doctest::Approx(1.0).epsilon(0.1));
  CHECK(s.flags_agree);
  const Manifold f = fixtures::fisher_normal();
  const FlatnessVerdict a = dually_flat_verdict(make_dualistic(f, fixtures::fisher_alpha_connection(f, 1.0)), 16, 42, 1e-9);
  CHECK(a.dually_flat);
  CHECK(a.max_curvature_dual < 1e-9);
  const FlatnessVerdict t =
      dually_flat_verdict(make_dualistic(f, fixtures::torsionful_test_connection(f)), 16, 42, 1e-9);
  CHECK_FALSE(t.dually_flat);
  CHECK_FALSE(t.primal_torsion_free);
}

TEST_CASE("induced block curvature and duality") {
  const Manifold f = fixtures::fisher_normal();
  const DualisticStructure fisher = make_dualistic(f, fixtures::fisher_alpha_connection(f, 0.5));
  for (const char* b : {"1", "exp(m)", "(1 + m^2)*(1 + u^2)", "exp(m*u)"}) {
    const ProductDualistic p = build(fisher, constant_pair(line("u"), 0.4), b);
    const auto pts = sample_points(p.product.product(), 8, 42);
    CHECK(induced_curvature_duality(p, pts, 5) < 1e-7);
    for (const auto& rows : {primal_block_report(p, pts, 5), dual_block_report(p, pts, 5)})
      for (std::size_t i = 0; i < 4; ++i) CHECK_MESSAGE(rows[i].pass, rows[i].block << " b=" << b);
  }
}

TEST_CASE("mixed Ricci analysis") {
  const AnalysisConfig cfg;
  const ProductDualistic sep = build(flat_pair(line("x")), lc(line("u")), "1 + u^2");
  const AnalysisRecord a = mixed_ricci_analysis(sep, cfg);
  CHECK(a.precondition);
  CHECK(a.chain_ran);
  CHECK(a.separable);
  CHECK(a.max_cross_derivative < 1e-10);
  CHECK(a.metric_reconstruction < 1e-10);
  CHECK(a.direct.dually_flat);
  CHECK(a.agrees);
  CHECK(contains(a.verdict, "dually flat (reduction and direct computation agree)"));

  const ProductDualistic t =
      build(flat_pair(fixtures::euclidean(2, {"x", "y"})), lc(fixtures::euclidean(2, {"u", "v"})), "exp(x*u)");
  const AnalysisRecord b = mixed_ricci_analysis(t, cfg);
  CHECK_FALSE(b.precondition);
  CHECK(contains(b.precondition_detail, "not mixed-Ricci-flat"));
  CHECK_FALSE(b.chain_ran);
  CHECK_FALSE(b.verdict.empty());

  const ProductDualistic s = build(lc(fixtures::sphere2()), lc(line("u")), "1");
  const AnalysisRecord c = mixed_ricci_analysis(s, cfg);
  CHECK(contains(c.verdict, "not dually flat"));
  CHECK(contains(c.verdict, "base"));
  CHECK_FALSE(c.direct.dually_flat);

  // The reduction accepts a warped product of flat lines that is curved.
  const ProductDualistic w = build(flat_pair(line("x")), lc(line("u")), "exp(x)");
  const AnalysisRecord d = mixed_ricci_analysis(w, cfg);
  CHECK(d.predicted_dually_flat.value_or(false));
  CHECK_FALSE(d.direct.dually_flat);
  CHECK_FALSE(d.agrees);
  CHECK(contains(d.verdict, "DISAGREEMENT"));
}

TEST_CASE("Weyl-along analysis") {
  const AnalysisConfig cfg;
  const ProductDualistic sep = build(flat_pair(fixtures::euclidean(2, {"x", "y"})),
                                     lc(line("u")), "(1 + x^2)*(1 + u^2)");
  const AnalysisRecord a = weyl_along_analysis(sep, cfg);
  CHECK(a.precondition);
  CHECK(a.chain_ran);

  const ProductDualistic t =
      build(flat_pair(fixtures::euclidean(2, {"x", "y"})), lc(fixtures::euclidean(2, {"u", "v"})), "exp(x*u)");
  const AnalysisRecord b = weyl_along_analysis(t, cfg);
  CHECK_FALSE(b.precondition);
  double largest = 0.0;
  for (const auto& [label, value] : b.measurements) largest = std::max(largest, value);
  CHECK(largest > 0.1);

  const ProductDualistic d =
      build(flat_pair(fixtures::euclidean(2, {"x", "y"})), flat_pair(fixtures::euclidean(2, {"u", "v"})), "1");
  const AnalysisRecord c = weyl_along_analysis(d, cfg);
  CHECK(c.direct.dually_flat);
  CHECK(c.agrees);

  CHECK_THROWS_AS(weyl_along_analysis(build(flat_pair(line("x")), lc(line("u")), "1"), cfg), DimensionError);
}

TEST_CASE("Hessian-Weyl analysis") {
  const AnalysisConfig cfg;
  const AnalysisRecord a = hessian_weyl_analysis(build(flat_pair(line("x")), flat_pair(line("u")), "2"), cfg);
  CHECK(a.precondition);
  CHECK(a.direct.dually_flat);
  CHECK(a.agrees);

  const AnalysisRecord b = hessian_weyl_analysis(build(flat_pair(line("x")), lc(line("u")), "exp(x)"), cfg);
  CHECK_FALSE(b.precondition);
  CHECK(contains(b.precondition_detail, "inapplicable"));

  const AnalysisRecord c = hessian_weyl_analysis(
      build(flat_pair(fixtures::euclidean(2, {"x", "y"})), flat_pair(fixtures::euclidean(2, {"u", "v"})), "1"), cfg);
  CHECK(c.precondition);
  CHECK(c.chain_ran);
  CHECK(c.direct.dually_flat);
  CHECK(c.agrees);
}
