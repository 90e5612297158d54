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

// Invariants over randomly generated metrics, connections and twists.

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <string>

#include "dualgeom/curvature.hpp"
#include "dualgeom/dualistic.hpp"
#include "dualgeom/fixtures.hpp"
#include "dualgeom/product.hpp"
#include "oracles.hpp"

using namespace dualgeom;

namespace {

constexpr int kTrials = 12;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "(%.6f)", v);
  return buf;
}

/// Non-diagonal metric with diagonal entries at least 1.5 and off-diagonal
/// entries below 0.3/n, hence diagonally dominant on [-1, 1]^n.
Manifold random_metric(Rng& rng, std::size_t n) {
  std::vector<std::string> coords;
  for (std::size_t i = 0; i < n; ++i) coords.push_back("x" + std::to_string(i));
  std::vector<std::vector<Expr>> g(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      std::string s;
      if (i == j)
        s = "2 + " + num(rng.uniform(-0.5, 0.5)) + "*sin(" + coords[(i + 1) % n] + ") + " +
            num(rng.uniform(0.0, 0.4)) + "*" + coords[i] + "^2";
      else
        s = num(rng.uniform(-0.3, 0.3) / static_cast<double>(n)) + "*cos(" + coords[i] + " - " +
            num(rng.uniform(-1, 1)) + "*" + coords[j] + ")";
      g[i][j] = g[j][i] = parse(s, coords);
    }
  return Manifold("random", coords, std::vector<Interval>(n, {-1.0, 1.0}), g);
}

Connection random_connection(Rng& rng, const Manifold& m, bool symmetric) {
  const std::size_t n = m.dim();
  const auto& c = m.coords();
  ExplicitEntries e;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = symmetric ? i : 0; j < n; ++j) {
        const Expr v = parse(num(rng.uniform(-1, 1)) + " + " + num(rng.uniform(-1, 1)) + "*" +
                                 c[rng.uniform() < 0.5 ? 0 : n - 1] + " + " +
                                 num(rng.uniform(-0.5, 0.5)) + "*sin(" + c[j] + ")",
                             c);
        e[{k, i, j}] = v;
        if (symmetric) e[{k, j, i}] = v;
      }
  return explicit_connection(m, e, symmetric ? "random-symmetric" : "random");
}

std::string random_twist(Rng& rng, bool separable) {
  const std::string base = num(rng.uniform(-0.8, 0.8)) + "*x + " + num(rng.uniform(-0.5, 0.5)) + "*y^2";
  const std::string fiber = num(rng.uniform(-0.8, 0.8)) + "*sin(u) + " + num(rng.uniform(-0.5, 0.5)) + "*v";
  if (separable) return "exp(" + base + " + " + fiber + ")";
  return "exp(" + base + " + " + fiber + " + " + num(rng.uniform(0.2, 0.8)) + "*x*u)";
}

}  // namespace

TEST_CASE("random conjugate pairs satisfy every pairing identity") {
  Rng rng(2024);
  for (int t = 0; t < kTrials; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(t % 2);
    const Manifold m = random_metric(rng, n);
    const Connection c = random_connection(rng, m, t % 3 == 0);
    const Connection star = conjugate(c, m);
    const Connection back = conjugate(star, m);
    for (const Vector& p : sample_points(m, 8, static_cast<std::uint64_t>(t))) {
      CHECK(duality_residual(m, c, star, p) < 1e-10);
      CHECK(max_abs_diff(back.coefficients(p), c.coefficients(p)) < 1e-10);
      CHECK(max_abs_diff(star.coefficients(p),
                         oracle::conjugate(metric_at(m, p), metric_derivatives_at(m, p),
                                           c.coefficients(p))) < 1e-10);
      const Tensor3 a = cubic_form_at(m, c, p), b = cubic_form_at(m, star, p);
      for (std::size_t e = 0; e < a.data().size(); ++e) CHECK(std::abs(a.data()[e] + b.data()[e]) < 1e-10);
      const Vector x = rng.vector(n), y = rng.vector(n), z = rng.vector(n), w = rng.vector(n);
      CHECK(torsion_relation_residual(m, c, star, p, x, y, z) < 1e-10);
      CHECK(curvature_duality_residual(m, c, star, p, x, y, z, w) < 1e-8);
      CHECK(derivative_cross_check(m, star, p) < 1e-5);
    }
  }
}

TEST_CASE("random Levi-Civita connections agree with the Koszul oracle") {
  Rng rng(77);
  for (int t = 0; t < kTrials; ++t) {
    const Manifold m = random_metric(rng, 2 + static_cast<std::size_t>(t % 3));
    const Connection lc = levi_civita(m);
    for (const Vector& p : sample_points(m, 4, static_cast<std::uint64_t>(t))) {
      CHECK(max_abs_diff(lc.coefficients(p), oracle::christoffel(m, p)) < 1e-8);
      CHECK(max_abs(cubic_form_at(m, lc, p).data()) < 1e-12);
      CHECK(max_abs(torsion_at(lc, p).data()) == 0.0);
      const Tensor4 r = riemann_at(lc, p);
      const Matrix g = metric_at(m, p);
      const Tensor4 rm = oracle::lower(r, g);
      const std::size_t n = m.dim();
      double antisym = 0.0, pair = 0.0, bianchi = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t k = 0; k < n; ++k)
            for (std::size_t l = 0; l < n; ++l) {
              antisym = std::max(antisym, std::abs(rm(i, j, k, l) + rm(i, j, l, k)));
              pair = std::max(pair, std::abs(rm(i, j, k, l) - rm(k, l, i, j)));
              bianchi = std::max(bianchi, std::abs(r(l, i, j, k) + r(l, j, k, i) + r(l, k, i, j)));
            }
      CHECK(antisym < 1e-10);
      CHECK(pair < 1e-10);
      CHECK(bianchi < 1e-10);
      CHECK(oracle::dev(ricci_from(r, g) - oracle::ricci(r)) < 1e-10);
      if (n >= 3) CHECK(max_abs_diff(oracle::lower(weyl_from(r, g, g.inverse()), g), oracle::weyl_lowered(r, g)) < 1e-9);
    }
  }
}

TEST_CASE("random twisted products") {
  Rng rng(99);
  const Manifold b = fixtures::euclidean(2, {"x", "y"});
  const Manifold f = fixtures::euclidean(2, {"u", "v"});
  for (int t = 0; t < kTrials; ++t) {
    const bool separable = t % 2 == 0;
    const ProductSpec p = twisted_product(b, f, random_twist(rng, separable));
    const auto pts = sample_points(p.product(), 8, static_cast<std::uint64_t>(t));
    for (const Vector& q : pts) CHECK(block_levi_civita_defect(p, q) < 1e-8);
    const auto rows = curvature_block_report(p, pts, 3, 1e-7);
    for (std::size_t i = 0; i < 5; ++i) CHECK_MESSAGE(rows[i].pass, rows[i].block);
    const MixedRicciSummary mr = mixed_ricci_summary(p, pts);
    CHECK(mr.max_opposite_sign_defect < 1e-8);
    CHECK((mr.max_direct < 1e-9) == separable);
    const Separability sep = separability_test(p, pts, 1e-10);
    CHECK(sep.separable == separable);
    if (separable) {
      CHECK(sep.reconstruction_residual < 1e-10);
      CHECK(metric_reconstruction_residual(p, to_warped(p, sep), pts) < 1e-10);
    }
    const MixedWeylReport w = mixed_weyl_report(p, pts, 1e-7);
    CHECK(w.residual_xyv < 1e-6);
    CHECK(w.residual_vwx < 1e-6);
    CHECK((w.fiber_flat_along_base && w.base_flat_along_fiber) == separable);
  }
}

TEST_CASE("random induced structures") {
  Rng rng(5);
  const Manifold b = fixtures::euclidean(2, {"x", "y"});
  const Manifold f = fixtures::euclidean(2, {"u", "v"});
  for (int t = 0; t < kTrials / 2; ++t) {
    const DualisticStructure db = make_dualistic(b, random_connection(rng, b, true));
    const DualisticStructure df = make_dualistic(f, random_connection(rng, f, t % 2 == 0));
    const ProductSpec p = twisted_product(b, f, random_twist(rng, t % 3 == 0));
    const ProductDualistic pd = make_product_dualistic(db, df, p);
    const auto pts = sample_points(p.product(), 6, static_cast<std::uint64_t>(t));
    CHECK(pd.induced.max_residual() < 1e-9);
    CHECK(pd.induced.involution_defect() < 1e-10);
    const ProjectionReport pr = projection_check(pd, pts);
    CHECK(pr.base_primal < 1e-12);
    CHECK(pr.base_dual < 1e-10);
    CHECK(pr.dual_pattern < 1e-10);
    CHECK(pr.fiber_weighted_conjugacy < 1e-10);
    CHECK(induced_curvature_duality(pd, pts, 4) < 1e-7);
    const FlatnessVerdict v = dually_flat_verdict(pd.induced, pts, 1e-9);
    CHECK(v.flags_agree);
  }
}
