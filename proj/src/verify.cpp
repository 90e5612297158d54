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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

#include "dualgeom/commands.hpp"
#include "dualgeom/curvature.hpp"
#include "dualgeom/fixtures.hpp"

namespace dualgeom {

namespace {

namespace fx = fixtures;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

struct StructureFixture {
  std::string id;
  Manifold manifold;
  Connection connection;
  std::optional<Connection> dual;
};

std::vector<StructureFixture> structure_fixtures() {
  const Manifold line = fx::euclidean(1, {"x"});
  const Manifold sphere = fx::sphere2();
  const Manifold hyper = fx::hyperbolic2();
  const Manifold fisher = fx::fisher_normal();
  const Manifold ellipsoid = fx::ellipsoid_like();
  const Manifold e3 = fx::euclidean(3);
  return {
      {"sphere2/levi-civita", sphere, levi_civita(sphere), std::nullopt},
      {"sphere2/symmetric-test", sphere, fx::symmetric_test_connection(sphere), std::nullopt},
      {"sphere2/torsionful-test", sphere, fx::torsionful_test_connection(sphere), std::nullopt},
      {"hyperbolic2/levi-civita", hyper, levi_civita(hyper), std::nullopt},
      {"hyperbolic2/torsionful-test", hyper, fx::torsionful_test_connection(hyper),
       std::nullopt},
      {"fisher/levi-civita", fisher, levi_civita(fisher), std::nullopt},
      {"fisher/alpha(1)", fisher, fx::fisher_alpha_connection(fisher, 1.0),
       fx::fisher_alpha_connection(fisher, -1.0)},
      {"fisher/symmetric-test", fisher, fx::symmetric_test_connection(fisher), std::nullopt},
      {"ellipsoid/levi-civita", ellipsoid, levi_civita(ellipsoid), std::nullopt},
      {"euclidean3/symmetric-test", e3, fx::symmetric_test_connection(e3), std::nullopt},
      {"euclidean1/constant(0.7)", line, fx::constant_connection(line, 0.7),
       fx::constant_connection(line, -0.7)},
  };
}

void add_classical_checks(VerificationReport& rep, const RunConfig& config) {
  const std::size_t count = std::min<std::size_t>(10, config.samples);
  auto scalar_check = [&](const std::string& id, const Manifold& m, double expected) {
    double worst = 0.0;
    const Connection lc = levi_civita(m);
    for (const Vector& p : sample_points(m, count, config.seed))
      worst = std::max(worst, std::abs(scalar_at(m, lc, p) - expected));
    rep.check("classical/" + id, "scalar curvature S = " + num(expected),
              worst, 1e-6);
  };
  auto sectional_check = [&](const std::string& id, const Manifold& m, double expected) {
    double worst = 0.0;
    Rng rng(config.seed);
    for (const Vector& p : sample_points(m, count, config.seed)) {
      const Vector x = rng.vector(2), y = rng.vector(2);
      worst = std::max(worst, std::abs(sectional_at(m, p, x, y) - expected));
    }
    rep.check("classical/" + id, "sectional curvature K = " + num(expected),
              worst, 1e-6);
  };
  scalar_check("sphere2 scalar", fx::sphere2(), 2.0);
  sectional_check("sphere2 sectional", fx::sphere2(), 1.0);
  scalar_check("hyperbolic2 scalar", fx::hyperbolic2(), -2.0);
  sectional_check("hyperbolic2 sectional", fx::hyperbolic2(), -1.0);
  sectional_check("fisher sectional", fx::fisher_normal(), -0.5);

  const Manifold e3 = fx::euclidean(3);
  double flat = 0.0, weyl = 0.0;
  const Connection lc3 = levi_civita(e3);
  for (const Vector& p : sample_points(e3, count, config.seed)) {
    flat = std::max(flat, max_abs(riemann_at(lc3, p).data()));
    weyl = std::max(weyl, max_abs(weyl_at(e3, lc3, p).data()));
  }
  rep.check("classical/euclidean3 flat", "R = 0", flat, config.tol_exact);
  rep.check("classical/euclidean3 weyl", "C = 0", weyl, config.tol_exact);

  // The curvature-vector variant of the Weyl bracket, measured on a curved
  // 3-dimensional chart where it differs from the standard tensor.
  const ProductSpec cyl = twisted_product(fx::sphere2(), fx::euclidean(1, {"u"}), "1");
  const Connection lc = levi_civita(cyl.product());
  double variant = 0.0;
  for (const Vector& p : sample_points(cyl.product(), count, config.seed))
    variant = std::max(variant, max_abs_diff(weyl_at(cyl.product(), lc, p),
                                             weyl_at(cyl.product(), lc, p,
                                                     WeylForm::CurvatureVariant)));
  rep.info("classical/weyl variant", "bracket with R(Y,Z)X in place of Ric(Y,Z)X", variant,
           config.tol_exact, "difference from the standard Weyl tensor on Sphere2 x R");
}

struct Factor {
  std::string id;
  Manifold manifold;
};

void add_twist_suite(VerificationReport& rep, const RunConfig& config) {
  const std::vector<std::pair<Factor, Factor>> pairs = {
      {{"E1", fx::euclidean(1, {"x"})}, {"E1", fx::euclidean(1, {"u"})}},
      {{"E1", fx::euclidean(1, {"x"})}, {"E2", fx::euclidean(2, {"u", "v"})}},
      {{"E2", fx::euclidean(2, {"x", "y"})}, {"E1", fx::euclidean(1, {"u"})}},
      {{"E2", fx::euclidean(2, {"x", "y"})}, {"E2", fx::euclidean(2, {"u", "v"})}},
  };
  const std::vector<std::string> twists = {"1", "exp(x)", "exp(x*u)", "(1+x^2)*(1+u^2)"};
  for (const auto& [base, fiber] : pairs)
    for (const std::string& b : twists) {
      const ProductSpec p = twisted_product(base.manifold, fiber.manifold, b, config.samples,
                                            config.seed);
      add_product_checks(rep, "twist/" + base.id + "x" + fiber.id + "/b=" + b, p, config);
    }
  const ProductSpec sph = twisted_product(fx::sphere2(), fx::euclidean(2, {"u", "v"}),
                                          "exp(0.3*cos(th)*u)", config.samples, config.seed);
  add_product_checks(rep, "twist/S2xE2/b=exp(0.3*cos(th)*u)", sph, config);
}

struct FlatnessFixture {
  std::string id;
  std::function<ProductDualistic(const RunConfig&)> build;
};

DualisticStructure lc_structure(const Manifold& m, const RunConfig& c) {
  return make_dualistic(m, levi_civita(m), std::nullopt, c.samples, c.seed);
}

std::vector<FlatnessFixture> flatness_fixtures() {
  auto product = [](std::function<DualisticStructure(const RunConfig&)> base,
                    std::function<DualisticStructure(const RunConfig&)> fiber, std::string b) {
    return [=](const RunConfig& c) {
      const DualisticStructure db = base(c), df = fiber(c);
      return make_product_dualistic(
          db, df, twisted_product(db.manifold(), df.manifold(), b, c.samples, c.seed), c.samples,
          c.seed);
    };
  };
  auto lc = [](Manifold m) { return [m](const RunConfig& c) { return lc_structure(m, c); }; };
  auto line_pair = [](const RunConfig& c) {
    const Manifold line = fx::euclidean(1, {"x"});
    return make_dualistic(line, fx::constant_connection(line, 0.7),
                          fx::constant_connection(line, -0.7), c.samples, c.seed);
  };
  auto fisher_flat = [](const RunConfig& c) {
    const Manifold f = fx::fisher_normal();
    return make_dualistic(f, fx::fisher_alpha_connection(f, 1.0), std::nullopt, c.samples,
                          c.seed);
  };
  auto fisher_half = [](const RunConfig& c) {
    const Manifold f = fx::fisher_normal();
    return make_dualistic(f, fx::fisher_alpha_connection(f, 0.5), std::nullopt, c.samples,
                          c.seed);
  };
  auto torsionful = [](const RunConfig& c) {
    const Manifold s = fx::sphere2();
    return make_dualistic(s, fx::torsionful_test_connection(s), std::nullopt, c.samples, c.seed);
  };
  const Manifold ex = fx::euclidean(1, {"x"}), eu = fx::euclidean(1, {"u"});
  const Manifold exy = fx::euclidean(2, {"x", "y"}), euv = fx::euclidean(2, {"u", "v"});
  return {
      {"flat-direct/E1(0.7)xE1", product(line_pair, lc(eu), "1")},
      {"flat-direct/E2xE2", product(lc(exy), lc(euv), "1")},
      {"flat-direct/fisher(alpha=1)xE1", product(fisher_flat, lc(eu), "1")},
      {"separable/E1xE1/b=1+u^2", product(lc(ex), lc(eu), "1+u^2")},
      {"warped/E1xE1/b=exp(x)", product(lc(ex), lc(eu), "exp(x)")},
      {"warped/E1(0.7)xE1/b=exp(x)", product(line_pair, lc(eu), "exp(x)")},
      {"twisted/E1xE1/b=exp(x*u)", product(lc(ex), lc(eu), "exp(x*u)")},
      {"twisted/E2xE2/b=exp(x*u)", product(lc(exy), lc(euv), "exp(x*u)")},
      {"sphere-base/S2xE1", product(lc(fx::sphere2()), lc(eu), "1")},
      {"statistical/fisher(alpha=0.5)xE1/b=exp(m)", product(fisher_half, lc(eu), "exp(m)")},
      {"torsionful/S2xE1", product(torsionful, lc(eu), "1")},
  };
}

}  // namespace

VerificationReport cmd_verify_paper(const RunConfig& config) {
  VerificationReport rep("verify-paper");
  rep.set_config(config.to_json());
  for (const StructureFixture& f : structure_fixtures())
    add_structure_checks(rep, "structure/" + f.id, f.manifold, f.connection, f.dual, config);
  add_classical_checks(rep, config);
  add_twist_suite(rep, config);
  for (const FlatnessFixture& f : flatness_fixtures())
    add_flatness_checks(rep, "flatness/" + f.id, f.build(config), config);

  const std::size_t informational = static_cast<std::size_t>(std::count_if(
      rep.checks().begin(), rep.checks().end(), [](const auto& c) { return c.informational; }));
  rep.add_summary("structural identities: " +
                  std::to_string(rep.checks().size() - informational - rep.failures()) + " of " +
                  std::to_string(rep.checks().size() - informational) + " pass; " +
                  std::to_string(informational) + " informational records");
  return rep;
}

}  // namespace dualgeom
