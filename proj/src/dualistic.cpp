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

#include "dualgeom/dualistic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <span>

#include "dualgeom/curvature.hpp"
#include "dualgeom/error.hpp"

namespace dualgeom {

namespace {

std::span<const double> as_span(const Vector& p) {
  return {p.data(), static_cast<std::size_t>(p.size())};
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt_point(const Vector& p) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < p.size(); ++i) s += (i ? ", " : "") + fmt(p(i));
  return s + ")";
}

double max_torsion(const Connection& c, const Vector& p) {
  return max_abs(torsion_at(c, p).data());
}

std::vector<Vector> base_parts(const ProductSpec& p, const std::vector<Vector>& points) {
  std::vector<Vector> out;
  for (const Vector& x : points) out.push_back(p.base_part(x));
  return out;
}

std::vector<Vector> fiber_parts(const ProductSpec& p, const std::vector<Vector>& points) {
  std::vector<Vector> out;
  for (const Vector& x : points) out.push_back(p.fiber_part(x));
  return out;
}

}  // namespace

DualisticStructure::DualisticStructure(Manifold manifold, Connection primal, Connection dual,
                                       double max_residual, double involution_defect)
    : manifold_(std::move(manifold)),
      primal_(std::move(primal)),
      dual_(std::move(dual)),
      max_residual_(max_residual),
      involution_defect_(involution_defect) {}

DualisticStructure make_dualistic(const Manifold& m, const Connection& c,
                                  const std::optional<Connection>& cstar, std::size_t samples,
                                  std::uint64_t seed, double tol) {
  if (c.dim() != m.dim() || (cstar && cstar->dim() != m.dim()))
    throw GeometryError("connection and manifold dimensions differ");
  const Connection dual = cstar ? *cstar : conjugate(c, m);
  const Connection back = conjugate(dual, m);
  double worst = 0.0, involution = 0.0;
  Vector worst_point;
  for (const Vector& p : sample_points(m, samples, seed)) {
    const double r = duality_residual(m, c, dual, p);
    if (r > worst || worst_point.size() == 0) {
      worst = std::max(worst, r);
      worst_point = p;
    }
    involution = std::max(involution, max_abs_diff(back.coefficients(p), c.coefficients(p)));
  }
  if (!(worst < tol))
    throw ConjugacyError("connections are not conjugate on " + m.name() + ": duality residual " +
                             fmt(worst) + " at " + fmt_point(worst_point) + " exceeds " + fmt(tol),
                         worst);
  return DualisticStructure(m, c, dual, worst, involution);
}

Connection induced_connection(const ProductSpec& p, const Connection& base,
                              const Connection& fiber, std::string label) {
  if (base.dim() != p.r() || fiber.dim() != p.s())
    throw GeometryError("factor connection dimensions do not match the product");
  auto provider = [p, base, fiber](const Vector& x, bool with_derivatives) {
    const std::size_t r = p.r(), s = p.s(), n = p.n();
    const Vector xb = p.base_part(x), xf = p.fiber_part(x);
    const ConnectionJet bj =
        with_derivatives ? base.jet(xb) : ConnectionJet{base.coefficients(xb), {}};
    const ConnectionJet fj =
        with_derivatives ? fiber.jet(xf) : ConnectionJet{fiber.coefficients(xf), {}};
    const MetricJet mj = metric_jet(p.product(), x, with_derivatives ? 1 : 0);
    Vector dk(n);
    for (std::size_t mu = 0; mu < n; ++mu) dk(mu) = p.dk(mu).eval(as_span(x));
    const Vector grad = mj.inverse * dk;

    ConnectionJet out{Tensor3(n), {}};
    Tensor3& gam = out.gamma;
    for (std::size_t c = 0; c < r; ++c)
      for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) gam(c, a, b) = bj.gamma(c, a, b);
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t al = 0; al < s; ++al) {
        gam(r + al, a, r + al) = dk(a);
        gam(r + al, r + al, a) = dk(a);
      }
    for (std::size_t al = 0; al < s; ++al)
      for (std::size_t be = 0; be < s; ++be) {
        const double guv = mj.g(r + al, r + be);
        for (std::size_t c = 0; c < r; ++c) gam(c, r + al, r + be) = -guv * grad(c);
        for (std::size_t ga = 0; ga < s; ++ga) {
          double v = fj.gamma(ga, al, be) - guv * grad(r + ga);
          if (ga == be) v += dk(r + al);
          if (ga == al) v += dk(r + be);
          gam(r + ga, r + al, r + be) = v;
        }
      }
    if (!with_derivatives) return out;

    Matrix ddk(n, n);
    for (std::size_t mu = 0; mu < n; ++mu)
      for (std::size_t nu = 0; nu < n; ++nu) ddk(mu, nu) = p.ddk(mu, nu).eval(as_span(x));
    out.dgamma = Tensor4(n);
    Tensor4& dg = out.dgamma;
    for (std::size_t mu = 0; mu < n; ++mu) {
      const Vector dgrad = mj.dinv[mu] * dk + mj.inverse * ddk.col(mu);
      if (mu < r)
        for (std::size_t c = 0; c < r; ++c)
          for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = 0; b < r; ++b) dg(mu, c, a, b) = bj.dgamma(mu, c, a, b);
      for (std::size_t a = 0; a < r; ++a)
        for (std::size_t al = 0; al < s; ++al) {
          dg(mu, r + al, a, r + al) = ddk(a, mu);
          dg(mu, r + al, r + al, a) = ddk(a, mu);
        }
      for (std::size_t al = 0; al < s; ++al)
        for (std::size_t be = 0; be < s; ++be) {
          const double guv = mj.g(r + al, r + be);
          const double dguv = mj.d[mu](r + al, r + be);
          for (std::size_t c = 0; c < r; ++c)
            dg(mu, c, r + al, r + be) = -dguv * grad(c) - guv * dgrad(c);
          for (std::size_t ga = 0; ga < s; ++ga) {
            double v = -dguv * grad(r + ga) - guv * dgrad(r + ga);
            if (mu >= r) v += fj.dgamma(mu - r, ga, al, be);
            if (ga == be) v += ddk(r + al, mu);
            if (ga == al) v += ddk(r + be, mu);
            dg(mu, r + ga, r + al, r + be) = v;
          }
        }
    }
    return out;
  };
  return Connection(p.n(), Provenance::InducedProduct, std::move(label), std::move(provider));
}

DualisticStructure induce_on_product(const DualisticStructure& base,
                                     const DualisticStructure& fiber, const ProductSpec& p,
                                     std::size_t samples, std::uint64_t seed, double tol) {
  const Connection d =
      induced_connection(p, base.primal(), fiber.primal(),
                         "induced(" + base.primal().label() + ", " + fiber.primal().label() + ")");
  return make_dualistic(p.product(), d, std::nullopt, samples, seed, tol);
}

ProductDualistic make_product_dualistic(const DualisticStructure& base,
                                        const DualisticStructure& fiber, const ProductSpec& p,
                                        std::size_t samples, std::uint64_t seed, double tol) {
  return {p, base, fiber, induce_on_product(base, fiber, p, samples, seed, tol)};
}

double ProjectionReport::max_recovery() const {
  return std::max({base_primal, base_dual, fiber_primal, fiber_dual});
}

ProjectionReport projection_check(const ProductDualistic& pd, const std::vector<Vector>& points) {
  const ProductSpec& p = pd.product;
  const std::size_t r = p.r(), s = p.s(), n = p.n();
  const Connection dual_pattern =
      induced_connection(p, pd.base.dual(), pd.fiber.dual(), "induced-dual");
  ProjectionReport out;

  // Residual of a projected pair against a factor metric, over one block.
  auto conjugacy = [](const MetricJet& mj, const Tensor3& a, const Tensor3& b,
                      std::size_t offset, std::size_t m) {
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k) {
          double v = mj.d[i](j, k);
          for (std::size_t q = 0; q < m; ++q)
            v -= a(offset + q, offset + i, offset + j) * mj.g(q, k) +
                 b(offset + q, offset + i, offset + k) * mj.g(j, q);
          worst = std::max(worst, std::abs(v));
        }
    return worst;
  };

  for (const Vector& x : points) {
    const Vector xb = p.base_part(x), xf = p.fiber_part(x);
    const Tensor3 d = pd.induced.primal().coefficients(x);
    const Tensor3 ds = pd.induced.dual().coefficients(x);
    const Tensor3 bp = pd.base.primal().coefficients(xb);
    const Tensor3 bd = pd.base.dual().coefficients(xb);
    const Tensor3 fp = pd.fiber.primal().coefficients(xf);
    const Tensor3 fd = pd.fiber.dual().coefficients(xf);

    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < r; ++b) {
        for (std::size_t c = 0; c < r; ++c) {
          out.base_primal = std::max(out.base_primal, std::abs(d(c, a, b) - bp(c, a, b)));
          out.base_dual = std::max(out.base_dual, std::abs(ds(c, a, b) - bd(c, a, b)));
        }
        for (std::size_t ga = 0; ga < s; ++ga) {
          out.base_primal = std::max(out.base_primal, std::abs(d(r + ga, a, b)));
          out.base_dual = std::max(out.base_dual, std::abs(ds(r + ga, a, b)));
        }
      }
    for (std::size_t al = 0; al < s; ++al)
      for (std::size_t be = 0; be < s; ++be)
        for (std::size_t ga = 0; ga < s; ++ga) {
          out.fiber_primal =
              std::max(out.fiber_primal, std::abs(d(r + ga, r + al, r + be) - fp(ga, al, be)));
          out.fiber_dual =
              std::max(out.fiber_dual, std::abs(ds(r + ga, r + al, r + be) - fd(ga, al, be)));
        }
    out.dual_pattern = std::max(out.dual_pattern, max_abs_diff(ds, dual_pattern.coefficients(x)));

    out.base_conjugacy =
        std::max(out.base_conjugacy, conjugacy(metric_jet(p.base(), xb, 1), d, ds, 0, r));
    out.fiber_conjugacy =
        std::max(out.fiber_conjugacy, conjugacy(metric_jet(p.fiber(), xf, 1), d, ds, r, s));

    const MetricJet mj = metric_jet(p.product(), x, 1);
    const double b2 = std::exp(2.0 * p.log_twist().eval(as_span(x)));
    for (std::size_t al = 0; al < s; ++al)
      for (std::size_t be = 0; be < s; ++be)
        for (std::size_t ga = 0; ga < s; ++ga) {
          const std::size_t u = r + al, v = r + be, w = r + ga;
          double res = mj.d[u](v, w);
          for (std::size_t q = 0; q < n; ++q)
            res -= d(q, u, v) * mj.g(q, w) + ds(q, u, w) * mj.g(v, q);
          out.fiber_weighted_conjugacy =
              std::max(out.fiber_weighted_conjugacy, std::abs(res) / b2);
        }
  }
  return out;
}

TorsionInheritance torsion_inheritance_check(const ProductDualistic& pd,
                                             const std::vector<Vector>& points, double tol) {
  TorsionInheritance out;
  out.base_primal = is_statistical(pd.base.manifold(), pd.base.primal(),
                                   base_parts(pd.product, points), tol);
  out.fiber_primal = is_statistical(pd.fiber.manifold(), pd.fiber.primal(),
                                    fiber_parts(pd.product, points), tol);
  out.premise = out.base_primal.statistical && out.fiber_primal.statistical;
  for (const Vector& x : points) {
    out.max_torsion_primal = std::max(out.max_torsion_primal, max_torsion(pd.induced.primal(), x));
    out.max_torsion_dual = std::max(out.max_torsion_dual, max_torsion(pd.induced.dual(), x));
  }
  out.inherited = out.max_torsion_primal < tol && out.max_torsion_dual < tol;
  return out;
}

FlatnessVerdict dually_flat_verdict(const DualisticStructure& d,
                                    const std::vector<Vector>& points, double tol) {
  FlatnessVerdict v;
  v.structure = d.manifold().name();
  v.samples = points.size();
  v.tolerance = tol;
  for (const Vector& p : points) {
    v.max_torsion_primal = std::max(v.max_torsion_primal, max_torsion(d.primal(), p));
    v.max_torsion_dual = std::max(v.max_torsion_dual, max_torsion(d.dual(), p));
  }
  v.max_curvature_primal = is_flat(d.primal(), points, tol).max_curvature;
  v.max_curvature_dual = is_flat(d.dual(), points, tol).max_curvature;
  v.primal_torsion_free = v.max_torsion_primal < tol;
  v.dual_torsion_free = v.max_torsion_dual < tol;
  v.primal_flat = v.max_curvature_primal < tol;
  v.dual_flat = v.max_curvature_dual < tol;
  v.dually_flat = v.primal_torsion_free && v.dual_torsion_free && v.primal_flat && v.dual_flat;
  v.flags_agree = v.primal_flat == v.dual_flat;
  return v;
}

FlatnessVerdict dually_flat_verdict(const DualisticStructure& d, std::size_t samples,
                                    std::uint64_t seed, double tol) {
  FlatnessVerdict v = dually_flat_verdict(d, sample_points(d.manifold(), samples, seed), tol);
  v.seed = seed;
  return v;
}

std::vector<BlockResidual> primal_block_report(const ProductDualistic& pd,
                                               const std::vector<Vector>& points,
                                               std::uint64_t seed, double tol) {
  return curvature_block_report(pd.product, pd.induced.primal(), pd.base.primal(),
                                pd.fiber.primal(), points, seed, tol);
}

std::vector<BlockResidual> dual_block_report(const ProductDualistic& pd,
                                             const std::vector<Vector>& points,
                                             std::uint64_t seed, double tol) {
  return curvature_block_report(pd.product, pd.induced.dual(), pd.base.dual(), pd.fiber.dual(),
                                points, seed, tol);
}

double induced_curvature_duality(const ProductDualistic& pd, const std::vector<Vector>& points,
                                 std::uint64_t seed, std::size_t quadruples) {
  const Manifold& m = pd.induced.manifold();
  const std::size_t n = m.dim();
  Rng rng(seed);
  double worst = 0.0;
  for (const Vector& p : points) {
    const Matrix g = metric_at(m, p);
    const Tensor4 r = riemann_at(pd.induced.primal(), p);
    const Tensor4 rs = riemann_at(pd.induced.dual(), p);
    for (std::size_t q = 0; q < quadruples; ++q) {
      const Vector x = rng.vector(n), y = rng.vector(n), z = rng.vector(n), w = rng.vector(n);
      const double v =
          apply_curvature(r, x, y, z).dot(g * w) + apply_curvature(rs, x, y, w).dot(g * z);
      worst = std::max(worst, std::abs(v));
    }
  }
  return worst;
}

namespace {

std::string flat_word(bool flat) { return flat ? "dually flat" : "not dually flat"; }

/// Separability plus the warped rewrite and factor verdicts; fills the
/// prediction when the twist factorizes.
void run_reduction(const ProductDualistic& pd, const std::vector<Vector>& points,
                   const AnalysisConfig& config, const Separability& sep, AnalysisRecord& rec) {
  rec.chain_ran = true;
  if (!sep.separable) return;
  const ProductSpec& p = pd.product;
  const ProductSpec warped = to_warped(p, sep);
  rec.metric_reconstruction = metric_reconstruction_residual(p, warped, points);
  rec.measurements.emplace_back("max |g - g_warped|", rec.metric_reconstruction);

  rec.base_verdict = dually_flat_verdict(pd.base, base_parts(p, points), config.tol_exact);
  const std::vector<Vector> fpts = fiber_parts(p, points);
  if (p.s() < 2) {
    rec.warnings.push_back("dim F = 1: constant sectional curvature holds vacuously");
    rec.reduced_fiber = ConstantSectionalVerdict{true, 0.0, 0.0, 0};
    rec.original_fiber = rec.reduced_fiber;
  } else {
    rec.reduced_fiber = is_constant_sectional(warped.fiber(), fpts, config.tol_exact, config.seed);
    rec.original_fiber = is_constant_sectional(p.fiber(), fpts, config.tol_exact, config.seed);
    rec.measurements.emplace_back("reduced fiber kappa", rec.reduced_fiber->kappa);
    rec.measurements.emplace_back("reduced fiber kappa spread", rec.reduced_fiber->max_deviation);
  }
  rec.measurements.emplace_back("base max |R|", rec.base_verdict->max_curvature_primal);
  rec.measurements.emplace_back("base max |R*|", rec.base_verdict->max_curvature_dual);
  rec.predicted_dually_flat = rec.base_verdict->dually_flat && rec.reduced_fiber->constant;
}

void finish(AnalysisRecord& rec) {
  const std::string direct = flat_word(rec.direct.dually_flat);
  if (!rec.precondition) {
    rec.verdict = rec.precondition_detail + "; direct verdict: " + direct;
    return;
  }
  if (!rec.predicted_dually_flat) {
    rec.verdict = "twisting function is not separable, reduction stops; direct verdict: " + direct;
    return;
  }
  rec.agrees = *rec.predicted_dually_flat == rec.direct.dually_flat;
  std::string reasons;
  if (!*rec.predicted_dually_flat) {
    if (!rec.base_verdict->dually_flat) reasons += "base structure is not dually flat";
    if (!rec.reduced_fiber->constant)
      reasons += std::string(reasons.empty() ? "" : "; ") +
                 "reduced fiber has non-constant sectional curvature";
  }
  const std::string predicted = flat_word(*rec.predicted_dually_flat);
  if (rec.agrees)
    rec.verdict = predicted + (reasons.empty() ? "" : ": " + reasons) +
                  " (reduction and direct computation agree)";
  else
    rec.verdict = "DISAGREEMENT: reduction predicts " + predicted +
                  (reasons.empty() ? "" : " (" + reasons + ")") +
                  ", direct computation gives " + direct;
}

AnalysisRecord start(const std::string& name, const ProductDualistic& pd,
                     const std::vector<Vector>& points, const AnalysisConfig& config) {
  AnalysisRecord rec;
  rec.analysis = name;
  rec.direct = dually_flat_verdict(pd.induced, points, config.tol_exact);
  rec.direct.seed = config.seed;
  return rec;
}

}  // namespace

AnalysisRecord mixed_ricci_analysis(const ProductDualistic& pd, const AnalysisConfig& config) {
  const ProductSpec& p = pd.product;
  const std::vector<Vector> points = sample_points(p.product(), config.samples, config.seed);
  AnalysisRecord rec = start("mixed-ricci-reduction", pd, points, config);
  if (p.s() < 2)
    rec.warnings.push_back("dim F = 1: the mixed Ricci reduction assumes dim F > 1");

  const MixedRicciSummary mr = mixed_ricci_summary(p, points);
  rec.measurements.emplace_back("max |Ric(X,V)|", mr.max_direct);
  rec.measurements.emplace_back("max |(s-1)XV(k)|", mr.max_closed_form);
  rec.measurements.emplace_back("sign of Ric(X,V) against (s-1)XV(k)", mr.sign);

  const Separability sep = separability_test(p, points, config.tol_exact);
  rec.separable = sep.separable;
  rec.max_cross_derivative = sep.max_cross_derivative;
  rec.measurements.emplace_back("max |XV(k)|", sep.max_cross_derivative);

  rec.precondition = mr.max_direct < config.tol_exact;
  rec.precondition_detail = rec.precondition
                                ? "mixed-Ricci-flat"
                                : "not mixed-Ricci-flat (max |Ric(X,V)| = " +
                                      fmt(mr.max_direct) + ")";
  if (rec.precondition) run_reduction(pd, points, config, sep, rec);
  finish(rec);
  return rec;
}

AnalysisRecord weyl_along_analysis(const ProductDualistic& pd, const AnalysisConfig& config) {
  const ProductSpec& p = pd.product;
  if (p.n() <= 2)
    throw DimensionError("Weyl conformal analysis needs n >= 3, got " + std::to_string(p.n()));
  const std::vector<Vector> points = sample_points(p.product(), config.samples, config.seed);
  AnalysisRecord rec = start("weyl-along-reduction", pd, points, config);

  const MixedWeylReport mw = mixed_weyl_report(p, points, config.tol_exact);
  rec.measurements.emplace_back("max |C(X,Y)V|", mw.max_c_xyv);
  rec.measurements.emplace_back("max |C(V,W)X|", mw.max_c_vwx);
  rec.measurements.emplace_back("max |C(X,V)Z|", mw.max_c_xv);
  rec.measurements.emplace_back("C(X,Y)V display residual", mw.residual_xyv);
  rec.measurements.emplace_back("C(V,W)X display residual", mw.residual_vwx);

  const Separability sep = separability_test(p, points, config.tol_exact);
  rec.separable = sep.separable;
  rec.max_cross_derivative = sep.max_cross_derivative;

  rec.precondition = mw.fiber_flat_along_base || mw.base_flat_along_fiber;
  if (mw.fiber_flat_along_base && mw.base_flat_along_fiber)
    rec.precondition_detail = "Weyl conformal flat along both factors";
  else if (mw.fiber_flat_along_base)
    rec.precondition_detail = "F is Weyl conformal flat along B";
  else if (mw.base_flat_along_fiber)
    rec.precondition_detail = "B is Weyl conformal flat along F";
  else
    rec.precondition_detail = "not Weyl conformal flat along either factor (max |C(X,Y)V| = " +
                              fmt(mw.max_c_xyv) + ", max |C(V,W)X| = " + fmt(mw.max_c_vwx) + ")";
  if (rec.precondition) run_reduction(pd, points, config, sep, rec);
  finish(rec);
  return rec;
}

AnalysisRecord hessian_weyl_analysis(const ProductDualistic& pd, const AnalysisConfig& config) {
  const ProductSpec& p = pd.product;
  const std::vector<Vector> points = sample_points(p.product(), config.samples, config.seed);
  AnalysisRecord rec = start("hessian-weyl-reduction", pd, points, config);

  const HessianCondition hc = hessian_condition_defect(p, points, config.tol_exact);
  rec.measurements.emplace_back("max |H^k(X) + X(k)grad k|", hc.max_defect);

  std::optional<bool> parallel;
  if (p.n() >= 4) {
    const double defect = weyl_parallel_defect(p, points);
    rec.measurements.emplace_back("max |grad C|", defect);
    parallel = defect < config.tol_fd;
  } else if (p.n() == 3) {
    rec.warnings.push_back("n = 3: the Weyl tensor vanishes identically, so it is parallel");
    parallel = true;
  } else {
    rec.warnings.push_back("n = 2: the Weyl tensor is undefined");
  }

  const Separability sep = separability_test(p, points, config.tol_exact);
  rec.separable = sep.separable;
  rec.max_cross_derivative = sep.max_cross_derivative;

  const bool branch2 = hc.holds;
  const bool branch1 = parallel.value_or(false) && !hc.holds && p.r() != 1;
  rec.precondition = branch1 || branch2;
  if (branch2) {
    rec.precondition_detail = "branch 2: H^k(X) = -X(k)grad k";
    if (parallel.value_or(false))
      rec.precondition_detail += " (Weyl tensor is also parallel)";
  } else if (branch1) {
    rec.precondition_detail = "branch 1: Weyl tensor parallel, H^k(X) != -X(k)grad k, dim B != 1";
  } else {
    std::string why;
    if (!parallel)
      why = "Weyl parallelism not evaluable";
    else if (!*parallel)
      why = "Weyl tensor not parallel";
    else
      why = "dim B = 1";
    rec.precondition_detail =
        "inapplicable: H^k(X) != -X(k)grad k and branch 1 fails (" + why + ")";
  }
  if (rec.precondition) run_reduction(pd, points, config, sep, rec);
  finish(rec);
  return rec;
}

}  // namespace dualgeom
