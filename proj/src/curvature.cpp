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

#include "dualgeom/curvature.hpp"

#include <algorithm>
#include <cmath>

#include "dualgeom/error.hpp"

namespace dualgeom {

Tensor4 riemann_at(const Connection& c, const Vector& p) {
  const std::size_t n = c.dim();
  const ConnectionJet cj = c.jet(p);
  const Tensor3& g = cj.gamma;
  const Tensor4& dg = cj.dgamma;
  Tensor4 r(n);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          double s = dg(i, l, j, k) - dg(j, l, i, k);
          for (std::size_t q = 0; q < n; ++q) s += g(l, i, q) * g(q, j, k) - g(l, j, q) * g(q, i, k);
          r(l, i, j, k) = s;
          r(l, j, i, k) = -s;
        }
  return r;
}

Vector apply_curvature(const Tensor4& r, const Vector& x, const Vector& y, const Vector& z) {
  const std::size_t n = r.dim();
  Vector out = Vector::Zero(n);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t i = 0; i < n; ++i) {
      if (x(i) == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (y(j) == 0.0) continue;
        for (std::size_t k = 0; k < n; ++k) out(l) += r(l, i, j, k) * x(i) * y(j) * z(k);
      }
    }
  return out;
}

double curvature_duality_residual(const Manifold& m, const Connection& c,
                                  const Connection& cstar, const Vector& p, const Vector& x,
                                  const Vector& y, const Vector& z, const Vector& w) {
  const Matrix g = metric_at(m, p);
  const Vector rz = apply_curvature(riemann_at(c, p), x, y, z);
  const Vector rw = apply_curvature(riemann_at(cstar, p), x, y, w);
  return std::abs(rz.dot(g * w) + rw.dot(g * z));
}

Matrix ricci_from(const Tensor4& r, const Matrix& g) {
  const std::size_t n = r.dim();
  const Matrix e = orthonormal_frame(g);
  Matrix ric = Matrix::Zero(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      const Vector ej = Vector::Unit(n, j), ek = Vector::Unit(n, k);
      double s = 0.0;
      for (std::size_t a = 0; a < n; ++a) {
        const Vector ea = e.col(a);
        s += apply_curvature(r, ea, ej, ek).dot(g * ea);
      }
      ric(j, k) = s;
    }
  return ric;
}

Matrix ricci_at(const Manifold& m, const Connection& c, const Vector& p) {
  return ricci_from(riemann_at(c, p), metric_at(m, p));
}

double scalar_from(const Matrix& ricci, const Matrix& g) {
  const Matrix e = orthonormal_frame(g);
  double s = 0.0;
  for (Eigen::Index a = 0; a < e.cols(); ++a) s += e.col(a).dot(ricci * e.col(a));
  return s;
}

double scalar_at(const Manifold& m, const Connection& c, const Vector& p) {
  const Matrix g = metric_at(m, p);
  return scalar_from(ricci_from(riemann_at(c, p), g), g);
}

Matrix ricci_operator_from(const Matrix& ricci, const Matrix& inverse_metric) {
  return inverse_metric * ricci.transpose();
}

Matrix ricci_operator_at(const Manifold& m, const Connection& c, const Vector& p) {
  const MetricJet mj = metric_jet(m, p, 0);
  return ricci_operator_from(ricci_from(riemann_at(c, p), mj.g), mj.inverse);
}

Tensor4 weyl_from(const Tensor4& r, const Matrix& g, const Matrix& inverse_metric,
                  WeylForm form) {
  const std::size_t n = r.dim();
  if (n <= 2)
    throw DimensionError("conformal curvature needs dimension >= 3, got " + std::to_string(n));
  const Matrix ric = ricci_from(r, g);
  const double s = scalar_from(ric, g);
  const Matrix q = ricci_operator_from(ric, inverse_metric);
  const double a = 1.0 / static_cast<double>(n - 2);
  const double b = s / static_cast<double>((n - 1) * (n - 2));
  Tensor4 c(n);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          const double dlj = l == j ? 1.0 : 0.0;
          const double dli = l == i ? 1.0 : 0.0;
          const double yzx = form == WeylForm::Standard ? ric(j, k) * dli : r(l, j, k, i);
          c(l, i, j, k) = r(l, i, j, k) +
                          a * (ric(i, k) * dlj - yzx + g(i, k) * q(l, j) - g(j, k) * q(l, i)) -
                          b * (g(i, k) * dlj - g(j, k) * dli);
        }
  return c;
}

Tensor4 weyl_at(const Manifold& m, const Connection& c, const Vector& p, WeylForm form) {
  if (m.dim() <= 2)
    throw DimensionError("conformal curvature needs dimension >= 3, got " +
                         std::to_string(m.dim()));
  const MetricJet mj = metric_jet(m, p, 0);
  return weyl_from(riemann_at(c, p), mj.g, mj.inverse, form);
}

double sectional_at(const Manifold& m, const Vector& p, const Vector& x, const Vector& y) {
  const Matrix g = metric_at(m, p);
  const double xx = x.dot(g * x), yy = y.dot(g * y), xy = x.dot(g * y);
  const double denom = xx * yy - xy * xy;
  if (!(denom >= 1e-12)) throw GeometryError("degenerate plane in sectional curvature");
  const Vector ryy = apply_curvature(riemann_at(levi_civita(m), p), x, y, y);
  return ryy.dot(g * x) / denom;
}

FlatVerdict is_flat(const Connection& c, const std::vector<Vector>& points, double tol) {
  FlatVerdict v;
  for (const Vector& p : points)
    v.max_curvature = std::max(v.max_curvature, max_abs(riemann_at(c, p).data()));
  v.flat = v.max_curvature < tol;
  return v;
}

ConstantSectionalVerdict is_constant_sectional(const Manifold& m,
                                               const std::vector<Vector>& points, double tol,
                                               std::uint64_t seed) {
  if (m.dim() < 2)
    throw DimensionError("sectional curvature needs dimension >= 2, got " +
                         std::to_string(m.dim()));
  Rng rng(seed);
  std::vector<double> values;
  const Connection lc = levi_civita(m);
  for (const Vector& p : points) {
    const Matrix g = metric_at(m, p);
    const Tensor4 r = riemann_at(lc, p);
    for (int plane = 0; plane < 3; ++plane) {
      Vector x = rng.vector(m.dim());
      Vector y = rng.vector(m.dim());
      const double xx = x.dot(g * x), yy = y.dot(g * y), xy = x.dot(g * y);
      const double denom = xx * yy - xy * xy;
      if (denom < 1e-6) continue;
      values.push_back(apply_curvature(r, x, y, y).dot(g * x) / denom);
    }
  }
  ConstantSectionalVerdict v;
  v.planes = values.size();
  if (values.empty()) return v;
  double sum = 0.0;
  for (double k : values) sum += k;
  v.kappa = sum / static_cast<double>(values.size());
  for (double k : values) v.max_deviation = std::max(v.max_deviation, std::abs(k - v.kappa));
  v.constant = v.max_deviation < tol;
  return v;
}

CurvatureReport curvature_report(const Manifold& m, const Connection& c, const Vector& p,
                                 bool with_weyl, double tol) {
  const MetricJet mj = metric_jet(m, p, 0);
  CurvatureReport rep;
  rep.point = p;
  rep.tolerance = tol;
  rep.riemann = riemann_at(c, p);
  rep.ricci = ricci_from(rep.riemann, mj.g);
  rep.scalar = scalar_from(rep.ricci, mj.g);
  rep.ricci_operator = ricci_operator_from(rep.ricci, mj.inverse);
  rep.flat_at_point = max_abs(rep.riemann.data()) < tol;
  if (with_weyl) {
    rep.weyl = weyl_from(rep.riemann, mj.g, mj.inverse, WeylForm::Standard);
    const Tensor4 variant = weyl_from(rep.riemann, mj.g, mj.inverse, WeylForm::CurvatureVariant);
    rep.weyl_variant_difference = max_abs_diff(*rep.weyl, variant);
  }
  return rep;
}

}  // namespace dualgeom
