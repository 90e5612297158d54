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

#include "dualgeom/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <span>

#include "dualgeom/error.hpp"

namespace dualgeom {

struct Manifold::Data {
  std::string name;
  std::vector<std::string> coords;
  std::vector<Interval> domain;
  std::size_t n = 0;
  std::vector<Expr> g;    // n*n
  std::vector<Expr> dg;   // [l][i][j]
  std::vector<Expr> ddg;  // [l][m][i][j]
};

Manifold::Manifold(std::string name, std::vector<std::string> coords,
                   std::vector<Interval> domain, std::vector<std::vector<Expr>> metric) {
  auto d = std::make_shared<Data>();
  const std::size_t n = coords.size();
  if (n == 0) throw GeometryError("manifold '" + name + "' has no coordinates");
  if (std::set<std::string>(coords.begin(), coords.end()).size() != n)
    throw GeometryError("manifold '" + name + "' has duplicate coordinate names");
  if (domain.size() != n)
    throw GeometryError("manifold '" + name + "': domain needs one interval per coordinate");
  for (const auto& iv : domain)
    if (!(iv.lo < iv.hi)) throw GeometryError("manifold '" + name + "': empty domain interval");
  if (metric.size() != n)
    throw GeometryError("manifold '" + name + "': metric must be " + std::to_string(n) + "x" +
                        std::to_string(n));
  for (const auto& row : metric)
    if (row.size() != n)
      throw GeometryError("manifold '" + name + "': metric must be " + std::to_string(n) +
                          "x" + std::to_string(n));

  d->name = std::move(name);
  d->coords = std::move(coords);
  d->domain = std::move(domain);
  d->n = n;
  d->g.reserve(n * n);
  for (const auto& row : metric)
    for (const auto& e : row) d->g.push_back(e);
  d->dg.resize(n * n * n);
  d->ddg.resize(n * n * n * n);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t ij = 0; ij < n * n; ++ij) d->dg[l * n * n + ij] = differentiate(d->g[ij], l);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t ij = 0; ij < n * n; ++ij)
        d->ddg[(l * n + m) * n * n + ij] = differentiate(d->dg[l * n * n + ij], m);
  data_ = std::move(d);
}

const std::string& Manifold::name() const { return data_->name; }
std::size_t Manifold::dim() const { return data_->n; }
const std::vector<std::string>& Manifold::coords() const { return data_->coords; }
const std::vector<Interval>& Manifold::domain() const { return data_->domain; }

const Expr& Manifold::metric(std::size_t i, std::size_t j) const {
  return data_->g[i * data_->n + j];
}

const Expr& Manifold::metric_derivative(std::size_t l, std::size_t i, std::size_t j) const {
  const std::size_t n = data_->n;
  return data_->dg[(l * n + i) * n + j];
}

const Expr& Manifold::metric_second_derivative(std::size_t l, std::size_t m, std::size_t i,
                                               std::size_t j) const {
  const std::size_t n = data_->n;
  return data_->ddg[((l * n + m) * n + i) * n + j];
}

bool Manifold::contains(const Vector& p) const {
  if (static_cast<std::size_t>(p.size()) != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i)
    if (!(p(i) >= data_->domain[i].lo && p(i) <= data_->domain[i].hi)) return false;
  return true;
}

Vector Manifold::center() const {
  Vector c(dim());
  for (std::size_t i = 0; i < dim(); ++i) c(i) = data_->domain[i].center();
  return c;
}

namespace {

std::span<const double> as_span(const Vector& p) {
  return {p.data(), static_cast<std::size_t>(p.size())};
}

Matrix eval_matrix(std::size_t n, const Vector& p,
                   const std::function<const Expr&(std::size_t, std::size_t)>& entry) {
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = entry(i, j).eval(as_span(p));
  return out;
}

Matrix checked_inverse(const Matrix& g, const std::string& name) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (g + g.transpose()));
  const double lo = es.eigenvalues().cwiseAbs().minCoeff();
  const double hi = es.eigenvalues().cwiseAbs().maxCoeff();
  if (lo == 0.0 || hi / lo > 1e12)
    throw GeometryError("metric of '" + name + "' is near-singular (condition number > 1e12)");
  return g.inverse();
}

}  // namespace

MetricJet metric_jet(const Manifold& m, const Vector& p, int order) {
  if (!m.contains(p)) throw GeometryError("point outside the domain of '" + m.name() + "'");
  const std::size_t n = m.dim();
  MetricJet jet;
  jet.g = eval_matrix(n, p, [&](std::size_t i, std::size_t j) -> const Expr& {
    return m.metric(i, j);
  });
  jet.inverse = checked_inverse(jet.g, m.name());
  if (order < 1) return jet;
  jet.d.reserve(n);
  jet.dinv.reserve(n);
  for (std::size_t l = 0; l < n; ++l) {
    jet.d.push_back(eval_matrix(n, p, [&](std::size_t i, std::size_t j) -> const Expr& {
      return m.metric_derivative(l, i, j);
    }));
    jet.dinv.push_back(-jet.inverse * jet.d.back() * jet.inverse);
  }
  if (order < 2) return jet;
  jet.dd.reserve(n * n);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t k = 0; k < n; ++k)
      jet.dd.push_back(eval_matrix(n, p, [&](std::size_t i, std::size_t j) -> const Expr& {
        return m.metric_second_derivative(l, k, i, j);
      }));
  return jet;
}

Matrix metric_at(const Manifold& m, const Vector& p) { return metric_jet(m, p, 0).g; }

Matrix inverse_metric_at(const Manifold& m, const Vector& p) {
  return metric_jet(m, p, 0).inverse;
}

std::vector<Matrix> metric_derivatives_at(const Manifold& m, const Vector& p) {
  return metric_jet(m, p, 1).d;
}

Vector gradient_at(const Manifold& m, const Expr& f, const Vector& p) {
  const std::size_t n = m.dim();
  Vector df(n);
  for (std::size_t i = 0; i < n; ++i) df(i) = differentiate(f, i).eval(as_span(p));
  return inverse_metric_at(m, p) * df;
}

Matrix orthonormal_frame(const Matrix& g) {
  const auto n = g.rows();
  Matrix e = Matrix::Identity(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    Vector v = e.col(a);
    for (Eigen::Index b = 0; b < a; ++b) v -= e.col(b).dot(g * v) * e.col(b);
    const double norm2 = v.dot(g * v);
    if (!(norm2 > 0.0)) throw GeometryError("metric is not positive definite");
    e.col(a) = v / std::sqrt(norm2);
  }
  return e;
}

std::vector<Vector> sample_points(const Manifold& m, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vector> out;
  out.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    Vector p(m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i) {
      const Interval& iv = m.domain()[i];
      const double margin = 0.05 * iv.width();
      p(i) = rng.uniform(iv.lo + margin, iv.hi - margin);
    }
    out.push_back(std::move(p));
  }
  return out;
}

MetricValidation validate_metric(const Manifold& m, const std::vector<Vector>& points) {
  MetricValidation v;
  v.min_eigenvalue = INFINITY;
  for (const Vector& p : points) {
    if (!m.contains(p)) throw GeometryError("sample point outside the domain of '" + m.name() + "'");
    const Matrix g = eval_matrix(m.dim(), p, [&](std::size_t i, std::size_t j) -> const Expr& {
      return m.metric(i, j);
    });
    const double asym = max_abs(Matrix(g - g.transpose()));
    v.max_asymmetry = std::max(v.max_asymmetry, asym);
    if (asym >= 1e-12)
      throw GeometryError("metric of '" + m.name() + "' is not symmetric (|g_ij - g_ji| = " +
                          std::to_string(asym) + ")");
    Eigen::SelfAdjointEigenSolver<Matrix> es(g);
    const double lo = es.eigenvalues().minCoeff();
    v.min_eigenvalue = std::min(v.min_eigenvalue, lo);
    if (!(lo > 1e-10))
      throw GeometryError("metric of '" + m.name() + "' is not positive definite (eigenvalue " +
                          std::to_string(lo) + ")");
    const Matrix inv = checked_inverse(g, m.name());
    v.max_inverse_defect = std::max(
        v.max_inverse_defect,
        max_abs(Matrix(g * inv - Matrix::Identity(m.dim(), m.dim()))));
  }
  return v;
}

}  // namespace dualgeom
