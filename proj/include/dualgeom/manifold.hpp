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

#ifndef DUALGEOM_MANIFOLD_HPP
#define DUALGEOM_MANIFOLD_HPP

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "dualgeom/expr.hpp"
#include "dualgeom/tensor.hpp"

namespace dualgeom {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  double center() const { return 0.5 * (lo + hi); }
};

/// A manifold described by one global chart over a coordinate box, with the
/// metric given entry-wise as expressions of the coordinates.
///
/// First and second partial derivatives of every metric entry are derived
/// symbolically at construction. Copies share the underlying data.
class Manifold {
 public:
  Manifold(std::string name, std::vector<std::string> coords, std::vector<Interval> domain,
           std::vector<std::vector<Expr>> metric);

  const std::string& name() const;
  std::size_t dim() const;
  const std::vector<std::string>& coords() const;
  const std::vector<Interval>& domain() const;

  const Expr& metric(std::size_t i, std::size_t j) const;
  /// ∂_l g_ij
  const Expr& metric_derivative(std::size_t l, std::size_t i, std::size_t j) const;
  /// ∂_l ∂_m g_ij
  const Expr& metric_second_derivative(std::size_t l, std::size_t m, std::size_t i,
                                       std::size_t j) const;

  bool contains(const Vector& p) const;
  Vector center() const;

 private:
  struct Data;
  std::shared_ptr<const Data> data_;
};

/// Metric and its partial derivatives at a point.
struct MetricJet {
  Matrix g;
  Matrix inverse;
  /// d[l](i, j) = ∂_l g_ij
  std::vector<Matrix> d;
  /// dd[l * n + m](i, j) = ∂_l ∂_m g_ij
  std::vector<Matrix> dd;
  /// di[l] = ∂_l (g^{-1}) = -g^{-1} (∂_l g) g^{-1}
  std::vector<Matrix> dinv;

  std::size_t dim() const { return static_cast<std::size_t>(g.rows()); }
  double inner(const Vector& x, const Vector& y) const { return x.dot(g * y); }
};

/// order 0: g and inverse; 1: adds ∂g and ∂(g^{-1}); 2: adds ∂∂g.
/// Throws GeometryError outside the domain or for a near-singular metric
/// (condition number above 1e12).
MetricJet metric_jet(const Manifold& m, const Vector& p, int order = 2);

Matrix metric_at(const Manifold& m, const Vector& p);
Matrix inverse_metric_at(const Manifold& m, const Vector& p);
/// result[i](j, k) = ∂_i g_jk
std::vector<Matrix> metric_derivatives_at(const Manifold& m, const Vector& p);

/// Components g^{-1} df of the gradient of `f` (an expression over the
/// manifold's coordinates).
Vector gradient_at(const Manifold& m, const Expr& f, const Vector& p);

/// Orthonormal frame from Gram-Schmidt of the coordinate frame in coordinate
/// order; column a holds the components of E_a.
Matrix orthonormal_frame(const Matrix& g);

/// Seeded generator whose output does not depend on the standard library's
/// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  Vector vector(std::size_t n, double lo = -1.0, double hi = 1.0) {
    Vector v(n);
    for (std::size_t i = 0; i < n; ++i) v(i) = uniform(lo, hi);
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

/// n points drawn uniformly from the domain box shrunk by a 5% margin on
/// every face. Deterministic for a fixed seed.
std::vector<Vector> sample_points(const Manifold& m, std::size_t n, std::uint64_t seed);

struct MetricValidation {
  double max_asymmetry = 0.0;
  double min_eigenvalue = 0.0;
  double max_inverse_defect = 0.0;
};

/// Checks symmetry (|g_ij - g_ji| < 1e-12), positive definiteness (smallest
/// eigenvalue > 1e-10) and the inverse at the given points. Throws
/// GeometryError on the first violation.
MetricValidation validate_metric(const Manifold& m, const std::vector<Vector>& points);

}  // namespace dualgeom

#endif  // DUALGEOM_MANIFOLD_HPP
