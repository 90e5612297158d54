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

#ifndef DUALGEOM_CURVATURE_HPP
#define DUALGEOM_CURVATURE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "dualgeom/connection.hpp"
#include "dualgeom/manifold.hpp"
#include "dualgeom/tensor.hpp"

namespace dualgeom {

// Convention: R(X,Y)Z = ∇_X ∇_Y Z - ∇_Y ∇_X Z - ∇_[X,Y] Z, with components
// R(∂_i, ∂_j)∂_k = R^l_ijk ∂_l stored as r(l, i, j, k).

Tensor4 riemann_at(const Connection& c, const Vector& p);

/// R(X,Y)Z from components.
Vector apply_curvature(const Tensor4& r, const Vector& x, const Vector& y, const Vector& z);

/// |g(R(X,Y)Z,W) + g(R*(X,Y)W,Z)|
double curvature_duality_residual(const Manifold& m, const Connection& c,
                                  const Connection& cstar, const Vector& p, const Vector& x,
                                  const Vector& y, const Vector& z, const Vector& w);

/// Ric(X,Y) = Σ_a g(R(E_a,X)Y, E_a) over a Gram-Schmidt orthonormal frame,
/// returned in the coordinate frame: ricci(j, k) = Ric(∂_j, ∂_k).
Matrix ricci_from(const Tensor4& r, const Matrix& g);
Matrix ricci_at(const Manifold& m, const Connection& c, const Vector& p);

/// S = Σ_a Ric(E_a, E_a).
double scalar_from(const Matrix& ricci, const Matrix& g);
double scalar_at(const Manifold& m, const Connection& c, const Vector& p);

/// Q with g(QX, Y) = Ric(X, Y); column j holds Q∂_j.
Matrix ricci_operator_from(const Matrix& ricci, const Matrix& inverse_metric);
Matrix ricci_operator_at(const Manifold& m, const Connection& c, const Vector& p);

enum class WeylForm {
  /// Ric(X,Z)Y - Ric(Y,Z)X in the 1/(m-2) bracket.
  Standard,
  /// The bracket written with the curvature vector R(Y,Z)X in place of
  /// Ric(Y,Z)X. Kept only to measure how far it is from the standard form.
  CurvatureVariant,
};

/// Conformal curvature components C(∂_i,∂_j)∂_k = C^l_ijk, stored as (l,i,j,k).
/// Throws DimensionError for m <= 2.
Tensor4 weyl_from(const Tensor4& r, const Matrix& g, const Matrix& inverse_metric,
                  WeylForm form = WeylForm::Standard);
Tensor4 weyl_at(const Manifold& m, const Connection& c, const Vector& p,
                WeylForm form = WeylForm::Standard);

/// Sectional curvature of span{X, Y} for the Levi-Civita connection of m.
/// Throws GeometryError when the plane is degenerate.
double sectional_at(const Manifold& m, const Vector& p, const Vector& x, const Vector& y);

struct FlatVerdict {
  bool flat = false;
  double max_curvature = 0.0;
};

FlatVerdict is_flat(const Connection& c, const std::vector<Vector>& points, double tol);

struct ConstantSectionalVerdict {
  bool constant = false;
  double kappa = 0.0;
  double max_deviation = 0.0;
  std::size_t planes = 0;
};

/// Samples three random planes per point. Throws DimensionError for dim < 2.
ConstantSectionalVerdict is_constant_sectional(const Manifold& m,
                                               const std::vector<Vector>& points, double tol,
                                               std::uint64_t seed = 42);

struct CurvatureReport {
  Vector point;
  Tensor4 riemann;
  Matrix ricci;
  double scalar = 0.0;
  Matrix ricci_operator;
  std::optional<Tensor4> weyl;
  /// max |standard - curvature-variant| Weyl components, when weyl is set.
  std::optional<double> weyl_variant_difference;
  bool flat_at_point = false;
  double tolerance = 0.0;
};

CurvatureReport curvature_report(const Manifold& m, const Connection& c, const Vector& p,
                                 bool with_weyl, double tol);

}  // namespace dualgeom

#endif  // DUALGEOM_CURVATURE_HPP
