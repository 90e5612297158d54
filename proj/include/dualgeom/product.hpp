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

#ifndef DUALGEOM_PRODUCT_HPP
#define DUALGEOM_PRODUCT_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "dualgeom/connection.hpp"
#include "dualgeom/expr.hpp"
#include "dualgeom/manifold.hpp"

namespace dualgeom {

enum class TwistClass { Direct, Warped, ProperTwisted };

std::string to_string(TwistClass c);

/// B ×_b F: the product chart with metric g_B ⊕ b² g_F, where the twisting
/// function b may depend on every product coordinate. Product coordinates
/// are the base coordinates followed by the fiber coordinates; k = log b.
class ProductSpec {
 public:
  /// `twist` must already be bound to the product coordinates.
  ProductSpec(Manifold base, Manifold fiber, Expr twist);

  const Manifold& base() const;
  const Manifold& fiber() const;
  /// Flattened product manifold used by every downstream computation.
  const Manifold& product() const;
  const Expr& twist() const;
  const Expr& log_twist() const;
  TwistClass classification() const;

  std::size_t r() const { return base().dim(); }
  std::size_t s() const { return fiber().dim(); }
  std::size_t n() const { return r() + s(); }

  /// ∂_μ k and ∂_μ ∂_ν k over product coordinates.
  const Expr& dk(std::size_t mu) const;
  const Expr& ddk(std::size_t mu, std::size_t nu) const;
  /// ∂_μ b and ∂_μ ∂_ν b.
  const Expr& db(std::size_t mu) const;
  const Expr& ddb(std::size_t mu, std::size_t nu) const;

  Vector base_part(const Vector& p) const { return p.head(r()); }
  Vector fiber_part(const Vector& p) const { return p.tail(s()); }

 private:
  struct Data;
  std::shared_ptr<const Data> data_;
};

/// Parses `twist` against the product coordinates and builds B ×_b F.
/// Throws SpecError on a coordinate name clash and GeometryError if b <= 0
/// (or fails to evaluate) at any of `samples` seeded product points.
ProductSpec twisted_product(const Manifold& base, const Manifold& fiber, std::string_view twist,
                            std::size_t samples = 64, std::uint64_t seed = 42);
ProductSpec twisted_product(const Manifold& base, const Manifold& fiber, const Expr& twist,
                            std::size_t samples = 64, std::uint64_t seed = 42);

/// Zero-padding of factor components into product components, and back.
Vector lift_horizontal(const ProductSpec& p, const Vector& base_vector);
Vector lift_vertical(const ProductSpec& p, const Vector& fiber_vector);
Vector project_base(const ProductSpec& p, const Vector& v);
Vector project_fiber(const ProductSpec& p, const Vector& v);

struct LiftResidual {
  /// |X̄·g_B(Ȳ,Z̄)∘π - X·g(Y,Z)|
  double base = 0.0;
  /// |Ū·g_F(V̄,W̄)∘σ - b⁻² U·g(V,W)|; vanishes when b is constant along F.
  double fiber_weighted = 0.0;
  /// |Ū·g_F(V̄,W̄)∘σ - U·g(V,W)|; vanishes only when b is constant along F
  /// and equal to 1.
  double fiber_unweighted = 0.0;
};

LiftResidual lift_check(const ProductSpec& p, const std::vector<Vector>& points,
                                   std::uint64_t seed);

/// Levi-Civita coefficients of the product assembled from the factor
/// Christoffel symbols and k:
///   ∇_X Y = ᴮ∇_X Y,  ∇_X U = ∇_U X = X(k)U,
///   ∇_U V = ᶠ∇_U V + U(k)V + V(k)U - g(U,V)∇k
/// with g the product metric and ∇k the product gradient.
Tensor3 block_levi_civita(const ProductSpec& p, const Vector& point);

/// max |block_levi_civita - levi_civita(product)| at the point.
double block_levi_civita_defect(const ProductSpec& p, const Vector& point);

struct HessianData {
  Vector point;
  /// h^k_B(X,Y) = XY(k) - ᴮ∇_X Y(k), r x r.
  Matrix base_block;
  /// h^k(X,V) = XV(k) - X(k)V(k), r x s.
  Matrix mixed_block;
  /// Full Hessian of k for the product Levi-Civita connection, n x n.
  Matrix full;
  /// H^k with g(H^k(X), Y) = h^k(X, Y); column μ holds H^k(∂_μ).
  Matrix hessian_operator;
  /// Product gradient ∇k.
  Vector gradient;
};

HessianData hessian_at(const ProductSpec& p, const Vector& point);

struct BlockResidual {
  std::string block;
  std::string formula;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  /// Among alternative readings of the same block, the one with the
  /// smallest residual is adopted.
  bool adopted = true;
};

/// Compares the six block formulas for the curvature of a product against
/// the directly computed curvature of `product_connection`, using
/// `base_connection` and `fiber_connection` for ᴮR, ᶠR and the base Hessian.
/// The R(X,U)V and R(U,V)W blocks are reported in two readings each.
std::vector<BlockResidual> curvature_block_report(const ProductSpec& p,
                                                  const Connection& product_connection,
                                                  const Connection& base_connection,
                                                  const Connection& fiber_connection,
                                                  const std::vector<Vector>& points,
                                                  std::uint64_t seed, double tol = 1e-7);

/// Levi-Civita version of the above.
std::vector<BlockResidual> curvature_block_report(const ProductSpec& p,
                                                  const std::vector<Vector>& points,
                                                  std::uint64_t seed, double tol = 1e-7);

struct MixedRicci {
  /// Ric(X,V) from the product curvature.
  double direct = 0.0;
  /// (s - 1) XV(k).
  double closed_form = 0.0;
};

MixedRicci mixed_ricci_at(const ProductSpec& p, const Vector& point, const Vector& base_vector,
                          const Vector& fiber_vector);

struct MixedRicciSummary {
  double max_direct = 0.0;
  double max_closed_form = 0.0;
  /// max |direct - closed| and max |direct + closed|.
  double max_same_sign_defect = 0.0;
  double max_opposite_sign_defect = 0.0;
  /// +1 if direct = (s-1)XV(k), -1 if direct = (1-s)XV(k), 0 if undecided
  /// (both sides vanish).
  int sign = 0;
};

/// Over coordinate base/fiber vector pairs at every point.
MixedRicciSummary mixed_ricci_summary(const ProductSpec& p, const std::vector<Vector>& points);

/// max |Ric(X,Y) - Ric^B(X,Y) + s[h^k_B(X,Y) + X(k)Y(k)]| over coordinate
/// base vectors.
double ricci_base_block_residual(const ProductSpec& p, const std::vector<Vector>& points);

struct MixedWeylReport {
  /// |C(X,Y)V - ((1-s)/(n-2))[XV(k)Y - YV(k)X]|
  double residual_xyv = 0.0;
  /// |C(V,W)X - ((r-1)/(n-2))[XV(k)W - XW(k)V]|
  double residual_vwx = 0.0;
  double max_c_xyv = 0.0;
  double max_c_vwx = 0.0;
  /// max |C(X,V)Z| over all Z.
  double max_c_xv = 0.0;
  bool mixed_weyl_flat = false;
  /// C(X,Y)V ≡ 0.
  bool fiber_flat_along_base = false;
  /// C(V,W)X ≡ 0.
  bool base_flat_along_fiber = false;
};

/// Throws DimensionError when n <= 2.
MixedWeylReport mixed_weyl_report(const ProductSpec& p, const std::vector<Vector>& points,
                                  double tol);

struct Separability {
  bool separable = false;
  double max_cross_derivative = 0.0;
  Vector anchor;
  double anchor_value = 0.0;
  /// α(p) = k(p, q₀) - k(p₀, q₀)/2 and β(q) = k(p₀, q) - k(p₀, q₀)/2 at the
  /// sample points.
  std::vector<double> alpha;
  std::vector<double> beta;
  /// max |k(p,q) - α(p) - β(q)|
  double reconstruction_residual = 0.0;
};

/// Anchored at the box center.
Separability separability_test(const ProductSpec& p, const std::vector<Vector>& points,
                               double tol);

/// Rewrites a separable twisted product as B ×_δ F' with δ = exp(α) on B and
/// fiber metric exp(2β) g_F. Throws GeometryError if `sep` is not separable.
ProductSpec to_warped(const ProductSpec& p, const Separability& sep);

/// max |g - g'| of the two product metrics at the points.
double metric_reconstruction_residual(const ProductSpec& a, const ProductSpec& b,
                                      const std::vector<Vector>& points);

struct HessianCondition {
  /// max |H^k(X) + X(k)∇k| over coordinate base vectors X.
  double max_defect = 0.0;
  bool holds = false;
};

HessianCondition hessian_condition_defect(const ProductSpec& p, const std::vector<Vector>& points,
                                          double tol);

/// max |∇C| of the standard Weyl tensor of the product Levi-Civita
/// connection, with ∂C from a 4th-order central difference of step
/// 1e-4 x the coordinate width. Throws DimensionError when n <= 3.
double weyl_parallel_defect(const ProductSpec& p, const std::vector<Vector>& points);

}  // namespace dualgeom

#endif  // DUALGEOM_PRODUCT_HPP
