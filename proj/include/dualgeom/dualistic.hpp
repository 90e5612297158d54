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

#ifndef DUALGEOM_DUALISTIC_HPP
#define DUALGEOM_DUALISTIC_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dualgeom/connection.hpp"
#include "dualgeom/curvature.hpp"
#include "dualgeom/manifold.hpp"
#include "dualgeom/product.hpp"

namespace dualgeom {

/// A metric with a pair of connections validated as g-conjugate.
class DualisticStructure {
 public:
  DualisticStructure(Manifold manifold, Connection primal, Connection dual, double max_residual,
                     double involution_defect);

  const Manifold& manifold() const { return manifold_; }
  const Connection& primal() const { return primal_; }
  const Connection& dual() const { return dual_; }
  /// Worst duality residual seen at validation.
  double max_residual() const { return max_residual_; }
  /// Worst |Γ - (Γ*)*| seen at validation.
  double involution_defect() const { return involution_defect_; }

 private:
  Manifold manifold_;
  Connection primal_;
  Connection dual_;
  double max_residual_;
  double involution_defect_;
};

/// Validates (g, c, cstar) at `samples` seeded points. Without `cstar` the
/// dual is conjugate(c, m). Throws ConjugacyError with the worst point and
/// residual when the bound `tol` is exceeded.
DualisticStructure make_dualistic(const Manifold& m, const Connection& c,
                                  const std::optional<Connection>& cstar = std::nullopt,
                                  std::size_t samples = 64, std::uint64_t seed = 42,
                                  double tol = 1e-9);

/// Connection on B ×_b F assembled block-wise from a base and a fiber
/// connection, following the product Levi-Civita pattern:
///   D_X Y = ᴮ∇_X Y,  D_X U = D_U X = X(k)U,
///   D_U V = ᶠ∇_U V + U(k)V + V(k)U - b² g_F(U,V) ∇k.
/// Derivatives are exact.
Connection induced_connection(const ProductSpec& p, const Connection& base,
                              const Connection& fiber, std::string label = "induced");

/// (g, D, D*) on the product, with D from the primal factor connections and
/// D* = conjugate(D, g).
DualisticStructure induce_on_product(const DualisticStructure& base,
                                     const DualisticStructure& fiber, const ProductSpec& p,
                                     std::size_t samples = 64, std::uint64_t seed = 42,
                                     double tol = 1e-9);

/// Factors, product and induced structure kept together for the analyzers.
struct ProductDualistic {
  ProductSpec product;
  DualisticStructure base;
  DualisticStructure fiber;
  DualisticStructure induced;
};

ProductDualistic make_product_dualistic(const DualisticStructure& base,
                                        const DualisticStructure& fiber, const ProductSpec& p,
                                        std::size_t samples = 64, std::uint64_t seed = 42,
                                        double tol = 1e-9);

struct ProjectionReport {
  /// Horizontal part of D_X Y (resp. D*_X Y) against ᴮ∇ (resp. ᴮ∇*), and
  /// the vertical part of the same, which must vanish.
  double base_primal = 0.0;
  double base_dual = 0.0;
  /// Vertical part of D_U V (resp. D*_U V) against ᶠ∇ (resp. ᶠ∇*). Exact
  /// when b is constant along F; the twist terms remain otherwise.
  double fiber_primal = 0.0;
  double fiber_dual = 0.0;
  /// |D* - induced_connection(ᴮ∇*, ᶠ∇*)|: the conjugate of D has the same
  /// block pattern built from the dual factor connections.
  double dual_pattern = 0.0;
  /// Conjugacy of the projected base pair with respect to g_B.
  double base_conjugacy = 0.0;
  /// |b⁻² U·g(V,W) - b⁻²[g(D_U V, W) + g(V, D*_U W)]| on vertical lifts.
  double fiber_weighted_conjugacy = 0.0;
  /// Conjugacy of the projected fiber pair with respect to g_F.
  double fiber_conjugacy = 0.0;

  /// Largest of the four block recovery residuals.
  double max_recovery() const;
};

ProjectionReport projection_check(const ProductDualistic& pd, const std::vector<Vector>& points);

struct TorsionInheritance {
  /// Both factor structures are statistical (the premise).
  bool premise = false;
  StatisticalVerdict base_primal;
  StatisticalVerdict fiber_primal;
  double max_torsion_primal = 0.0;
  double max_torsion_dual = 0.0;
  bool inherited = false;
};

TorsionInheritance torsion_inheritance_check(const ProductDualistic& pd,
                                             const std::vector<Vector>& points,
                                             double tol = 1e-10);

struct FlatnessVerdict {
  std::string structure;
  bool primal_torsion_free = false;
  bool dual_torsion_free = false;
  double max_torsion_primal = 0.0;
  double max_torsion_dual = 0.0;
  double max_curvature_primal = 0.0;
  double max_curvature_dual = 0.0;
  bool primal_flat = false;
  bool dual_flat = false;
  bool dually_flat = false;
  /// R = 0 and R* = 0 flags agree.
  bool flags_agree = false;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
};

FlatnessVerdict dually_flat_verdict(const DualisticStructure& d, std::size_t samples,
                                    std::uint64_t seed, double tol);
FlatnessVerdict dually_flat_verdict(const DualisticStructure& d,
                                    const std::vector<Vector>& points, double tol);

/// Block curvature formulas for D (resp. D*) against direct curvature, with
/// the factor connections ᴮ∇, ᶠ∇ (resp. ᴮ∇*, ᶠ∇*).
std::vector<BlockResidual> primal_block_report(const ProductDualistic& pd,
                                               const std::vector<Vector>& points,
                                               std::uint64_t seed, double tol = 1e-7);
std::vector<BlockResidual> dual_block_report(const ProductDualistic& pd,
                                             const std::vector<Vector>& points,
                                             std::uint64_t seed, double tol = 1e-7);

/// max |g(R(X,Y)Z,W) + g(R*(X,Y)W,Z)| for the induced pair over random
/// vector quadruples.
double induced_curvature_duality(const ProductDualistic& pd, const std::vector<Vector>& points,
                                 std::uint64_t seed, std::size_t quadruples = 20);

struct AnalysisConfig {
  std::size_t samples = 64;
  std::uint64_t seed = 42;
  double tol_exact = 1e-8;
  double tol_fd = 1e-4;
};

/// Outcome of a flatness reduction: the factorization k = α + β, the warped
/// rewrite, and the factor verdicts that predict dual flatness of the
/// product. The direct verdict on the product is always computed.
struct AnalysisRecord {
  std::string analysis;
  bool precondition = false;
  std::string precondition_detail;
  std::vector<std::string> warnings;
  /// Named measurements in insertion order.
  std::vector<std::pair<std::string, double>> measurements;

  bool chain_ran = false;
  bool separable = false;
  double max_cross_derivative = 0.0;
  double metric_reconstruction = 0.0;
  std::optional<FlatnessVerdict> base_verdict;
  /// Constant sectional curvature of the reduced fiber γ² g_F, and of g_F.
  std::optional<ConstantSectionalVerdict> reduced_fiber;
  std::optional<ConstantSectionalVerdict> original_fiber;
  std::optional<bool> predicted_dually_flat;

  FlatnessVerdict direct;
  /// Prediction and direct verdict agree (true when no prediction was made).
  bool agrees = true;
  std::string verdict;
};

/// Reduction under vanishing mixed Ricci curvature.
AnalysisRecord mixed_ricci_analysis(const ProductDualistic& pd, const AnalysisConfig& config);

/// Reduction when the product is Weyl conformal flat along one factor.
/// Throws DimensionError when n <= 2.
AnalysisRecord weyl_along_analysis(const ProductDualistic& pd, const AnalysisConfig& config);

/// Reduction when either the Weyl tensor is parallel with H^k(X) ≠ -X(k)∇k
/// and dim B ≠ 1, or H^k(X) = -X(k)∇k.
AnalysisRecord hessian_weyl_analysis(const ProductDualistic& pd, const AnalysisConfig& config);

}  // namespace dualgeom

#endif  // DUALGEOM_DUALISTIC_HPP
