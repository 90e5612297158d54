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

#ifndef DUALGEOM_CONNECTION_HPP
#define DUALGEOM_CONNECTION_HPP

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dualgeom/expr.hpp"
#include "dualgeom/manifold.hpp"
#include "dualgeom/tensor.hpp"

namespace dualgeom {

enum class Provenance { LeviCivita, Explicit, ConjugateOf, InducedProduct };

std::string to_string(Provenance p);

/// Connection coefficients at a point. gamma(k, i, j) = Γ^k_ij with
/// ∇_{∂_i} ∂_j = Γ^k_ij ∂_k; dgamma(l, k, i, j) = ∂_l Γ^k_ij.
struct ConnectionJet {
  Tensor3 gamma;
  Tensor4 dgamma;
};

/// An affine connection on a chart, given by a provider of its coefficients
/// and their exact first derivatives.
class Connection {
 public:
  /// The provider fills dgamma only when `with_derivatives` is set.
  using Provider = std::function<ConnectionJet(const Vector& p, bool with_derivatives)>;

  Connection(std::size_t dim, Provenance provenance, std::string label, Provider provider);

  std::size_t dim() const { return dim_; }
  Provenance provenance() const { return provenance_; }
  const std::string& label() const { return label_; }

  Tensor3 coefficients(const Vector& p) const { return (*provider_)(p, false).gamma; }
  ConnectionJet jet(const Vector& p) const { return (*provider_)(p, true); }

 private:
  std::size_t dim_;
  Provenance provenance_;
  std::string label_;
  std::shared_ptr<const Provider> provider_;
};

/// Sparse explicit coefficients keyed by (k, i, j); missing entries are zero.
using ExplicitEntries = std::map<std::array<std::size_t, 3>, Expr>;

Connection levi_civita(const Manifold& m);

Connection explicit_connection(const Manifold& m, const ExplicitEntries& entries,
                               std::string label = "explicit");

/// The g-conjugate connection, Γ*^l_ik = g^{lj}(∂_i g_jk - Γ^m_ij g_mk),
/// evaluated pointwise from the metric jet and the jet of `c`.
Connection conjugate(const Connection& c, const Manifold& m);

/// max_{i,j,k} |∂_i g_jk - Γ^m_ij g_mk - Γ*^m_ik g_jm|; zero iff the pair is
/// conjugate at p.
double duality_residual(const Manifold& m, const Connection& c, const Connection& cstar,
                        const Vector& p);

/// T^k_ij = Γ^k_ij - Γ^k_ji, stored as (k, i, j).
Tensor3 torsion_at(const Connection& c, const Vector& p);

/// (∇g)(∂_i, ∂_j, ∂_k) = ∂_i g_jk - Γ^m_ij g_mk - Γ^m_ik g_jm, stored as (i, j, k).
Tensor3 cubic_form_at(const Manifold& m, const Connection& c, const Vector& p);

/// |g(T(X,Y),Z) - g(T*(X,Y),Z) - (∇*g)(X,Y,Z) + (∇*g)(Y,X,Z)|
double torsion_relation_residual(const Manifold& m, const Connection& c,
                                 const Connection& cstar, const Vector& p, const Vector& x,
                                 const Vector& y, const Vector& z);

struct StatisticalVerdict {
  bool statistical = false;
  double max_torsion = 0.0;
  /// max |C_ijk - C_jik| of the cubic form.
  double max_cubic_asymmetry = 0.0;
};

/// Torsion-free with a totally symmetric cubic form, at every point given.
StatisticalVerdict is_statistical(const Manifold& m, const Connection& c,
                                  const std::vector<Vector>& points, double tol);

/// max |∂Γ - FD(Γ)| at p, with a 4th-order central difference of step
/// 1e-4 times each coordinate's domain width.
double derivative_cross_check(const Manifold& m, const Connection& c, const Vector& p);

}  // namespace dualgeom

#endif  // DUALGEOM_CONNECTION_HPP
