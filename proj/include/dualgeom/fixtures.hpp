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

#ifndef DUALGEOM_FIXTURES_HPP
#define DUALGEOM_FIXTURES_HPP

#include <array>
#include <map>
#include <string>
#include <vector>

#include "dualgeom/connection.hpp"
#include "dualgeom/manifold.hpp"

namespace dualgeom::fixtures {

// Built-in charts with known curvature. Domains keep every metric
// nondegenerate.

/// Flat R^d. Coordinates default to x0, x1, ...; domain [-1, 1]^d.
Manifold euclidean(std::size_t d, std::vector<std::string> coords = {},
                   Interval box = {-1.0, 1.0});

/// Unit sphere, g = diag(1, sin(th)^2), th in [0.3, 2.8], ph in [0, 6].
Manifold sphere2(std::string th = "th", std::string ph = "ph");

/// Upper half plane, g = diag(1/y^2, 1/y^2), x in [-1, 1], y in [0.5, 3].
Manifold hyperbolic2(std::string x = "x", std::string y = "y");

/// Fisher metric of the normal family in (mean, std. deviation):
/// g = diag(1/s^2, 2/s^2), m in [-1, 1], s in [0.5, 3].
Manifold fisher_normal(std::string m = "m", std::string s = "s");

/// Surface of revolution diag(1, (1 + 0.3 sin(th))^2 sin(th)^2); its
/// sectional curvature is not constant.
Manifold ellipsoid_like(std::string th = "th", std::string ph = "ph");

/// Torsion-free, generally non-metric explicit connection.
Connection symmetric_test_connection(const Manifold& m);

/// Explicit connection with nonzero torsion.
Connection torsionful_test_connection(const Manifold& m);

/// On flat R^1: Γ^0_00 = c.
Connection constant_connection(const Manifold& line, double c);

/// Totally symmetric covariant 3-tensor; one entry per index multiset, any
/// index order.
using CubicTensor = std::map<std::array<std::size_t, 3>, Expr>;

/// Γ^k_ij = Γ^k_ij(Levi-Civita) - ½ g^{kl} T_lij. Torsion-free with cubic
/// form T, hence statistical; its conjugate is the same construction with -T.
Connection statistical_connection(const Manifold& m, const CubicTensor& t, std::string label);

/// α-connection of the normal family in (mean, std. deviation), built from
/// the Amari-Chentsov tensor T_mms = 2/s^3, T_sss = 8/s^3. Flat for α = ±1.
Connection fisher_alpha_connection(const Manifold& fisher, double alpha);

}  // namespace dualgeom::fixtures

#endif  // DUALGEOM_FIXTURES_HPP
