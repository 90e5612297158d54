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

#ifndef DUALGEOM_COMMANDS_HPP
#define DUALGEOM_COMMANDS_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "dualgeom/connection.hpp"
#include "dualgeom/dualistic.hpp"
#include "dualgeom/manifold.hpp"
#include "dualgeom/product.hpp"
#include "dualgeom/report.hpp"
#include "dualgeom/spec_io.hpp"

namespace dualgeom {

struct RunConfig {
  std::size_t samples = 64;
  std::uint64_t seed = 42;
  double tol_exact = 1e-8;
  double tol_fd = 1e-4;
  /// Evaluation point for pointwise commands; the domain center otherwise.
  std::optional<Vector> point;
  std::optional<std::string> report_path;

  /// Throws SpecError unless samples >= 1 and both tolerances are positive.
  void validate() const;
  OrderedJson to_json() const;
};

/// Parses "c1,c2,..." into a point. Throws SpecError on malformed input.
Vector parse_point(const std::string& text);

// Check builders shared by the commands and the built-in suite. Every id is
// prefixed with `prefix` followed by '/' when the prefix is non-empty.

/// Metric validity, conjugacy, involution, cubic-form duality, torsion
/// relation, curvature duality, derivative cross-checks and the statistical
/// classification for (g, c, cstar). Without `cstar` the dual is conjugate(c, g).
void add_structure_checks(VerificationReport& rep, const std::string& prefix, const Manifold& m,
                          const Connection& c, const std::optional<Connection>& cstar,
                          const RunConfig& config);

/// Block Levi-Civita, curvature blocks, Ricci and Weyl blocks and the lift
/// identities of a twisted product.
void add_product_checks(VerificationReport& rep, const std::string& prefix, const ProductSpec& p,
                        const RunConfig& config);

/// Induced structure checks, projections, torsion inheritance, the direct
/// flatness verdict and the three flatness reductions.
void add_flatness_checks(VerificationReport& rep, const std::string& prefix,
                         const ProductDualistic& pd, const RunConfig& config);

VerificationReport cmd_check(const ManifoldDocument& doc, const RunConfig& config);
VerificationReport cmd_conjugate(const ManifoldDocument& doc, const RunConfig& config);
/// Throws DimensionError when `weyl` is set and dim <= 2.
VerificationReport cmd_curvature(const ManifoldDocument& doc, const RunConfig& config,
                                 bool weyl);
VerificationReport cmd_twist(const ProductDocument& doc, const RunConfig& config);
VerificationReport cmd_flatness(const ProductDocument& doc, const RunConfig& config);
/// The full built-in fixture suite.
VerificationReport cmd_verify_paper(const RunConfig& config);

/// Text form of an analysis record, one line per fact.
std::vector<std::string> describe(const AnalysisRecord& rec);
OrderedJson to_json(const AnalysisRecord& rec);
OrderedJson to_json(const FlatnessVerdict& v);

}  // namespace dualgeom

#endif  // DUALGEOM_COMMANDS_HPP
