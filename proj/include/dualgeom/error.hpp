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

#ifndef DUALGEOM_ERROR_HPP
#define DUALGEOM_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dualgeom {

/// Malformed expression source. position() is a zero-based byte offset.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Evaluation left the domain of an elementary function (log, sqrt, division
/// by zero, overflow).
class DomainError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Singular or non-positive-definite metric, degenerate plane, bad manifold.
class GeometryError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Operation undefined in the given dimension (e.g. Weyl tensor for m <= 2).
class DimensionError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A claimed conjugate pair fails the duality identity.
class ConjugacyError : public std::runtime_error {
 public:
  ConjugacyError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Invalid input document (schema violation, name clash, ...).
class SpecError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dualgeom

#endif  // DUALGEOM_ERROR_HPP
