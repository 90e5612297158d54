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

#ifndef DUALGEOM_SPEC_IO_HPP
#define DUALGEOM_SPEC_IO_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "dualgeom/connection.hpp"
#include "dualgeom/manifold.hpp"
#include "dualgeom/product.hpp"

namespace dualgeom {

/// SHA-256 of `bytes` as lowercase hex.
std::string sha256_hex(std::string_view bytes);

/// (source label, SHA-256) of every document read while loading.
using InputDigests = std::vector<std::pair<std::string, std::string>>;

struct ManifoldDocument {
  Manifold manifold;
  Connection connection;
  /// Present when the document declares a dual connection.
  std::optional<Connection> dual;
  InputDigests digests;
};

struct ProductDocument {
  ProductSpec product;
  ManifoldDocument base;
  ManifoldDocument fiber;
  InputDigests digests;
};

using SpecDocument = std::variant<ManifoldDocument, ProductDocument>;

/// Parses a manifold document:
///   {"name", "coords", "domain": [[lo, hi], ...], "metric": [[expr, ...], ...],
///    "connection": {"kind": "levi-civita"} | {"kind": "explicit", "gamma": {"k,i,j": expr}},
///    "dual_connection": optional, same shape}
/// Throws SpecError naming the offending field, and GeometryError when the
/// metric is not symmetric positive definite at the seeded samples.
ManifoldDocument parse_manifold(const nlohmann::json& doc, const std::string& source = "<inline>",
                                std::size_t samples = 64, std::uint64_t seed = 42);

/// Parses {"kind": "twisted_product", "base": path-or-inline, "fiber": path-or-inline,
/// "twist": expr}. Relative paths resolve against `dir`.
ProductDocument parse_product(const nlohmann::json& doc, const std::filesystem::path& dir,
                              const std::string& source = "<inline>", std::size_t samples = 64,
                              std::uint64_t seed = 42);

/// B ×_b F from two loaded factors and a twist expression over their joint
/// coordinates. Throws SpecError on a name clash or a malformed twist.
ProductDocument make_product_document(ManifoldDocument base, ManifoldDocument fiber,
                                      const std::string& twist, std::size_t samples = 64,
                                      std::uint64_t seed = 42,
                                      const std::string& source = "<twist>");

/// Reads a manifold or product document from disk.
SpecDocument load_spec(const std::filesystem::path& path, std::size_t samples = 64,
                       std::uint64_t seed = 42);

ManifoldDocument load_manifold(const std::filesystem::path& path, std::size_t samples = 64,
                               std::uint64_t seed = 42);
ProductDocument load_product(const std::filesystem::path& path, std::size_t samples = 64,
                             std::uint64_t seed = 42);

}  // namespace dualgeom

#endif  // DUALGEOM_SPEC_IO_HPP
