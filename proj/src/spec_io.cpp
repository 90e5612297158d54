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

#include "dualgeom/spec_io.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <span>
#include <sstream>

#include <openssl/evp.h>

#include "dualgeom/error.hpp"

namespace dualgeom {

namespace {

using nlohmann::json;

const std::set<std::string> kReserved = {"sin", "cos",  "tan", "sinh", "cosh",
                                         "tanh", "exp", "log", "sqrt", "pi"};

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

[[noreturn]] void fail(const std::string& source, const std::string& field,
                       const std::string& reason) {
  throw SpecError(source + ": " + field + ": " + reason);
}

const json& require(const json& doc, const char* field, const std::string& source) {
  if (!doc.is_object()) fail(source, "<document>", "expected a JSON object");
  auto it = doc.find(field);
  if (it == doc.end()) fail(source, field, "missing required field");
  return *it;
}

std::string expression_text(const json& v, const std::string& source, const std::string& field) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  fail(source, field, "expected an expression string or a number");
}

Expr parse_field(const json& v, const std::vector<std::string>& coords, const std::string& source,
                 const std::string& field) {
  const std::string text = expression_text(v, source, field);
  try {
    return parse(text, coords);
  } catch (const ParseError& e) {
    fail(source, field, std::string("expression \"") + text + "\": " + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError(path.generic_string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& bytes, const std::string& source) {
  try {
    return json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw SpecError(source + ": invalid JSON: " + e.what());
  }
}

std::array<std::size_t, 3> gamma_key(const std::string& key, std::size_t dim,
                                     const std::string& source) {
  std::array<std::size_t, 3> out{};
  std::size_t pos = 0;
  for (std::size_t slot = 0; slot < 3; ++slot) {
    const std::size_t end = slot < 2 ? key.find(',', pos) : key.size();
    if (end == std::string::npos) fail(source, "gamma[\"" + key + "\"]", "key must be \"k,i,j\"");
    std::string part = key.substr(pos, end - pos);
    part.erase(0, part.find_first_not_of(' '));
    part.erase(part.find_last_not_of(' ') + 1);
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
      fail(source, "gamma[\"" + key + "\"]", "key must be \"k,i,j\" with integer indices");
    out[slot] = std::stoul(part);
    if (out[slot] >= dim)
      fail(source, "gamma[\"" + key + "\"]", "index out of range for dimension " +
                                                 std::to_string(dim));
    pos = end + 1;
  }
  return out;
}

Connection parse_connection(const json& c, const Manifold& m, const std::string& source,
                            const std::string& field) {
  if (!c.is_object()) fail(source, field, "expected an object with a \"kind\"");
  auto kind_it = c.find("kind");
  if (kind_it == c.end() || !kind_it->is_string()) fail(source, field + ".kind", "missing or not a string");
  const std::string kind = kind_it->get<std::string>();
  if (kind == "levi-civita") return levi_civita(m);
  if (kind != "explicit")
    fail(source, field + ".kind", "unknown connection kind \"" + kind + "\"");
  auto g_it = c.find("gamma");
  if (g_it == c.end() || !g_it->is_object()) fail(source, field + ".gamma", "expected an object");
  ExplicitEntries entries;
  for (auto it = g_it->begin(); it != g_it->end(); ++it) {
    const auto key = gamma_key(it.key(), m.dim(), source);
    entries[key] = parse_field(it.value(), m.coords(), source,
                               field + ".gamma[\"" + it.key() + "\"]");
  }
  return explicit_connection(m, entries, c.value("label", std::string("explicit")));
}

ManifoldDocument load_referenced(const json& ref, const std::filesystem::path& dir,
                                 const std::string& source, const std::string& field,
                                 std::size_t samples, std::uint64_t seed) {
  if (ref.is_string()) {
    std::filesystem::path path = ref.get<std::string>();
    if (path.is_relative()) path = dir / path;
    return load_manifold(path, samples, seed);
  }
  if (ref.is_object()) return parse_manifold(ref, source + "#" + field, samples, seed);
  fail(source, field, "expected a file path or an inline manifold object");
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

ManifoldDocument parse_manifold(const json& doc, const std::string& source, std::size_t samples,
                                std::uint64_t seed) {
  const json& name = require(doc, "name", source);
  if (!name.is_string()) fail(source, "name", "expected a string");

  const json& coords_j = require(doc, "coords", source);
  if (!coords_j.is_array() || coords_j.empty())
    fail(source, "coords", "expected a non-empty array of names");
  std::vector<std::string> coords;
  for (std::size_t i = 0; i < coords_j.size(); ++i) {
    const std::string field = "coords[" + std::to_string(i) + "]";
    if (!coords_j[i].is_string()) fail(source, field, "expected a string");
    std::string c = coords_j[i].get<std::string>();
    if (!is_identifier(c)) fail(source, field, "\"" + c + "\" is not an identifier");
    if (kReserved.count(c)) fail(source, field, "\"" + c + "\" is a reserved name");
    for (const auto& prev : coords)
      if (prev == c) fail(source, field, "duplicate coordinate \"" + c + "\"");
    coords.push_back(std::move(c));
  }
  const std::size_t n = coords.size();

  const json& dom = require(doc, "domain", source);
  if (!dom.is_array() || dom.size() != n)
    fail(source, "domain", "expected " + std::to_string(n) + " [lo, hi] pairs");
  std::vector<Interval> domain;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string field = "domain[" + std::to_string(i) + "]";
    const json& iv = dom[i];
    if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number())
      fail(source, field, "expected [lo, hi]");
    const Interval box{iv[0].get<double>(), iv[1].get<double>()};
    if (!std::isfinite(box.lo) || !std::isfinite(box.hi) || !(box.lo < box.hi))
      fail(source, field, "bounds must be finite with lo < hi");
    domain.push_back(box);
  }

  const json& met = require(doc, "metric", source);
  if (!met.is_array() || met.size() != n)
    fail(source, "metric", "expected a " + std::to_string(n) + "x" + std::to_string(n) + " array");
  std::vector<std::vector<Expr>> metric(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!met[i].is_array() || met[i].size() != n)
      fail(source, "metric[" + std::to_string(i) + "]",
           "expected a row of " + std::to_string(n) + " entries");
    for (std::size_t j = 0; j < n; ++j)
      metric[i].push_back(parse_field(met[i][j], coords, source,
                                      "metric[" + std::to_string(i) + "][" + std::to_string(j) + "]"));
  }

  Manifold m(name.get<std::string>(), coords, domain, metric);
  const std::vector<Vector> points = sample_points(m, samples, seed);
  for (const Vector& p : points) {
    const std::span<const double> x(p.data(), n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        double gij = 0.0, gji = 0.0;
        try {
          gij = metric[i][j].eval(x);
          gji = metric[j][i].eval(x);
        } catch (const DomainError& e) {
          fail(source, "metric", std::string("cannot evaluate on the domain: ") + e.what());
        }
        if (std::abs(gij - gji) >= 1e-12)
          fail(source, "metric", "not symmetric: entries [" + std::to_string(i) + "][" +
                                     std::to_string(j) + "] and [" + std::to_string(j) + "][" +
                                     std::to_string(i) + "] differ");
      }
  }
  try {
    validate_metric(m, points);
  } catch (const DomainError& e) {
    fail(source, "metric", std::string("cannot evaluate on the domain: ") + e.what());
  }

  ManifoldDocument out{m, levi_civita(m), std::nullopt, {}};
  if (auto it = doc.find("connection"); it != doc.end())
    out.connection = parse_connection(*it, m, source, "connection");
  if (auto it = doc.find("dual_connection"); it != doc.end())
    out.dual = parse_connection(*it, m, source, "dual_connection");
  return out;
}

ProductDocument parse_product(const json& doc, const std::filesystem::path& dir,
                              const std::string& source, std::size_t samples,
                              std::uint64_t seed) {
  const json& kind = require(doc, "kind", source);
  if (!kind.is_string() || kind.get<std::string>() != "twisted_product")
    fail(source, "kind", "expected \"twisted_product\"");
  ManifoldDocument base =
      load_referenced(require(doc, "base", source), dir, source, "base", samples, seed);
  ManifoldDocument fiber =
      load_referenced(require(doc, "fiber", source), dir, source, "fiber", samples, seed);
  const std::string twist = expression_text(require(doc, "twist", source), source, "twist");
  return make_product_document(std::move(base), std::move(fiber), twist, samples, seed, source);
}

ProductDocument make_product_document(ManifoldDocument base, ManifoldDocument fiber,
                                      const std::string& twist, std::size_t samples,
                                      std::uint64_t seed, const std::string& source) {
  std::vector<std::string> coords = base.manifold.coords();
  for (const auto& c : fiber.manifold.coords()) {
    for (const auto& b : base.manifold.coords())
      if (b == c) fail(source, "fiber", "coordinate \"" + c + "\" also names a base coordinate");
    coords.push_back(c);
  }
  Expr b;
  try {
    b = parse(twist, coords);
  } catch (const ParseError& e) {
    fail(source, "twist", std::string("expression \"") + twist + "\": " + e.what());
  }
  ProductDocument out{twisted_product(base.manifold, fiber.manifold, b, samples, seed),
                      std::move(base), std::move(fiber), {}};
  out.digests = out.base.digests;
  out.digests.insert(out.digests.end(), out.fiber.digests.begin(), out.fiber.digests.end());
  return out;
}

ManifoldDocument load_manifold(const std::filesystem::path& path, std::size_t samples,
                               std::uint64_t seed) {
  const std::string source = path.generic_string();
  const std::string bytes = read_file(path);
  ManifoldDocument out = parse_manifold(parse_json(bytes, source), source, samples, seed);
  out.digests.insert(out.digests.begin(), {source, sha256_hex(bytes)});
  return out;
}

ProductDocument load_product(const std::filesystem::path& path, std::size_t samples,
                             std::uint64_t seed) {
  const std::string source = path.generic_string();
  const std::string bytes = read_file(path);
  ProductDocument out =
      parse_product(parse_json(bytes, source), path.parent_path(), source, samples, seed);
  out.digests.insert(out.digests.begin(), {source, sha256_hex(bytes)});
  return out;
}

SpecDocument load_spec(const std::filesystem::path& path, std::size_t samples,
                       std::uint64_t seed) {
  const std::string source = path.generic_string();
  const json doc = parse_json(read_file(path), source);
  if (doc.is_object() && doc.contains("kind") && doc["kind"] == "twisted_product")
    return load_product(path, samples, seed);
  return load_manifold(path, samples, seed);
}

}  // namespace dualgeom
