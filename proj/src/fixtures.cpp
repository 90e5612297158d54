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

#include "dualgeom/fixtures.hpp"

#include <algorithm>
#include <cstdio>
#include <span>

#include "dualgeom/error.hpp"

namespace dualgeom::fixtures {

namespace {

std::vector<std::vector<Expr>> diagonal(const std::vector<std::string>& sources,
                                        const std::vector<std::string>& coords) {
  const std::size_t n = sources.size();
  std::vector<std::vector<Expr>> g(n, std::vector<Expr>(n, Expr::constant(0.0)));
  for (std::size_t i = 0; i < n; ++i) g[i][i] = parse(sources[i], coords);
  return g;
}

std::string sub(const char* pattern, const std::string& a, const std::string& b = "") {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a.c_str(), b.c_str());
  return buf;
}

}  // namespace

Manifold euclidean(std::size_t d, std::vector<std::string> coords, Interval box) {
  if (coords.empty())
    for (std::size_t i = 0; i < d; ++i) coords.push_back("x" + std::to_string(i));
  if (coords.size() != d) throw GeometryError("euclidean: coordinate count mismatch");
  return Manifold("Euclidean-" + std::to_string(d), coords, std::vector<Interval>(d, box),
                  diagonal(std::vector<std::string>(d, "1"), coords));
}

Manifold sphere2(std::string th, std::string ph) {
  std::vector<std::string> coords{th, ph};
  return Manifold("Sphere2", coords, {{0.3, 2.8}, {0.0, 6.0}},
                  diagonal({"1", sub("sin(%s)^2", th)}, coords));
}

Manifold hyperbolic2(std::string x, std::string y) {
  std::vector<std::string> coords{x, y};
  return Manifold("Hyperbolic2", coords, {{-1.0, 1.0}, {0.5, 3.0}},
                  diagonal({sub("1/%s^2", y), sub("1/%s^2", y)}, coords));
}

Manifold fisher_normal(std::string m, std::string s) {
  std::vector<std::string> coords{m, s};
  return Manifold("FisherNormal", coords, {{-1.0, 1.0}, {0.5, 3.0}},
                  diagonal({sub("1/%s^2", s), sub("2/%s^2", s)}, coords));
}

Manifold ellipsoid_like(std::string th, std::string ph) {
  std::vector<std::string> coords{th, ph};
  return Manifold("EllipsoidLike", coords, {{0.3, 2.8}, {0.0, 6.0}},
                  diagonal({"1", sub("(1 + 0.3*sin(%s))^2*sin(%s)^2", th, th)}, coords));
}

Connection symmetric_test_connection(const Manifold& m) {
  const auto& c = m.coords();
  ExplicitEntries e;
  if (m.dim() == 1) {
    e[{0, 0, 0}] = parse(sub("0.3*%s + 0.2", c[0]), c);
  } else {
    e[{0, 0, 0}] = parse(sub("0.3*%s", c[1]), c);
    e[{1, 0, 1}] = parse(sub("0.2*sin(%s)", c[0]), c);
    e[{1, 1, 0}] = parse(sub("0.2*sin(%s)", c[0]), c);
    e[{0, 1, 1}] = parse(sub("0.1*%s*%s", c[0], c[1]), c);
  }
  if (m.dim() >= 3) {
    e[{2, 0, 2}] = parse(sub("0.25*%s", c[2]), c);
    e[{2, 2, 0}] = parse(sub("0.25*%s", c[2]), c);
  }
  return explicit_connection(m, e, "symmetric-test(" + m.name() + ")");
}

Connection torsionful_test_connection(const Manifold& m) {
  const auto& c = m.coords();
  ExplicitEntries e;
  if (m.dim() == 1) {
    e[{0, 0, 0}] = parse(sub("cos(%s)", c[0]), c);
  } else {
    e[{0, 0, 1}] = parse(sub("0.5 + 0.1*%s", c[0]), c);
    e[{1, 0, 0}] = parse(sub("0.3*cos(%s)", c[1]), c);
    e[{1, 1, 0}] = parse("0.4", c);
  }
  if (m.dim() >= 3) e[{2, 1, 2}] = parse(sub("0.2*%s", c[0]), c);
  return explicit_connection(m, e, "torsionful-test(" + m.name() + ")");
}

Connection constant_connection(const Manifold& line, double c) {
  if (line.dim() != 1) throw GeometryError("constant_connection needs a 1-dimensional chart");
  ExplicitEntries e;
  e[{0, 0, 0}] = Expr::constant(c);
  return explicit_connection(line, e, "constant(" + std::to_string(c) + ")");
}

Connection statistical_connection(const Manifold& m, const CubicTensor& t, std::string label) {
  const std::size_t n = m.dim();
  // Symmetrized entries and their derivatives, t_full[(l*n + i)*n + j].
  std::vector<Expr> full(n * n * n, Expr::constant(0.0));
  for (const auto& [key, value] : t) {
    std::array<std::size_t, 3> idx = key;
    for (std::size_t v : idx)
      if (v >= n) throw GeometryError("statistical_connection: index out of range");
    std::sort(idx.begin(), idx.end());
    do {
      full[(idx[0] * n + idx[1]) * n + idx[2]] = value;
    } while (std::next_permutation(idx.begin(), idx.end()));
  }
  std::vector<Expr> dfull(n * full.size());
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t e = 0; e < full.size(); ++e) dfull[q * full.size() + e] = differentiate(full[e], q);

  const Connection lc = levi_civita(m);
  auto provider = [m, n, lc, full, dfull](const Vector& p, bool with_derivatives) {
    const std::span<const double> x(p.data(), n);
    ConnectionJet out = with_derivatives ? lc.jet(p) : ConnectionJet{lc.coefficients(p), {}};
    const MetricJet mj = metric_jet(m, p, with_derivatives ? 1 : 0);
    std::vector<double> tv(full.size());
    for (std::size_t e = 0; e < full.size(); ++e) tv[e] = full[e].eval(x);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          double s = 0.0;
          for (std::size_t l = 0; l < n; ++l) s += mj.inverse(k, l) * tv[(l * n + i) * n + j];
          out.gamma(k, i, j) -= 0.5 * s;
        }
    if (!with_derivatives) return out;
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t l = 0; l < n; ++l) {
              const std::size_t e = (l * n + i) * n + j;
              s += mj.dinv[q](k, l) * tv[e] + mj.inverse(k, l) * dfull[q * full.size() + e].eval(x);
            }
            out.dgamma(q, k, i, j) -= 0.5 * s;
          }
    return out;
  };
  return Connection(n, Provenance::Explicit, std::move(label), std::move(provider));
}

Connection fisher_alpha_connection(const Manifold& fisher, double alpha) {
  if (fisher.dim() != 2) throw GeometryError("fisher_alpha_connection needs a 2-dimensional chart");
  const auto& c = fisher.coords();
  const Expr a = Expr::constant(alpha);
  CubicTensor t;
  t[{0, 0, 1}] = a * parse(sub("2/%s^3", c[1]), c);
  t[{1, 1, 1}] = a * parse(sub("8/%s^3", c[1]), c);
  char label[64];
  std::snprintf(label, sizeof label, "alpha(%g)", alpha);
  return statistical_connection(fisher, t, label);
}

}  // namespace dualgeom::fixtures
