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

#include "dualgeom/connection.hpp"

#include <algorithm>
#include <cmath>
#include <span>

#include "dualgeom/error.hpp"

namespace dualgeom {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::LeviCivita:
      return "levi-civita";
    case Provenance::Explicit:
      return "explicit";
    case Provenance::ConjugateOf:
      return "conjugate-of";
    case Provenance::InducedProduct:
      return "induced-product";
  }
  return "unknown";
}

Connection::Connection(std::size_t dim, Provenance provenance, std::string label,
                       Provider provider)
    : dim_(dim),
      provenance_(provenance),
      label_(std::move(label)),
      provider_(std::make_shared<const Provider>(std::move(provider))) {}

Connection levi_civita(const Manifold& m) {
  const std::size_t n = m.dim();
  auto provider = [m, n](const Vector& p, bool with_derivatives) {
    const MetricJet mj = metric_jet(m, p, with_derivatives ? 2 : 1);
    // Christoffel symbols of the first kind, first(l, i, j) = Γ_lij.
    Tensor3 first(n);
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          first(l, i, j) = 0.5 * (mj.d[i](j, l) + mj.d[j](i, l) - mj.d[l](i, j));
    ConnectionJet out{Tensor3(n), {}};
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
          double s = 0.0;
          for (std::size_t l = 0; l < n; ++l) s += mj.inverse(k, l) * first(l, i, j);
          out.gamma(k, i, j) = s;
          out.gamma(k, j, i) = s;
        }
    if (!with_derivatives) return out;
    out.dgamma = Tensor4(n);
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t l = 0; l < n; ++l) {
              const double dfirst = 0.5 * (mj.dd[q * n + i](j, l) + mj.dd[q * n + j](i, l) -
                                           mj.dd[q * n + l](i, j));
              s += mj.dinv[q](k, l) * first(l, i, j) + mj.inverse(k, l) * dfirst;
            }
            out.dgamma(q, k, i, j) = s;
            out.dgamma(q, k, j, i) = s;
          }
    return out;
  };
  return Connection(n, Provenance::LeviCivita, "levi-civita(" + m.name() + ")",
                    std::move(provider));
}

Connection explicit_connection(const Manifold& m, const ExplicitEntries& entries,
                               std::string label) {
  const std::size_t n = m.dim();
  struct Entry {
    std::size_t k, i, j;
    Expr value;
    std::vector<Expr> derivative;
  };
  std::vector<Entry> table;
  for (const auto& [key, e] : entries) {
    if (key[0] >= n || key[1] >= n || key[2] >= n)
      throw GeometryError("connection index out of range for '" + m.name() + "'");
    Entry en{key[0], key[1], key[2], rebind(e, m.coords()), {}};
    for (std::size_t l = 0; l < n; ++l) en.derivative.push_back(differentiate(en.value, l));
    table.push_back(std::move(en));
  }
  auto provider = [m, n, table = std::move(table)](const Vector& p, bool with_derivatives) {
    if (!m.contains(p)) throw GeometryError("point outside the domain of '" + m.name() + "'");
    const std::span<const double> x(p.data(), n);
    ConnectionJet out{Tensor3(n), {}};
    if (with_derivatives) out.dgamma = Tensor4(n);
    for (const Entry& en : table) {
      out.gamma(en.k, en.i, en.j) = en.value.eval(x);
      if (with_derivatives)
        for (std::size_t l = 0; l < n; ++l)
          out.dgamma(l, en.k, en.i, en.j) = en.derivative[l].eval(x);
    }
    return out;
  };
  return Connection(n, Provenance::Explicit, std::move(label), std::move(provider));
}

Connection conjugate(const Connection& c, const Manifold& m) {
  if (c.dim() != m.dim()) throw GeometryError("connection and manifold dimensions differ");
  const std::size_t n = m.dim();
  auto provider = [c, m, n](const Vector& p, bool with_derivatives) {
    const MetricJet mj = metric_jet(m, p, with_derivatives ? 2 : 1);
    const ConnectionJet cj = with_derivatives ? c.jet(p) : ConnectionJet{c.coefficients(p), {}};
    // a(i, j, k) = ∂_i g_jk - Γ^m_ij g_mk
    Tensor3 a(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          double s = mj.d[i](j, k);
          for (std::size_t q = 0; q < n; ++q) s -= cj.gamma(q, i, j) * mj.g(q, k);
          a(i, j, k) = s;
        }
    ConnectionJet out{Tensor3(n), {}};
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
          double s = 0.0;
          for (std::size_t j = 0; j < n; ++j) s += mj.inverse(l, j) * a(i, j, k);
          out.gamma(l, i, k) = s;
        }
    if (!with_derivatives) return out;
    out.dgamma = Tensor4(n);
    for (std::size_t r = 0; r < n; ++r) {
      Tensor3 da(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t k = 0; k < n; ++k) {
            double s = mj.dd[r * n + i](j, k);
            for (std::size_t q = 0; q < n; ++q)
              s -= cj.dgamma(r, q, i, j) * mj.g(q, k) + cj.gamma(q, i, j) * mj.d[r](q, k);
            da(i, j, k) = s;
          }
      for (std::size_t l = 0; l < n; ++l)
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t k = 0; k < n; ++k) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j)
              s += mj.dinv[r](l, j) * a(i, j, k) + mj.inverse(l, j) * da(i, j, k);
            out.dgamma(r, l, i, k) = s;
          }
    }
    return out;
  };
  return Connection(n, Provenance::ConjugateOf, "conjugate-of(" + c.label() + ")",
                    std::move(provider));
}

double duality_residual(const Manifold& m, const Connection& c, const Connection& cstar,
                        const Vector& p) {
  const std::size_t n = m.dim();
  const MetricJet mj = metric_jet(m, p, 1);
  const Tensor3 g1 = c.coefficients(p);
  const Tensor3 g2 = cstar.coefficients(p);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        double s = mj.d[i](j, k);
        for (std::size_t q = 0; q < n; ++q)
          s -= g1(q, i, j) * mj.g(q, k) + g2(q, i, k) * mj.g(j, q);
        worst = std::max(worst, std::abs(s));
      }
  return worst;
}

Tensor3 torsion_at(const Connection& c, const Vector& p) {
  const std::size_t n = c.dim();
  const Tensor3 g = c.coefficients(p);
  Tensor3 t(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) t(k, i, j) = g(k, i, j) - g(k, j, i);
  return t;
}

namespace {

Tensor3 cubic_form(const MetricJet& mj, const Tensor3& gamma) {
  const std::size_t n = mj.dim();
  Tensor3 out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        double s = mj.d[i](j, k);
        for (std::size_t q = 0; q < n; ++q)
          s -= gamma(q, i, j) * mj.g(q, k) + gamma(q, i, k) * mj.g(j, q);
        out(i, j, k) = s;
      }
  return out;
}

double contract(const Tensor3& t, const Vector& x, const Vector& y, const Vector& z) {
  const std::size_t n = t.dim();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) s += t(i, j, k) * x(i) * y(j) * z(k);
  return s;
}

// g(T(X,Y),Z) as the trilinear form t(i, j, l) = T^k_ij g_kl.
Tensor3 lowered_torsion(const Tensor3& t, const Matrix& g) {
  const std::size_t n = t.dim();
  Tensor3 out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < n; ++l) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += t(k, i, j) * g(k, l);
        out(i, j, l) = s;
      }
  return out;
}

}  // namespace

Tensor3 cubic_form_at(const Manifold& m, const Connection& c, const Vector& p) {
  return cubic_form(metric_jet(m, p, 1), c.coefficients(p));
}

double torsion_relation_residual(const Manifold& m, const Connection& c,
                                 const Connection& cstar, const Vector& p, const Vector& x,
                                 const Vector& y, const Vector& z) {
  const MetricJet mj = metric_jet(m, p, 1);
  const double lhs = contract(lowered_torsion(torsion_at(c, p), mj.g), x, y, z);
  const Tensor3 cstar_form = cubic_form(mj, cstar.coefficients(p));
  const double rhs = contract(lowered_torsion(torsion_at(cstar, p), mj.g), x, y, z) +
                     contract(cstar_form, x, y, z) - contract(cstar_form, y, x, z);
  return std::abs(lhs - rhs);
}

StatisticalVerdict is_statistical(const Manifold& m, const Connection& c,
                                  const std::vector<Vector>& points, double tol) {
  const std::size_t n = m.dim();
  StatisticalVerdict v;
  for (const Vector& p : points) {
    v.max_torsion = std::max(v.max_torsion, max_abs(torsion_at(c, p).data()));
    const Tensor3 cf = cubic_form_at(m, c, p);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          v.max_cubic_asymmetry =
              std::max(v.max_cubic_asymmetry, std::abs(cf(i, j, k) - cf(j, i, k)));
  }
  v.statistical = v.max_torsion < tol && v.max_cubic_asymmetry < tol;
  return v;
}

double derivative_cross_check(const Manifold& m, const Connection& c, const Vector& p) {
  const std::size_t n = m.dim();
  const ConnectionJet cj = c.jet(p);
  double worst = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    const double h = 1e-4 * m.domain()[l].width();
    auto shifted = [&](double t) {
      Vector q = p;
      q(l) += t;
      return c.coefficients(q);
    };
    const Tensor3 m2 = shifted(-2 * h), m1 = shifted(-h), p1 = shifted(h), p2 = shifted(2 * h);
    for (std::size_t idx = 0; idx < n * n * n; ++idx) {
      const double fd = (m2.data()[idx] - 8 * m1.data()[idx] + 8 * p1.data()[idx] -
                         p2.data()[idx]) / (12 * h);
      worst = std::max(worst, std::abs(fd - cj.dgamma.data()[l * n * n * n + idx]));
    }
  }
  return worst;
}

}  // namespace dualgeom
