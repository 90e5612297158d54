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

#include "dualgeom/product.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <span>

#include "dualgeom/curvature.hpp"
#include "dualgeom/error.hpp"

namespace dualgeom {

namespace {

std::span<const double> as_span(const Vector& p) {
  return {p.data(), static_cast<std::size_t>(p.size())};
}

}  // namespace

std::string to_string(TwistClass c) {
  switch (c) {
    case TwistClass::Direct:
      return "direct";
    case TwistClass::Warped:
      return "warped";
    case TwistClass::ProperTwisted:
      return "proper-twisted";
  }
  return "unknown";
}

struct ProductSpec::Data {
  Manifold base;
  Manifold fiber;
  Manifold product;
  Expr twist;
  Expr k;
  TwistClass tag = TwistClass::Direct;
  std::vector<Expr> dk, ddk, db, ddb;
};

ProductSpec::ProductSpec(Manifold base, Manifold fiber, Expr twist) {
  std::vector<std::string> coords = base.coords();
  for (const auto& c : fiber.coords()) {
    if (std::find(coords.begin(), coords.end(), c) != coords.end())
      throw SpecError("coordinate '" + c + "' appears in both base and fiber");
    coords.push_back(c);
  }
  std::vector<Interval> domain = base.domain();
  domain.insert(domain.end(), fiber.domain().begin(), fiber.domain().end());

  const std::size_t r = base.dim(), s = fiber.dim(), n = r + s;
  twist = rebind(twist, coords);
  const Expr b2 = pow(twist, Expr::constant(2.0));
  std::vector<std::vector<Expr>> metric(n, std::vector<Expr>(n, Expr::constant(0.0)));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) metric[i][j] = rebind(base.metric(i, j), coords);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j)
      metric[r + i][r + j] = b2 * rebind(fiber.metric(i, j), coords);

  auto d = std::make_shared<Data>(Data{
      base, fiber,
      Manifold(base.name() + " x_b " + fiber.name(), coords, domain, std::move(metric)), twist,
      log(twist), TwistClass::Direct, {}, {}, {}, {}});

  const auto vars = variables(twist);
  if (vars.empty())
    d->tag = twist.is_constant(1.0) ? TwistClass::Direct : TwistClass::Warped;
  else if (std::any_of(vars.begin(), vars.end(), [r](std::size_t v) { return v >= r; }))
    d->tag = TwistClass::ProperTwisted;
  else
    d->tag = TwistClass::Warped;

  for (std::size_t mu = 0; mu < n; ++mu) {
    d->dk.push_back(differentiate(d->k, mu));
    d->db.push_back(differentiate(d->twist, mu));
  }
  for (std::size_t mu = 0; mu < n; ++mu)
    for (std::size_t nu = 0; nu < n; ++nu) {
      d->ddk.push_back(differentiate(d->dk[mu], nu));
      d->ddb.push_back(differentiate(d->db[mu], nu));
    }
  data_ = std::move(d);
}

const Manifold& ProductSpec::base() const { return data_->base; }
const Manifold& ProductSpec::fiber() const { return data_->fiber; }
const Manifold& ProductSpec::product() const { return data_->product; }
const Expr& ProductSpec::twist() const { return data_->twist; }
const Expr& ProductSpec::log_twist() const { return data_->k; }
TwistClass ProductSpec::classification() const { return data_->tag; }
const Expr& ProductSpec::dk(std::size_t mu) const { return data_->dk[mu]; }
const Expr& ProductSpec::ddk(std::size_t mu, std::size_t nu) const {
  return data_->ddk[mu * n() + nu];
}
const Expr& ProductSpec::db(std::size_t mu) const { return data_->db[mu]; }
const Expr& ProductSpec::ddb(std::size_t mu, std::size_t nu) const {
  return data_->ddb[mu * n() + nu];
}

ProductSpec twisted_product(const Manifold& base, const Manifold& fiber, std::string_view twist,
                            std::size_t samples, std::uint64_t seed) {
  std::vector<std::string> coords = base.coords();
  coords.insert(coords.end(), fiber.coords().begin(), fiber.coords().end());
  return twisted_product(base, fiber, parse(twist, coords), samples, seed);
}

ProductSpec twisted_product(const Manifold& base, const Manifold& fiber, const Expr& twist,
                            std::size_t samples, std::uint64_t seed) {
  ProductSpec p(base, fiber, twist);
  for (const Vector& x : sample_points(p.product(), samples, seed)) {
    double b = 0.0;
    try {
      b = p.twist().eval(as_span(x));
    } catch (const DomainError& e) {
      throw GeometryError(std::string("twisting function undefined on the product box: ") +
                          e.what());
    }
    if (!(b > 0.0))
      throw GeometryError("twisting function is not positive on the product box (b = " +
                          std::to_string(b) + ")");
  }
  return p;
}

Vector lift_horizontal(const ProductSpec& p, const Vector& base_vector) {
  Vector out = Vector::Zero(p.n());
  out.head(p.r()) = base_vector;
  return out;
}

Vector lift_vertical(const ProductSpec& p, const Vector& fiber_vector) {
  Vector out = Vector::Zero(p.n());
  out.tail(p.s()) = fiber_vector;
  return out;
}

Vector project_base(const ProductSpec& p, const Vector& v) { return v.head(p.r()); }
Vector project_fiber(const ProductSpec& p, const Vector& v) { return v.tail(p.s()); }

namespace {

// X·g(Y,Z) for coordinate-constant component vectors.
double directional_metric_derivative(const MetricJet& mj, const Vector& x, const Vector& y,
                                     const Vector& z) {
  double s = 0.0;
  for (std::size_t l = 0; l < mj.dim(); ++l) s += x(l) * y.dot(mj.d[l] * z);
  return s;
}

struct TwistJet {
  double b = 0.0;
  Vector dk, db;
  Matrix ddk, ddb;
};

TwistJet twist_jet(const ProductSpec& p, const Vector& x) {
  const std::size_t n = p.n();
  TwistJet t;
  t.b = p.twist().eval(as_span(x));
  t.dk.resize(n);
  t.db.resize(n);
  t.ddk.resize(n, n);
  t.ddb.resize(n, n);
  for (std::size_t mu = 0; mu < n; ++mu) {
    t.dk(mu) = p.dk(mu).eval(as_span(x));
    t.db(mu) = p.db(mu).eval(as_span(x));
    for (std::size_t nu = 0; nu < n; ++nu) {
      t.ddk(mu, nu) = p.ddk(mu, nu).eval(as_span(x));
      t.ddb(mu, nu) = p.ddb(mu, nu).eval(as_span(x));
    }
  }
  return t;
}

}  // namespace

LiftResidual lift_check(const ProductSpec& p, const std::vector<Vector>& points,
                                   std::uint64_t seed) {
  Rng rng(seed);
  LiftResidual out;
  for (const Vector& x : points) {
    const MetricJet gp = metric_jet(p.product(), x, 1);
    const MetricJet gb = metric_jet(p.base(), p.base_part(x), 1);
    const MetricJet gf = metric_jet(p.fiber(), p.fiber_part(x), 1);
    const double b = p.twist().eval(as_span(x));
    const Vector bx = rng.vector(p.r()), by = rng.vector(p.r()), bz = rng.vector(p.r());
    const Vector fu = rng.vector(p.s()), fv = rng.vector(p.s()), fw = rng.vector(p.s());
    const double lhs_b = directional_metric_derivative(gb, bx, by, bz);
    const double rhs_b = directional_metric_derivative(
        gp, lift_horizontal(p, bx), lift_horizontal(p, by), lift_horizontal(p, bz));
    out.base = std::max(out.base, std::abs(lhs_b - rhs_b));
    const double lhs_f = directional_metric_derivative(gf, fu, fv, fw);
    const double rhs_f = directional_metric_derivative(gp, lift_vertical(p, fu),
                                                       lift_vertical(p, fv), lift_vertical(p, fw));
    out.fiber_weighted = std::max(out.fiber_weighted, std::abs(lhs_f - rhs_f / (b * b)));
    out.fiber_unweighted = std::max(out.fiber_unweighted, std::abs(lhs_f - rhs_f));
  }
  return out;
}

Tensor3 block_levi_civita(const ProductSpec& p, const Vector& x) {
  const std::size_t r = p.r(), s = p.s(), n = p.n();
  const Tensor3 gb = levi_civita(p.base()).coefficients(p.base_part(x));
  const Tensor3 gf = levi_civita(p.fiber()).coefficients(p.fiber_part(x));
  const MetricJet mj = metric_jet(p.product(), x, 0);
  Vector dk(n);
  for (std::size_t mu = 0; mu < n; ++mu) dk(mu) = p.dk(mu).eval(as_span(x));
  const Vector grad = mj.inverse * dk;

  Tensor3 out(n);
  for (std::size_t c = 0; c < r; ++c)
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < r; ++b) out(c, a, b) = gb(c, a, b);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t al = 0; al < s; ++al) {
      out(r + al, a, r + al) = dk(a);
      out(r + al, r + al, a) = dk(a);
    }
  for (std::size_t al = 0; al < s; ++al)
    for (std::size_t be = 0; be < s; ++be) {
      const double guv = mj.g(r + al, r + be);
      for (std::size_t c = 0; c < r; ++c) out(c, r + al, r + be) = -guv * grad(c);
      for (std::size_t ga = 0; ga < s; ++ga) {
        double v = gf(ga, al, be) - guv * grad(r + ga);
        if (ga == be) v += dk(r + al);
        if (ga == al) v += dk(r + be);
        out(r + ga, r + al, r + be) = v;
      }
    }
  return out;
}

double block_levi_civita_defect(const ProductSpec& p, const Vector& x) {
  return max_abs_diff(block_levi_civita(p, x), levi_civita(p.product()).coefficients(x));
}

HessianData hessian_at(const ProductSpec& p, const Vector& x) {
  const std::size_t r = p.r(), s = p.s(), n = p.n();
  const TwistJet t = twist_jet(p, x);
  const Tensor3 gb = levi_civita(p.base()).coefficients(p.base_part(x));
  const Tensor3 gp = levi_civita(p.product()).coefficients(x);
  const MetricJet mj = metric_jet(p.product(), x, 0);

  HessianData h;
  h.point = x;
  h.base_block.resize(r, r);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b) {
      double v = t.ddk(a, b);
      for (std::size_t c = 0; c < r; ++c) v -= gb(c, a, b) * t.dk(c);
      h.base_block(a, b) = v;
    }
  h.mixed_block.resize(r, s);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t al = 0; al < s; ++al)
      h.mixed_block(a, al) = t.ddk(a, r + al) - t.dk(a) * t.dk(r + al);
  h.full.resize(n, n);
  for (std::size_t mu = 0; mu < n; ++mu)
    for (std::size_t nu = 0; nu < n; ++nu) {
      double v = t.ddk(mu, nu);
      for (std::size_t rho = 0; rho < n; ++rho) v -= gp(rho, mu, nu) * t.dk(rho);
      h.full(mu, nu) = v;
    }
  h.hessian_operator = mj.inverse * h.full.transpose();
  h.gradient = mj.inverse * t.dk;
  return h;
}

std::vector<BlockResidual> curvature_block_report(const ProductSpec& p,
                                                  const Connection& product_connection,
                                                  const Connection& base_connection,
                                                  const Connection& fiber_connection,
                                                  const std::vector<Vector>& points,
                                                  std::uint64_t seed, double tol) {
  const std::size_t r = p.r(), s = p.s(), n = p.n();
  struct Row {
    const char* block;
    const char* formula;
    int group;
  };
  static const std::array<Row, 8> rows{{
      {"R(X,Y)Z", "R_B(X,Y)Z", 0},
      {"R(X,Y)U", "0", 1},
      {"R(X,U)Y", "(h^b_B(X,Y)/b) U", 2},
      {"R(U,V)X", "UX(k)V - VX(k)U", 3},
      {"R(X,U)V", "[X(k)V(k) + h^k(X,V)]U - g(U,V)[X(k)grad k + H^k(X)]", 4},
      {"R(X,U)V", "[VX(k)]U - g(U,V)[nabla^B_X(grad_B b)/b + grad_F(X(k))]", 4},
      {"R(U,V)W",
       "R_F(U,V)W + g(U,W)grad_B(V(k)) - g(V,U)grad_B(U(k)) - |grad_B b|^2/b^2 [g(V,W)U - "
       "g(U,W)V]",
       5},
      {"R(U,V)W",
       "R_F(U,V)W + g(U,W)grad_B(V(k)) - g(V,W)grad_B(U(k)) - |grad_B b|^2/b^2 [g(V,W)U - "
       "g(U,W)V]",
       5},
  }};
  std::array<double, rows.size()> worst{};

  Rng rng(seed);
  for (const Vector& x : points) {
    const Vector pb = p.base_part(x), pf = p.fiber_part(x);
    const Tensor4 rp = riemann_at(product_connection, x);
    const Tensor4 rb = riemann_at(base_connection, pb);
    const Tensor4 rf = riemann_at(fiber_connection, pf);
    const Tensor3 gam_b = base_connection.coefficients(pb);
    const Tensor3 gam_p = product_connection.coefficients(x);
    const MetricJet gp = metric_jet(p.product(), x, 0);
    const MetricJet gb = metric_jet(p.base(), pb, 1);
    const MetricJet gf = metric_jet(p.fiber(), pf, 0);
    const TwistJet t = twist_jet(p, x);

    // Hessians: of b on the base (base connection), of k on the product.
    Matrix hb(r, r);
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t c = 0; c < r; ++c) {
        double v = t.ddb(a, c);
        for (std::size_t e = 0; e < r; ++e) v -= gam_b(e, a, c) * t.db(e);
        hb(a, c) = v;
      }
    Matrix hk(n, n);
    for (std::size_t mu = 0; mu < n; ++mu)
      for (std::size_t nu = 0; nu < n; ++nu) {
        double v = t.ddk(mu, nu);
        for (std::size_t rho = 0; rho < n; ++rho) v -= gam_p(rho, mu, nu) * t.dk(rho);
        hk(mu, nu) = v;
      }
    const Matrix hk_op = gp.inverse * hk.transpose();
    const Vector grad_k = gp.inverse * t.dk;
    const Vector db_base = t.db.head(r);
    const Vector grad_b = gb.inverse * db_base;
    const double grad_b_sq = db_base.dot(grad_b);
    // ∂_a of grad_B b, column a.
    Matrix dgrad_b(r, r);
    for (std::size_t a = 0; a < r; ++a)
      dgrad_b.col(a) = gb.dinv[a] * db_base + gb.inverse * t.ddb.block(a, 0, 1, r).transpose();

    for (int rep = 0; rep < 2; ++rep) {
      const Vector bx = rng.vector(r), by = rng.vector(r), bz = rng.vector(r);
      const Vector fu = rng.vector(s), fv = rng.vector(s), fw = rng.vector(s);
      const Vector X = lift_horizontal(p, bx), Y = lift_horizontal(p, by),
                   Z = lift_horizontal(p, bz);
      const Vector U = lift_vertical(p, fu), V = lift_vertical(p, fv), W = lift_vertical(p, fw);
      const Matrix mixed = t.ddk.block(0, r, r, s);  // ∂_a ∂_α k
      auto XV = [&](const Vector& xb, const Vector& vf) { return xb.dot(mixed * vf); };
      auto gpr = [&](const Vector& a, const Vector& b) { return a.dot(gp.g * b); };
      auto Xk = [&](const Vector& v) { return t.dk.dot(v); };
      auto grad_B_of_Vk = [&](const Vector& vf) {
        return lift_horizontal(p, Vector(gb.inverse * (mixed * vf)));
      };
      auto grad_F_of_Xk = [&](const Vector& xb) {
        return lift_vertical(p, Vector(gf.inverse * (mixed.transpose() * xb)));
      };

      std::array<Vector, rows.size()> direct, formula;
      direct[0] = apply_curvature(rp, X, Y, Z);
      formula[0] = lift_horizontal(p, apply_curvature(rb, bx, by, bz));
      direct[1] = apply_curvature(rp, X, Y, U);
      formula[1] = Vector::Zero(n);
      direct[2] = apply_curvature(rp, X, U, Y);
      formula[2] = (bx.dot(hb * by) / t.b) * U;
      direct[3] = apply_curvature(rp, U, V, X);
      formula[3] = XV(bx, fu) * V - XV(bx, fv) * U;
      direct[4] = apply_curvature(rp, X, U, V);
      formula[4] = (Xk(X) * Xk(V) + X.dot(hk * V)) * U -
                   gpr(U, V) * (Xk(X) * grad_k + hk_op * X);
      direct[5] = direct[4];
      {
        Vector nabla_x_grad_b = dgrad_b * bx;
        for (std::size_t c = 0; c < r; ++c)
          for (std::size_t a = 0; a < r; ++a)
            for (std::size_t d = 0; d < r; ++d)
              nabla_x_grad_b(c) += bx(a) * gam_b(c, a, d) * grad_b(d);
        formula[5] = XV(bx, fv) * U - gpr(U, V) * (lift_horizontal(p, Vector(nabla_x_grad_b / t.b)) +
                                                   grad_F_of_Xk(bx));
      }
      direct[6] = apply_curvature(rp, U, V, W);
      direct[7] = direct[6];
      const Vector rfw = lift_vertical(p, apply_curvature(rf, fu, fv, fw));
      const Vector tail = (grad_b_sq / (t.b * t.b)) * (gpr(V, W) * U - gpr(U, W) * V);
      formula[6] = rfw + gpr(U, W) * grad_B_of_Vk(fv) - gpr(V, U) * grad_B_of_Vk(fu) - tail;
      formula[7] = rfw + gpr(U, W) * grad_B_of_Vk(fv) - gpr(V, W) * grad_B_of_Vk(fu) - tail;

      for (std::size_t i = 0; i < rows.size(); ++i)
        worst[i] = std::max(worst[i], max_abs(Vector(direct[i] - formula[i])));
    }
  }

  std::vector<BlockResidual> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    BlockResidual br;
    br.block = rows[i].block;
    br.formula = rows[i].formula;
    br.max_residual = worst[i];
    br.tolerance = tol;
    br.pass = worst[i] < tol;
    for (std::size_t j = 0; j < rows.size(); ++j)
      if (j != i && rows[j].group == rows[i].group &&
          (worst[j] < worst[i] || (worst[j] == worst[i] && j < i)))
        br.adopted = false;
    out.push_back(std::move(br));
  }
  return out;
}

std::vector<BlockResidual> curvature_block_report(const ProductSpec& p,
                                                  const std::vector<Vector>& points,
                                                  std::uint64_t seed, double tol) {
  return curvature_block_report(p, levi_civita(p.product()), levi_civita(p.base()),
                                levi_civita(p.fiber()), points, seed, tol);
}

MixedRicci mixed_ricci_at(const ProductSpec& p, const Vector& x, const Vector& base_vector,
                          const Vector& fiber_vector) {
  const Matrix ric = ricci_at(p.product(), levi_civita(p.product()), x);
  const Vector X = lift_horizontal(p, base_vector), V = lift_vertical(p, fiber_vector);
  const TwistJet t = twist_jet(p, x);
  MixedRicci out;
  out.direct = X.dot(ric * V);
  out.closed_form = (static_cast<double>(p.s()) - 1.0) * X.dot(t.ddk * V);
  return out;
}

MixedRicciSummary mixed_ricci_summary(const ProductSpec& p, const std::vector<Vector>& points) {
  const std::size_t r = p.r(), s = p.s();
  const Connection lc = levi_civita(p.product());
  MixedRicciSummary out;
  for (const Vector& x : points) {
    const Matrix ric = ricci_at(p.product(), lc, x);
    const TwistJet t = twist_jet(p, x);
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t al = 0; al < s; ++al) {
        const double direct = ric(a, r + al);
        const double closed = (static_cast<double>(s) - 1.0) * t.ddk(a, r + al);
        out.max_direct = std::max(out.max_direct, std::abs(direct));
        out.max_closed_form = std::max(out.max_closed_form, std::abs(closed));
        out.max_same_sign_defect = std::max(out.max_same_sign_defect, std::abs(direct - closed));
        out.max_opposite_sign_defect =
            std::max(out.max_opposite_sign_defect, std::abs(direct + closed));
      }
  }
  if (out.max_direct > 1e-9 || out.max_closed_form > 1e-9)
    out.sign = out.max_same_sign_defect <= out.max_opposite_sign_defect ? 1 : -1;
  return out;
}

double ricci_base_block_residual(const ProductSpec& p, const std::vector<Vector>& points) {
  const std::size_t r = p.r();
  const double s = static_cast<double>(p.s());
  const Connection lc = levi_civita(p.product());
  const Connection lcb = levi_civita(p.base());
  double worst = 0.0;
  for (const Vector& x : points) {
    const Matrix ric = ricci_at(p.product(), lc, x);
    const Matrix ricb = ricci_at(p.base(), lcb, p.base_part(x));
    const HessianData h = hessian_at(p, x);
    const TwistJet t = twist_jet(p, x);
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < r; ++b) {
        const double formula = ricb(a, b) - s * (h.base_block(a, b) + t.dk(a) * t.dk(b));
        worst = std::max(worst, std::abs(ric(a, b) - formula));
      }
  }
  return worst;
}

MixedWeylReport mixed_weyl_report(const ProductSpec& p, const std::vector<Vector>& points,
                                  double tol) {
  const std::size_t r = p.r(), s = p.s(), n = p.n();
  if (n <= 2) throw DimensionError("mixed Weyl blocks need n >= 3, got " + std::to_string(n));
  const Connection lc = levi_civita(p.product());
  const double cxy = (1.0 - static_cast<double>(s)) / static_cast<double>(n - 2);
  const double cvw = (static_cast<double>(r) - 1.0) / static_cast<double>(n - 2);
  MixedWeylReport out;
  for (const Vector& x : points) {
    const Tensor4 c = weyl_at(p.product(), lc, x);
    const TwistJet t = twist_jet(p, x);
    auto column = [&](std::size_t i, std::size_t j, std::size_t k) {
      Vector v(n);
      for (std::size_t l = 0; l < n; ++l) v(l) = c(l, i, j, k);
      return v;
    };
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < r; ++b)
        for (std::size_t al = 0; al < s; ++al) {
          const Vector direct = column(a, b, r + al);
          Vector formula = Vector::Zero(n);
          formula(b) += cxy * t.ddk(a, r + al);
          formula(a) -= cxy * t.ddk(b, r + al);
          out.max_c_xyv = std::max(out.max_c_xyv, max_abs(direct));
          out.residual_xyv = std::max(out.residual_xyv, max_abs(Vector(direct - formula)));
        }
    for (std::size_t al = 0; al < s; ++al)
      for (std::size_t be = 0; be < s; ++be)
        for (std::size_t a = 0; a < r; ++a) {
          const Vector direct = column(r + al, r + be, a);
          Vector formula = Vector::Zero(n);
          formula(r + be) += cvw * t.ddk(a, r + al);
          formula(r + al) -= cvw * t.ddk(a, r + be);
          out.max_c_vwx = std::max(out.max_c_vwx, max_abs(direct));
          out.residual_vwx = std::max(out.residual_vwx, max_abs(Vector(direct - formula)));
        }
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t al = 0; al < s; ++al)
        for (std::size_t mu = 0; mu < n; ++mu)
          out.max_c_xv = std::max(out.max_c_xv, max_abs(column(a, r + al, mu)));
  }
  out.mixed_weyl_flat = out.max_c_xv < tol;
  out.fiber_flat_along_base = out.max_c_xyv < tol;
  out.base_flat_along_fiber = out.max_c_vwx < tol;
  return out;
}

Separability separability_test(const ProductSpec& p, const std::vector<Vector>& points,
                               double tol) {
  const std::size_t r = p.r(), s = p.s();
  Separability out;
  out.anchor = p.product().center();
  const Expr& k = p.log_twist();
  out.anchor_value = k.eval(as_span(out.anchor));
  for (const Vector& x : points) {
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t al = 0; al < s; ++al)
        out.max_cross_derivative = std::max(out.max_cross_derivative,
                                            std::abs(p.ddk(a, r + al).eval(as_span(x))));
    Vector xq = out.anchor, px = out.anchor;
    xq.head(r) = x.head(r);
    px.tail(s) = x.tail(s);
    const double alpha = k.eval(as_span(xq)) - 0.5 * out.anchor_value;
    const double beta = k.eval(as_span(px)) - 0.5 * out.anchor_value;
    out.alpha.push_back(alpha);
    out.beta.push_back(beta);
    out.reconstruction_residual =
        std::max(out.reconstruction_residual, std::abs(k.eval(as_span(x)) - alpha - beta));
  }
  out.separable = out.max_cross_derivative < tol;
  return out;
}

ProductSpec to_warped(const ProductSpec& p, const Separability& sep) {
  if (!sep.separable)
    throw GeometryError("twisting function is not separable; no warped form exists");
  const std::size_t r = p.r(), s = p.s();
  const Expr half = Expr::constant(0.5 * sep.anchor_value);
  Expr alpha = p.log_twist();
  for (std::size_t al = 0; al < s; ++al) alpha = substitute(alpha, r + al, sep.anchor(r + al));
  alpha = alpha - half;
  Expr beta = p.log_twist();
  for (std::size_t a = 0; a < r; ++a) beta = substitute(beta, a, sep.anchor(a));
  beta = rebind(beta - half, p.fiber().coords());

  const Expr gamma2 = exp(Expr::constant(2.0) * beta);
  std::vector<std::vector<Expr>> metric(s, std::vector<Expr>(s));
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) metric[i][j] = gamma2 * p.fiber().metric(i, j);
  Manifold fiber(p.fiber().name() + "~", p.fiber().coords(), p.fiber().domain(),
                 std::move(metric));
  return ProductSpec(p.base(), fiber, exp(alpha));
}

double metric_reconstruction_residual(const ProductSpec& a, const ProductSpec& b,
                                      const std::vector<Vector>& points) {
  double worst = 0.0;
  for (const Vector& x : points)
    worst = std::max(worst, max_abs(Matrix(metric_at(a.product(), x) - metric_at(b.product(), x))));
  return worst;
}

HessianCondition hessian_condition_defect(const ProductSpec& p, const std::vector<Vector>& points,
                                          double tol) {
  HessianCondition out;
  for (const Vector& x : points) {
    const HessianData h = hessian_at(p, x);
    Vector dk(p.n());
    for (std::size_t mu = 0; mu < p.n(); ++mu) dk(mu) = p.dk(mu).eval(as_span(x));
    for (std::size_t a = 0; a < p.r(); ++a) {
      const Vector defect = h.hessian_operator.col(a) + dk(a) * h.gradient;
      out.max_defect = std::max(out.max_defect, max_abs(defect));
    }
  }
  out.holds = out.max_defect < tol;
  return out;
}

double weyl_parallel_defect(const ProductSpec& p, const std::vector<Vector>& points) {
  const std::size_t n = p.n();
  if (n <= 3) throw DimensionError("Weyl parallelism check needs n >= 4, got " + std::to_string(n));
  const Manifold& m = p.product();
  const Connection lc = levi_civita(m);
  double worst = 0.0;
  for (const Vector& x : points) {
    const Tensor3 gam = lc.coefficients(x);
    const Tensor4 c = weyl_at(m, lc, x);
    for (std::size_t q = 0; q < n; ++q) {
      const double h = 1e-4 * m.domain()[q].width();
      auto at = [&](double t) {
        Vector y = x;
        y(q) += t;
        return weyl_at(m, lc, y);
      };
      const Tensor4 m2 = at(-2 * h), m1 = at(-h), p1 = at(h), p2 = at(2 * h);
      for (std::size_t l = 0; l < n; ++l)
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
              double v = (m2(l, i, j, k) - 8 * m1(l, i, j, k) + 8 * p1(l, i, j, k) -
                          p2(l, i, j, k)) / (12 * h);
              for (std::size_t e = 0; e < n; ++e)
                v += gam(l, q, e) * c(e, i, j, k) - gam(e, q, i) * c(l, e, j, k) -
                     gam(e, q, j) * c(l, i, e, k) - gam(e, q, k) * c(l, i, j, e);
              worst = std::max(worst, std::abs(v));
            }
    }
  }
  return worst;
}

}  // namespace dualgeom
