#include "qg5/metric.hpp"

#include <cmath>

#include "qg5/errors.hpp"
#include "qg5/rng.hpp"

namespace qg5::sym {

MetricTensor::MetricTensor(int dim) : dim_(dim) {
  if (dim < 1 || dim > 8) throw Error("MetricTensor: dim out of range");
  comp_.assign(static_cast<size_t>(dim * dim), SymExpr());
}

MetricTensor MetricTensor::diagonal(const std::vector<SymExpr>& diag) {
  MetricTensor g(static_cast<int>(diag.size()));
  for (int i = 0; i < g.dim_; ++i) g.set(i, i, diag[static_cast<size_t>(i)]);
  return g;
}

MetricTensor MetricTensor::minkowski(int dim) {
  std::vector<SymExpr> d;
  d.push_back(SymExpr::constant(Rational(1)));
  for (int i = 1; i < dim; ++i) d.push_back(SymExpr::constant(Rational(-1)));
  return diagonal(d);
}

void MetricTensor::set(int i, int j, const SymExpr& e) {
  comp_[static_cast<size_t>(i * dim_ + j)] = e;
  comp_[static_cast<size_t>(j * dim_ + i)] = e;
}

namespace {

SymExpr det_recursive(const std::vector<SymExpr>& m, std::vector<int> rows,
                      std::vector<int> cols, int dim) {
  if (rows.size() == 1)
    return m[static_cast<size_t>(rows[0] * dim + cols[0])];
  std::vector<SymExpr> terms;
  int r = rows[0];
  std::vector<int> sub_rows(rows.begin() + 1, rows.end());
  for (size_t ci = 0; ci < cols.size(); ++ci) {
    const SymExpr& e = m[static_cast<size_t>(r * dim + cols[ci])];
    if (e.is_zero()) continue;
    std::vector<int> sub_cols;
    for (size_t cj = 0; cj < cols.size(); ++cj)
      if (cj != ci) sub_cols.push_back(cols[cj]);
    SymExpr minor = det_recursive(m, sub_rows, sub_cols, dim);
    SymExpr term = e * minor;
    terms.push_back(ci % 2 == 0 ? term : -term);
  }
  return SymExpr::sum(std::move(terms)).normalized();
}

}  // namespace

SymExpr MetricTensor::determinant() const {
  std::vector<int> idx;
  for (int i = 0; i < dim_; ++i) idx.push_back(i);
  return det_recursive(comp_, idx, idx, dim_);
}

MetricTensor MetricTensor::inverse() const {
  SymExpr det = determinant();
  if (det.is_zero()) throw SingularMetric("MetricTensor: zero determinant");
  SymExpr det_inv = det.inv();
  MetricTensor out(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = i; j < dim_; ++j) {
      // cofactor expansion: inv[i][j] = (-1)^{i+j} minor(j, i) / det
      std::vector<int> rows, cols;
      for (int r = 0; r < dim_; ++r)
        if (r != j) rows.push_back(r);
      for (int c = 0; c < dim_; ++c)
        if (c != i) cols.push_back(c);
      SymExpr minor = dim_ == 1 ? SymExpr::constant(Rational(1))
                                : det_recursive(comp_, rows, cols, dim_);
      SymExpr cof = ((i + j) % 2 == 0) ? minor : -minor;
      out.set(i, j, (cof * det_inv).normalized());
    }
  return out;
}

Connection christoffel(const MetricTensor& g) {
  const int n = g.dim();
  MetricTensor ginv = g.inverse();

  std::vector<SymExpr> dg(static_cast<size_t>(n * n * n));  // [c][a][b] = d_c g_ab
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        SymExpr d = g.at(a, b).diff(c);
        dg[static_cast<size_t>((c * n + a) * n + b)] = d;
        dg[static_cast<size_t>((c * n + b) * n + a)] = d;
      }
  auto dgat = [&](int c, int a, int b) -> const SymExpr& {
    return dg[static_cast<size_t>((c * n + a) * n + b)];
  };

  Connection conn;
  conn.dim = n;
  conn.comp.assign(static_cast<size_t>(n * n * n), SymExpr());
  SymExpr half = SymExpr::constant(Rational(1, 2));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = b; c < n; ++c) {
        std::vector<SymExpr> terms;
        for (int d = 0; d < n; ++d) {
          if (ginv.at(a, d).is_zero()) continue;
          terms.push_back(ginv.at(a, d) * (dgat(c, d, b) + dgat(b, d, c) - dgat(d, b, c)));
        }
        SymExpr gamma = (half * SymExpr::sum(std::move(terms))).normalized();
        conn.comp[static_cast<size_t>((a * n + b) * n + c)] = gamma;
        conn.comp[static_cast<size_t>((a * n + c) * n + b)] = gamma;
      }
  return conn;
}

CurvatureBundle curvature(const MetricTensor& g) {
  const int n = g.dim();
  Connection conn = christoffel(g);
  MetricTensor ginv = g.inverse();

  // d_c Gamma^a_{db}
  std::vector<SymExpr> dconn(static_cast<size_t>(n * n * n * n));
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int d = 0; d < n; ++d)
        for (int b = d; b < n; ++b) {
          SymExpr v = conn.at(a, d, b).diff(c);
          dconn[static_cast<size_t>(((c * n + a) * n + d) * n + b)] = v;
          dconn[static_cast<size_t>(((c * n + a) * n + b) * n + d)] = v;
        }
  auto dc = [&](int c, int a, int d, int b) -> const SymExpr& {
    return dconn[static_cast<size_t>(((c * n + a) * n + d) * n + b)];
  };

  CurvatureBundle out;
  out.dim = n;
  out.riemann.assign(static_cast<size_t>(n * n * n * n), SymExpr());
  auto set_riem = [&](int a, int b, int c, int d, const SymExpr& v) {
    out.riemann[static_cast<size_t>(((a * n + b) * n + c) * n + d)] = v;
  };

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = c + 1; d < n; ++d) {
          std::vector<SymExpr> terms{dc(c, a, d, b), -dc(d, a, c, b)};
          for (int e = 0; e < n; ++e) {
            if (!conn.at(a, c, e).is_zero() && !conn.at(e, d, b).is_zero())
              terms.push_back(conn.at(a, c, e) * conn.at(e, d, b));
            if (!conn.at(a, d, e).is_zero() && !conn.at(e, c, b).is_zero())
              terms.push_back(-(conn.at(a, d, e) * conn.at(e, c, b)));
          }
          SymExpr r = SymExpr::sum(std::move(terms)).normalized();
          set_riem(a, b, c, d, r);
          set_riem(a, b, d, c, (-r).normalized());
        }

  // Computed entrywise, without assuming symmetry: R_{bd} = R_{db} is a
  // property the tests verify, not an input.
  out.ricci.assign(static_cast<size_t>(n * n), SymExpr());
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d) {
      std::vector<SymExpr> terms;
      for (int a = 0; a < n; ++a) terms.push_back(out.riem(a, b, a, d));
      out.ricci[static_cast<size_t>(b * n + d)] = SymExpr::sum(std::move(terms)).normalized();
    }

  std::vector<SymExpr> terms;
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d)
      if (!ginv.at(b, d).is_zero() && !out.ric(b, d).is_zero())
        terms.push_back(ginv.at(b, d) * out.ric(b, d));
  out.scalar = SymExpr::sum(std::move(terms)).normalized();
  return out;
}

SymExpr dalembertian(const SymExpr& e, int dim, const std::vector<int>& signature) {
  std::vector<SymExpr> terms;
  for (int i = 0; i < dim; ++i) {
    SymExpr dd = e.diff(i).diff(i);
    if (dd.is_zero()) continue;
    terms.push_back(signature[static_cast<size_t>(i)] > 0 ? dd : -dd);
  }
  return SymExpr::sum(std::move(terms)).normalized();
}

MetricTensor metric_conformal_flat(int n, const SymExpr& factor) {
  std::vector<SymExpr> d;
  d.push_back(factor);
  for (int i = 1; i < n; ++i) d.push_back(-factor);
  return MetricTensor::diagonal(d);
}

ConformalIdentityReport conformal_scalar_identity(int n) {
  if (n < 3 || n > 6) throw Error("conformal_scalar_identity: n must be in {3,4,5,6}");
  ConformalIdentityReport rep;
  rep.n = n;
  rep.exponent = Rational(4, n - 2);
  rep.exponent.canonicalize();
  rep.weight = Rational(-(n + 2), n - 2);
  rep.weight.canonicalize();
  rep.fd_seed = 0xc0f0'0000ULL + static_cast<std::uint64_t>(n);

  FieldPtr psi = opaque_field("Psi", /*positive=*/true);
  SymExpr psi_e = SymExpr::field(psi);
  MetricTensor g = metric_conformal_flat(n, psi_e.pow(rep.exponent));

  SymExpr theta = curvature(g).scalar;

  std::vector<int> sig(static_cast<size_t>(n), -1);
  sig[0] = +1;
  SymExpr box_psi = dalembertian(psi_e, n, sig);
  SymExpr w = (psi_e.pow(rep.weight) * box_psi).normalized();

  // Match the leading monomial of w inside theta to read off the constant.
  RatForm theta_rf = theta.to_ratform();
  RatForm w_rf = w.to_ratform();
  if (w_rf.is_zero() || theta_rf.is_zero()) throw Error("conformal identity: degenerate forms");
  const Monomial& lead = w_rf.num.leading();
  ExactComplex c_val;
  bool found = false;
  for (const auto& t : theta_rf.num.terms())
    if (t.same_powers(lead)) {
      c_val = -(t.coeff / lead.coeff);
      found = true;
      break;
    }
  if (!found || !c_val.is_real_rational())
    throw Error("conformal identity: no rational constant matches");
  rep.c_n = c_val.re().rat_part();

  SymExpr residual = (theta + SymExpr::constant(rep.c_n) * w).normalized();
  rep.residual_zero = residual.is_zero();
  rep.residual_sexpr = residual.sexpr();

  // FD cross-check at 5 seeded points on a smooth positive sample field.
  // Amplitudes are chosen so the curvature is O(1) at the sample points:
  // the FD value carries ~1e-7 absolute rounding noise at the fixed step,
  // which the relative tolerance must dominate.
  std::vector<PolynomialField::Term> poly{{2.0, {}}};
  for (int i = 0; i < n; ++i) {
    std::vector<int> e(static_cast<size_t>(i) + 1, 0);
    e[static_cast<size_t>(i)] = 1;
    poly.push_back({0.3 + 0.05 * i, e});
    std::vector<int> e2(static_cast<size_t>(i) + 1, 0);
    e2[static_cast<size_t>(i)] = 2;
    poly.push_back({0.15 + 0.03 * i, e2});
  }
  EvalContext ctx;
  ctx.coords.assign(static_cast<size_t>(n), 0.0);
  ctx.fields["Psi"] = std::make_shared<PolyGaussianField>(
      poly, std::vector<double>(static_cast<size_t>(n), 0.3));

  MetricFn mf = metric_eval_fn(g, ctx);
  double worst = 0;
  for (int p = 0; p < 5; ++p) {
    std::vector<double> x(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
      x[static_cast<size_t>(i)] = uniform(rep.fd_seed, static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(i), -0.3, 0.3);
    double numeric = numeric_scalar_curvature(n, mf, x, rep.fd_step);
    EvalContext at = ctx;
    at.coords = x;
    double symbolic = theta.eval_real(at);
    double denom = std::max({std::abs(symbolic), std::abs(numeric), 1e-12});
    worst = std::max(worst, std::abs(symbolic - numeric) / denom);
  }
  rep.fd_max_rel_dev = worst;
  rep.fd_pass = worst < rep.fd_rel_tol;
  return rep;
}

RicciSplit conformal_ricci_split(const MetricTensor& g, const FieldPtr& omega) {
  const int n = g.dim();
  SymExpr w = SymExpr::field(omega);
  MetricTensor wg(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) wg.set(i, j, (w * g.at(i, j)).normalized());

  CurvatureBundle base = curvature(g);
  CurvatureBundle scaled = curvature(wg);

  RicciSplit out;
  out.dim = n;
  out.ricci_base.assign(static_cast<size_t>(n * n), SymExpr());
  out.t_omega.assign(static_cast<size_t>(n * n), SymExpr());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out.ricci_base[static_cast<size_t>(i * n + j)] = base.ric(i, j);
      out.t_omega[static_cast<size_t>(i * n + j)] =
          (scaled.ric(i, j) - base.ric(i, j)).normalized();
    }
  return out;
}

// ---------------------------------------------------------------------------
// Finite-difference oracle

std::vector<double> invert_dense(int dim, const std::vector<double>& m) {
  const size_t n = static_cast<size_t>(dim);
  std::vector<double> w(n * 2 * n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) w[i * 2 * n + j] = m[i * n + j];
    w[i * 2 * n + n + i] = 1.0;
  }
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    for (size_t r = col + 1; r < n; ++r)
      if (std::abs(w[r * 2 * n + col]) > std::abs(w[piv * 2 * n + col])) piv = r;
    if (w[piv * 2 * n + col] == 0.0) throw SingularMetric("invert_dense: singular");
    if (piv != col)
      for (size_t j = 0; j < 2 * n; ++j) std::swap(w[piv * 2 * n + j], w[col * 2 * n + j]);
    double d = w[col * 2 * n + col];
    for (size_t j = 0; j < 2 * n; ++j) w[col * 2 * n + j] /= d;
    for (size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = w[r * 2 * n + col];
      if (f == 0.0) continue;
      for (size_t j = 0; j < 2 * n; ++j) w[r * 2 * n + j] -= f * w[col * 2 * n + j];
    }
  }
  std::vector<double> out(n * n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) out[i * n + j] = w[i * 2 * n + n + j];
  return out;
}

std::vector<double> numeric_ricci(int dim, const MetricFn& metric, const std::vector<double>& x,
                                  double h) {
  const size_t n = static_cast<size_t>(dim);
  auto at = [&](std::vector<double> p) {
    std::vector<double> g;
    metric(p, g);
    return g;
  };
  std::vector<double> g0 = at(x);
  std::vector<double> ginv = invert_dense(dim, g0);

  // Fourth-order central stencils keep the truncation error far below the
  // 1e-6 comparison tolerance at the fixed step.
  const double offs[4] = {2 * h, h, -h, -2 * h};
  const double w1[4] = {-1.0, 8.0, -8.0, 1.0};  // /(12h) for d/dx
  std::vector<std::vector<double>> gs(n * 4);
  for (size_t e = 0; e < n; ++e)
    for (size_t o = 0; o < 4; ++o) {
      std::vector<double> xs = x;
      xs[e] += offs[o];
      gs[e * 4 + o] = at(xs);
    }
  std::vector<std::vector<double>> dg(n, std::vector<double>(n * n));
  for (size_t e = 0; e < n; ++e)
    for (size_t ab = 0; ab < n * n; ++ab) {
      double s = 0;
      for (size_t o = 0; o < 4; ++o) s += w1[o] * gs[e * 4 + o][ab];
      dg[e][ab] = s / (12 * h);
    }

  std::vector<std::vector<double>> ddg(n * n, std::vector<double>(n * n));
  for (size_t e = 0; e < n; ++e)
    for (size_t f = e; f < n; ++f) {
      std::vector<double> d2(n * n);
      if (e == f) {
        // (-f2p + 16 fp - 30 f0 + 16 fm - f2m) / (12 h^2)
        const double w2[4] = {-1.0, 16.0, 16.0, -1.0};
        for (size_t ab = 0; ab < n * n; ++ab) {
          double s = -30.0 * g0[ab];
          for (size_t o = 0; o < 4; ++o) s += w2[o] * gs[e * 4 + o][ab];
          d2[ab] = s / (12 * h * h);
        }
      } else {
        // Tensor product of two first-derivative stencils.
        std::vector<double> acc(n * n, 0.0);
        for (size_t oi = 0; oi < 4; ++oi)
          for (size_t oj = 0; oj < 4; ++oj) {
            std::vector<double> xs = x;
            xs[e] += offs[oi];
            xs[f] += offs[oj];
            auto gij = at(xs);
            double w = w1[oi] * w1[oj];
            for (size_t ab = 0; ab < n * n; ++ab) acc[ab] += w * gij[ab];
          }
        for (size_t ab = 0; ab < n * n; ++ab) d2[ab] = acc[ab] / (144 * h * h);
      }
      ddg[e * n + f] = d2;
      ddg[f * n + e] = std::move(d2);
    }

  auto gamma = [&](size_t a, size_t b, size_t c) {
    double s = 0;
    for (size_t d = 0; d < n; ++d)
      s += 0.5 * ginv[a * n + d] * (dg[c][d * n + b] + dg[b][d * n + c] - dg[d][b * n + c]);
    return s;
  };
  // d_e ginv = -ginv dg[e] ginv
  std::vector<std::vector<double>> dginv(n, std::vector<double>(n * n, 0.0));
  for (size_t e = 0; e < n; ++e)
    for (size_t a = 0; a < n; ++a)
      for (size_t b = 0; b < n; ++b) {
        double s = 0;
        for (size_t p = 0; p < n; ++p)
          for (size_t q = 0; q < n; ++q)
            s -= ginv[a * n + p] * dg[e][p * n + q] * ginv[q * n + b];
        dginv[e][a * n + b] = s;
      }
  auto dgamma = [&](size_t e, size_t a, size_t b, size_t c) {
    double s = 0;
    for (size_t d = 0; d < n; ++d) {
      s += 0.5 * dginv[e][a * n + d] * (dg[c][d * n + b] + dg[b][d * n + c] - dg[d][b * n + c]);
      s += 0.5 * ginv[a * n + d] *
           (ddg[c * n + e][d * n + b] + ddg[b * n + e][d * n + c] - ddg[d * n + e][b * n + c]);
    }
    return s;
  };

  std::vector<double> ricci(n * n, 0.0);
  for (size_t b = 0; b < n; ++b)
    for (size_t d = 0; d < n; ++d) {
      double s = 0;
      for (size_t a = 0; a < n; ++a) {
        s += dgamma(a, a, d, b) - dgamma(d, a, a, b);
        for (size_t e = 0; e < n; ++e)
          s += gamma(a, a, e) * gamma(e, d, b) - gamma(a, d, e) * gamma(e, a, b);
      }
      ricci[b * n + d] = s;
    }
  return ricci;
}

double numeric_scalar_curvature(int dim, const MetricFn& metric, const std::vector<double>& x,
                                double h) {
  const size_t n = static_cast<size_t>(dim);
  std::vector<double> g0;
  metric(x, g0);
  std::vector<double> ginv = invert_dense(dim, g0);
  std::vector<double> ric = numeric_ricci(dim, metric, x, h);
  double s = 0;
  for (size_t b = 0; b < n; ++b)
    for (size_t d = 0; d < n; ++d) s += ginv[b * n + d] * ric[b * n + d];
  return s;
}

MetricFn metric_eval_fn(const MetricTensor& g, const EvalContext& base_ctx) {
  const int n = g.dim();
  return [g, base_ctx, n](const std::vector<double>& x, std::vector<double>& out) {
    EvalContext ctx = base_ctx;
    ctx.coords = x;
    out.assign(static_cast<size_t>(n * n), 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out[static_cast<size_t>(i * n + j)] = g.at(i, j).eval_real(ctx);
  };
}

MetricTensor metric_polar2() {
  SymExpr r = SymExpr::coordinate(0);
  return MetricTensor::diagonal({SymExpr::constant(Rational(1)), r * r});
}

MetricTensor metric_sphere2() {
  SymExpr s = SymExpr::field(sin_field(0));
  return MetricTensor::diagonal({SymExpr::constant(Rational(1)), s * s});
}

}  // namespace qg5::sym
