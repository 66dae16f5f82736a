#include "qg5/fivegeom.hpp"

#include <cmath>
#include <limits>

#include "qg5/errors.hpp"
#include "qg5/rng.hpp"

namespace qg5::fivegeom {

using sym::EvalContext;
using sym::MetricTensor;
using sym::SymExpr;

FiveMetric FiveMetric::flat() {
  FiveMetric fm;
  SymExpr one = SymExpr::constant(Rational(1));
  fm.set_g(0, 0, one);
  for (int i = 1; i < 4; ++i) fm.set_g(i, i, SymExpr::constant(Rational(-1)));
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) fm.set_g(i, j, SymExpr());
  fm.lambda = one;
  fm.chi = one;
  fm.omega = one;
  return fm;
}

MetricTensor assemble_metric(const FiveMetric& fm) {
  MetricTensor g(5);
  SymExpr chi2 = fm.chi * fm.chi;
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = mu; nu < 4; ++nu) {
      SymExpr block = fm.lambda * fm.g(mu, nu) -
                      chi2 * fm.pot[static_cast<size_t>(mu)] * fm.pot[static_cast<size_t>(nu)];
      g.set(mu, nu, (fm.omega * block).normalized());
    }
    g.set(mu, 4, (fm.omega * fm.chi * fm.pot[static_cast<size_t>(mu)]).normalized());
  }
  g.set(4, 4, (-fm.omega).normalized());
  return g;
}

GeodesicField::GeodesicField(FiveMetric fm, EvalContext fields)
    : fm_(std::move(fm)), ctx_(std::move(fields)) {}

GeodesicField preferred_geodesic_field(const FiveMetric& fm, EvalContext fields) {
  return GeodesicField(fm, std::move(fields));
}

VelocitySample GeodesicField::at(const std::array<double, 5>& x) const {
  EvalContext ctx = ctx_;
  ctx.coords.assign(x.begin(), x.end());

  auto real_at = [&](const SymExpr& e) {
    double v = e.eval_real(ctx);
    if (!std::isfinite(v)) throw EvaluationDomain("field value is not finite");
    return v;
  };

  std::vector<double> g4(16);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g4[static_cast<size_t>(i * 4 + j)] = real_at(fm_.g(i, j));
  std::array<double, 4> a{};
  for (int i = 0; i < 4; ++i) a[static_cast<size_t>(i)] = real_at(fm_.pot[static_cast<size_t>(i)]);
  double lam = real_at(fm_.lambda);
  double chi = real_at(fm_.chi);
  double om = real_at(fm_.omega);

  std::vector<double> ginv = sym::invert_dense(4, g4);

  VelocitySample out;
  for (int mu = 0; mu < 4; ++mu) {
    double s = 0;
    for (int nu = 0; nu < 4; ++nu) s += ginv[static_cast<size_t>(mu * 4 + nu)] * a[static_cast<size_t>(nu)];
    out.v[static_cast<size_t>(mu)] = om * chi * s;
  }

  // Fifth component from the affine normalization |g v v| = 1 where a real
  // nonnegative root exists (negative-norm branch first; the assembled
  // g_{44} = -omega makes that the branch holding dx4/ds = 1 at A = 0),
  // otherwise dx4/ds = 1.
  double g44 = -om;
  double b = 0, c0 = 0;
  for (int mu = 0; mu < 4; ++mu) {
    double gm4 = om * chi * a[static_cast<size_t>(mu)];
    b += gm4 * out.v[static_cast<size_t>(mu)];
    for (int nu = 0; nu < 4; ++nu) {
      double gmn = om * (lam * g4[static_cast<size_t>(mu * 4 + nu)] - chi * chi * a[static_cast<size_t>(mu)] * a[static_cast<size_t>(nu)]);
      c0 += gmn * out.v[static_cast<size_t>(mu)] * out.v[static_cast<size_t>(nu)];
    }
  }
  out.norm_mode = '1';
  out.v[4] = 1.0;
  for (double eps : {-1.0, +1.0}) {
    double disc = b * b - g44 * (c0 - eps);
    if (disc < 0) continue;
    double r1 = (-b + std::sqrt(disc)) / g44;
    double r2 = (-b - std::sqrt(disc)) / g44;
    double t = std::max(r1, r2);
    if (t >= 0) {
      out.v[4] = t;
      out.norm_mode = eps < 0 ? '-' : '+';
      break;
    }
  }
  for (double v : out.v)
    if (!std::isfinite(v)) throw EvaluationDomain("velocity is not finite");
  return out;
}

std::vector<GeodesicState> integrate_geodesic(const GeodesicField& field, GeodesicState start,
                                              double ds, int steps) {
  if (!(ds > 0) || steps < 1) throw Error("integrate_geodesic: need ds > 0 and steps >= 1");
  std::vector<GeodesicState> out;
  out.reserve(static_cast<size_t>(steps) + 1);
  out.push_back(start);
  std::array<double, 5> x = start.x;
  double s = start.s;
  auto add = [](const std::array<double, 5>& p, const std::array<double, 5>& d, double f) {
    std::array<double, 5> r;
    for (int i = 0; i < 5; ++i) r[static_cast<size_t>(i)] = p[static_cast<size_t>(i)] + f * d[static_cast<size_t>(i)];
    return r;
  };
  for (int step = 0; step < steps; ++step) {
    auto k1 = field.at(x).v;
    auto k2 = field.at(add(x, k1, ds / 2)).v;
    auto k3 = field.at(add(x, k2, ds / 2)).v;
    auto k4 = field.at(add(x, k3, ds)).v;
    for (int i = 0; i < 5; ++i) {
      x[static_cast<size_t>(i)] += ds / 6 *
                                   (k1[static_cast<size_t>(i)] + 2 * k2[static_cast<size_t>(i)] +
                                    2 * k3[static_cast<size_t>(i)] + k4[static_cast<size_t>(i)]);
      if (std::abs(x[static_cast<size_t>(i)]) > 1e12)
        throw StepLimit("integrate_geodesic: component exceeded 1e12");
    }
    s += ds;
    out.push_back(GeodesicState{x, s});
  }
  return out;
}

std::vector<std::array<double, 4>> project_observer(const std::vector<GeodesicState>& traj) {
  std::vector<std::array<double, 4>> out;
  out.reserve(traj.size());
  for (const auto& st : traj)
    out.push_back({st.x[0], st.x[1], st.x[2], st.x[3]});
  return out;
}

namespace {

double dist2(const std::array<double, 4>& a, const std::array<double, 4>& b) {
  double s = 0;
  for (int i = 0; i < 4; ++i) {
    double d = a[static_cast<size_t>(i)] - b[static_cast<size_t>(i)];
    s += d * d;
  }
  return s;
}

double point_segment_dist2(const std::array<double, 4>& p, const std::array<double, 4>& a,
                           const std::array<double, 4>& b) {
  std::array<double, 4> ab{}, ap{};
  double ab2 = 0, dot = 0;
  for (int i = 0; i < 4; ++i) {
    ab[static_cast<size_t>(i)] = b[static_cast<size_t>(i)] - a[static_cast<size_t>(i)];
    ap[static_cast<size_t>(i)] = p[static_cast<size_t>(i)] - a[static_cast<size_t>(i)];
    ab2 += ab[static_cast<size_t>(i)] * ab[static_cast<size_t>(i)];
    dot += ab[static_cast<size_t>(i)] * ap[static_cast<size_t>(i)];
  }
  double t = ab2 > 0 ? std::min(1.0, std::max(0.0, dot / ab2)) : 0.0;
  std::array<double, 4> q;
  for (int i = 0; i < 4; ++i) q[static_cast<size_t>(i)] = a[static_cast<size_t>(i)] + t * ab[static_cast<size_t>(i)];
  return dist2(p, q);
}

double directed_hausdorff(const std::vector<std::array<double, 4>>& from,
                          const std::vector<std::array<double, 4>>& to, bool parallel) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(from.size());
  std::vector<double> worst(from.size(), 0.0);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j + 1 < to.size(); ++j)
      best = std::min(best, point_segment_dist2(from[static_cast<size_t>(i)], to[j], to[j + 1]));
    if (to.size() == 1) best = dist2(from[static_cast<size_t>(i)], to[0]);
    worst[static_cast<size_t>(i)] = best;
  }
  double m = 0;
  for (double w : worst) m = std::max(m, w);
  return std::sqrt(m);
}

}  // namespace

double polyline_length(const std::vector<std::array<double, 4>>& pts) {
  double len = 0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) len += std::sqrt(dist2(pts[i], pts[i + 1]));
  return len;
}

std::vector<std::array<double, 4>> resample_arclength(const std::vector<std::array<double, 4>>& pts,
                                                      double target_length, int samples) {
  std::vector<std::array<double, 4>> out;
  if (pts.empty() || samples < 2) return out;
  std::vector<double> cum(pts.size(), 0.0);
  for (size_t i = 0; i + 1 < pts.size(); ++i)
    cum[i + 1] = cum[i] + std::sqrt(dist2(pts[i], pts[i + 1]));
  out.reserve(static_cast<size_t>(samples));
  size_t seg = 0;
  for (int k = 0; k < samples; ++k) {
    double want = target_length * k / (samples - 1);
    while (seg + 2 < pts.size() && cum[seg + 1] < want) ++seg;
    if (want >= cum.back()) {
      out.push_back(pts.back());
      continue;
    }
    double seg_len = cum[seg + 1] - cum[seg];
    double t = seg_len > 0 ? (want - cum[seg]) / seg_len : 0.0;
    t = std::min(1.0, std::max(0.0, t));
    std::array<double, 4> p;
    for (int i = 0; i < 4; ++i)
      p[static_cast<size_t>(i)] =
          pts[seg][static_cast<size_t>(i)] +
          t * (pts[seg + 1][static_cast<size_t>(i)] - pts[seg][static_cast<size_t>(i)]);
    out.push_back(p);
  }
  return out;
}

double polyline_hausdorff(const std::vector<std::array<double, 4>>& a,
                          const std::vector<std::array<double, 4>>& b, bool parallel) {
  if (a.empty() || b.empty()) throw Error("polyline_hausdorff: empty polyline");
  return std::max(directed_hausdorff(a, b, parallel), directed_hausdorff(b, a, parallel));
}

double klein_gordon_check(const std::array<double, 4>& k, double m) {
  std::vector<ExactComplex> wf;
  for (double v : k) wf.push_back(ExactComplex::i() * ExactComplex(Rational(v)));
  wf.push_back(ExactComplex::i() * ExactComplex(Rational(m)));
  SymExpr wave = SymExpr::field(sym::plane_wave_field("kgwave", wf));
  SymExpr box = sym::dalembertian(wave, 5, {1, -1, -1, -1, -1});

  double worst = 0;
  EvalContext ctx;
  for (int p = 0; p < 8; ++p) {
    ctx.coords.clear();
    for (int i = 0; i < 5; ++i)
      ctx.coords.push_back(uniform(0x4b9d, static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(i), -1.0, 1.0));
    worst = std::max(worst, std::abs(box.eval(ctx)));
  }
  return worst;
}

CountResult conformal_count_invariance(const CountScenario& cs) {
  if (!(cs.psi_sq > 0) || !(cs.lambda_scale > 0))
    throw Error("conformal_count_invariance: scenario entries must be positive");
  for (double d : cs.deltas)
    if (!(d > 0)) throw Error("conformal_count_invariance: scenario entries must be positive");
  CountResult out;
  const auto& d = cs.deltas;
  out.n = cs.psi_sq * d[0] * d[1] * d[2] / d[3];
  double root = std::sqrt(cs.lambda_scale);
  out.psi_prime_sq = cs.psi_sq / cs.lambda_scale;
  out.n_prime = out.psi_prime_sq * (root * d[0]) * (root * d[1]) * (root * d[2]) / (root * d[3]);
  return out;
}

}  // namespace qg5::fivegeom
