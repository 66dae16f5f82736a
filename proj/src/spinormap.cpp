#include "qg5/spinormap.hpp"

#include <algorithm>
#include <cmath>

#include "qg5/errors.hpp"
#include "qg5/rng.hpp"

namespace qg5::spinormap {

using Cd = std::complex<double>;

std::string reading_str(BarReading r) {
  return r == BarReading::Plain ? "plain-conjugate" : "dirac-adjoint";
}

SpinorPoint SpinorPoint::random(std::uint64_t seed, std::uint64_t idx, double scale) {
  SpinorPoint p;
  for (int a = 0; a < 4; ++a) {
    p.xi_re[static_cast<size_t>(a)] = uniform(seed, idx, static_cast<std::uint64_t>(a), -scale, scale);
    p.xi_im[static_cast<size_t>(a)] = uniform(seed, idx, static_cast<std::uint64_t>(4 + a), -scale, scale);
  }
  return p;
}

SpinorPoint SpinorPoint::phase_rotated(double phi) const {
  SpinorPoint out;
  double c = std::cos(phi), s = std::sin(phi);
  for (int a = 0; a < 4; ++a) {
    out.xi_re[static_cast<size_t>(a)] = c * xi_re[static_cast<size_t>(a)] - s * xi_im[static_cast<size_t>(a)];
    out.xi_im[static_cast<size_t>(a)] = s * xi_re[static_cast<size_t>(a)] + c * xi_im[static_cast<size_t>(a)];
  }
  return out;
}

SpinorPoint SpinorPoint::scaled(double c) const {
  SpinorPoint out = *this;
  for (auto& v : out.xi_re) v *= c;
  for (auto& v : out.xi_im) v *= c;
  return out;
}

std::array<double, 8> SpinorPoint::real8() const {
  std::array<double, 8> v;
  for (int a = 0; a < 4; ++a) {
    v[static_cast<size_t>(a)] = xi_re[static_cast<size_t>(a)];
    v[static_cast<size_t>(4 + a)] = xi_im[static_cast<size_t>(a)];
  }
  return v;
}

SpinorPoint SpinorPoint::from_real8(const std::array<double, 8>& v) {
  SpinorPoint p;
  for (int a = 0; a < 4; ++a) {
    p.xi_re[static_cast<size_t>(a)] = v[static_cast<size_t>(a)];
    p.xi_im[static_cast<size_t>(a)] = v[static_cast<size_t>(4 + a)];
  }
  return p;
}

NumGammaSet NumGammaSet::from(const clifford::GammaSet& gs, BarReading reading) {
  NumGammaSet out;
  out.reading = reading;
  out.convention_id = gs.convention.id();
  for (int mm = 0; mm < 5; ++mm) {
    Mat4c eff = reading == BarReading::Plain ? gs[mm] : gs[0] * gs[mm];
    out.hermitian[static_cast<size_t>(mm)] = eff.is_hermitian();
    out.m[static_cast<size_t>(mm)] = eff.to_complex();
  }
  return out;
}

MapImage spinor_to_x(const NumGammaSet& gs, const SpinorPoint& p) {
  MapImage out;
  for (int mm = 0; mm < 5; ++mm) {
    Cd acc = 0;
    for (int a = 0; a < 4; ++a) {
      Cd xa = std::conj(p.xi(a));
      for (int b = 0; b < 4; ++b) acc += xa * gs.m[static_cast<size_t>(mm)][static_cast<size_t>(a * 4 + b)] * p.xi(b);
    }
    acc *= 0.5;
    out.x[static_cast<size_t>(mm)] = acc;
    out.x_real[static_cast<size_t>(mm)] = acc.real();
    out.imag_norm = std::max(out.imag_norm, std::abs(acc.imag()));
  }
  return out;
}

MapJacobian map_jacobian(const NumGammaSet& gs, const SpinorPoint& p) {
  MapJacobian out;
  for (int mm = 0; mm < 5; ++mm) {
    const auto& m = gs.m[static_cast<size_t>(mm)];
    for (int c = 0; c < 4; ++c) {
      Cd row = 0, col = 0;  // sum_B M_CB xi_B and sum_A conj(xi_A) M_AC
      for (int b = 0; b < 4; ++b) row += m[static_cast<size_t>(c * 4 + b)] * p.xi(b);
      for (int a = 0; a < 4; ++a) col += std::conj(p.xi(a)) * m[static_cast<size_t>(a * 4 + c)];
      Cd du = 0.5 * (row + col);
      Cd dv = 0.5 * (Cd(0, 1) * col - Cd(0, 1) * row);
      out.j[static_cast<size_t>(mm)][static_cast<size_t>(c)] = du.real();
      out.j[static_cast<size_t>(mm)][static_cast<size_t>(4 + c)] = dv.real();
    }
  }
  return out;
}

std::array<std::array<double, 64>, 5> quadratic_forms(const NumGammaSet& gs) {
  std::array<std::array<double, 64>, 5> h{};
  auto value = [&](int mm, const std::array<double, 8>& v) {
    return spinor_to_x(gs, SpinorPoint::from_real8(v)).x_real[static_cast<size_t>(mm)];
  };
  for (int mm = 0; mm < 5; ++mm)
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b) {
        std::array<double, 8> ea{}, eb{}, eab{};
        ea[static_cast<size_t>(a)] = 1;
        eb[static_cast<size_t>(b)] = 1;
        eab[static_cast<size_t>(a)] += 1;
        eab[static_cast<size_t>(b)] += 1;
        // Polarization is exact for a quadratic with no linear part:
        // H_ab = f(ea+eb) - f(ea) - f(eb) for f = x^m (which is X^T H X / 2).
        h[static_cast<size_t>(mm)][static_cast<size_t>(a * 8 + b)] =
            value(mm, eab) - value(mm, ea) - value(mm, eb);
      }
  return h;
}

std::vector<double> symmetric_eigenvalues(int n, std::vector<double> m) {
  // Cyclic Jacobi; plenty for 8x8 diagnostics.
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += m[static_cast<size_t>(i * n + j)] * m[static_cast<size_t>(i * n + j)];
    if (off < 1e-28) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        double apq = m[static_cast<size_t>(p * n + q)];
        if (std::abs(apq) < 1e-300) continue;
        double app = m[static_cast<size_t>(p * n + p)], aqq = m[static_cast<size_t>(q * n + q)];
        double theta = 0.5 * (aqq - app) / apq;
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        double c = 1.0 / std::sqrt(t * t + 1), s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = m[static_cast<size_t>(k * n + p)], akq = m[static_cast<size_t>(k * n + q)];
          m[static_cast<size_t>(k * n + p)] = c * akp - s * akq;
          m[static_cast<size_t>(k * n + q)] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = m[static_cast<size_t>(p * n + k)], aqk = m[static_cast<size_t>(q * n + k)];
          m[static_cast<size_t>(p * n + k)] = c * apk - s * aqk;
          m[static_cast<size_t>(q * n + k)] = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) ev[static_cast<size_t>(i)] = m[static_cast<size_t>(i * n + i)];
  std::sort(ev.begin(), ev.end(), [](double a, double b) { return std::abs(a) > std::abs(b); });
  return ev;
}

PullbackResult pullback_metric(const NumGammaSet& gs, const SpinorPoint& p,
                               const std::array<double, 25>& g5) {
  MapJacobian jac = map_jacobian(gs, p);
  PullbackResult out;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      double s = 0;
      for (int mm = 0; mm < 5; ++mm)
        for (int nn = 0; nn < 5; ++nn)
          s += jac.j[static_cast<size_t>(mm)][static_cast<size_t>(a)] * g5[static_cast<size_t>(mm * 5 + nn)] *
               jac.j[static_cast<size_t>(nn)][static_cast<size_t>(b)];
      out.p[static_cast<size_t>(a * 8 + b)] = s;
    }
  std::vector<double> ev =
      symmetric_eigenvalues(8, std::vector<double>(out.p.begin(), out.p.end()));
  out.rank = 0;
  for (double v : ev)
    if (std::abs(v) > 1e-10) ++out.rank;
  return out;
}

// ---------------------------------------------------------------------------

StereoResult stereographic_double_angle(double phi_deg) {
  if (!(phi_deg > 0.0) || !(phi_deg < 180.0))
    throw DomainError("stereographic_double_angle: phi must lie in (0, 180)");
  const double rad = phi_deg * M_PI / 180.0;
  // Cross-section geometry: plane y = 0 tangent to both spheres at O;
  // small sphere center C = (0,1) radius 1; large sphere center P = (0,2)
  // radius 2; P is the small sphere's antipode of O.
  const double px = 0.0, py = 2.0;
  const double cy = 1.0;
  double xsx, xsy;
  if (std::abs(phi_deg - 90.0) > 1e-7) {
    // Planar point from the large sphere's central projection at angle phi,
    // then the second small-sphere intersection of the line through P.
    double q = 2.0 * std::tan(rad);
    double dx = q - px, dy = 0.0 - py;
    double t = 4.0 / (dx * dx + dy * dy);  // root of |P + t D - C|^2 = 1, t != 0
    xsx = px + t * dx;
    xsy = py + t * dy;
  } else {
    // cos(phi) ~ 0: the planar point runs off to infinity; continuous
    // extension along the direction (sin phi, -cos phi).
    double t = 2.0 * std::cos(rad);
    xsx = px + t * std::sin(rad);
    xsy = py - t * std::cos(rad);
  }
  double wx = xsx, wy = xsy - cy;
  double theta = std::atan2(wx, -wy);  // oriented angle from the downward axis
  if (theta < 0) theta += 2.0 * M_PI;
  StereoResult out;
  out.theta_deg = theta * 180.0 / M_PI;
  out.residual = std::abs(out.theta_deg - 2.0 * phi_deg);
  return out;
}

// ---------------------------------------------------------------------------

ProbeSolution probe_solution_from_name(const std::string& name) {
  if (name == "constant") return ProbeSolution::Constant;
  if (name == "harmonic-polynomial") return ProbeSolution::HarmonicPolynomial;
  if (name == "plane-wave") return ProbeSolution::PlaneWave;
  throw UnknownSolution("unknown probe solution '" + name + "'");
}

std::string probe_solution_name(ProbeSolution s) {
  switch (s) {
    case ProbeSolution::Constant: return "constant";
    case ProbeSolution::HarmonicPolynomial: return "harmonic-polynomial";
    default: return "plane-wave";
  }
}

namespace {

// Cataloged 5D wave solutions with closed-form value/gradient/Hessian.
struct SolutionJet {
  Cd value;
  std::array<Cd, 5> grad{};
  std::array<Cd, 25> hess{};
};

SolutionJet solution_jet(ProbeSolution s, const std::array<double, 5>& x) {
  SolutionJet jet;
  switch (s) {
    case ProbeSolution::Constant:
      jet.value = 1.0;
      break;
    case ProbeSolution::HarmonicPolynomial:
      // x * y: mixed spatial pair is harmonic under any diagonal signature.
      jet.value = x[1] * x[2];
      jet.grad[1] = x[2];
      jet.grad[2] = x[1];
      jet.hess[1 * 5 + 2] = jet.hess[2 * 5 + 1] = 1.0;
      break;
    case ProbeSolution::PlaneWave: {
      // exp(i (k.x + m tau)) with k = (m,0,0,0), m = 1: null phase (1,0,0,0,1).
      const double p[5] = {1, 0, 0, 0, 1};
      double phase = 0;
      for (int i = 0; i < 5; ++i) phase += p[i] * x[static_cast<size_t>(i)];
      jet.value = std::exp(Cd(0, phase));
      for (int i = 0; i < 5; ++i) jet.grad[static_cast<size_t>(i)] = Cd(0, p[i]) * jet.value;
      for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
          jet.hess[static_cast<size_t>(i * 5 + j)] = -p[i] * p[j] * jet.value;
      break;
    }
  }
  return jet;
}

}  // namespace

ProbeReport dalembert_factorization_probe(const NumGammaSet& gs, ProbeSolution solution,
                                          std::uint64_t seed) {
  ProbeReport rep;
  rep.solution = solution;
  rep.reading = reading_str(gs.reading);
  rep.points = 64;
  rep.fd_step = 0.01;
  rep.xi_signature = "++++++++";  // flat 8D operator; no signature is singled out

  const auto hforms = quadratic_forms(gs);

  // First application, analytically by the chain rule through the quadratic
  // map: L1 = sum_a [ Phi_mn (H^m X)_a (H^n X)_a + Phi_m H^m_aa ].
  auto l1_at = [&](const std::array<double, 8>& v) {
    SpinorPoint p = SpinorPoint::from_real8(v);
    MapImage img = spinor_to_x(gs, p);
    SolutionJet jet = solution_jet(solution, img.x_real);
    Cd acc = 0;
    for (int a = 0; a < 8; ++a) {
      std::array<Cd, 5> jcol{};
      for (int mm = 0; mm < 5; ++mm) {
        double s = 0;
        for (int b = 0; b < 8; ++b)
          s += hforms[static_cast<size_t>(mm)][static_cast<size_t>(a * 8 + b)] * v[static_cast<size_t>(b)];
        jcol[static_cast<size_t>(mm)] = s;
      }
      for (int mm = 0; mm < 5; ++mm) {
        for (int nn = 0; nn < 5; ++nn)
          acc += jet.hess[static_cast<size_t>(mm * 5 + nn)] * jcol[static_cast<size_t>(mm)] * jcol[static_cast<size_t>(nn)];
        acc += jet.grad[static_cast<size_t>(mm)] * hforms[static_cast<size_t>(mm)][static_cast<size_t>(a * 8 + a)];
      }
    }
    return acc;
  };

  const double h = rep.fd_step;
  const double offs[4] = {2 * h, h, -h, -2 * h};
  const double w2[4] = {-1.0, 16.0, 16.0, -1.0};

  double max1 = 0, sum1 = 0, max2 = 0, sum2 = 0, scale = 0;
  for (int pt = 0; pt < rep.points; ++pt) {
    std::array<double, 8> v;
    for (int i = 0; i < 8; ++i)
      v[static_cast<size_t>(i)] = uniform(seed, static_cast<std::uint64_t>(pt), static_cast<std::uint64_t>(i), -1.0, 1.0);

    SolutionJet jet = solution_jet(solution, spinor_to_x(gs, SpinorPoint::from_real8(v)).x_real);
    scale = std::max(scale, std::abs(jet.value));

    Cd l1 = l1_at(v);
    max1 = std::max(max1, std::abs(l1));
    sum1 += std::norm(l1);

    // Second application by 4th-order central differences of L1.
    Cd l2 = 0;
    for (int axis = 0; axis < 8; ++axis) {
      Cd acc = -30.0 * l1;
      for (int o = 0; o < 4; ++o) {
        std::array<double, 8> vs = v;
        vs[static_cast<size_t>(axis)] += offs[o];
        acc += w2[o] * l1_at(vs);
      }
      l2 += acc / (12 * h * h);
    }
    max2 = std::max(max2, std::abs(l2));
    sum2 += std::norm(l2);
  }
  rep.solution_scale = scale;
  rep.max_first = max1;
  rep.rms_first = std::sqrt(sum1 / rep.points);
  rep.max_second = max2;
  rep.rms_second = std::sqrt(sum2 / rep.points);
  rep.confirmed_at_tol = rep.max_second / std::max(scale, 1.0) < rep.tol;
  return rep;
}

}  // namespace qg5::spinormap
