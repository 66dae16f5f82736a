#include "qg5/scan.hpp"

#include <cmath>

#include "qg5/fivegeom.hpp"
#include "qg5/rng.hpp"

namespace qg5::scan {

namespace {

using spinormap::MapImage;
using spinormap::MapJacobian;
using spinormap::NumGammaSet;
using spinormap::SpinorPoint;

// Fill per-index slots with a pure function of the index, then reduce
// serially; identical output for both modes by construction.
template <typename T, typename F>
std::vector<T> fill_slots(std::size_t n, Mode mode, F&& f) {
  std::vector<T> slot(n);
  const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(n);
  if (mode == Mode::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) slot[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
  } else {
    for (std::ptrdiff_t i = 0; i < count; ++i) slot[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
  }
  return slot;
}

double max_reduce(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, x);
  return m;
}

}  // namespace

RealityScanResult reality_scan(const NumGammaSet& gs, std::size_t n, std::uint64_t seed,
                               Mode mode) {
  auto slots = fill_slots<std::array<double, 5>>(n, mode, [&](std::size_t i) {
    SpinorPoint p = SpinorPoint::random(seed, i);
    MapImage img = spinor_to_x(gs, p);
    std::array<double, 5> im{};
    for (int mm = 0; mm < 5; ++mm) im[static_cast<size_t>(mm)] = std::abs(img.x[static_cast<size_t>(mm)].imag());
    return im;
  });
  RealityScanResult out;
  out.points = n;
  for (const auto& s : slots)
    for (int mm = 0; mm < 5; ++mm)
      out.max_imag[static_cast<size_t>(mm)] = std::max(out.max_imag[static_cast<size_t>(mm)], s[static_cast<size_t>(mm)]);
  return out;
}

double phase_invariance_max(const NumGammaSet& gs, std::size_t n, std::uint64_t seed, Mode mode) {
  auto slots = fill_slots<double>(n, mode, [&](std::size_t i) {
    SpinorPoint p = SpinorPoint::random(seed, i);
    double phi = uniform(seed, i, 17, 0.0, 6.283185307179586);
    MapImage a = spinor_to_x(gs, p);
    MapImage b = spinor_to_x(gs, p.phase_rotated(phi));
    double worst = 0;
    for (int mm = 0; mm < 5; ++mm)
      worst = std::max(worst, std::abs(a.x[static_cast<size_t>(mm)] - b.x[static_cast<size_t>(mm)]));
    return worst;
  });
  return max_reduce(slots);
}

double homogeneity_max(const NumGammaSet& gs, std::size_t n, std::uint64_t seed, Mode mode) {
  auto slots = fill_slots<double>(n, mode, [&](std::size_t i) {
    SpinorPoint p = SpinorPoint::random(seed, i);
    double c = uniform(seed, i, 23, -2.0, 2.0);
    MapImage a = spinor_to_x(gs, p);
    MapImage b = spinor_to_x(gs, p.scaled(c));
    double worst = 0;
    for (int mm = 0; mm < 5; ++mm)
      worst = std::max(worst, std::abs(b.x[static_cast<size_t>(mm)] - c * c * a.x[static_cast<size_t>(mm)]));
    return worst;
  });
  return max_reduce(slots);
}

double jacobian_fd_max_rel(const NumGammaSet& gs, std::size_t n, std::uint64_t seed, double step,
                           Mode mode) {
  auto slots = fill_slots<double>(n, mode, [&](std::size_t i) {
    SpinorPoint p = SpinorPoint::random(seed, i);
    MapJacobian jac = map_jacobian(gs, p);
    double worst = 0;
    std::array<double, 8> v = p.real8();
    for (int c = 0; c < 8; ++c) {
      std::array<double, 8> vp = v, vm = v;
      vp[static_cast<size_t>(c)] += step;
      vm[static_cast<size_t>(c)] -= step;
      MapImage ip = spinor_to_x(gs, SpinorPoint::from_real8(vp));
      MapImage im = spinor_to_x(gs, SpinorPoint::from_real8(vm));
      for (int mm = 0; mm < 5; ++mm) {
        double fd = (ip.x_real[static_cast<size_t>(mm)] - im.x_real[static_cast<size_t>(mm)]) / (2 * step);
        double an = jac.j[static_cast<size_t>(mm)][static_cast<size_t>(c)];
        worst = std::max(worst, std::abs(fd - an) / std::max(1.0, std::abs(an)));
      }
    }
    return worst;
  });
  return max_reduce(slots);
}

double jacobian_linearity_max(const NumGammaSet& gs, std::size_t n, std::uint64_t seed,
                              Mode mode) {
  auto slots = fill_slots<double>(n, mode, [&](std::size_t i) {
    SpinorPoint p = SpinorPoint::random(seed, i);
    MapJacobian j1 = map_jacobian(gs, p);
    MapJacobian j2 = map_jacobian(gs, p.scaled(2.0));
    double worst = 0;
    for (int mm = 0; mm < 5; ++mm)
      for (int c = 0; c < 8; ++c)
        worst = std::max(worst, std::abs(j2.j[static_cast<size_t>(mm)][static_cast<size_t>(c)] -
                                         2.0 * j1.j[static_cast<size_t>(mm)][static_cast<size_t>(c)]));
    return worst;
  });
  return max_reduce(slots);
}

int pullback_max_rank(const NumGammaSet& gs, const std::array<double, 25>& g5, std::size_t n,
                      std::uint64_t seed, Mode mode) {
  auto slots = fill_slots<int>(n, mode, [&](std::size_t i) {
    SpinorPoint p = SpinorPoint::random(seed, i);
    return pullback_metric(gs, p, g5).rank;
  });
  int worst = 0;
  for (int r : slots) worst = std::max(worst, r);
  return worst;
}

double pullback_phase_kernel_max(const NumGammaSet& gs, const std::array<double, 25>& g5,
                                 std::size_t n, std::uint64_t seed, Mode mode) {
  auto slots = fill_slots<double>(n, mode, [&](std::size_t i) {
    SpinorPoint p = SpinorPoint::random(seed, i);
    auto pb = pullback_metric(gs, p, g5);
    // Phase direction i*xi in real coordinates: (-im, +re).
    std::array<double, 8> v{};
    for (int a = 0; a < 4; ++a) {
      v[static_cast<size_t>(a)] = -p.xi_im[static_cast<size_t>(a)];
      v[static_cast<size_t>(4 + a)] = p.xi_re[static_cast<size_t>(a)];
    }
    double worst = 0;
    for (int r = 0; r < 8; ++r) {
      double s = 0;
      for (int c = 0; c < 8; ++c) s += pb.p[static_cast<size_t>(r * 8 + c)] * v[static_cast<size_t>(c)];
      worst = std::max(worst, std::abs(s));
    }
    return worst;
  });
  return max_reduce(slots);
}

std::vector<StereoRow> stereo_sweep(double step_deg, Mode mode) {
  std::size_t count = 0;
  for (double phi = step_deg; phi < 180.0 - 1e-12; phi += step_deg) ++count;
  auto rows = fill_slots<StereoRow>(count, mode, [&](std::size_t i) {
    double phi = step_deg * static_cast<double>(i + 1);
    auto res = spinormap::stereographic_double_angle(phi);
    return StereoRow{phi, res.theta_deg, res.residual};
  });
  return rows;
}

double count_invariance_max_dev(std::size_t trials, std::uint64_t seed, Mode mode) {
  auto slots = fill_slots<double>(trials, mode, [&](std::size_t t) {
    fivegeom::CountScenario cs;
    cs.psi_sq = uniform(seed, t, 0, 0.1, 5.0);
    for (int i = 0; i < 4; ++i)
      cs.deltas[static_cast<size_t>(i)] = uniform(seed, t, static_cast<std::uint64_t>(1 + i), 0.1, 3.0);
    cs.lambda_scale = uniform(seed, t, 9, 0.1, 10.0);
    auto r = fivegeom::conformal_count_invariance(cs);
    return std::abs(r.n_prime / r.n - 1.0);
  });
  return max_reduce(slots);
}

}  // namespace qg5::scan
