#pragma once

// Batch scan kernels over seeded sample points. Every kernel comes in an
// OpenMP-parallel and a serial flavor that produce bit-identical results:
// per-index work is a pure function of (seed, index), results land in
// per-index slots, and reductions run serially afterwards. The benchmark
// target compares the two flavors; the test suite checks their equality.

#include <array>
#include <cstdint>
#include <vector>

#include "qg5/spinormap.hpp"

namespace qg5::scan {

enum class Mode { Serial, Parallel };

struct RealityScanResult {
  std::array<double, 5> max_imag{};  // per-coordinate max |Im x^m|
  std::size_t points = 0;
};

// Reality diagnostics of the spinor map over random points.
RealityScanResult reality_scan(const spinormap::NumGammaSet& gs, std::size_t n,
                               std::uint64_t seed, Mode mode);

// max over points of |x(e^{i phi} xi) - x(xi)| (phi seeded per point).
double phase_invariance_max(const spinormap::NumGammaSet& gs, std::size_t n, std::uint64_t seed,
                            Mode mode);

// max over points of |x(c xi) - c^2 x(xi)| for seeded real c.
double homogeneity_max(const spinormap::NumGammaSet& gs, std::size_t n, std::uint64_t seed,
                       Mode mode);

// max relative deviation between the analytic Jacobian and central
// differences with the given step.
double jacobian_fd_max_rel(const spinormap::NumGammaSet& gs, std::size_t n, std::uint64_t seed,
                           double step, Mode mode);

// max over points of |J(2 xi) - 2 J(xi)| entrywise.
double jacobian_linearity_max(const spinormap::NumGammaSet& gs, std::size_t n, std::uint64_t seed,
                              Mode mode);

// Largest pullback rank seen over the scan (should stay <= 5).
int pullback_max_rank(const spinormap::NumGammaSet& gs, const std::array<double, 25>& g5,
                      std::size_t n, std::uint64_t seed, Mode mode);

// max over points of |P . v_phase| where v_phase spans the phase orbit.
double pullback_phase_kernel_max(const spinormap::NumGammaSet& gs,
                                 const std::array<double, 25>& g5, std::size_t n,
                                 std::uint64_t seed, Mode mode);

struct StereoRow {
  double phi_deg = 0.0;
  double theta_deg = 0.0;
  double residual = 0.0;
};

// Sweep of the double-angle construction over (0, 180) at the given step.
std::vector<StereoRow> stereo_sweep(double step_deg, Mode mode);

// max |N'/N - 1| over random count scenarios.
double count_invariance_max_dev(std::size_t trials, std::uint64_t seed, Mode mode);

}  // namespace qg5::scan
