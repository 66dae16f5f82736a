#pragma once

// The quadratic coordinate map from complex 4-space to the five real
// coordinates, x^m = (1/2) gamma^m_AB conj(xi^A) xi^B: images, analytic
// Jacobians, metric pullbacks with rank diagnostics, the stereographic
// double-angle construction, and an exploratory probe of the repeated
// 8-dimensional second-order operator on pulled-back wave solutions.

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qg5/clifford.hpp"

namespace qg5::spinormap {

// How conj(xi) enters the map: plain complex conjugation against the raw
// matrix entries, or the adjoint row vector xi^dagger gamma^0.
enum class BarReading { Plain, DiracAdjoint };

std::string reading_str(BarReading r);

struct SpinorPoint {
  std::array<double, 4> xi_re{};
  std::array<double, 4> xi_im{};

  std::complex<double> xi(int a) const {
    return {xi_re[static_cast<size_t>(a)], xi_im[static_cast<size_t>(a)]};
  }
  static SpinorPoint random(std::uint64_t seed, std::uint64_t idx, double scale = 1.0);
  SpinorPoint phase_rotated(double phi) const;
  SpinorPoint scaled(double c) const;
  // The eight real coordinates (re0..re3, im0..im3).
  std::array<double, 8> real8() const;
  static SpinorPoint from_real8(const std::array<double, 8>& v);
};

// Effective map matrices M^m for a reading (gamma^m or gamma^0 gamma^m),
// with hermiticity decided in exact arithmetic.
struct NumGammaSet {
  std::array<std::array<std::complex<double>, 16>, 5> m{};
  std::array<bool, 5> hermitian{};
  BarReading reading = BarReading::Plain;
  std::string convention_id;

  static NumGammaSet from(const clifford::GammaSet& gs, BarReading reading);
};

struct MapImage {
  std::array<std::complex<double>, 5> x{};
  std::array<double, 5> x_real{};
  double imag_norm = 0.0;
};

MapImage spinor_to_x(const NumGammaSet& gs, const SpinorPoint& p);

struct MapJacobian {
  // d x_real^m / d (re0..re3, im0..im3); degree 1 in xi.
  std::array<std::array<double, 8>, 5> j{};
};

MapJacobian map_jacobian(const NumGammaSet& gs, const SpinorPoint& p);

// Constant Hessians H^m with x_real^m(X) = (1/2) X^T H^m X; obtained by
// polarization, so they give an independent route to the Jacobian.
std::array<std::array<double, 64>, 5> quadratic_forms(const NumGammaSet& gs);

struct PullbackResult {
  std::array<double, 64> p{};  // J^T g5 J, symmetric 8x8
  int rank = 0;                // eigenvalues above 1e-10
};

PullbackResult pullback_metric(const NumGammaSet& gs, const SpinorPoint& p,
                               const std::array<double, 25>& g5);

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
std::vector<double> symmetric_eigenvalues(int n, std::vector<double> m);

// ---------------------------------------------------------------------------

struct StereoResult {
  double theta_deg = 0.0;
  double residual = 0.0;  // |theta - 2 phi|
};

// Both projections of the tangent-spheres figure: the planar point through
// the larger sphere's center, then back through the smaller sphere's
// antipode; theta is read off the smaller sphere. Throws DomainError outside
// the open interval (0, 180).
StereoResult stereographic_double_angle(double phi_deg);

// ---------------------------------------------------------------------------

enum class ProbeSolution { Constant, HarmonicPolynomial, PlaneWave };

ProbeSolution probe_solution_from_name(const std::string& name);  // throws UnknownSolution
std::string probe_solution_name(ProbeSolution s);

struct ProbeReport {
  ProbeSolution solution = ProbeSolution::Constant;
  std::string reading;
  int points = 0;
  double fd_step = 0.0;
  double solution_scale = 0.0;  // max |solution| over the grid
  double max_first = 0.0;       // first application of the 8D operator
  double rms_first = 0.0;
  double max_second = 0.0;      // repeated application
  double rms_second = 0.0;
  double tol = 1e-6;
  bool confirmed_at_tol = false;  // max_second / max(scale,1) < tol
  std::string xi_signature;       // signs used for the 8D operator
};

// Pulls a cataloged 5D wave solution back through the map, applies the 8D
// operator analytically once, then a second time by high-order central
// differences, and reports residual statistics. Measured output only.
ProbeReport dalembert_factorization_probe(const NumGammaSet& gs, ProbeSolution solution,
                                          std::uint64_t seed);

}  // namespace qg5::spinormap
