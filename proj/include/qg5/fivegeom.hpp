#pragma once

// Five-dimensional metric assembly with adjustable conformal factors, the
// preferred geodesic field tangent to the probability current, a fixed-step
// 4th-order integrator, the plane-wave mass-shell check, and the conformal
// count invariance.

#include <array>
#include <vector>

#include "qg5/expr.hpp"
#include "qg5/metric.hpp"

namespace qg5::fivegeom {

struct FiveMetric {
  std::array<sym::SymExpr, 16> g4{};  // observer-space block, symmetric
  std::array<sym::SymExpr, 4> pot{};  // potential A_mu (lower index)
  sym::SymExpr lambda, chi, omega;

  static FiveMetric flat();  // eta block, zero potential, unit factors
  const sym::SymExpr& g(int i, int j) const { return g4[static_cast<size_t>(i * 4 + j)]; }
  void set_g(int i, int j, const sym::SymExpr& e) {
    g4[static_cast<size_t>(i * 4 + j)] = e;
    g4[static_cast<size_t>(j * 4 + i)] = e;
  }
};

// omega * [[lambda g - chi^2 A A, chi A], [chi A, -1]] as a 5D metric.
sym::MetricTensor assemble_metric(const FiveMetric& fm);

struct GeodesicState {
  std::array<double, 5> x{};
  double s = 0.0;
};

struct VelocitySample {
  std::array<double, 5> v{};
  // '-': unit norm with gvv = -1, '+': unit norm with gvv = +1, '1': dx4/ds = 1.
  char norm_mode = '1';
};

class GeodesicField {
 public:
  GeodesicField(FiveMetric fm, sym::EvalContext fields);
  VelocitySample at(const std::array<double, 5>& x) const;  // throws EvaluationDomain

 private:
  FiveMetric fm_;
  sym::EvalContext ctx_;
};

GeodesicField preferred_geodesic_field(const FiveMetric& fm, sym::EvalContext fields = {});

// Classical fixed-step RK4. Throws StepLimit when any component passes 1e12.
std::vector<GeodesicState> integrate_geodesic(const GeodesicField& field, GeodesicState start,
                                              double ds, int steps);

// ---------------------------------------------------------------------------
// Path-image utilities for the conformal-rescaling invariance check. Paths
// are compared on the observer-space projection after arc-length resampling.

std::vector<std::array<double, 4>> project_observer(const std::vector<GeodesicState>& traj);
std::vector<std::array<double, 4>> resample_arclength(const std::vector<std::array<double, 4>>& pts,
                                                      double target_length, int samples);
double polyline_length(const std::vector<std::array<double, 4>>& pts);
// Symmetric Hausdorff distance between polylines (point-to-segment).
double polyline_hausdorff(const std::vector<std::array<double, 4>>& a,
                          const std::vector<std::array<double, 4>>& b, bool parallel);

// ---------------------------------------------------------------------------

// Plane wave exp(i(k.x + m tau)) under the signed 5D wave operator; the k
// components are taken at their exact dyadic values, so the residual is the
// dispersion defect |k.k - m^2| alone. Returns the max over a sample grid.
double klein_gordon_check(const std::array<double, 4>& k, double m);

struct CountScenario {
  double psi_sq = 1.0;
  std::array<double, 4> deltas{1, 1, 1, 1};
  double lambda_scale = 1.0;
};

struct CountResult {
  double n = 0.0;
  double n_prime = 0.0;
  double psi_prime_sq = 0.0;
};

// Marks scale by sqrt(lambda); the density compensates by 1/lambda so the
// count N is invariant.
CountResult conformal_count_invariance(const CountScenario& cs);

}  // namespace qg5::fivegeom
