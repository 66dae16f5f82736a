#pragma once

// Exact gamma-matrix algebra for the five-matrix system: construction of the
// flat set in the standard Dirac basis, the particle set with a vector
// potential folded into the fifth matrix, the similarity transformation
// (1+gamma4)/sqrt2, the plane-wave reduction check, and an exhaustive search
// over the sign/phase conventions the block identities depend on.

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qg5/exact.hpp"
#include "qg5/matrix.hpp"

namespace qg5::clifford {

enum class Gamma5Phase { PlusI, MinusI, PlusOne, MinusOne };

std::string phase_str(Gamma5Phase p);
ExactComplex phase_value(Gamma5Phase p);

struct ConventionSet {
  std::array<int, 5> signature{+1, -1, -1, -1, -1};
  Gamma5Phase gamma5_phase = Gamma5Phase::PlusI;
  // gamma4 = dot_gamma4 + vector_potential_sign * A_mu dot_gamma^mu.
  int vector_potential_sign = -1;
  // mass factor e^{i * mass_phase_sign * m * x4}.
  int mass_phase_sign = +1;

  std::string id() const;
  static ConventionSet from_id(const std::string& id);  // throws qg5::Error
  bool operator==(const ConventionSet& o) const;
};

struct GammaSet {
  std::array<Mat4c, 5> gamma;
  ConventionSet convention;
  bool flat = true;

  const Mat4c& operator[](int m) const { return gamma[static_cast<size_t>(m)]; }
  // Diagonal of the flat metric the set is meant to realize.
  const std::array<int, 5>& flat_metric_diag() const { return convention.signature; }
};

struct VectorPotential5 {
  // Lower-index components; the fifth entry is identically zero.
  std::array<ExactComplex, 5> a{};

  VectorPotential5() = default;
  explicit VectorPotential5(const std::array<ExactComplex, 4>& spacetime) {
    for (int m = 0; m < 4; ++m) a[static_cast<size_t>(m)] = spacetime[static_cast<size_t>(m)];
  }
  bool is_zero() const;
  // A.A = g^{mu nu} A_mu A_nu under the given diagonal signature.
  ExactComplex dot(const std::array<int, 5>& sig) const;
};

struct AntiTableEntry {
  ExactComplex scalar;  // identity multiple, taken from the (0,0) entry
  Mat4c residual;       // remainder; zero for a valid flat set
};
using AntiTable = std::array<std::array<AntiTableEntry, 5>, 5>;

// Builds the five matrices for a convention without validating them.
std::array<Mat4c, 5> construct_matrices(const ConventionSet& c);

// Flat set in the standard Dirac basis; throws ConventionInconsistent when the
// anticommutator table cannot equal diag(signature) under the chosen phase.
GammaSet standard_gamma_set(const ConventionSet& c);

AntiTable anticommutator_table(const GammaSet& gs);

struct BlockMatchReport {
  bool corner_matches = false;         // (4,4) entry == (A.A - 1) * 1
  bool offdiag_matches_paper = false;  // (mu,4) entries == +A^mu * 1
  bool offdiag_matches_minus = false;  // (mu,4) entries == -A^mu * 1
  std::string detail;
};

struct ParticleSetResult {
  GammaSet set;
  BlockMatchReport report;
};

ParticleSetResult particle_gamma_set(const GammaSet& flat, const VectorPotential5& A);

// S = (1 + gamma4)/sqrt2 and its inverse (1 - gamma4)/sqrt2, exact.
// Requires (gamma4)^2 = -1; throws NotInvertible otherwise.
std::pair<Mat4c, Mat4c> similarity_transform(const GammaSet& gs);

struct ReductionReport {
  std::array<double, 4> k{};
  double mass = 0.0;
  double max_residual = 0.0;  // max over grid of |gamma^m d_m Psi|_2, unit spinor
  bool pass = false;          // max_residual < 1e-10
  std::string convention_id;
};

// Plane-wave solution of the four-dimensional equation pushed through S and
// the fifth-coordinate mass phase; measures the five-dimensional residual.
// k holds contravariant components; requires k.k = m^2 within 1e-12.
ReductionReport dirac_reduction_check(const GammaSet& gs, const std::array<double, 4>& k,
                                      double m);

struct IdentityCheck {
  std::string identity_id;
  std::string paper_eq;
  bool pass = false;
  std::string residual;  // "0" for exact, decimal magnitude otherwise
  std::string detail;
};

struct ConventionScore {
  ConventionSet convention;
  int score = 0;
  int max_score = 0;
  std::vector<IdentityCheck> checks;
};

// All identity checks for one convention point, in fixed order.
std::vector<IdentityCheck> run_identity_checks(const ConventionSet& c);

// The full finite convention space in fixed enumeration order (32 points).
std::vector<ConventionSet> convention_space();

// Scores every point and orders by identities satisfied (stable w.r.t. the
// enumeration order, so the output is deterministic).
std::vector<ConventionScore> convention_search();

// Highest-scoring point of convention_search().
ConventionSet best_convention();

}  // namespace qg5::clifford
