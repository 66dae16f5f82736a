#pragma once

// Symbolic metric tensors and the curvature pipeline: Christoffel symbols,
// Riemann/Ricci/scalar curvature, the flat signed wave operator, the
// conformal scalar identity with an engine-determined constant, and the
// conformal Ricci split. A finite-difference curvature oracle that sees only
// metric values provides the numeric cross-check route.

#include <functional>
#include <vector>

#include "qg5/expr.hpp"

namespace qg5::sym {

class MetricTensor {
 public:
  explicit MetricTensor(int dim);
  static MetricTensor diagonal(const std::vector<SymExpr>& diag);
  static MetricTensor minkowski(int dim);  // diag(+1, -1, ..., -1)

  int dim() const { return dim_; }
  const SymExpr& at(int i, int j) const { return comp_[static_cast<size_t>(i * dim_ + j)]; }
  void set(int i, int j, const SymExpr& e);  // sets (i,j) and (j,i)

  SymExpr determinant() const;
  MetricTensor inverse() const;  // throws SingularMetric

 private:
  int dim_;
  std::vector<SymExpr> comp_;
};

struct Connection {
  int dim = 0;
  std::vector<SymExpr> comp;  // [a][b][c], symmetric in (b,c)
  const SymExpr& at(int a, int b, int c) const {
    return comp[static_cast<size_t>((a * dim + b) * dim + c)];
  }
};

struct CurvatureBundle {
  int dim = 0;
  std::vector<SymExpr> riemann;  // R^a_{bcd}
  std::vector<SymExpr> ricci;    // R_{bd}
  SymExpr scalar;
  const SymExpr& riem(int a, int b, int c, int d) const {
    return riemann[static_cast<size_t>(((a * dim + b) * dim + c) * dim + d)];
  }
  const SymExpr& ric(int b, int d) const { return ricci[static_cast<size_t>(b * dim + d)]; }
};

Connection christoffel(const MetricTensor& g);
CurvatureBundle curvature(const MetricTensor& g);

// Signed sum of second partials.
SymExpr dalembertian(const SymExpr& e, int dim, const std::vector<int>& signature);

struct ConformalIdentityReport {
  int n = 0;
  Rational exponent;   // 4/(n-2)
  Rational weight;     // -(n+2)/(n-2)
  Rational c_n;        // engine-determined
  bool residual_zero = false;
  std::string residual_sexpr;
  double fd_max_rel_dev = 0.0;
  bool fd_pass = false;
  double fd_step = 1e-4;
  double fd_rel_tol = 1e-6;
  std::uint64_t fd_seed = 0;
};

// Scalar curvature of Psi^{4/(n-2)} * eta against the flat wave operator:
// determines c_n from the leading monomial, verifies the full residual
// normalizes to zero, and cross-checks against the FD oracle at 5 points.
ConformalIdentityReport conformal_scalar_identity(int n);

struct RicciSplit {
  int dim = 0;
  std::vector<SymExpr> ricci_base;  // Ricci(g)
  std::vector<SymExpr> t_omega;     // Ricci(omega*g) - Ricci(g)
  const SymExpr& base(int i, int j) const { return ricci_base[static_cast<size_t>(i * dim + j)]; }
  const SymExpr& t(int i, int j) const { return t_omega[static_cast<size_t>(i * dim + j)]; }
};

RicciSplit conformal_ricci_split(const MetricTensor& g, const FieldPtr& omega);

// ---------------------------------------------------------------------------
// Finite-difference curvature from metric values only (the independent
// numeric route; shares no code with the symbolic pipeline above).

using MetricFn = std::function<void(const std::vector<double>& x, std::vector<double>& g)>;

std::vector<double> numeric_ricci(int dim, const MetricFn& metric, const std::vector<double>& x,
                                  double h);
double numeric_scalar_curvature(int dim, const MetricFn& metric, const std::vector<double>& x,
                                double h);

// Row-major dense inverse with partial pivoting (small dims).
std::vector<double> invert_dense(int dim, const std::vector<double>& m);

// Wraps a symbolic metric as a value-only callback for the FD oracle.
MetricFn metric_eval_fn(const MetricTensor& g, const EvalContext& base_ctx);

// ---------------------------------------------------------------------------
// Shared test-suite metrics.

MetricTensor metric_polar2();                         // diag(1, r^2), r = x0
MetricTensor metric_sphere2();                        // diag(1, sin^2 theta), theta = x0
MetricTensor metric_conformal_flat(int n, const SymExpr& factor);  // factor * eta_n

}  // namespace qg5::sym
