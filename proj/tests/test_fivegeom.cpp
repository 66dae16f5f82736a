#include "qg5/fivegeom.hpp"

#include <cmath>

#include "doctest.h"
#include "qg5/errors.hpp"
#include "qg5/rng.hpp"

using namespace qg5;
using namespace qg5::fivegeom;
using sym::EvalContext;
using sym::SymExpr;

namespace {

SymExpr c(long v) { return SymExpr::constant(Rational(v)); }
SymExpr cd(double v) { return SymExpr::constant(Rational(v)); }

// Numeric determinant by Laplace expansion (test-only oracle).
double det_numeric(int n, const std::vector<double>& m) {
  if (n == 1) return m[0];
  double acc = 0;
  std::vector<double> minor(static_cast<size_t>((n - 1) * (n - 1)));
  for (int c0 = 0; c0 < n; ++c0) {
    for (int r = 1; r < n; ++r) {
      int mc = 0;
      for (int cc = 0; cc < n; ++cc) {
        if (cc == c0) continue;
        minor[static_cast<size_t>((r - 1) * (n - 1) + mc)] = m[static_cast<size_t>(r * n + cc)];
        ++mc;
      }
    }
    double sub = det_numeric(n - 1, minor);
    acc += (c0 % 2 == 0 ? 1.0 : -1.0) * m[static_cast<size_t>(c0)] * sub;
  }
  return acc;
}

}  // namespace

TEST_CASE("assembled metric reproduces the unit-factor block form") {
  // Generic symbolic potential; unit conformal factors.
  FiveMetric fm = FiveMetric::flat();
  std::array<SymExpr, 4> a;
  for (int i = 0; i < 4; ++i) {
    a[static_cast<size_t>(i)] = SymExpr::field(sym::opaque_field("A" + std::to_string(i)));
    fm.pot[static_cast<size_t>(i)] = a[static_cast<size_t>(i)];
  }
  sym::MetricTensor g = assemble_metric(fm);
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      SymExpr want = fm.g(mu, nu) - a[static_cast<size_t>(mu)] * a[static_cast<size_t>(nu)];
      CHECK(g.at(mu, nu).equals(want));
    }
    CHECK(g.at(mu, 4).equals(a[static_cast<size_t>(mu)]));
    CHECK(g.at(4, mu).equals(a[static_cast<size_t>(mu)]));
  }
  CHECK(g.at(4, 4).equals(c(-1)));
  // Structural symmetry of the assembly.
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      CHECK(g.at(i, j).normalized().structurally_equal(g.at(j, i).normalized()));
}

TEST_CASE("zero potential with unit factors gives diag(g, -1)") {
  FiveMetric fm = FiveMetric::flat();
  sym::MetricTensor g = assemble_metric(fm);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      if (i == j) continue;
      CHECK(g.at(i, j).is_zero());
    }
  CHECK(g.at(0, 0).equals(c(1)));
  CHECK(g.at(4, 4).equals(c(-1)));
}

TEST_CASE("assembled determinant equals -omega^5 lambda^4 det(g4)") {
  FiveMetric fm = FiveMetric::flat();
  fm.pot[0] = cd(0.4);
  fm.lambda = cd(0.9);
  fm.chi = c(1);
  fm.omega = cd(1.3);
  sym::MetricTensor g = assemble_metric(fm);
  SymExpr det = g.determinant();
  EvalContext ctx;
  ctx.coords.assign(5, 0.0);
  double det_sym = det.eval_real(ctx);

  // Route 1: frozen closed form (Schur complement of the corner block):
  // det = -omega^5 lambda^4 det(eta) = omega^5 lambda^4.
  double want = std::pow(1.3, 5) * std::pow(0.9, 4);
  CHECK(det_sym == doctest::Approx(want).epsilon(1e-12));

  // Route 2: numeric determinant of the evaluated matrix.
  std::vector<double> m(25);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) m[static_cast<size_t>(i * 5 + j)] = g.at(i, j).eval_real(ctx);
  CHECK(det_sym == doctest::Approx(det_numeric(5, m)).epsilon(1e-12));

  // (0,0) entry is omega * (lambda - a^2).
  CHECK(g.at(0, 0).eval_real(ctx) == doctest::Approx(1.3 * (0.9 - 0.16)).epsilon(1e-14));
}

TEST_CASE("zero potential: pure fifth-coordinate motion") {
  FiveMetric fm = FiveMetric::flat();
  GeodesicField field = preferred_geodesic_field(fm);
  auto v = field.at({0.3, -0.2, 0.1, 0.0, 0.7});
  for (int mu = 0; mu < 4; ++mu) CHECK(v.v[static_cast<size_t>(mu)] == 0.0);
  CHECK(v.v[4] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(v.norm_mode == '-');

  auto traj = integrate_geodesic(field, GeodesicState{{0, 0, 0, 0, 0}, 0.0}, 0.01, 100);
  REQUIRE(traj.size() == 101);
  for (int mu = 0; mu < 4; ++mu) CHECK(traj.back().x[static_cast<size_t>(mu)] == 0.0);
  CHECK(traj.back().x[4] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(traj.back().s == doctest::Approx(1.0));
}

TEST_CASE("constant potential: closed-form linear trajectory") {
  double a = 0.6;
  FiveMetric fm = FiveMetric::flat();
  fm.pot[0] = cd(a);
  GeodesicField field = preferred_geodesic_field(fm);
  // g^{00} = +1: dx0/ds = a, other observer components zero.
  auto v = field.at({0, 0, 0, 0, 0});
  CHECK(v.v[0] == doctest::Approx(a).epsilon(1e-14));
  CHECK(v.v[1] == 0.0);

  auto traj = integrate_geodesic(field, GeodesicState{{0, 0, 0, 0, 0}, 0.0}, 1e-3, 1000);
  CHECK(std::abs(traj.back().x[0] - a) < 1e-10);
  // Linear in s: midpoint is half the endpoint.
  CHECK(std::abs(traj[500].x[0] - a / 2) < 1e-10);
}

TEST_CASE("integrator converges at fourth order") {
  // Nonlinear smooth field: A_0 depends on x0, so dx0/ds = f(x0).
  FiveMetric fm = FiveMetric::flat();
  SymExpr x0 = SymExpr::coordinate(0);
  fm.pot[0] = cd(0.5) + cd(0.3) * x0 + cd(0.05) * x0 * x0;
  GeodesicField field = preferred_geodesic_field(fm);

  auto endpoint = [&](double ds) {
    int steps = static_cast<int>(std::lround(1.0 / ds));
    return integrate_geodesic(field, GeodesicState{{0, 0, 0, 0, 0}, 0.0}, ds, steps).back().x;
  };
  auto e1x = endpoint(0.05), e2x = endpoint(0.025), e3x = endpoint(0.0125);
  double d1 = 0, d2 = 0;
  for (int i = 0; i < 5; ++i) {
    d1 = std::max(d1, std::abs(e1x[static_cast<size_t>(i)] - e2x[static_cast<size_t>(i)]));
    d2 = std::max(d2, std::abs(e2x[static_cast<size_t>(i)] - e3x[static_cast<size_t>(i)]));
  }
  double order = std::log2(d1 / d2);
  CHECK(order >= 3.9);
  // Halving ds cuts the endpoint error by roughly 16x.
  CHECK(d1 / d2 > 14.0);
  CHECK(d1 / d2 < 18.5);
}

TEST_CASE("path image is invariant under constant rescaling of omega") {
  // Curved observer-space path: A_0 and A_1 vary over space-time.
  auto make_field = [](double omega_scale) {
    FiveMetric fm = FiveMetric::flat();
    SymExpr x0 = SymExpr::coordinate(0), x1 = SymExpr::coordinate(1);
    fm.pot[0] = cd(0.5) + cd(0.1) * x1;
    fm.pot[1] = cd(0.1) * x0;
    fm.omega = cd(omega_scale);
    return preferred_geodesic_field(fm);
  };
  double scale = 2.237;
  auto base =
      integrate_geodesic(make_field(1.0), GeodesicState{{0, 0, 0, 0, 0}, 0.0}, 2.5e-4, 4000);
  auto fast =
      integrate_geodesic(make_field(scale), GeodesicState{{0, 0, 0, 0, 0}, 0.0}, 2.5e-4, 4000);

  auto pa = project_observer(base);
  auto pb = project_observer(fast);
  // Velocity scales by the constant, so the second path is longer; compare
  // the common arc length.
  double len = std::min(polyline_length(pa), polyline_length(pb));
  auto ra = resample_arclength(pa, len, 4000);
  auto rb = resample_arclength(pb, len, 4000);
  double h_par = polyline_hausdorff(ra, rb, true);
  double h_ser = polyline_hausdorff(ra, rb, false);
  CHECK(h_par == h_ser);  // the parallel kernel is a pure reordering
  CHECK(h_par < 1e-8);

  // The extended observer-space velocity really does scale by the constant.
  auto v1 = make_field(1.0).at({0.1, 0.2, 0, 0, 0});
  auto v2 = make_field(scale).at({0.1, 0.2, 0, 0, 0});
  for (int mu = 0; mu < 4; ++mu)
    CHECK(v2.v[static_cast<size_t>(mu)] ==
          doctest::Approx(scale * v1.v[static_cast<size_t>(mu)]).epsilon(1e-12));
}

TEST_CASE("integrator error paths") {
  FiveMetric fm = FiveMetric::flat();
  GeodesicField field = preferred_geodesic_field(fm);
  CHECK_THROWS_AS(integrate_geodesic(field, GeodesicState{}, -1.0, 10), Error);
  CHECK_THROWS_AS(integrate_geodesic(field, GeodesicState{}, 0.1, 0), Error);

  // A metric whose fields blow up: 1/x0 potential hits a pole at x0 = 0.
  FiveMetric bad = FiveMetric::flat();
  bad.pot[0] = SymExpr::coordinate(0).inv();
  GeodesicField bf = preferred_geodesic_field(bad);
  CHECK_THROWS_AS(bf.at({0.0, 0, 0, 0, 0}), EvaluationDomain);
}

TEST_CASE("klein-gordon residuals") {
  // On shell: k = (m,0,0,0).
  CHECK(klein_gordon_check({0.7, 0, 0, 0}, 0.7) < 1e-12);
  CHECK(klein_gordon_check({0, 0, 0, 0}, 0.0) < 1e-15);
  // Off shell: residual = |m^2 - k.k| exactly (dyadic arithmetic).
  double m = 0.6;
  double res = klein_gordon_check({2 * m, 0, 0, 0}, m);
  CHECK(std::abs(res - 3 * m * m) < 1e-10);
  // Boosted on-shell: 5^2 - 4^2 = 3^2.
  CHECK(klein_gordon_check({5, 4, 0, 0}, 3) < 1e-12);
  double res2 = klein_gordon_check({1.5, 0.5, 0.25, 0}, 0.25);
  double want = std::abs(0.25 * 0.25 - (1.5 * 1.5 - 0.5 * 0.5 - 0.25 * 0.25));
  CHECK(std::abs(res2 - want) < 1e-10);
}

TEST_CASE("conformal count invariance") {
  CountScenario unit;
  CountResult r0 = conformal_count_invariance(unit);
  CHECK(r0.n == r0.n_prime);
  CHECK(r0.psi_prime_sq == unit.psi_sq);

  // lambda = 4 with unit marks: marks double, density quarters, N unchanged.
  CountScenario s4{1.0, {1, 1, 1, 1}, 4.0};
  CountResult r4 = conformal_count_invariance(s4);
  CHECK(r4.psi_prime_sq == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(r4.n == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r4.n_prime == doctest::Approx(1.0).epsilon(1e-14));

  // Property: |N'/N - 1| < 1e-12 over 100 random scenarios.
  for (int t = 0; t < 100; ++t) {
    CountScenario cs;
    cs.psi_sq = uniform(0xbead, static_cast<std::uint64_t>(t), 0, 0.1, 5.0);
    for (int i = 0; i < 4; ++i)
      cs.deltas[static_cast<size_t>(i)] = uniform(0xbead, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(1 + i), 0.1, 3.0);
    cs.lambda_scale = uniform(0xbead, static_cast<std::uint64_t>(t), 9, 0.1, 10.0);
    CountResult r = conformal_count_invariance(cs);
    CHECK(std::abs(r.n_prime / r.n - 1.0) < 1e-12);
  }

  CountScenario bad;
  bad.lambda_scale = -1;
  CHECK_THROWS_AS(conformal_count_invariance(bad), Error);
}
