#include "qg5/suites.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "qg5/errors.hpp"
#include "qg5/fivegeom.hpp"
#include "qg5/metric.hpp"
#include "qg5/rng.hpp"
#include "qg5/scan.hpp"
#include "qg5/spinormap.hpp"

namespace qg5::suites {

using nlohmann::ordered_json;

std::string fmt_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string residual_str(double v) { return v == 0.0 ? "0" : fmt_double(v); }

CheckResult make_check(const std::string& id, const std::string& eq, bool pass, double residual,
                       ordered_json details = ordered_json::object()) {
  return CheckResult{id, eq, pass ? "pass" : "fail", residual_str(residual), std::move(details)};
}

CheckResult make_measured(const std::string& id, const std::string& eq, double residual,
                          ordered_json details = ordered_json::object()) {
  return CheckResult{id, eq, "measured", residual_str(residual), std::move(details)};
}

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
}

}  // namespace

int SuiteReport::count(const std::string& status) const {
  int n = 0;
  for (const auto& c : checks)
    if (c.status == status) ++n;
  return n;
}

clifford::ConventionSet effective_convention(const RunConfig& cfg) {
  if (cfg.convention_override) return *cfg.convention_override;
  return clifford::best_convention();
}

// ---------------------------------------------------------------------------

SuiteReport run_clifford_suite(const RunConfig& cfg) {
  SuiteReport rep;
  rep.suite = "clifford";
  rep.seed = cfg.seed;
  clifford::ConventionSet conv = effective_convention(cfg);
  rep.convention_id = conv.id();

  // Identity checks for the active convention. The two sign findings are
  // recorded as measured so the paper-vs-derivation conflicts can never mask
  // or fake a regression.
  const std::vector<std::string> measured_ids{"eq16.offdiag_paper_sign",
                                              "eq18.s_gamma4_mu_claim"};
  for (const auto& ic : clifford::run_identity_checks(conv)) {
    bool measured = false;
    for (const auto& m : measured_ids) measured = measured || m == ic.identity_id;
    ordered_json det = ordered_json::object();
    if (!ic.detail.empty()) det["note"] = ic.detail;
    if (measured) {
      det["holds_exactly"] = ic.pass;
      rep.checks.push_back(CheckResult{ic.identity_id, ic.paper_eq, "measured", ic.residual,
                                       std::move(det)});
    } else {
      rep.checks.push_back(CheckResult{ic.identity_id, ic.paper_eq,
                                       ic.pass ? "pass" : "fail", ic.residual, std::move(det)});
    }
  }

  // Exhaustive search over the convention space: deterministic, and the
  // winner must satisfy the flat table plus all three reductions.
  auto s1 = clifford::convention_search();
  auto s2 = clifford::convention_search();
  bool deterministic = s1.size() == s2.size();
  for (size_t i = 0; deterministic && i < s1.size(); ++i)
    deterministic = s1[i].convention.id() == s2[i].convention.id() && s1[i].score == s2[i].score;

  auto passes = [](const clifford::ConventionScore& s, const std::string& id) {
    for (const auto& ch : s.checks)
      if (ch.identity_id == id) return ch.pass;
    return false;
  };
  int full = 0;
  for (const auto& s : s1)
    if (passes(s, "eq15.table") && passes(s, "eq19.reduction_rest") &&
        passes(s, "eq19.reduction_boost") && passes(s, "eq19.reduction_massless"))
      ++full;

  ordered_json det;
  det["points"] = s1.size();
  det["best_convention"] = s1.front().convention.id();
  det["best_score"] = s1.front().score;
  det["max_score"] = s1.front().max_score;
  det["satisfying_table_and_reduction"] = full;
  det["sign_conflicts"] = ordered_json::array(
      {"printed block +A^mu holds only for vector_potential_sign +1; the defining relation "
       "gamma4 = dot-gamma4 - A_mu dot-gamma^mu yields -A^mu",
       "S gamma4 gamma^mu S^-1 equals -gamma^mu for every convention with (gamma4)^2 = -1",
       "the reduction requires the mass factor e^{-i m x4}; the printed exponent has +"});
  rep.checks.push_back(
      make_check("search.full_space", "plumbing", deterministic && full > 0, 0.0, det));
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

using sym::EvalContext;
using sym::MetricTensor;
using sym::SymExpr;

SymExpr sc(long v) { return SymExpr::constant(Rational(v)); }

bool conformal5_connection_matches() {
  sym::FieldPtr om = sym::opaque_field("omega", true);
  MetricTensor g = sym::metric_conformal_flat(5, SymExpr::field(om));
  sym::Connection conn = sym::christoffel(g);
  std::vector<int> eta{1, -1, -1, -1, -1};
  SymExpr winv = SymExpr::field(om).inv();
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b)
      for (int c = 0; c < 5; ++c) {
        std::vector<SymExpr> terms;
        if (a == b) terms.push_back(SymExpr::field(om, {c}));
        if (a == c) terms.push_back(SymExpr::field(om, {b}));
        if (b == c)
          terms.push_back(sc(-eta[static_cast<size_t>(a)] * eta[static_cast<size_t>(b)]) *
                          SymExpr::field(om, {a}));
        SymExpr want = SymExpr::constant(Rational(1, 2)) * winv * SymExpr::sum(std::move(terms));
        if (!conn.at(a, b, c).equals(want)) return false;
      }
  return true;
}

bool bianchi_and_symmetry_hold(const MetricTensor& g) {
  sym::CurvatureBundle cb = sym::curvature(g);
  const int n = g.dim();
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d)
      if (!(cb.ric(b, d) - cb.ric(d, b)).is_zero()) return false;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          SymExpr s = cb.riem(a, b, c, d) + cb.riem(a, c, d, b) + cb.riem(a, d, b, c);
          if (!s.is_zero()) return false;
        }
  return true;
}

}  // namespace

SuiteReport run_conformal_suite(const RunConfig& cfg) {
  SuiteReport rep;
  rep.suite = "conformal";
  rep.seed = cfg.seed;
  rep.convention_id = "n/a";

  // Connection closed forms.
  {
    MetricTensor polar = sym::metric_polar2();
    sym::Connection conn = sym::christoffel(polar);
    SymExpr r = SymExpr::coordinate(0);
    bool ok = conn.at(0, 1, 1).equals(-r) && conn.at(1, 0, 1).equals(r.inv()) &&
              conn.at(0, 0, 0).is_zero() && conn.at(1, 1, 1).is_zero();
    rep.checks.push_back(make_check("eq4.christoffel_polar", "Eq. 4", ok, ok ? 0.0 : 1.0));
  }
  rep.checks.push_back(make_check("eq4.christoffel_conformal5", "Eq. 4",
                                  conformal5_connection_matches(),
                                  conformal5_connection_matches() ? 0.0 : 1.0));

  // Curvature engine anchors.
  {
    bool flat_ok = sym::curvature(MetricTensor::minkowski(4)).scalar.is_zero();
    rep.checks.push_back(make_check("curvature.flat_zero", "Eq. 4", flat_ok, flat_ok ? 0 : 1));
    bool polar_ok = sym::curvature(sym::metric_polar2()).scalar.is_zero();
    rep.checks.push_back(
        make_check("curvature.polar_scalar_zero", "Eq. 4", polar_ok, polar_ok ? 0 : 1));
    bool sphere_ok = sym::curvature(sym::metric_sphere2()).scalar.equals(sc(2));
    rep.checks.push_back(
        make_check("curvature.sphere_scalar_two", "Eq. 4", sphere_ok, sphere_ok ? 0 : 1));
  }
  {
    sym::FieldPtr om = sym::opaque_field("omega", true);
    sym::FieldPtr psi = sym::opaque_field("Psi", true);
    bool ok = bianchi_and_symmetry_hold(MetricTensor::minkowski(4)) &&
              bianchi_and_symmetry_hold(sym::metric_polar2()) &&
              bianchi_and_symmetry_hold(sym::metric_sphere2()) &&
              bianchi_and_symmetry_hold(sym::metric_conformal_flat(5, SymExpr::field(om))) &&
              bianchi_and_symmetry_hold(
                  sym::metric_conformal_flat(5, SymExpr::field(psi).pow(Rational(4, 3))));
    rep.checks.push_back(make_check("curvature.bianchi_ricci_symmetry", "Eq. 9a", ok, ok ? 0 : 1,
                                    ordered_json{{"metrics", 5}}));
  }

  // Conformal scalar identity with the engine-determined constant.
  for (int n : {5, 4}) {
    sym::ConformalIdentityReport cir = sym::conformal_scalar_identity(n);
    ordered_json det;
    det["c_n"] = cir.c_n.get_str();
    det["exponent"] = cir.exponent.get_str();
    det["weight"] = cir.weight.get_str();
    det["fd_max_rel_dev"] = fmt_double(cir.fd_max_rel_dev);
    det["fd_step"] = cir.fd_step;
    det["fd_rel_tol"] = cir.fd_rel_tol;
    bool ok = cir.residual_zero && cir.fd_pass;
    rep.checks.push_back(make_check("eq9b.conformal_identity_n" + std::to_string(n), "Eq. 9b",
                                    ok, cir.residual_zero ? 0.0 : 1.0, det));
  }

  // Ricci split: exact recomposition and the independent flat-base formula.
  {
    sym::FieldPtr om = sym::opaque_field("omega", true);
    SymExpr w = SymExpr::field(om);
    MetricTensor eta = MetricTensor::minkowski(5);
    sym::RicciSplit split = sym::conformal_ricci_split(eta, om);
    MetricTensor weta(5);
    for (int i = 0; i < 5; ++i)
      for (int j = i; j < 5; ++j) weta.set(i, j, (w * eta.at(i, j)).normalized());
    sym::CurvatureBundle full = sym::curvature(weta);
    bool recompose = true;
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        recompose = recompose &&
                    (split.base(i, j) + split.t(i, j) - full.ric(i, j)).is_zero() &&
                    split.base(i, j).is_zero();
    rep.checks.push_back(
        make_check("eq9a.ricci_split_recompose", "Eq. 9a", recompose, recompose ? 0 : 1));

    std::vector<int> sig{1, -1, -1, -1, -1};
    SymExpr winv = w.inv();
    SymExpr boxw = sym::dalembertian(w, 5, sig);
    std::vector<SymExpr> g2;
    for (int i = 0; i < 5; ++i)
      g2.push_back(sc(sig[static_cast<size_t>(i)]) * SymExpr::field(om, {i}) * SymExpr::field(om, {i}));
    SymExpr grad2 = SymExpr::sum(std::move(g2));
    bool formula = true;
    for (int a = 0; a < 5 && formula; ++a)
      for (int b = 0; b < 5 && formula; ++b) {
        SymExpr wa = SymExpr::field(om, {a}), wb = SymExpr::field(om, {b});
        SymExpr wab = SymExpr::field(om, {a, b});
        SymExpr t1 = sc(-3) * (SymExpr::constant(Rational(1, 2)) * wab * winv -
                               SymExpr::constant(Rational(3, 4)) * wa * wb * winv * winv);
        SymExpr eta_ab = a == b ? sc(sig[static_cast<size_t>(a)]) : sc(0);
        SymExpr t2 = -eta_ab * (SymExpr::constant(Rational(1, 2)) * boxw * winv +
                                SymExpr::constant(Rational(1, 4)) * grad2 * winv * winv);
        formula = split.t(a, b).equals(t1 + t2);
      }
    rep.checks.push_back(
        make_check("eq9a.ricci_split_flat_formula", "Eq. 11", formula, formula ? 0 : 1));
  }

  // Signed wave operator on an on-shell plane wave.
  {
    std::vector<ExactComplex> wf;
    for (long v : {5L, 4L, 0L, 0L, 3L}) wf.push_back(ExactComplex::i() * ExactComplex(v));
    SymExpr wave = SymExpr::field(sym::plane_wave_field("w", wf));
    bool ok = sym::dalembertian(wave, 5, {1, -1, -1, -1, -1}).is_zero();
    rep.checks.push_back(make_check("eq9b.dalembertian_planewave", "Eq. 9b", ok, ok ? 0 : 1));
  }
  return rep;
}

// ---------------------------------------------------------------------------

SuiteReport run_fivegeom_suite(const RunConfig& cfg) {
  using namespace fivegeom;
  SuiteReport rep;
  rep.suite = "fivegeom";
  rep.seed = cfg.seed;
  rep.convention_id = "n/a";

  // Block form with generic symbolic potential and unit factors.
  {
    FiveMetric fm = FiveMetric::flat();
    std::array<SymExpr, 4> a;
    for (int i = 0; i < 4; ++i) {
      a[static_cast<size_t>(i)] = SymExpr::field(sym::opaque_field("A" + std::to_string(i)));
      fm.pot[static_cast<size_t>(i)] = a[static_cast<size_t>(i)];
    }
    MetricTensor g = assemble_metric(fm);
    bool ok = g.at(4, 4).equals(sc(-1));
    for (int mu = 0; mu < 4 && ok; ++mu) {
      ok = g.at(mu, 4).equals(a[static_cast<size_t>(mu)]);
      for (int nu = 0; nu < 4 && ok; ++nu)
        ok = g.at(mu, nu).equals(fm.g(mu, nu) - a[static_cast<size_t>(mu)] * a[static_cast<size_t>(nu)]);
    }
    rep.checks.push_back(make_check("eq7.block_form", "Eq. 7", ok, ok ? 0 : 1));
  }

  // Determinant closed form at sample values.
  {
    FiveMetric fm = FiveMetric::flat();
    fm.pot[0] = SymExpr::constant(Rational(0.4));
    fm.lambda = SymExpr::constant(Rational(0.9));
    fm.omega = SymExpr::constant(Rational(1.3));
    EvalContext ctx;
    ctx.coords.assign(5, 0.0);
    double det = assemble_metric(fm).determinant().eval_real(ctx);
    double want = std::pow(1.3, 5) * std::pow(0.9, 4);
    double resid = std::abs(det - want);
    rep.checks.push_back(make_check("eq8.determinant", "Eq. 8", resid < 1e-12, resid,
                                    ordered_json{{"closed_form", "-omega^5 lambda^4 det(g4)"}}));
  }

  // Zero potential: pure fifth-axis motion.
  {
    GeodesicField field = preferred_geodesic_field(FiveMetric::flat());
    auto traj = integrate_geodesic(field, GeodesicState{{0, 0, 0, 0, 0}, 0}, 0.01, 100);
    double resid = 0;
    for (int mu = 0; mu < 4; ++mu) resid = std::max(resid, std::abs(traj.back().x[static_cast<size_t>(mu)]));
    resid = std::max(resid, std::abs(traj.back().x[4] - 1.0));
    auto v = field.at({0, 0, 0, 0, 0});
    rep.checks.push_back(make_check("eq9.zero_potential", "Eq. 9", resid < 1e-10, resid,
                                    ordered_json{{"norm_mode", std::string(1, v.norm_mode)}}));
  }

  // Constant potential closed form.
  {
    double a = 0.6;
    FiveMetric fm = FiveMetric::flat();
    fm.pot[0] = SymExpr::constant(Rational(a));
    GeodesicField field = preferred_geodesic_field(fm);
    auto traj = integrate_geodesic(field, GeodesicState{{0, 0, 0, 0, 0}, 0}, 1e-3, 1000);
    double resid = std::abs(traj.back().x[0] - a);
    rep.checks.push_back(
        make_check("eq9.constant_potential_closed_form", "Eq. 9", resid < 1e-10, resid));
  }

  // Richardson convergence order of the integrator.
  {
    FiveMetric fm = FiveMetric::flat();
    SymExpr x0 = SymExpr::coordinate(0);
    fm.pot[0] = SymExpr::constant(Rational(0.5)) + SymExpr::constant(Rational(0.3)) * x0 +
                SymExpr::constant(Rational(0.05)) * x0 * x0;
    GeodesicField field = preferred_geodesic_field(fm);
    auto endpoint = [&](double ds) {
      int steps = static_cast<int>(std::lround(1.0 / ds));
      return integrate_geodesic(field, GeodesicState{{0, 0, 0, 0, 0}, 0}, ds, steps).back().x;
    };
    auto e1 = endpoint(0.05), e2 = endpoint(0.025), e3 = endpoint(0.0125);
    double d1 = 0, d2 = 0;
    for (int i = 0; i < 5; ++i) {
      d1 = std::max(d1, std::abs(e1[static_cast<size_t>(i)] - e2[static_cast<size_t>(i)]));
      d2 = std::max(d2, std::abs(e2[static_cast<size_t>(i)] - e3[static_cast<size_t>(i)]));
    }
    double order = std::log2(d1 / d2);
    rep.checks.push_back(make_check("eq9.convergence_order", "Eq. 9", order >= 3.9,
                                    std::max(0.0, 3.9 - order),
                                    ordered_json{{"measured_order", fmt_double(order)}}));
  }

  // Path-image invariance under a constant omega rescaling.
  {
    auto make_field = [](double omega_scale) {
      FiveMetric fm = FiveMetric::flat();
      SymExpr x0 = SymExpr::coordinate(0), x1 = SymExpr::coordinate(1);
      fm.pot[0] = SymExpr::constant(Rational(0.5)) + SymExpr::constant(Rational(0.1)) * x1;
      fm.pot[1] = SymExpr::constant(Rational(0.1)) * x0;
      fm.omega = SymExpr::constant(Rational(omega_scale));
      return preferred_geodesic_field(fm);
    };
    auto base = integrate_geodesic(make_field(1.0), GeodesicState{}, 2.5e-4, 4000);
    auto fast = integrate_geodesic(make_field(2.237), GeodesicState{}, 2.5e-4, 4000);
    auto pa = project_observer(base);
    auto pb = project_observer(fast);
    double len = std::min(polyline_length(pa), polyline_length(pb));
    auto ra = resample_arclength(pa, len, 4000);
    auto rb = resample_arclength(pb, len, 4000);
    double h = polyline_hausdorff(ra, rb, /*parallel=*/true);
    rep.checks.push_back(make_check("eq9.path_invariance_omega", "Eq. 9", h < 1e-8, h,
                                    ordered_json{{"omega_scale", 2.237},
                                                 {"projection", "observer space-time"}}));
  }

  // Mass-shell residuals.
  {
    double r1 = klein_gordon_check({0.7, 0, 0, 0}, 0.7);
    double r2 = klein_gordon_check({5, 4, 0, 0}, 3);
    double r3 = klein_gordon_check({0, 0, 0, 0}, 0);
    double worst = std::max({r1, r2, r3});
    rep.checks.push_back(make_check("eq10.kg_on_shell", "Eq. 10", worst < 1e-12, worst));
    double m = 0.6;
    double defect = std::abs(klein_gordon_check({2 * m, 0, 0, 0}, m) - 3 * m * m);
    rep.checks.push_back(make_check("eq10.kg_defect", "Eq. 10", defect < 1e-10, defect,
                                    ordered_json{{"expected", "|m^2 - k.k|"}}));
  }

  // Count invariance across seeded scenarios.
  {
    double dev = scan::count_invariance_max_dev(100, sub_seed(cfg.seed, 5), scan::Mode::Parallel);
    rep.checks.push_back(make_check("eq5.count_invariance", "Eq. 5", dev < 1e-12, dev,
                                    ordered_json{{"trials", 100}}));
  }
  return rep;
}

// ---------------------------------------------------------------------------

SuiteReport run_spinormap_suite(const RunConfig& cfg) {
  using namespace spinormap;
  SuiteReport rep;
  rep.suite = "spinormap";
  rep.seed = cfg.seed;
  clifford::ConventionSet conv = effective_convention(cfg);
  rep.convention_id = conv.id();
  clifford::GammaSet gs = clifford::standard_gamma_set(conv);
  NumGammaSet plain = NumGammaSet::from(gs, BarReading::Plain);
  NumGammaSet adj = NumGammaSet::from(gs, BarReading::DiracAdjoint);

  std::array<double, 25> g5{};
  for (int i = 0; i < 5; ++i)
    g5[static_cast<size_t>(i * 5 + i)] = gs.convention.signature[static_cast<size_t>(i)];

  // Reality of the image coordinates, checked against the hermiticity of the
  // effective matrices (decided in exact arithmetic).
  {
    ordered_json det;
    bool ok = true;
    double worst_predicted = 0;
    for (const NumGammaSet* set : {&plain, &adj}) {
      auto rs = scan::reality_scan(*set, 1000, sub_seed(cfg.seed, 11), scan::Mode::Parallel);
      ordered_json entry;
      for (int m = 0; m < 5; ++m) {
        entry["hermitian"].push_back(set->hermitian[static_cast<size_t>(m)]);
        entry["max_imag"].push_back(fmt_double(rs.max_imag[static_cast<size_t>(m)]));
        if (set->hermitian[static_cast<size_t>(m)]) {
          ok = ok && rs.max_imag[static_cast<size_t>(m)] < 1e-12;
          worst_predicted = std::max(worst_predicted, rs.max_imag[static_cast<size_t>(m)]);
        }
      }
      det[reading_str(set->reading)] = entry;
    }
    rep.checks.push_back(make_check("eq21.reality_scan", "Eq. 21", ok, worst_predicted, det));
    rep.checks.push_back(make_measured(
        "eq21.real_space_reading", "Eq. 21", 0.0,
        ordered_json{{"finding",
                      "all five image coordinates are real under the dirac-adjoint reading; "
                      "only x0 under the plain reading"}}));
  }

  {
    double v = scan::phase_invariance_max(adj, 1000, sub_seed(cfg.seed, 12), scan::Mode::Parallel);
    rep.checks.push_back(make_check("eq21.phase_invariance", "Eq. 21", v < 1e-14, v));
  }
  {
    double v = scan::homogeneity_max(adj, 1000, sub_seed(cfg.seed, 13), scan::Mode::Parallel);
    rep.checks.push_back(make_check("eq21.homogeneity", "Eq. 21", v < 1e-12, v));
  }
  {
    double v =
        scan::jacobian_fd_max_rel(adj, 100, sub_seed(cfg.seed, 14), 1e-6, scan::Mode::Parallel);
    rep.checks.push_back(make_check("eq21.jacobian_fd", "Eq. 21", v < 1e-8, v,
                                    ordered_json{{"points", 100}, {"step", 1e-6}}));
    double lin = scan::jacobian_linearity_max(adj, 100, sub_seed(cfg.seed, 15),
                                              scan::Mode::Parallel);
    rep.checks.push_back(make_check("eq21.jacobian_linearity", "Eq. 21", lin < 1e-12, lin));
  }
  {
    int rank = scan::pullback_max_rank(adj, g5, 100, sub_seed(cfg.seed, 16), scan::Mode::Parallel);
    rep.checks.push_back(make_check("eq21.pullback_rank", "Eq. 21", rank <= 5, 0.0,
                                    ordered_json{{"max_rank", rank}}));
    double k = scan::pullback_phase_kernel_max(adj, g5, 100, sub_seed(cfg.seed, 17),
                                               scan::Mode::Parallel);
    rep.checks.push_back(make_check("eq21.pullback_phase_kernel", "Eq. 21", k < 1e-10, k));
  }

  {
    auto rows = scan::stereo_sweep(1.0, scan::Mode::Parallel);
    double worst = 0;
    for (const auto& r : rows) worst = std::max(worst, r.residual);
    rep.checks.push_back(make_check("fig.stereo_double_angle", "Fig. rollo", worst < 1e-9, worst,
                                    ordered_json{{"rows", rows.size()}}));
  }

  for (ProbeSolution sol :
       {ProbeSolution::Constant, ProbeSolution::HarmonicPolynomial, ProbeSolution::PlaneWave}) {
    ProbeReport pr = dalembert_factorization_probe(adj, sol, sub_seed(cfg.seed, 18));
    ordered_json det;
    det["solution"] = probe_solution_name(sol);
    det["reading"] = pr.reading;
    det["xi_signature"] = pr.xi_signature;
    det["points"] = pr.points;
    det["fd_step"] = pr.fd_step;
    det["solution_scale"] = fmt_double(pr.solution_scale);
    det["first_application"] = ordered_json{{"max", fmt_double(pr.max_first)},
                                            {"rms", fmt_double(pr.rms_first)}};
    det["second_application"] = ordered_json{{"max", fmt_double(pr.max_second)},
                                             {"rms", fmt_double(pr.rms_second)}};
    det["verdict"] = pr.confirmed_at_tol ? "CONFIRMED-at-tolerance" : "UNCONFIRMED";
    det["tolerance"] = pr.tol;
    rep.checks.push_back(make_measured(
        "eq21.factorization_probe_" + probe_solution_name(sol), "Eq. 21 (item 2)",
        pr.max_second, det));
  }
  return rep;
}

// ---------------------------------------------------------------------------

std::vector<SuiteReport> run_suites(const RunConfig& cfg) {
  std::vector<SuiteReport> out;
  if (cfg.suite == "clifford" || cfg.suite == "all") out.push_back(run_clifford_suite(cfg));
  if (cfg.suite == "conformal" || cfg.suite == "all") out.push_back(run_conformal_suite(cfg));
  if (cfg.suite == "fivegeom" || cfg.suite == "all") out.push_back(run_fivegeom_suite(cfg));
  if (cfg.suite == "spinormap" || cfg.suite == "all") out.push_back(run_spinormap_suite(cfg));
  if (out.empty())
    throw ConfigInvalid("unknown suite '" + cfg.suite +
                        "' (expected clifford|conformal|fivegeom|spinormap|all)");
  return out;
}

int exit_status(const std::vector<SuiteReport>& reports) {
  for (const auto& r : reports)
    if (r.any_fail()) return 1;
  return 0;
}

std::string timestamp_utc() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

ordered_json report_json(const std::vector<SuiteReport>& reports, const RunConfig& cfg,
                         bool with_timestamp) {
  ordered_json doc;
  doc["schema_version"] = 1;
  doc["tool"] = "qg5";
  doc["tool_version"] = "1.0.0";
  if (with_timestamp) doc["timestamp"] = timestamp_utc();
  doc["seed"] = cfg.seed;
  doc["suite_selector"] = cfg.suite;
  doc["suites"] = ordered_json::array();
  for (const auto& r : reports) {
    ordered_json s;
    s["suite"] = r.suite;
    s["convention"] = r.convention_id;
    s["summary"] = ordered_json{
        {"pass", r.count("pass")}, {"fail", r.count("fail")}, {"measured", r.count("measured")}};
    s["checks"] = ordered_json::array();
    for (const auto& c : r.checks) {
      ordered_json jc;
      jc["check_id"] = c.check_id;
      jc["paper_eq"] = c.paper_eq;
      jc["status"] = c.status;
      jc["residual"] = c.residual;
      if (!c.details.empty()) jc["details"] = c.details;
      s["checks"].push_back(std::move(jc));
    }
    doc["suites"].push_back(std::move(s));
  }
  return doc;
}

std::string report_markdown(const std::vector<SuiteReport>& reports, const RunConfig& cfg) {
  std::string md = "# qg5 verification report\n\nseed: " + std::to_string(cfg.seed) + "\n";
  for (const auto& r : reports) {
    md += "\n## suite " + r.suite + " (convention " + r.convention_id + ")\n\n";
    md += "| check | eq | status | residual |\n|---|---|---|---|\n";
    for (const auto& c : r.checks)
      md += "| " + c.check_id + " | " + c.paper_eq + " | " + c.status + " | " + c.residual +
            " |\n";
    md += "\npass " + std::to_string(r.count("pass")) + ", fail " +
          std::to_string(r.count("fail")) + ", measured " + std::to_string(r.count("measured")) +
          "\n";
  }
  return md;
}

ordered_json conventions_json(bool with_timestamp) {
  ordered_json doc;
  doc["schema_version"] = 1;
  doc["tool"] = "qg5";
  if (with_timestamp) doc["timestamp"] = timestamp_utc();
  doc["points"] = ordered_json::array();
  for (const auto& s : clifford::convention_search()) {
    ordered_json p;
    p["convention"] = s.convention.id();
    p["score"] = s.score;
    p["max_score"] = s.max_score;
    p["identities"] = ordered_json::array();
    for (const auto& ch : s.checks) {
      ordered_json e;
      e["identity_id"] = ch.identity_id;
      e["paper_eq"] = ch.paper_eq;
      e["convention"] = s.convention.id();
      e["residual"] = ch.residual;
      e["pass"] = ch.pass;
      if (!ch.detail.empty()) e["note"] = ch.detail;
      p["identities"].push_back(std::move(e));
    }
    doc["points"].push_back(std::move(p));
  }
  return doc;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoFailure("write failed for '" + path + "'");
}

}  // namespace qg5::suites
