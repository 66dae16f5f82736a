// qg5: command-line runner for the five-dimensional geometry verification
// suites. Subcommands: verify, geodesic, stereo, conventions.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qg5/errors.hpp"
#include "qg5/fivegeom.hpp"
#include "qg5/scan.hpp"
#include "qg5/suites.hpp"

namespace {

using nlohmann::json;
using qg5::suites::fmt_double;

std::string join_path(const std::string& dir, const std::string& name) {
  if (dir.empty() || dir == ".") return name;
  return dir.back() == '/' ? dir + name : dir + "/" + name;
}

qg5::sym::SymExpr const_expr(double v) {
  return qg5::sym::SymExpr::constant(qg5::Rational(v));
}

qg5::fivegeom::FiveMetric metric_from_json(const json& jm) {
  using qg5::sym::SymExpr;
  qg5::fivegeom::FiveMetric fm = qg5::fivegeom::FiveMetric::flat();
  std::string g4 = jm.value("g4", "minkowski");
  if (g4 != "minkowski")
    throw qg5::ConfigInvalid("metric.g4: only \"minkowski\" is supported, got \"" + g4 + "\"");
  if (jm.contains("lambda")) fm.lambda = const_expr(jm["lambda"].get<double>());
  if (jm.contains("chi")) fm.chi = const_expr(jm["chi"].get<double>());
  if (jm.contains("omega")) fm.omega = const_expr(jm["omega"].get<double>());
  if (jm.contains("potential")) {
    const json& jp = jm["potential"];
    std::string kind = jp.value("kind", "constant");
    if (kind == "constant") {
      auto vals = jp.at("values").get<std::vector<double>>();
      if (vals.size() != 4) throw qg5::ConfigInvalid("potential.values must have 4 entries");
      for (int i = 0; i < 4; ++i) fm.pot[static_cast<size_t>(i)] = const_expr(vals[static_cast<size_t>(i)]);
    } else if (kind == "linear") {
      // rows[mu] = [c, g0, g1, g2, g3, g4]: A_mu = c + sum_i g_i x^i
      auto rows = jp.at("rows").get<std::vector<std::vector<double>>>();
      if (rows.size() != 4) throw qg5::ConfigInvalid("potential.rows must have 4 rows");
      for (int mu = 0; mu < 4; ++mu) {
        const auto& row = rows[static_cast<size_t>(mu)];
        if (row.empty() || row.size() > 6)
          throw qg5::ConfigInvalid("potential row needs 1..6 entries [c, g0..g4]");
        SymExpr e = const_expr(row[0]);
        for (size_t i = 1; i < row.size(); ++i)
          e = e + const_expr(row[i]) * SymExpr::coordinate(static_cast<int>(i - 1));
        fm.pot[static_cast<size_t>(mu)] = e;
      }
    } else {
      throw qg5::ConfigInvalid("potential.kind must be constant|linear");
    }
  }
  return fm;
}

int cmd_verify(const qg5::suites::RunConfig& cfg) {
  auto reports = qg5::suites::run_suites(cfg);
  if (cfg.format == "markdown") {
    std::string md = qg5::suites::report_markdown(reports, cfg);
    qg5::suites::write_text_file(join_path(cfg.output_dir, "report_" + cfg.suite + ".md"), md);
  } else {
    auto doc = qg5::suites::report_json(reports, cfg, /*with_timestamp=*/true);
    qg5::suites::write_text_file(join_path(cfg.output_dir, "report_" + cfg.suite + ".json"),
                                 doc.dump(2) + "\n");
  }
  for (const auto& r : reports)
    std::fprintf(stdout, "suite %-9s pass %3d fail %3d measured %3d\n", r.suite.c_str(),
                 r.count("pass"), r.count("fail"), r.count("measured"));
  return qg5::suites::exit_status(reports);
}

int cmd_geodesic(const std::string& config_path, const std::string& out_dir) {
  json cfg;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw qg5::IoFailure("cannot read config '" + config_path + "'");
    try {
      in >> cfg;
    } catch (const std::exception& e) {
      throw qg5::ConfigInvalid(std::string("bad JSON config: ") + e.what());
    }
  } else {
    cfg = json{{"metric", {{"g4", "minkowski"},
                           {"potential", {{"kind", "constant"}, {"values", {0.4, 0, 0, 0}}}}}},
               {"start", {0, 0, 0, 0, 0}},
               {"ds", 1e-3},
               {"steps", 1000}};
  }
  qg5::fivegeom::FiveMetric fm = metric_from_json(cfg.at("metric"));
  auto start_vals = cfg.at("start").get<std::vector<double>>();
  if (start_vals.size() != 5) throw qg5::ConfigInvalid("start must have 5 entries");
  qg5::fivegeom::GeodesicState start;
  for (int i = 0; i < 5; ++i) start.x[static_cast<size_t>(i)] = start_vals[static_cast<size_t>(i)];
  double ds = cfg.at("ds").get<double>();
  int steps = cfg.at("steps").get<int>();

  auto field = qg5::fivegeom::preferred_geodesic_field(fm);
  std::fprintf(stderr, "fifth-component normalization at start: mode '%c'\n",
               field.at(start.x).norm_mode);
  auto traj = qg5::fivegeom::integrate_geodesic(field, start, ds, steps);

  std::ostringstream csv;
  csv << "s,x0,x1,x2,x3,x4\n";
  for (const auto& st : traj) {
    csv << fmt_double(st.s);
    for (int i = 0; i < 5; ++i) csv << "," << fmt_double(st.x[static_cast<size_t>(i)]);
    csv << "\n";
  }
  std::string path = join_path(out_dir, "geodesic.csv");
  qg5::suites::write_text_file(path, csv.str());
  std::fprintf(stdout, "wrote %s (%zu rows)\n", path.c_str(), traj.size());
  return 0;
}

int cmd_stereo(double step_deg, const std::string& out_dir) {
  if (!(step_deg > 0) || step_deg >= 180)
    throw qg5::ConfigInvalid("step-deg must lie in (0, 180)");
  auto rows = qg5::scan::stereo_sweep(step_deg, qg5::scan::Mode::Parallel);
  std::ostringstream csv;
  csv << "phi_deg,theta_deg,residual\n";
  for (const auto& r : rows)
    csv << fmt_double(r.phi_deg) << "," << fmt_double(r.theta_deg) << ","
        << fmt_double(r.residual) << "\n";
  std::string path = join_path(out_dir, "stereo.csv");
  qg5::suites::write_text_file(path, csv.str());
  std::fprintf(stdout, "wrote %s (%zu rows)\n", path.c_str(), rows.size());
  return 0;
}

int cmd_conventions(const std::string& out_dir) {
  auto doc = qg5::suites::conventions_json(/*with_timestamp=*/true);
  std::string path = join_path(out_dir, "conventions.json");
  qg5::suites::write_text_file(path, doc.dump(2) + "\n");
  for (const auto& p : doc["points"]) {
    std::fprintf(stdout, "%-18s score %2d/%d\n", p["convention"].get<std::string>().c_str(),
                 p["score"].get<int>(), p["max_score"].get<int>());
  }
  std::fprintf(stdout, "wrote %s\n", path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"five-dimensional conformal geometry verification toolkit"};
  app.require_subcommand(1);

  qg5::suites::RunConfig cfg;
  std::string convention_id;

  auto* verify = app.add_subcommand("verify", "run a verification suite and write a report");
  verify->add_option("suite", cfg.suite, "clifford|conformal|fivegeom|spinormap|all")
      ->required();
  verify->add_option("--seed", cfg.seed, "seed that fixes every sampled point");
  verify->add_option("--out", cfg.output_dir, "output directory")->capture_default_str();
  verify->add_option("--format", cfg.format, "json|markdown")->capture_default_str();
  verify->add_option("--convention", convention_id, "convention id override (see conventions)");

  std::string geo_config, out_dir = ".";
  auto* geodesic = app.add_subcommand("geodesic", "integrate a preferred geodesic, emit CSV");
  geodesic->add_option("--config", geo_config, "JSON scenario {metric:{...}, start, ds, steps}");
  geodesic->add_option("--out", out_dir, "output directory")->capture_default_str();

  double step_deg = 1.0;
  std::string stereo_out = ".";
  auto* stereo = app.add_subcommand("stereo", "stereographic double-angle sweep, emit CSV");
  stereo->add_option("--step-deg", step_deg, "sweep step in degrees")->capture_default_str();
  stereo->add_option("--out", stereo_out, "output directory")->capture_default_str();

  std::string conv_out = ".";
  auto* conventions =
      app.add_subcommand("conventions", "rank all sign/phase conventions, emit JSON");
  conventions->add_option("--out", conv_out, "output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) {
      if (!convention_id.empty())
        cfg.convention_override = qg5::clifford::ConventionSet::from_id(convention_id);
      if (cfg.format != "json" && cfg.format != "markdown")
        throw qg5::ConfigInvalid("format must be json|markdown");
      return cmd_verify(cfg);
    }
    if (*geodesic) return cmd_geodesic(geo_config, out_dir);
    if (*stereo) return cmd_stereo(step_deg, stereo_out);
    if (*conventions) return cmd_conventions(conv_out);
  } catch (const qg5::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
