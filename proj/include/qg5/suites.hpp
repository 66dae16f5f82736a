#pragma once

// Verification suites and machine-readable reports. A suite is a fixed list
// of checks, each tagged with the equation label it exercises (or the
// literal tag "plumbing") and a status: pass/fail for identities the run
// must uphold, "measured" for recorded findings that never affect the exit
// status.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qg5/clifford.hpp"

namespace qg5::suites {

struct RunConfig {
  std::string suite = "all";  // clifford | conformal | fivegeom | spinormap | all
  std::optional<clifford::ConventionSet> convention_override;
  std::uint64_t seed = 0;
  std::string output_dir = ".";
  std::string format = "json";  // json | markdown
};

struct CheckResult {
  std::string check_id;
  std::string paper_eq;  // equation tag or "plumbing"
  std::string status;    // "pass" | "fail" | "measured"
  std::string residual;  // "0" or a decimal string
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
};

struct SuiteReport {
  std::string suite;
  std::string convention_id;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  int count(const std::string& status) const;
  bool any_fail() const { return count("fail") > 0; }
};

clifford::ConventionSet effective_convention(const RunConfig& cfg);

SuiteReport run_clifford_suite(const RunConfig& cfg);
SuiteReport run_conformal_suite(const RunConfig& cfg);
SuiteReport run_fivegeom_suite(const RunConfig& cfg);
SuiteReport run_spinormap_suite(const RunConfig& cfg);

// Runs the suites selected by cfg.suite. Throws ConfigInvalid on a bad name.
std::vector<SuiteReport> run_suites(const RunConfig& cfg);

// 0 iff no pass/fail check failed; "measured" never affects the status.
int exit_status(const std::vector<SuiteReport>& reports);

nlohmann::ordered_json report_json(const std::vector<SuiteReport>& reports, const RunConfig& cfg,
                                   bool with_timestamp);
std::string report_markdown(const std::vector<SuiteReport>& reports, const RunConfig& cfg);

// Ranked convention-search document; every identity entry carries
// {identity_id, paper_eq, convention, residual, pass}.
nlohmann::ordered_json conventions_json(bool with_timestamp);

std::string fmt_double(double v);
std::string timestamp_utc();
void write_text_file(const std::string& path, const std::string& content);  // IoFailure

}  // namespace qg5::suites
