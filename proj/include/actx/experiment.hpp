// Run orchestration: artifact directories, epsilon sweeps and reports.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "actx/config.hpp"
#include "actx/interface.hpp"
#include "actx/solver.hpp"

namespace actx {

inline constexpr const char* kVersion = "0.1.0";

/// Exit status of run_experiment.
enum ExitCode : int { kExitClean = 0, kExitConfig = 1, kExitAbort = 2 };

struct ExperimentOutcome {
  int exit_code = kExitClean;
  std::string message;
  std::optional<RunResult> result;
};

/// Writes diagnostics.csv, snapshots/*.afld, interface/*.csv and run-manifest
/// (JSON: config echo, versions, run parameters, every file with its SHA-256).
ExperimentOutcome run_experiment(const std::filesystem::path& config, const std::filesystem::path& out,
                                 std::ostream& log);
ExperimentOutcome run_experiment(const RunConfig& rc, const std::filesystem::path& out, std::ostream& log);

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Writes the interface as `record,a,b,c` rows: `v,x,y,z` per vertex, then
/// `s,i,j,` per segment or `t,i,j,k` per triangle.
void write_interface_csv(std::ostream& os, const InterfaceSet& set);

struct RungReport {
  double epsilon = 0.0;
  double h = 0.0;
  int cells = 0;
  bool failed = false;
  std::string failure;
  double interface_error = 0.0;  // max |R - R_oracle| over rows; NaN without a radial oracle
  double max_density_ratio = 0.0;  // over t >= tau
  double sup_xi_pos = 0.0;         // over Omega' x [tau, T]
  double fitted_c = 0.0;           // monotonicity constant; NaN when unavailable
  double gronwall_margin = 0.0;    // bound - observed rate; NaN for non-gradient transport
  std::optional<double> order;     // interface-error order against the previous rung
  bool order_undefined = false;
};

struct SweepReport {
  std::vector<RungReport> rungs;
};

/// Refines grid and epsilon together at fixed epsilon/h. A failed rung is marked
/// and the sweep continues.
SweepReport sweep(const SweepPlan& plan, const std::filesystem::path& out, std::ostream& log);
void write_sweep_table(std::ostream& os, const SweepReport& report);

struct ReportOutcome {
  std::string status;  // ACCEPT, REJECT or INCOMPLETE
  int passed = 0;
  int total = 8;
  std::vector<std::string> lines;
  std::string summary() const { return status + " " + std::to_string(passed) + "/" + std::to_string(total); }
};

/// Evaluates the run-level checks on an artifact directory, prints them and
/// writes report.txt and report.csv next to the artifacts.
ReportOutcome emit_report(const std::filesystem::path& dir, std::ostream& os);

}  // namespace actx
