#include "actx/experiment.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <Eigen/Core>
#include <json.hpp>
#include <openssl/evp.h>

#include "actx/interface.hpp"
#include "actx/snapshot.hpp"

namespace actx {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string short_fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Radial oracle parameters when the scenario admits one.
struct Radial {
  Point center;
  double r0;
  double c;
};

std::optional<Radial> radial_oracle(const ScenarioConfig& cfg) {
  const auto ball = cfg.shape.as_ball();
  if (!ball) return std::nullopt;
  const TransportSpec& u = cfg.transport;
  if (u.kind == TransportKind::kNone) return Radial{ball->center, ball->radius, 0.0};
  if (u.kind == TransportKind::kQuadratic && (u.center - ball->center).norm() < 1e-12) {
    return Radial{ball->center, ball->radius, u.strength};
  }
  return std::nullopt;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("sha256: cannot read " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

void write_interface_csv(std::ostream& os, const InterfaceSet& set) {
  os << "record,a,b,c\n";
  for (const Point& v : set.vertices) os << "v," << fmt(v[0]) << ',' << fmt(v[1]) << ',' << fmt(v[2]) << '\n';
  for (const auto& s : set.segments) os << "s," << s[0] << ',' << s[1] << ",\n";
  for (const auto& t : set.triangles) os << "t," << t[0] << ',' << t[1] << ',' << t[2] << '\n';
}

ExperimentOutcome run_experiment(const fs::path& config, const fs::path& out, std::ostream& log) {
  RunConfig rc;
  try {
    rc = load_run_config(config);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return {kExitConfig, e.what(), std::nullopt};
  }
  return run_experiment(rc, out, log);
}

ExperimentOutcome run_experiment(const RunConfig& rc, const fs::path& out, std::ostream& log) {
  ExperimentOutcome outcome;
  RunConfig cfg = rc;
  cfg.solver.snapshot_dir = out / "snapshots";
  cfg.solver.keep_frames = false;
  try {
    cfg.scenario.validate();
    fs::create_directories(out);
    outcome.result = run(cfg.scenario, cfg.solver);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return {kExitConfig, e.what(), std::nullopt};
  }
  const RunResult& r = *outcome.result;
  const ScenarioConfig& s = cfg.scenario;
  for (const auto& w : r.warnings) log << "warning: " << w << '\n';

  {
    std::ofstream csv(out / "diagnostics.csv", std::ios::binary);
    write_diagnostics_csv(csv, r.rows);
  }
  fs::create_directories(out / "interface");
  std::vector<fs::path> files{out / "diagnostics.csv"};
  for (const fs::path& snap : r.snapshots) {
    files.push_back(snap);
    const Snapshot sn = read_snapshot(snap);
    const fs::path csv_path = out / "interface" / (snap.stem().string() + ".csv");
    std::ofstream csv(csv_path, std::ios::binary);
    write_interface_csv(csv, extract_interface(sn.field));
    csv.close();
    files.push_back(csv_path);
  }

  json m;
  m["tool"] = "actx";
  m["version"] = kVersion;
  m["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
               std::to_string(EIGEN_MINOR_VERSION);
  m["compiler"] = __VERSION__;
  m["config"] = cfg.text;
  m["status"] = r.aborted ? "aborted" : "clean";
  if (r.aborted) m["abort_message"] = r.abort_message;
  m["dim"] = s.dim();
  m["h"] = s.grid.h();
  m["epsilon"] = s.epsilon;
  m["beta"] = s.beta;
  m["tau"] = s.tau_value();
  m["T"] = s.T;
  m["dt"] = r.dt;
  m["steps"] = r.steps;
  m["diag_every"] = cfg.solver.diag_every;
  const Index planned = r.dt > 0.0 ? static_cast<Index>(std::llround(s.T / r.dt)) : 0;
  m["expected_rows"] = planned / cfg.solver.diag_every + 1;
  m["rate_bound"] = s.transport.max_potential_rate(s.grid.box(), s.dim(), s.T) + 0.05;
  m["profile_bound"] = s.well.max_profile_slope();
  m["transport_bounds_ok"] = r.bounds.ok();
  m["warnings"] = r.warnings;
  json listing = json::array();
  for (const fs::path& f : files) {
    listing.push_back({{"path", fs::relative(f, out).generic_string()},
                       {"bytes", fs::file_size(f)},
                       {"sha256", sha256_file(f)}});
  }
  m["files"] = listing;
  write_text(out / "run-manifest", m.dump(2) + "\n");

  if (r.aborted) {
    log << r.abort_message << '\n';
    outcome.exit_code = kExitAbort;
    outcome.message = r.abort_message;
  } else {
    log << "run complete: " << r.steps << " steps, dt = " << short_fmt(r.dt) << ", " << r.rows.size()
        << " diagnostics rows\n";
  }
  return outcome;
}

SweepReport sweep(const SweepPlan& plan, const fs::path& out, std::ostream& log) {
  SweepReport report;
  RunConfig base;
  try {
    base = load_run_config(plan.base);
  } catch (const ConfigError& e) {
    for (double m : plan.ladder) {
      RungReport rung;
      rung.epsilon = m;
      rung.failed = true;
      rung.failure = e.what();
      report.rungs.push_back(rung);
    }
    return report;
  }
  const GridSpec& g0 = base.scenario.grid;
  const double width = g0.hi()[0] - g0.lo()[0];
  const double h0 = width / plan.h0_cells;

  for (std::size_t i = 0; i < plan.ladder.size(); ++i) {
    RungReport rung;
    rung.epsilon = plan.ladder[i] * h0;
    rung.cells = static_cast<int>(std::lround(plan.h0_cells * plan.ratio / plan.ladder[i]));
    rung.h = width / rung.cells;
    log << "rung " << i << ": epsilon = " << short_fmt(rung.epsilon) << ", cells = " << rung.cells << '\n';
    try {
      RunConfig rc = base;
      ScenarioConfig& c = rc.scenario;
      std::array<int, 3> cells{0, 0, 0};
      for (int k = 0; k < g0.dim(); ++k) {
        cells[k] = static_cast<int>(std::lround((g0.hi()[k] - g0.lo()[k]) / rung.h));
      }
      c.grid = GridSpec(g0.dim(), g0.lo(), g0.hi(), cells);
      c.epsilon = rung.epsilon;
      if (c.epsilon < 4.0 * c.grid.h() * (1.0 - 1e-12)) throw ConfigError("rung violates epsilon >= 4h");
      rc.solver.snapshot_dir = out / ("rung_" + std::to_string(i)) / "snapshots";
      rc.solver.keep_frames = true;
      rc.solver.frame_from = c.tau_value();
      const RunResult r = run(c, rc.solver);
      if (r.aborted) throw std::runtime_error(r.abort_message);
      const double tau = c.tau_value();

      rung.interface_error = kNaN;
      if (const auto radial = radial_oracle(c)) {
        const auto oracle = mcf_oracle(radial->r0, radial->c, c.dim(), c.T);
        double err = 0.0;
        for (const DiagnosticsRow& row : r.rows) {
          if (row.t <= 0.0 || row.radius <= 0.0) continue;
          err = std::max(err, std::abs(row.radius - oracle.at(row.t)));
        }
        rung.interface_error = err;
      }
      for (const DiagnosticsRow& row : r.rows) {
        if (row.t < tau) continue;
        rung.max_density_ratio = std::max(rung.max_density_ratio, row.density_ratio);
        rung.sup_xi_pos = std::max(rung.sup_xi_pos, row.sup_xi_pos);
      }
      rung.fitted_c = kNaN;
      try {
        std::optional<HuiskenProbe> probe = rc.solver.probe;
        if (!probe) {
          if (const auto ball = c.shape.as_ball()) {
            const double d = probe_scale(c.grid.box(), c.inner_box(), c.dim());
            probe = HuiskenProbe::at(ball->center + Point(ball->radius, 0.0, 0.0), c.T + 0.01, d);
          }
        }
        if (probe) rung.fitted_c = monotonicity_check(r.trajectory, *probe, tau, std::min(c.T, probe->s)).fitted_c;
      } catch (const std::invalid_argument& e) {
        log << "  monotonicity check skipped: " << e.what() << '\n';
      }
      rung.gronwall_margin = kNaN;
      if (c.transport.is_gradient()) {
        const GronwallReport gr = gronwall_check(r.trajectory);
        rung.gronwall_margin = gr.rate_bound - gr.max_rate;
      }
    } catch (const std::exception& e) {
      rung.failed = true;
      rung.failure = e.what();
      log << "  rung failed: " << e.what() << '\n';
    }
    report.rungs.push_back(rung);
  }

  for (std::size_t i = 1; i < report.rungs.size(); ++i) {
    const RungReport& a = report.rungs[i - 1];
    RungReport& b = report.rungs[i];
    const double ratio = a.epsilon / b.epsilon;
    const bool usable = !a.failed && !b.failed && std::isfinite(a.interface_error) &&
                        std::isfinite(b.interface_error) && a.interface_error > 0.0 && b.interface_error > 0.0 &&
                        std::abs(std::log(ratio)) > 1e-12;
    if (usable) {
      b.order = std::log(a.interface_error / b.interface_error) / std::log(ratio);
    } else {
      b.order_undefined = true;
    }
  }
  return report;
}

void write_sweep_table(std::ostream& os, const SweepReport& report) {
  os << "epsilon,h,cells,status,interface_error,order,max_density_ratio,sup_xi_pos,fitted_c,gronwall_margin\n";
  for (std::size_t i = 0; i < report.rungs.size(); ++i) {
    const RungReport& r = report.rungs[i];
    os << fmt(r.epsilon) << ',' << fmt(r.h) << ',' << r.cells << ',' << (r.failed ? "failed" : "ok") << ',';
    if (r.failed) {
      os << ",,,,,\n";
      continue;
    }
    os << fmt(r.interface_error) << ',';
    if (r.order) {
      os << fmt(*r.order);
    } else if (r.order_undefined) {
      os << "undefined";
    }
    os << ',' << fmt(r.max_density_ratio) << ',' << fmt(r.sup_xi_pos) << ',' << fmt(r.fitted_c) << ','
       << fmt(r.gronwall_margin) << '\n';
  }
}

ReportOutcome emit_report(const fs::path& dir, std::ostream& os) {
  ReportOutcome rep;
  json manifest = json::object();
  bool have_manifest = false;
  std::vector<std::string> gaps;
  {
    std::ifstream in(dir / "run-manifest");
    if (in) {
      try {
        in >> manifest;
        have_manifest = manifest.is_object();
        if (!have_manifest) gaps.push_back("run-manifest is not a JSON object");
      } catch (const json::exception& e) {
        gaps.push_back(std::string("run-manifest unreadable: ") + e.what());
      }
    } else {
      gaps.push_back("run-manifest missing");
    }
  }
  DiagnosticsTable table;
  bool have_table = false;
  std::optional<std::string> invalid;
  {
    std::ifstream in(dir / "diagnostics.csv");
    if (in) {
      try {
        table = read_diagnostics_csv(in);
        have_table = true;
      } catch (const std::runtime_error& e) {
        invalid = e.what();
      }
    } else {
      gaps.push_back("diagnostics.csv missing");
    }
  }

  struct Check {
    std::string name;
    std::optional<bool> pass;  // empty: not evaluable
    std::string detail;
  };
  std::vector<Check> checks;
  const auto col = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < table.header.size(); ++i) {
      if (table.header[i] == name) return i;
    }
    return std::nullopt;
  };
  const bool ready = have_manifest && have_table;
  const auto num = [&](const char* key) {
    if (!manifest.is_object()) return kNaN;
    const auto it = manifest.find(key);
    return it != manifest.end() && it->is_number() ? it->get<double>() : kNaN;
  };
  const auto status_it = manifest.find("status");
  const std::string status = status_it != manifest.end() && status_it->is_string() ? status_it->get<std::string>() : "?";
  const bool aborted = have_manifest && status != "clean";

  // 1. clean completion
  checks.push_back({"run completed", have_manifest ? std::optional<bool>(!aborted) : std::nullopt,
                    have_manifest ? status : "no manifest"});
  // 2. row count
  if (ready) {
    const double planned = num("expected_rows");
    const Index expected = std::isfinite(planned) ? static_cast<Index>(planned) : -1;
    checks.push_back({"diagnostics complete", static_cast<Index>(table.rows.size()) == expected,
                      std::to_string(table.rows.size()) + " rows, expected " + std::to_string(expected)});
  } else {
    checks.push_back({"diagnostics complete", std::nullopt, "missing inputs"});
  }
  const auto column_max = [&](const char* name, bool after_tau) {
    double m = -std::numeric_limits<double>::infinity();
    const auto c = col(name);
    const auto tc = col("t");
    if (!c || !tc) return kNaN;
    for (const auto& row : table.rows) {
      if (after_tau && row[*tc] < num("tau")) continue;
      m = std::max(m, row[*c]);
    }
    return m;
  };
  const auto bound_check = [&](const std::string& name, const char* column, bool after_tau, double limit) {
    if (!ready) {
      checks.push_back({name, std::nullopt, "missing inputs"});
      return;
    }
    const double v = column_max(column, after_tau);
    if (!std::isfinite(v)) {
      checks.push_back({name, std::nullopt, std::string("no samples for ") + column});
      return;
    }
    checks.push_back({name, v <= limit, short_fmt(v) + " <= " + short_fmt(limit)});
  };
  // 3. near maximum principle
  bound_check("max |phi| <= 1 + 10 dt", "max_abs_phi", false, 1.0 + 10.0 * num("dt"));
  // 4. energy cap
  if (ready && col("energy") && !table.rows.empty()) {
    const double e0 = table.rows.front()[*col("energy")];
    bound_check("energy cap", "energy", false, 1.25 * e0 * std::exp(num("rate_bound") * num("T")));
  } else {
    checks.push_back({"energy cap", std::nullopt, "missing inputs"});
  }
  // 5. discrepancy
  bound_check("sup xi <= 10 eps^-beta", "sup_xi", true, 10.0 * std::pow(num("epsilon"), -num("beta")));
  // 6. gradient
  bound_check("sup eps|grad phi| <= 1.2 max sqrt(2W)", "sup_eps_grad", true, 1.2 * num("profile_bound"));
  // 7. density ratio argmax on the interface
  if (ready && col("density_ratio") && col("argmax_interface_distance")) {
    const double limit = 4.0 * num("h");
    double worst = 0.0;
    bool finite = true;
    int samples = 0;
    for (const auto& row : table.rows) {
      if (row[*col("t")] < num("tau")) continue;
      finite = finite && std::isfinite(row[*col("density_ratio")]);
      const double dist = row[*col("argmax_interface_distance")];
      if (row[*col("density_ratio")] > 0.0 && dist >= 0.0) {
        ++samples;
        worst = std::max(worst, dist);
      }
    }
    if (samples == 0) {
      checks.push_back({"density-ratio argmax within 4h of interface", std::nullopt, "no density-ratio samples"});
    } else {
      checks.push_back({"density-ratio argmax within 4h of interface", finite && worst <= limit,
                        short_fmt(worst) + " <= " + short_fmt(limit)});
    }
  } else {
    checks.push_back({"density-ratio argmax within 4h of interface", std::nullopt, "missing inputs"});
  }
  // 8. Gronwall growth
  if (ready && col("gronwall_factor")) {
    double rate = 0.0;
    for (const auto& row : table.rows) {
      const double t = row[*col("t")];
      const double f = row[*col("gronwall_factor")];
      if (t > 0.0 && f > 0.0) rate = std::max(rate, std::log(f) / t);
    }
    checks.push_back({"weighted-energy growth rate", rate <= num("rate_bound"),
                      short_fmt(rate) + " <= " + short_fmt(num("rate_bound"))});
  } else {
    checks.push_back({"weighted-energy growth rate", std::nullopt, "missing inputs"});
  }

  rep.total = static_cast<int>(checks.size());
  if (invalid) rep.lines.push_back("FAIL diagnostics validation: " + *invalid);
  for (const std::string& g : gaps) rep.lines.push_back("GAP  " + g);
  bool all = !invalid.has_value();
  bool any_gap = false;
  for (const Check& c : checks) {
    any_gap = any_gap || !c.pass;
    if (c.pass && *c.pass) ++rep.passed;
    all = all && c.pass && *c.pass;
    rep.lines.push_back(std::string(!c.pass ? "GAP " : (*c.pass ? "PASS" : "FAIL")) + " " + c.name + " (" +
                        c.detail + ")");
  }
  if (aborted || !gaps.empty() || any_gap) {
    rep.status = "INCOMPLETE";
  } else {
    rep.status = all ? "ACCEPT" : "REJECT";
  }

  std::ostringstream text;
  for (const std::string& l : rep.lines) text << l << '\n';
  text << rep.summary() << '\n';
  os << text.str();
  std::error_code ec;
  if (fs::is_directory(dir, ec)) {
    write_text(dir / "report.txt", text.str());
    std::ostringstream csv;
    csv << "check,status,detail\n";
    for (const Check& c : checks) {
      csv << '"' << c.name << "\"," << (!c.pass ? "gap" : (*c.pass ? "pass" : "fail")) << ",\"" << c.detail
          << "\"\n";
    }
    write_text(dir / "report.csv", csv.str());
  }
  return rep;
}

}  // namespace actx
