// actx: Allen-Cahn with transport, runs and diagnostics.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "actx/config.hpp"
#include "actx/experiment.hpp"
#include "actx/interface.hpp"
#include "actx/measures.hpp"
#include "actx/snapshot.hpp"

namespace {

void apply_thread_cap() {
#ifdef _OPENMP
  if (const char* env = std::getenv("ACTX_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
#endif
}

int diagnose(const std::string& snapshot, const std::string& config, double epsilon, const std::string& probe) {
  using namespace actx;
  const Snapshot snap = read_snapshot(snapshot);
  ScenarioConfig cfg;
  if (!config.empty()) {
    cfg = load_run_config(config).scenario;
  } else {
    cfg.epsilon = epsilon;
    cfg.grid = snap.field.spec;
  }
  if (!(cfg.epsilon > 0.0)) throw ConfigError("diagnose: pass --config or --epsilon");
  cfg.grid = snap.field.spec;
  const ScalarField& phi = snap.field;
  const auto bv = cfg.stencil_boundary();
  const EnergyMeasure mu = energy_measure(phi, cfg.epsilon, cfg.well, bv);
  const ScalarField xi = discrepancy_field(phi, cfg.epsilon, cfg.well, bv);
  const Box in = cfg.inner_box();
  const double d = probe_scale(cfg.grid.box(), in, cfg.dim());
  const DensityRatio dr = density_ratio(mu.density, ball_lattice(cfg.grid, in, 0.5 * d));
  const InterfaceSet iface = extract_interface(phi);

  std::cout.precision(10);
  std::cout << "time " << snap.time << '\n'
            << "grid " << cfg.grid.describe() << '\n'
            << "energy " << mu.total << '\n'
            << "density_ratio " << dr.value << " at r=" << dr.radius << " (lattice gap " << dr.lattice_gap << ")\n"
            << "sup_xi " << region_max(xi, in) << '\n'
            << "max_abs_phi " << phi.values.abs().maxCoeff() << '\n'
            << "interface_measure " << iface.measure() << '\n';
  if (!probe.empty()) {
    const HuiskenProbe p = parse_probe(probe, cfg.dim(), d);
    std::cout << "kernel_integral " << kernel_integral(mu.density, p, snap.time) << '\n'
              << "kernel_discrepancy " << kernel_integral(xi, p, snap.time) / (2.0 * (p.s - snap.time)) << '\n'
              << "positive_discrepancy_ball "
              << positive_discrepancy_ball(phi, cfg.epsilon, cfg.well, p.y, p.r_outer, bv) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_cap();
  CLI::App app{"Allen-Cahn with transport: simulation and geometric-measure diagnostics"};
  app.require_subcommand(1);

  std::string config, out, plan, snapshot, probe, dir;
  double epsilon = 0.0;
  double r0 = 0.25, c = 0.0, t_end = 0.02;
  int dim = 2, samples = 11;

  auto* run_cmd = app.add_subcommand("run", "Run one scenario and write an artifact directory");
  run_cmd->add_option("--config", config, "Scenario config (key = value)")->required();
  run_cmd->add_option("--out", out, "Artifact directory")->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "Run an epsilon ladder and report convergence");
  sweep_cmd->add_option("--plan", plan, "Sweep plan")->required();
  sweep_cmd->add_option("--out", out, "Output directory")->required();

  auto* diag_cmd = app.add_subcommand("diagnose", "Recompute diagnostics from a snapshot");
  diag_cmd->add_option("--snapshot", snapshot, "AFLD snapshot")->required();
  diag_cmd->add_option("--config", config, "Scenario config for epsilon, well and boxes");
  diag_cmd->add_option("--epsilon", epsilon, "Interface width when no config is given");
  diag_cmd->add_option("--probe", probe, "Heat-kernel probe, y=x1,x2[,x3],s=t[,r=d]");

  auto* oracle_cmd = app.add_subcommand("oracle", "Radial sharp-interface radius R(t)");
  oracle_cmd->add_option("--r0", r0, "Initial radius");
  oracle_cmd->add_option("--c", c, "Forcing coefficient in g = c|x|^2/2");
  oracle_cmd->add_option("--dim", dim, "Space dimension")->check(CLI::Range(2, 3));
  oracle_cmd->add_option("--t-end", t_end, "End time");
  oracle_cmd->add_option("--samples", samples, "Output rows")->check(CLI::PositiveNumber);

  auto* report_cmd = app.add_subcommand("report", "Summarize an artifact directory");
  report_cmd->add_option("--dir", dir, "Artifact directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return actx::run_experiment(config, out, std::cerr).exit_code;
    if (*sweep_cmd) {
      const actx::SweepReport rep = actx::sweep(actx::load_sweep_plan(plan), out, std::cerr);
      std::filesystem::create_directories(out);
      std::ofstream table(std::filesystem::path(out) / "sweep.csv");
      actx::write_sweep_table(table, rep);
      actx::write_sweep_table(std::cout, rep);
      for (const auto& r : rep.rungs) {
        if (r.failed) return 2;
      }
      return 0;
    }
    if (*diag_cmd) return diagnose(snapshot, config, epsilon, probe);
    if (*oracle_cmd) {
      const auto o = actx::mcf_oracle(r0, c, dim, t_end);
      std::cout.precision(12);
      std::cout << "t,R\n";
      for (int i = 0; i < samples; ++i) {
        const double t = samples > 1 ? t_end * i / (samples - 1) : 0.0;
        std::cout << t << ',' << o.at(t) << '\n';
      }
      if (o.extinction_time()) std::cout << "# extinction " << *o.extinction_time() << '\n';
      return 0;
    }
    if (*report_cmd) {
      const auto rep = actx::emit_report(dir, std::cout);
      return rep.status == "ACCEPT" ? 0 : 1;
    }
  } catch (const actx::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
