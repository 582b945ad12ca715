#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lwr/errors.hpp"
#include "lwr/ga.hpp"
#include "lwr/godunov.hpp"
#include "lwr/scenario_io.hpp"

namespace fs = std::filesystem;
using namespace lwr;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

struct SimOutputs {
  MultiResult result;
  RunReport report;
};

// Propagates the scenario's bottlenecks and writes the standard CSV trio.
SimOutputs run_simulation(const Scenario& sc, double dt, double dx,
                          double dt_out, const fs::path& out_dir,
                          bool with_grid) {
  SimOutputs out;
  MoskowitzSolution sol = build_solution(sc);

  auto t0 = std::chrono::steady_clock::now();
  out.result =
      propagate_all(sc.movers, sc.signals, sol, sc.lanes, dt, sc.domain.t_end);
  out.report.internal_conditions_s = seconds_since(t0);

  fs::create_directories(out_dir);
  const fs::path traj = out_dir / "trajectories.csv";
  const fs::path cond = out_dir / "internal_conditions.csv";
  write_trajectories_csv(traj.string(), out.result);
  write_internal_conditions_csv(cond.string(), out.result);
  out.report.outputs["trajectories"] = traj.string();
  out.report.outputs["internal_conditions"] = cond.string();

  if (with_grid) {
    t0 = std::chrono::steady_clock::now();
    const DensityField field = sol.grid(dx, dt_out);
    out.report.grid_s = seconds_since(t0);
    const fs::path dens = out_dir / "density.csv";
    write_density_csv(dens.string(), field);
    out.report.outputs["density"] = dens.string();
  }

  out.report.total_outflow = sol.evaluate(sc.domain.xn, sc.domain.t_end).value -
                             initial_count_at(sc, sc.domain.xn);
  for (std::size_t i = 0; i < sc.movers.size(); ++i) {
    const MovingBottleneckSpec& m = sc.movers[i];
    const MoverResult& mr = out.result.movers[i];
    double delay = 0.0;
    if (m.t_entry < sc.domain.t_end) {
      delay = mr.exited_by_position
                  ? (mr.final_t - m.t_entry) - (m.x_exit - m.x_entry) / m.v_max
                  : (sc.domain.t_end - m.t_entry) -
                        (mr.final_x - m.x_entry) / m.v_max;
    }
    out.report.per_bottleneck_delay.push_back(delay);
  }
  return out;
}

void write_report(const RunReport& report, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  const fs::path path = out_dir / "run_report.json";
  std::ofstream f(path);
  f << report_to_json(report);
  std::cout << report_to_json(report);
}

int cmd_simulate(const std::string& scenario_path, double dt, double dx,
                 double dt_out, const std::string& out_dir) {
  const Scenario sc = load_scenario(scenario_path);
  const SimOutputs out = run_simulation(sc, dt, dx, dt_out, out_dir, true);
  write_report(out.report, out_dir);
  return 0;
}

int cmd_validate(const std::string& scenario_path, double dx, int levels,
                 double dt, const std::string& out_dir) {
  const Scenario sc = load_scenario(scenario_path);
  if (levels < 1) throw config_error("validate: levels must be >= 1");

  RunReport report;
  double prev_err = -1.0;
  for (int level = 0; level < levels; ++level) {
    const double level_dx = dx / std::pow(2.0, level);

    // Semi-analytic side: propagate bottlenecks, then sample densities at
    // the oracle's cell centers and output times.
    MoskowitzSolution sol = build_solution(sc);
    auto t0 = std::chrono::steady_clock::now();
    const MultiResult result = propagate_all(sc.movers, sc.signals, sol,
                                             sc.lanes, dt, sc.domain.t_end);
    report.internal_conditions_s += seconds_since(t0);

    const std::size_t cells = static_cast<std::size_t>(
        std::llround((sc.domain.xn - sc.domain.x0) / level_dx));
    std::vector<double> init(cells);
    for (std::size_t i = 0; i < cells; ++i) {
      const double xc = sc.domain.x0 + (i + 0.5) * level_dx;
      double k = 0.0;
      for (const DensityPiece& p : sc.initial)
        if (xc >= p.x_lo && xc < p.x_hi) k = p.k;
      init[i] = k;
    }
    std::vector<std::vector<TrajectorySegment>> trajs;
    std::vector<double> q_rs;
    for (std::size_t b = 0; b < sc.movers.size(); ++b) {
      trajs.push_back(result.movers[b].segments);
      q_rs.push_back(max_passing_rate(sc.fd, sc.movers[b].v_max, sc.lanes));
    }
    GodunovSimulator oracle(sc.fd, sc.domain.x0, sc.domain.xn, level_dx, init,
                            sc.upstream, sc.downstream, sc.movers, q_rs, trajs,
                            sc.signals, BottleneckMode::FollowTrajectories);
    t0 = std::chrono::steady_clock::now();
    const std::size_t sample_every = static_cast<std::size_t>(
        std::llround(1.0 / oracle.cfl_dt()));
    const GodunovSimulator::History hist =
        oracle.run(sc.domain.t_end, std::max<std::size_t>(1, sample_every));
    report.oracle_s += seconds_since(t0);

    std::vector<double> semi(hist.times.size() * hist.cells);
    const double probe = std::max(2.0 * level_dx, 1.0);
    for (std::size_t it = 0; it < hist.times.size(); ++it)
      for (std::size_t i = 0; i < hist.cells; ++i)
        semi[it * hist.cells + i] = sol.density(
            sc.domain.x0 + (i + 0.5) * level_dx, hist.times[it], probe);

    const double err = compare_fields(semi, hist.k);
    const double ratio = prev_err > 0.0 ? prev_err / err : 0.0;
    std::printf("level %d  dx=%-8g  rel_L1=%.6f%s\n", level, level_dx, err,
                level > 0 ? ("  ratio=" + std::to_string(ratio)).c_str() : "");
    prev_err = err;
  }
  if (!out_dir.empty()) write_report(report, out_dir);
  return 0;
}

int cmd_optimize(const std::string& scenario_path, const std::string& objective,
                 const std::string& ga_config_path, std::int64_t seed_flag,
                 double dt, double dx, double dt_out,
                 const std::string& out_dir) {
  const Scenario sc = load_scenario(scenario_path);
  GAConfig cfg;
  if (!ga_config_path.empty()) cfg = load_ga_config(ga_config_path);
  if (seed_flag >= 0) cfg.seed = static_cast<std::uint64_t>(seed_flag);

  Objective obj;
  if (objective == "outflow") obj = Objective::Outflow;
  else if (objective == "delay") obj = Objective::Delay;
  else throw config_error("optimize: --objective must be outflow or delay");

  auto t0 = std::chrono::steady_clock::now();
  const FitnessReport fit = run_ga(cfg, sc, obj, dt);
  const double optimize_s = seconds_since(t0);

  fs::create_directories(out_dir);
  const fs::path hist = fs::path(out_dir) / "ga_history.csv";
  write_ga_history_csv(hist.string(), fit);
  const Scenario best = decode(fit.best, sc);
  const fs::path best_path = fs::path(out_dir) / "best_scenario.json";
  save_scenario(best, best_path.string());

  SimOutputs out = run_simulation(best, dt, dx, dt_out, out_dir, true);
  out.report.optimize_s = optimize_s;
  out.report.outputs["ga_history"] = hist.string();
  out.report.outputs["best_scenario"] = best_path.string();
  write_report(out.report, out_dir);
  std::printf("baseline %s = %.9g, best = %.9g\n", objective.c_str(),
              fit.baseline_fitness, fit.best_fitness);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-analytic LWR solver with moving and fixed bottlenecks"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir = "out";
  std::string objective = "outflow";
  std::string ga_config_path;
  double dt = 1.0;
  double dx = 10.0;
  double dt_out = 1.0;
  int levels = 3;
  std::int64_t seed = -1;

  CLI::App* sim = app.add_subcommand("simulate", "Propagate bottlenecks and write grids");
  sim->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  sim->add_option("--dt", dt, "Bottleneck march step (s)");
  sim->add_option("--dx", dx, "Density grid spacing (m)");
  sim->add_option("--dt-out", dt_out, "Density grid time spacing (s)");
  sim->add_option("--out", out_dir, "Output directory");

  CLI::App* val = app.add_subcommand("validate", "Compare against the Godunov oracle");
  val->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  val->add_option("--dx", dx, "Coarsest oracle cell size (m)");
  val->add_option("--levels", levels, "Number of dx-halving refinements");
  val->add_option("--dt", dt, "Bottleneck march step (s)");
  val->add_option("--out", out_dir, "Output directory");

  CLI::App* opt = app.add_subcommand("optimize", "GA over entry times and signal timings");
  opt->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  opt->add_option("--objective", objective, "outflow or delay");
  opt->add_option("--ga-config", ga_config_path, "GA config JSON file");
  opt->add_option("--seed", seed, "Override the GA seed");
  opt->add_option("--dt", dt, "Bottleneck march step (s)");
  opt->add_option("--dx", dx, "Density grid spacing (m)");
  opt->add_option("--dt-out", dt_out, "Density grid time spacing (s)");
  opt->add_option("--out", out_dir, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(scenario_path, dt, dx, dt_out, out_dir);
    if (val->parsed()) return cmd_validate(scenario_path, dx, levels, dt, out_dir);
    if (opt->parsed())
      return cmd_optimize(scenario_path, objective, ga_config_path, seed, dt,
                          dx, dt_out, out_dir);
  } catch (const schema_error& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
