// Closed-loop benchmark CLI: `run` executes trial suites against generated
// or file-based environments, `report` aggregates a results directory into
// the summary table.

#include "scpmppi/config_io.hpp"
#include "scpmppi/suite.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

namespace {

struct Override {
  std::string key;
  std::optional<std::string> value;
};

// Every solver/suite config key gets a CLI flag of the same name; flags
// given on the command line replace the file's value before parsing.
void add_override_flags(CLI::App& cmd, std::vector<Override>& overrides) {
  static const std::vector<std::pair<std::string, std::string>> keys = {
      {"variant", "solver variant (mppi|scp|scp-svgd); restricts the run to one cell"},
      {"K", "sample count"},
      {"T", "horizon steps"},
      {"M", "sparse control points"},
      {"L", "SVGD iterations"},
      {"lambda", "inverse temperature"},
      {"epsilon", "SVGD step size"},
      {"sigma", "sampling variance diagonal, scalar or x,y,z"},
      {"dt", "step duration [s]"},
      {"u_max", "speed limit vector, scalar or x,y,z"},
      {"fd_step", "finite-difference perturbation [m/s]"},
      {"q_diag", "position-error weight diagonal"},
      {"r_diag", "control-effort weight diagonal"},
      {"w_d", "obstacle-proximity weight"},
      {"w_v", "speed-constraint weight"},
      {"likelihood_offset", "optimality-likelihood offset"},
      {"d_min", "obstacle distance clamp floor [m]"},
      {"d_max", "obstacle distance when nothing is sensed [m]"},
      {"collision_penalty", "cost added to colliding rollouts"},
      {"robot_radius", "robot radius [m]"},
      {"bandwidth_mode", "kernel bandwidth heuristic (paper|pairwise)"},
      {"shift_warm_start", "shift the warm start by one knot (true|false)"},
      {"threads", "solver worker threads (0 = auto)"},
      {"suite_threads", "parallel trials (0 = auto)"},
      {"cells", "comma list of variant:K cells"},
      {"tiers", "comma list of generated density tiers"},
      {"densities", "obstacles per m^2, one per tier"},
      {"goal_tol", "goal tolerance [m]"},
      {"max_time", "simulated time limit [s]"},
      {"stuck_window", "stall detection window [s]"},
      {"stuck_radius", "stall displacement threshold [m]"},
      {"beams", "lidar beam count"},
      {"max_range", "lidar range [m]"},
      {"field", "field size, width,height [m]"},
      {"start", "start position x,y,z"},
      {"goal", "goal position x,y,z"},
      {"corridor_clearance", "obstacle-free radius around start/goal [m]"},
      {"cylinder_radius", "obstacle radius [m]"},
  };
  overrides.reserve(keys.size());
  for (const auto& [key, help] : keys) {
    overrides.push_back({key, std::nullopt});
    std::string flag = "--" + key;
    for (char& c : flag) {
      if (c == '_') c = '-';
    }
    cmd.add_option(flag, overrides.back().value, help);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sampling-based MPC benchmark (MPPI / SCP-MPPI / SCP-MPPI+SVGD)"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a trial suite and write results");
  std::string config_path;
  std::vector<std::string> env_files;
  std::string density_tier;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::string out_dir = "bench-out";
  bool export_plots = false;
  bool capture_candidates = false;
  std::vector<Override> overrides;

  run->add_option("--config", config_path, "flat key=value config file")
      ->check(CLI::ExistingFile);
  run->add_option("--env", env_files, "environment file(s) to run instead of generated tiers")
      ->check(CLI::ExistingFile);
  run->add_option("--density", density_tier, "restrict to one generated tier (low|mid|high)");
  run->add_option("--seed", seed, "override the suite base seed");
  run->add_option("--trials", trials, "trials per cell");
  run->add_option("--out-dir", out_dir, "output directory");
  run->add_flag("--export-plots", export_plots, "write an SVG per trial");
  run->add_flag("--capture-candidates", capture_candidates,
                "overlay first-solve candidate rollouts on plots");
  add_override_flags(*run, overrides);

  auto* report = app.add_subcommand("report", "summarize a results directory");
  std::string in_dir;
  report->add_option("--in", in_dir, "directory containing results.csv")
      ->required()
      ->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      scpmppi::KeyValueFile file;
      if (!config_path.empty()) file = scpmppi::KeyValueFile::parse_file(config_path);
      for (const Override& o : overrides) {
        if (o.value) file.set(o.key, *o.value);
      }
      if (seed) file.set("base_seed", std::to_string(*seed));
      if (trials) file.set("trials", std::to_string(*trials));
      if (capture_candidates) file.set("capture_candidates", "true");

      scpmppi::SuiteConfig suite = scpmppi::load_suite_config(file);
      suite.out_dir = out_dir;
      suite.export_plots = export_plots;

      const auto unread = file.unread_keys();
      if (!unread.empty()) {
        std::cerr << "unknown config key(s):";
        for (const auto& k : unread) std::cerr << ' ' << k;
        std::cerr << '\n';
        return 2;
      }

      if (file.has("variant")) {
        // A single-variant run: one cell at the configured K.
        suite.cells = {{suite.solver.variant, suite.solver.K}};
      }
      if (!env_files.empty()) {
        suite.env_files = env_files;
      } else if (!density_tier.empty()) {
        bool found = false;
        for (size_t i = 0; i < suite.tiers.size(); ++i) {
          if (suite.tiers[i] == density_tier) {
            suite.tiers = {suite.tiers[i]};
            suite.tier_densities = {suite.tier_densities[i]};
            found = true;
            break;
          }
        }
        if (!found) {
          std::cerr << "unknown density tier '" << density_tier << "'\n";
          return 2;
        }
      }

      scpmppi::validate_config(suite.solver);
      std::filesystem::create_directories(suite.out_dir);

      const scpmppi::SuiteReport result = scpmppi::run_suite(suite);
      std::cout << scpmppi::format_report(result);
      std::cout << "results written to " << suite.out_dir << "/results.csv\n";
      return 0;
    }

    if (report->parsed()) {
      scpmppi::SuiteReport rep;
      rep.records = scpmppi::load_results_csv(
          (std::filesystem::path(in_dir) / "results.csv").string());
      rep.cells = scpmppi::aggregate(rep.records);
      std::cout << scpmppi::format_report(rep);
      scpmppi::write_summary_csv(rep,
                                 (std::filesystem::path(in_dir) / "summary.csv").string());
      std::cout << "summary written to " << in_dir << "/summary.csv\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
