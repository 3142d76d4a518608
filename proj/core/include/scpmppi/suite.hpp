#pragma once

#include "scpmppi/config_io.hpp"
#include "scpmppi/trial.hpp"

namespace scpmppi {

struct SuiteCell {
  Variant variant{Variant::ScpSvgd};
  int K{50};
};

struct SuiteConfig {
  std::vector<SuiteCell> cells;
  std::vector<std::string> tiers;      // generated-environment labels
  std::vector<double> tier_densities;  // obstacles per m^2, aligned with tiers
  std::vector<std::string> env_files;  // explicit environments instead of tiers
  int trials{10};
  std::uint64_t base_seed{1};
  SolverConfig solver;  // per-cell variant/K applied on top
  TrialLimits limits;
  SensorConfig sensor;
  Bounds field{{0.0, 0.0}, {20.0, 15.0}};
  Eigen::Vector3d start{1.5, 7.5, 1.0};
  Eigen::Vector3d goal{18.5, 7.5, 1.0};
  double corridor_clearance{1.5};
  double cylinder_radius{0.75};
  int suite_threads{0};  // parallel trials; each trial then solves single-threaded
  std::string out_dir;   // empty = no files written
  bool export_plots{false};
};

struct TrialRecord {
  std::string variant_label;
  int K{0};
  std::string env_label;
  int trial{0};
  std::uint64_t seed{0};
  TrialResult result;
  std::string error;  // nonempty when the trial threw; counted as a failure
};

struct CellReport {
  std::string variant_label;
  int K{0};
  std::string env_label;
  int trials{0};
  double success_rate{0.0};     // percent
  double mean_flight_time{0.0}; // over successes; NaN when none
  double mean_avg_speed{0.0};   // over successes; NaN when none
  double mean_smoothness{0.0};
  double mean_solve_rate{0.0};
};

struct SuiteReport {
  std::vector<CellReport> cells;
  std::vector<TrialRecord> records;
};

SuiteConfig load_suite_config(const KeyValueFile& file);

// The environment for (env_label index, trial) is shared by every cell, so
// variants are compared on identical worlds.
Environment suite_environment(const SuiteConfig& cfg, int tier_index, int trial);

SuiteReport run_suite(const SuiteConfig& cfg);
SuiteReport run_suite(const std::string& suite_config_path);

// Aggregate per-trial records into per-cell rows (stable cell order).
std::vector<CellReport> aggregate(const std::vector<TrialRecord>& records);

std::string format_report(const SuiteReport& report);  // aligned text table

void write_results_csv(const SuiteReport& report, const std::string& path);
std::vector<TrialRecord> load_results_csv(const std::string& path);
void write_summary_csv(const SuiteReport& report, const std::string& path);

}  // namespace scpmppi
