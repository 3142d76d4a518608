#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "scpmppi/export.hpp"
#include "scpmppi/suite.hpp"
#include "scpmppi/trial.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace scpmppi;

namespace {

SolverConfig fast_config(Variant variant = Variant::ScpNoSvgd) {
  SolverConfig cfg;
  cfg.variant = variant;
  cfg.K = 30;
  cfg.T = 50;
  cfg.M = variant == Variant::Mppi ? 50 : 4;
  cfg.L = variant == Variant::ScpSvgd ? 2 : 0;
  cfg.threads = 1;
  cfg.lambda = 10.0;
  cfg.sigma = {0.04, 0.04, 0.0025};
  cfg.u_max = {0.9, 0.9, 0.45};
  cfg.cost_weights.Q = Eigen::Vector3d(0.1, 0.1, 0.3).asDiagonal();
  cfg.cost_weights.R = Eigen::Matrix3d::Identity();
  cfg.cost_weights.w_d = 1.0;
  cfg.cost_weights.w_v = 10.0;
  cfg.shift_warm_start = true;
  return cfg;
}

Environment empty_env(const Eigen::Vector3d& start, const Eigen::Vector3d& goal) {
  Environment env;
  env.bounds = Bounds{{0.0, 0.0}, {12.0, 10.0}};
  env.start = start;
  env.goal = goal;
  return env;
}

const TrialLimits kLimits{0.5, 60.0, 10.0, 0.3};
const SensorConfig kSensor{90, 8.0};

}  // namespace

TEST_CASE("smoothness of constant and ramping controls is zero") {
  std::vector<ControlInput> constant(5, ControlInput(0.3, 0.1, 0.0));
  CHECK(compute_smoothness(constant) == 0.0);

  std::vector<ControlInput> ramp;
  for (int t = 0; t < 6; ++t) ramp.push_back(ControlInput(0.1 * t, -0.2 * t, 0.0));
  CHECK(compute_smoothness(ramp) < 1e-12);
}

TEST_CASE("smoothness of a single-axis spike") {
  std::vector<ControlInput> controls{ControlInput(0, 0, 0), ControlInput(1, 0, 0),
                                     ControlInput(0, 0, 0)};
  CHECK(compute_smoothness(controls) == doctest::Approx(4.0));
}

TEST_CASE("smoothness needs at least three controls") {
  std::vector<ControlInput> two(2, ControlInput::Zero());
  CHECK_THROWS_AS(compute_smoothness(two), TooShort);
}

TEST_CASE("goal at start ends immediately") {
  const Environment env = empty_env({2, 2, 1}, {2, 2, 1});
  const TrialResult r = run_trial(env, fast_config(), kLimits, kSensor, 1);
  CHECK(r.outcome == Outcome::Reached);
  CHECK(r.flight_time == 0.0);
  CHECK(r.avg_speed == 0.0);
  CHECK(r.path.size() == 1);
}

TEST_CASE("obstacle-free trials reach the goal with positive speed") {
  const Environment env = empty_env({1, 5, 1}, {10, 5, 1});
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const TrialResult r = run_trial(env, fast_config(), kLimits, kSensor, seed);
    CHECK(r.outcome == Outcome::Reached);
    CHECK(r.avg_speed > 0.0);
    CHECK(r.flight_time == doctest::Approx(r.controls.size() * 0.1));
    CHECK_FALSE(r.speed_anomaly);
    CHECK(r.solve_rate > 0.0);
  }
}

TEST_CASE("a caged robot cannot reach the goal") {
  Environment env = empty_env({6, 5, 1}, {11, 5, 1});
  for (int i = 0; i < 10; ++i) {
    const double angle = 2.0 * M_PI * i / 10;
    env.obstacles.push_back(
        Cylinder{{6.0 + 2.2 * std::cos(angle), 5.0 + 2.2 * std::sin(angle)}, 0.75});
  }
  TrialLimits limits = kLimits;
  limits.max_time = 25.0;
  const TrialResult r = run_trial(env, fast_config(), limits, kSensor, 2);
  CHECK(r.outcome != Outcome::Reached);
}

TEST_CASE("trajectory export round-trips") {
  const Environment env = empty_env({1, 5, 1}, {6, 5, 1});
  const TrialResult r = run_trial(env, fast_config(), kLimits, kSensor, 3);
  REQUIRE(r.outcome == Outcome::Reached);

  const auto path = std::filesystem::temp_directory_path() / "scpmppi_traj_test.csv";
  export_trajectory(r, path.string());
  const TrajectoryFile loaded = load_trajectory(path.string());
  std::filesystem::remove(path);

  REQUIRE(loaded.positions.size() == r.path.size());
  REQUIRE(loaded.controls.size() == r.controls.size());
  for (size_t i = 0; i < r.path.size(); ++i) {
    CHECK((loaded.positions[i] - r.path[i].position).lpNorm<Eigen::Infinity>() < 1e-12);
  }
  for (size_t i = 0; i < r.controls.size(); ++i) {
    CHECK((loaded.controls[i] - r.controls[i]).lpNorm<Eigen::Infinity>() < 1e-12);
  }
  CHECK(loaded.outcome == r.outcome);
}

TEST_CASE("zero-step trajectory file has a header and the start row") {
  TrialResult r;
  r.outcome = Outcome::Reached;
  r.path.push_back(State{{1, 2, 3}, 0});

  const auto path = std::filesystem::temp_directory_path() / "scpmppi_traj0_test.csv";
  export_trajectory(r, path.string());
  std::ifstream in(path);
  std::string line;
  int rows = 0;
  std::getline(in, line);
  CHECK(line == "t,x,y,z,ux,uy,uz,outcome_flag");
  while (std::getline(in, line)) {
    if (!line.empty()) ++rows;
  }
  in.close();
  std::filesystem::remove(path);
  CHECK(rows == 1);
}

TEST_CASE("plot export is well-formed and overlays K candidates") {
  Environment env = empty_env({1, 5, 1}, {10, 5, 1});
  env.obstacles.push_back(Cylinder{{5.0, 5.0}, 0.75});

  SolverConfig cfg = fast_config();
  cfg.capture_candidates = true;
  const SolveOutput out = solve(State{env.start, 0}, env.goal, SensedObstacles{},
                                cold_start(cfg), cfg, 4);
  REQUIRE(out.diagnostics.candidate_paths.size() == static_cast<size_t>(cfg.K));

  TrialResult r;
  r.path.push_back(State{env.start, 0});

  const auto path = std::filesystem::temp_directory_path() / "scpmppi_plot_test.svg";
  export_plot(env, r, path.string(), out.diagnostics.candidate_paths);

  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  in.close();
  std::filesystem::remove(path);

  CHECK(text.rfind("<?xml", 0) == 0);
  CHECK(text.find("</svg>") != std::string::npos);
  size_t count = 0;
  for (size_t pos = text.find("stroke-opacity"); pos != std::string::npos;
       pos = text.find("stroke-opacity", pos + 1)) {
    ++count;
  }
  CHECK(count == static_cast<size_t>(cfg.K));

  // An empty path still renders obstacles and markers.
  TrialResult empty;
  const auto path2 = std::filesystem::temp_directory_path() / "scpmppi_plot2_test.svg";
  export_plot(env, empty, path2.string());
  std::ifstream in2(path2);
  std::string text2((std::istreambuf_iterator<char>(in2)), std::istreambuf_iterator<char>());
  in2.close();
  std::filesystem::remove(path2);
  CHECK(text2.find("<circle") != std::string::npos);
  CHECK(text2.find("</svg>") != std::string::npos);
}

TEST_CASE("suite aggregation implements the success-rate definition") {
  std::vector<TrialRecord> records;
  for (int t = 0; t < 10; ++t) {
    TrialRecord r;
    r.variant_label = "scp";
    r.K = 50;
    r.env_label = "low";
    r.trial = t;
    r.result.outcome = t < 7 ? Outcome::Reached : Outcome::Collided;
    r.result.flight_time = 20.0 + t;
    r.result.avg_speed = 0.5;
    records.push_back(r);
  }
  const auto cells = aggregate(records);
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].trials == 10);
  CHECK(cells[0].success_rate == doctest::Approx(70.0));
  CHECK(cells[0].mean_flight_time == doctest::Approx(23.0));  // mean over successes

  CHECK(aggregate({}).empty());
}

TEST_CASE("small suite runs end to end and is deterministic") {
  SuiteConfig suite = load_suite_config(KeyValueFile::parse_text(
      "cells = scp:20\n"
      "tiers = low\n"
      "densities = 0.015\n"
      "trials = 2\n"
      "base_seed = 5\n"
      "K = 20\nT = 50\nM = 4\nL = 0\nlambda = 10\nsigma = 0.04,0.04,0.0025\n"
      "q_diag = 0.1,0.1,0.3\nr_diag = 1\nw_d = 1\nu_max = 0.9,0.9,0.45\n"
      "shift_warm_start = true\nmax_time = 60\n"
      "field = 14,10\nstart = 1.5,5,1\ngoal = 12.5,5,1\n"
      "suite_threads = 1\n"));

  const SuiteReport a = run_suite(suite);
  const SuiteReport b = run_suite(suite);
  REQUIRE(a.records.size() == 2);
  REQUIRE(a.cells.size() == 1);
  for (size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].error.empty());
    CHECK(a.records[i].result.outcome == b.records[i].result.outcome);
    CHECK(a.records[i].result.flight_time == b.records[i].result.flight_time);
    CHECK(a.records[i].result.avg_speed == b.records[i].result.avg_speed);
    CHECK(a.records[i].result.smoothness == b.records[i].result.smoothness);
  }
  CHECK(a.cells[0].trials == 2);
}

TEST_CASE("suite runs explicit environment files") {
  Environment env;
  env.bounds = Bounds{{0.0, 0.0}, {14.0, 10.0}};
  env.start = {1, 5, 1};
  env.goal = {11, 5, 1};
  env.obstacles.push_back(Cylinder{{3.5, 3.8}, 0.75});
  const auto path = std::filesystem::temp_directory_path() / "scpmppi_suite_env.txt";
  save_environment(env, path.string());

  SuiteConfig suite = load_suite_config(KeyValueFile::parse_text(
      "cells = scp:20\ntrials = 2\nbase_seed = 9\n"
      "K = 20\nT = 50\nM = 4\nL = 0\nlambda = 10\nsigma = 0.04,0.04,0.0025\n"
      "q_diag = 0.1,0.1,0.3\nr_diag = 1\nw_d = 1\nu_max = 0.9,0.9,0.45\n"
      "shift_warm_start = true\nmax_time = 60\nsuite_threads = 1\n"));
  suite.env_files = {path.string()};

  const SuiteReport report = run_suite(suite);
  std::filesystem::remove(path);
  REQUIRE(report.records.size() == 2);
  for (const TrialRecord& r : report.records) {
    CHECK(r.error.empty());
    CHECK(r.env_label == path.string());
    CHECK(r.result.outcome == Outcome::Reached);
  }
}

TEST_CASE("results csv round-trips through the report loader") {
  std::vector<TrialRecord> records(2);
  records[0].variant_label = "mppi";
  records[0].K = 50;
  records[0].env_label = "high";
  records[0].trial = 0;
  records[0].seed = 42;
  records[0].result.outcome = Outcome::Reached;
  records[0].result.flight_time = 28.3;
  records[0].result.avg_speed = 0.686;
  records[0].result.smoothness = 0.001234;
  records[0].result.solve_rate = 34.0;
  records[1].variant_label = "scp-svgd";
  records[1].K = 50;
  records[1].env_label = "high";
  records[1].trial = 1;
  records[1].seed = 43;
  records[1].error = "boom, with comma";

  SuiteReport report;
  report.records = records;
  report.cells = aggregate(records);

  const auto path = std::filesystem::temp_directory_path() / "scpmppi_results_test.csv";
  write_results_csv(report, path.string());
  const auto loaded = load_results_csv(path.string());
  std::filesystem::remove(path);

  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].variant_label == "mppi");
  CHECK(loaded[0].result.outcome == Outcome::Reached);
  CHECK(loaded[0].result.flight_time == records[0].result.flight_time);
  CHECK(loaded[0].result.avg_speed == records[0].result.avg_speed);
  CHECK(loaded[0].result.solve_rate == records[0].result.solve_rate);
  CHECK_FALSE(loaded[1].error.empty());
}

TEST_CASE("report formatting marks empty cells with a dash") {
  std::vector<TrialRecord> records(1);
  records[0].variant_label = "mppi";
  records[0].K = 50;
  records[0].env_label = "high";
  records[0].result.outcome = Outcome::Collided;

  SuiteReport report;
  report.records = records;
  report.cells = aggregate(records);
  const std::string text = format_report(report);
  CHECK(text.find("mppi (K=50)") != std::string::npos);
  CHECK(text.find('-') != std::string::npos);
}
