#pragma once

#include "scpmppi/solver.hpp"
#include "scpmppi/world.hpp"

namespace scpmppi {

struct TooShort : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class Outcome { Reached, Collided, Stuck, Timeout };

std::string to_string(Outcome o);
Outcome parse_outcome(const std::string& s);

struct TrialLimits {
  double goal_tol{0.5};      // meters
  double max_time{120.0};    // seconds of simulated time
  double stuck_window{10.0}; // seconds
  double stuck_radius{0.3};  // meters of displacement over the window
};

struct SensorConfig {
  int beams{360};
  double max_range{8.0};  // meters
};

struct TrialResult {
  Outcome outcome{Outcome::Timeout};
  double flight_time{0.0};  // executed steps * dt
  double avg_speed{0.0};    // path length / flight_time for reached trials, else over executed time
  std::vector<State> path;                 // executed states, starting at env.start
  std::vector<ControlInput> controls;      // executed first commands, one per step
  double smoothness{0.0};                  // mean squared second difference of controls
  double solve_rate{0.0};                  // solves per wall-clock second
  bool speed_anomaly{false};               // any executed |u| > 1.5 |u_max|
  // Candidate predictions of the first solve, kept when cfg.capture_candidates.
  std::vector<Eigen::MatrixX3d> first_solve_candidates;
};

// Mean over t of |u_{t+1} - 2 u_t + u_{t-1}|^2. Needs at least 3 controls.
double compute_smoothness(const std::vector<ControlInput>& controls);

// Closed loop: scan, integrate, solve, apply the first command for one dt,
// until the goal is reached, a true obstacle (or the boundary) is hit, the
// robot stalls, or simulated time runs out.
TrialResult run_trial(const Environment& env, const SolverConfig& cfg,
                      const TrialLimits& limits, const SensorConfig& sensor,
                      std::uint64_t seed);

}  // namespace scpmppi
