#include "scpmppi/trial.hpp"

#include <chrono>
#include <cmath>
#include <deque>

namespace scpmppi {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Reached: return "reached";
    case Outcome::Collided: return "collided";
    case Outcome::Stuck: return "stuck";
    case Outcome::Timeout: return "timeout";
  }
  return "?";
}

Outcome parse_outcome(const std::string& s) {
  if (s == "reached") return Outcome::Reached;
  if (s == "collided") return Outcome::Collided;
  if (s == "stuck") return Outcome::Stuck;
  if (s == "timeout") return Outcome::Timeout;
  throw std::invalid_argument("unknown outcome '" + s + "'");
}

double compute_smoothness(const std::vector<ControlInput>& controls) {
  if (controls.size() < 3) throw TooShort("compute_smoothness needs >= 3 controls");
  double sum = 0.0;
  for (size_t t = 1; t + 1 < controls.size(); ++t) {
    sum += (controls[t + 1] - 2.0 * controls[t] + controls[t - 1]).squaredNorm();
  }
  return sum / static_cast<double>(controls.size() - 2);
}

namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double path_length(const std::vector<State>& path) {
  double len = 0.0;
  for (size_t i = 1; i < path.size(); ++i) {
    len += (path[i].position - path[i - 1].position).norm();
  }
  return len;
}

}  // namespace

TrialResult run_trial(const Environment& env, const SolverConfig& cfg,
                      const TrialLimits& limits, const SensorConfig& sensor,
                      std::uint64_t seed) {
  TrialResult result;
  State state{env.start, 0};
  result.path.push_back(state);

  SensedObstacles sensed;
  SparseControlPoints warm = cold_start(cfg);
  const int max_steps = static_cast<int>(std::ceil(limits.max_time / cfg.dt));
  const double speed_limit = 1.5 * cfg.u_max.norm();
  std::deque<std::pair<double, Eigen::Vector3d>> window;  // (time, position)

  double solve_seconds = 0.0;
  int solves = 0;
  result.outcome = Outcome::Timeout;

  for (int step_idx = 0; step_idx <= max_steps; ++step_idx) {
    const double now = step_idx * cfg.dt;
    if ((state.position - env.goal).norm() <= limits.goal_tol) {
      result.outcome = Outcome::Reached;
      break;
    }
    if (step_idx == max_steps) break;  // timeout

    // Stalled: displacement below stuck_radius across the trailing window.
    window.emplace_back(now, state.position);
    while (window.size() > 1 && now - window.front().first > limits.stuck_window) {
      window.pop_front();
    }
    if (now - window.front().first >= limits.stuck_window &&
        (state.position - window.front().second).norm() < limits.stuck_radius) {
      result.outcome = Outcome::Stuck;
      break;
    }

    const LidarScan scan = lidar_scan(state, env, sensor.beams, sensor.max_range);
    sensed = integrate_scan(std::move(sensed), scan, env);

    const auto t0 = std::chrono::steady_clock::now();
    const SolveOutput out =
        solve(state, env.goal, sensed, warm, cfg, mix(seed, step_idx));
    solve_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ++solves;
    if (solves == 1 && cfg.capture_candidates) {
      result.first_solve_candidates = out.diagnostics.candidate_paths;
    }

    warm = warm_start_from(out, cfg.shift_warm_start);
    const ControlInput u = out.first_command;
    if (u.norm() > speed_limit) result.speed_anomaly = true;

    state = step(state, u, cfg.dt);
    result.controls.push_back(u);
    result.path.push_back(state);

    if (collision(state.position, env, cfg.robot_radius)) {
      result.outcome = Outcome::Collided;
      break;
    }
  }

  const int executed = static_cast<int>(result.controls.size());
  result.flight_time = executed * cfg.dt;
  result.avg_speed =
      result.flight_time > 0.0 ? path_length(result.path) / result.flight_time : 0.0;
  result.smoothness = result.controls.size() >= 3 ? compute_smoothness(result.controls) : 0.0;
  result.solve_rate = solve_seconds > 0.0 ? solves / solve_seconds : 0.0;
  return result;
}

}  // namespace scpmppi
