#include "scpmppi/rollout.hpp"

#include <cmath>

namespace scpmppi {

State step(const State& x, const ControlInput& u, double dt) {
  return State{x.position + u * dt, x.time_index + 1};
}

double constraint_penalty(const ControlInput& u, const ControlInput& u_max, double w_v) {
  const double speed = u.norm();
  const double limit = u_max.norm();
  if (speed > limit) return 1.0 + w_v * (speed - limit);
  return 0.0;
}

CostBreakdown stage_cost_breakdown(const State& x, const ControlInput& u,
                                   const Eigen::Vector3d& goal, double d,
                                   const CostWeights& w, const ControlInput& u_max) {
  CostBreakdown out;
  const Eigen::Vector3d dx = x.position - goal;
  out.tracking = dx.dot(w.Q * dx);
  out.effort = 0.5 * u.dot(w.R * u);
  out.obstacle = w.w_d / d;
  out.constraint = constraint_penalty(u, u_max, w.w_v);
  out.total = out.tracking + out.effort + out.obstacle + out.constraint;
  return out;
}

double stage_cost(const State& x, const ControlInput& u, const Eigen::Vector3d& goal,
                  double d, const CostWeights& w, const ControlInput& u_max) {
  return stage_cost_breakdown(x, u, goal, d, w, u_max).total;
}

namespace {

// Snapshot of the sensed set for the prediction loop. Forests have one
// cylinder radius, so the common case needs a single sqrt per query.
struct ObstacleQuery {
  std::vector<Eigen::Vector2d> centers;
  std::vector<double> inflated;
  bool uniform{true};
  double r0{0.0};

  ObstacleQuery(const SensedObstacles& sensed, double robot_radius) {
    centers.reserve(sensed.known.size());
    inflated.reserve(sensed.known.size());
    for (const Cylinder& c : sensed.known) {
      centers.push_back(c.center);
      inflated.push_back(c.radius + robot_radius);
    }
    if (!inflated.empty()) {
      r0 = inflated.front();
      for (double r : inflated) uniform = uniform && r == r0;
    }
  }

  double raw(const Eigen::Vector3d& p) const {
    if (centers.empty()) return std::numeric_limits<double>::infinity();
    const Eigen::Vector2d xy = p.head<2>();
    if (uniform) {
      double best_sq = std::numeric_limits<double>::infinity();
      for (const Eigen::Vector2d& c : centers) {
        best_sq = std::min(best_sq, (xy - c).squaredNorm());
      }
      return std::sqrt(best_sq) - r0;
    }
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < centers.size(); ++i) {
      best = std::min(best, (xy - centers[i]).norm() - inflated[i]);
    }
    return best;
  }
};

template <typename PerStep>
RolloutCost accumulate_rollout(const State& x0, const ControlSequence& seq,
                               const SensedObstacles& sensed, const Eigen::Vector3d& goal,
                               const SolverConfig& cfg, PerStep&& per_step) {
  const int T = seq.length();
  const ObstacleQuery obstacles(sensed, cfg.robot_radius);

  RolloutCost result;
  State x = x0;
  double raw = obstacles.raw(x.position);
  for (int t = 0; t < T; ++t) {
    const ControlInput u = seq.at(t);
    const double d = std::isfinite(raw) ? std::clamp(raw, cfg.d_min, cfg.d_max) : cfg.d_max;
    result.cost += stage_cost(x, u, goal, d, cfg.cost_weights, cfg.u_max);
    x = step(x, u, cfg.dt);
    per_step(x);
    raw = obstacles.raw(x.position);
    if (raw <= 0.0) result.collided = true;
  }
  if (result.collided) result.cost += cfg.collision_penalty;
  return result;
}

}  // namespace

RolloutResult rollout(const State& x0, const ControlSequence& seq,
                      const SensedObstacles& sensed, const Eigen::Vector3d& goal,
                      const SolverConfig& cfg) {
  RolloutResult result;
  result.trajectory.reserve(seq.length() + 1);
  result.trajectory.push_back(x0);
  const RolloutCost cost = accumulate_rollout(
      x0, seq, sensed, goal, cfg, [&](const State& x) { result.trajectory.push_back(x); });
  result.cost = cost.cost;
  result.collided = cost.collided;
  return result;
}

RolloutCost rollout_cost(const State& x0, const ControlSequence& seq,
                         const SensedObstacles& sensed, const Eigen::Vector3d& goal,
                         const SolverConfig& cfg) {
  return accumulate_rollout(x0, seq, sensed, goal, cfg, [](const State&) {});
}

Eigen::VectorXd optimality_likelihood(const Eigen::VectorXd& costs, double offset) {
  if (costs.size() == 0) throw EmptyBatch("optimality_likelihood requires a nonempty batch");
  const double beta = costs.minCoeff();
  return ((costs.array() - beta) + offset).inverse();
}

}  // namespace scpmppi
