#pragma once

#include "scpmppi/types.hpp"
#include "scpmppi/world.hpp"

namespace scpmppi {

struct EmptyBatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct CostBreakdown {
  double tracking{0.0};    // dx' Q dx
  double effort{0.0};      // 0.5 u' R u
  double obstacle{0.0};    // w_d / d
  double constraint{0.0};  // C(u)
  double total{0.0};
};

// Point-mass Euler step: position' = position + u * dt.
State step(const State& x, const ControlInput& u, double dt);

// Soft speed limit: zero on and inside the |u_max| sphere,
// 1 + w_v * (|u| - |u_max|) outside.
double constraint_penalty(const ControlInput& u, const ControlInput& u_max, double w_v);

CostBreakdown stage_cost_breakdown(const State& x, const ControlInput& u,
                                   const Eigen::Vector3d& goal, double d,
                                   const CostWeights& w, const ControlInput& u_max);

double stage_cost(const State& x, const ControlInput& u, const Eigen::Vector3d& goal,
                  double d, const CostWeights& w, const ControlInput& u_max);

// Simulate seq from x0 and accumulate the sequence cost over the pre-step
// states (stage cost at (x_t, u_t) for t = 0..T-1). Obstacle distances come
// from the sensed set only; a rollout that penetrates a sensed obstacle at
// any predicted state is flagged collided and its cost saturated with
// cfg.collision_penalty.
RolloutResult rollout(const State& x0, const ControlSequence& seq,
                      const SensedObstacles& sensed, const Eigen::Vector3d& goal,
                      const SolverConfig& cfg);

struct RolloutCost {
  double cost{0.0};
  bool collided{false};
};

// Same accumulation without materializing the trajectory; this is the
// solver's scoring path and produces bit-identical costs to rollout().
RolloutCost rollout_cost(const State& x0, const ControlSequence& seq,
                         const SensedObstacles& sensed, const Eigen::Vector3d& goal,
                         const SolverConfig& cfg);

// Optimality likelihood p_k = ((S_k - beta) + offset)^-1, beta = min cost.
Eigen::VectorXd optimality_likelihood(const Eigen::VectorXd& costs, double offset = 1000.0);

}  // namespace scpmppi
