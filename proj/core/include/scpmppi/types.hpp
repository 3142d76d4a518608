#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace scpmppi {

// Velocity command (m/s). Control dimension is 3 throughout the domain
// types; the math kernels (spline fit, SVGD algebra, weights) operate on
// dynamically sized matrices and do not assume it.
using ControlInput = Eigen::Vector3d;

// Row t of an M x 3 or T x 3 matrix as a column vector.
inline ControlInput row3(const Eigen::MatrixX3d& m, int t) {
  return m.row(t).transpose();
}

struct State {
  Eigen::Vector3d position{Eigen::Vector3d::Zero()};  // meters
  int time_index{0};                                   // steps
};

// Dense control input sequence U = (u_0, ..., u_{T-1}), one row per step.
struct ControlSequence {
  Eigen::MatrixX3d inputs;

  int length() const { return static_cast<int>(inputs.rows()); }
  ControlInput at(int t) const { return inputs.row(t).transpose(); }
};

// Sparse velocity knots U~ = (u~_0, ..., u~_{M-1}) placed at knot_indices
// on the dense time grid [0, T-1]. knot_indices are strictly increasing,
// start at 0 and end at T-1; M >= 2.
struct SparseControlPoints {
  Eigen::MatrixX3d points;
  std::vector<int> knot_indices;

  int count() const { return static_cast<int>(points.rows()); }
};

// Per-sample knot perturbation (M x 3), one row per control point.
using NoiseMatrix = Eigen::MatrixX3d;

enum class Variant { Mppi, ScpNoSvgd, ScpSvgd };
enum class BandwidthMode { Paper, Pairwise };

std::string to_string(Variant v);
std::string to_string(BandwidthMode m);
Variant parse_variant(const std::string& s);
BandwidthMode parse_bandwidth_mode(const std::string& s);

struct CostWeights {
  Eigen::Matrix3d Q{Eigen::Matrix3d::Identity()};  // position-error weight
  Eigen::Matrix3d R{Eigen::Matrix3d::Identity()};  // control-effort weight
  double w_d{1.0};  // obstacle-proximity weight
  double w_v{10.0}; // speed-constraint weight
};

struct SolverConfig {
  Variant variant{Variant::ScpSvgd};
  int K{50};    // sample count
  int T{150};   // horizon steps
  int M{4};     // sparse control points
  int L{3};     // SVGD iterations
  double lambda{1.0};   // inverse temperature
  double epsilon{0.05}; // SVGD step size
  Eigen::Vector3d sigma{0.25, 0.25, 0.25};  // diagonal of the sampling covariance, (m/s)^2
  double dt{0.1};                            // seconds
  ControlInput u_max{1.0, 1.0, 1.0};         // speed limit; the constraint sphere radius is |u_max|
  double fd_step{0.05};                      // finite-difference perturbation, m/s
  CostWeights cost_weights{};

  double likelihood_offset{1000.0};  // additive offset in the optimality likelihood
  double d_min{0.01};                // obstacle-distance clamp floor, m
  double d_max{100.0};               // obstacle distance when nothing is sensed, m
  double collision_penalty{1e6};     // added to the cost of a colliding rollout
  double robot_radius{0.25};         // m, inflates obstacles in prediction
  BandwidthMode bandwidth_mode{BandwidthMode::Paper};
  bool shift_warm_start{false};      // receding-horizon shift of the warm start (extension, off by default)
  bool capture_candidates{false};    // record per-sample predicted paths in diagnostics
  int threads{0};                    // rollout/gradient worker threads; 0 = hardware concurrency
};

struct RolloutResult {
  std::vector<State> trajectory;  // T+1 states, trajectory[0] = initial state
  double cost{0.0};
  bool collided{false};
};

struct InvalidConfig : std::runtime_error {
  std::vector<std::string> violations;
  explicit InvalidConfig(std::vector<std::string> v);
};

// Every SolverConfig invariant that fails, as one message per violation.
// Empty means the config is valid.
std::vector<std::string> config_violations(const SolverConfig& config);

// Returns the config unchanged if all invariants hold, otherwise throws
// InvalidConfig listing every violated invariant. Idempotent.
SolverConfig validate_config(const SolverConfig& config);

}  // namespace scpmppi
