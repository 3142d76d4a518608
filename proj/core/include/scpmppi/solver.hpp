#pragma once

#include "scpmppi/rollout.hpp"
#include "scpmppi/spline.hpp"
#include "scpmppi/types.hpp"
#include "scpmppi/world.hpp"

namespace scpmppi {

struct WeightMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SolveDiagnostics {
  double best_cost{0.0};
  double weights_entropy{0.0};
  double effective_sample_size{0.0};  // (sum w)^2 / sum w^2, in [1, K]
  Eigen::VectorXd costs_initial;      // after the sampling phase
  Eigen::VectorXd costs_after_svgd;   // empty unless the SVGD phase ran
  double elapsed_seconds{0.0};
  // Predicted positions per sample from the scoring phase that produced the
  // weights, filled only when cfg.capture_candidates is set.
  std::vector<Eigen::MatrixX3d> candidate_paths;
};

struct SolveOutput {
  ControlSequence dense_sequence;    // U*
  SparseControlPoints sparse_points; // U~*, the next warm start
  ControlInput first_command;        // u*_0
  SolveDiagnostics diagnostics;
};

// K knot-perturbation matrices with entries drawn independently from
// zero-mean Gaussians with the given per-axis variances. Deterministic in
// the seed; a zero variance yields zeros without disturbing the stream.
std::vector<NoiseMatrix> sample_noise(int K, int M, const Eigen::Vector3d& sigma,
                                      std::uint64_t seed);

// w_k = exp(-(S_k - beta)/lambda) / sum_j exp(-(S_j - beta)/lambda).
Eigen::VectorXd compute_weights(const Eigen::VectorXd& costs, double lambda);

// base + sum_k w_k * noise_k, knot indices preserved.
SparseControlPoints weighted_update(const SparseControlPoints& base,
                                    const std::vector<NoiseMatrix>& noises,
                                    const Eigen::VectorXd& weights);

// Zero velocity at every knot of the uniform grid (the documented cold
// start for the first control step of a trial).
SparseControlPoints cold_start(const SolverConfig& cfg);

// The previous optimum fed back verbatim as the next nominal; with
// cfg.shift_warm_start each knot takes the dense optimum one step later
// (receding-horizon extension, off by default; for M = T this is the
// classic shift-by-one with the last input repeated).
SparseControlPoints warm_start_from(const SolveOutput& previous, bool shift = false);

// One control step: sample knot noise around the warm start, spline to
// dense sequences, roll out and score, optionally transport the noise
// particles with SVGD and re-score, then softmax-average the noise into
// the new optimum. Callers are expected to pass a validated config.
SolveOutput solve(const State& x0, const Eigen::Vector3d& goal,
                  const SensedObstacles& sensed, const SparseControlPoints& warm,
                  const SolverConfig& cfg, std::uint64_t seed);

}  // namespace scpmppi
