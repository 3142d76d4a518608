#include "scpmppi/solver.hpp"

#include "scpmppi/parallel.hpp"
#include "scpmppi/svgd.hpp"

#include <chrono>
#include <cmath>
#include <random>

namespace scpmppi {

std::vector<NoiseMatrix> sample_noise(int K, int M, const Eigen::Vector3d& sigma,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  const Eigen::Vector3d std_dev = sigma.cwiseMax(0.0).cwiseSqrt();

  std::vector<NoiseMatrix> noises(K, NoiseMatrix(M, 3));
  for (int k = 0; k < K; ++k) {
    for (int m = 0; m < M; ++m) {
      for (int axis = 0; axis < 3; ++axis) {
        noises[k](m, axis) = std_dev(axis) * unit(rng);
      }
    }
  }
  return noises;
}

Eigen::VectorXd compute_weights(const Eigen::VectorXd& costs, double lambda) {
  const double beta = costs.minCoeff();
  Eigen::VectorXd w = (-(costs.array() - beta) / lambda).exp();
  return w / w.sum();
}

SparseControlPoints weighted_update(const SparseControlPoints& base,
                                    const std::vector<NoiseMatrix>& noises,
                                    const Eigen::VectorXd& weights) {
  if (static_cast<int>(noises.size()) != weights.size()) {
    throw WeightMismatch("weighted_update: noise and weight counts differ");
  }
  SparseControlPoints out = base;
  for (size_t k = 0; k < noises.size(); ++k) {
    out.points += weights(static_cast<int>(k)) * noises[k];
  }
  return out;
}

SparseControlPoints cold_start(const SolverConfig& cfg) {
  SparseControlPoints points;
  points.knot_indices = uniform_knots(cfg.M, cfg.T);
  points.points = Eigen::MatrixX3d::Zero(cfg.M, 3);
  return points;
}

SparseControlPoints warm_start_from(const SolveOutput& previous, bool shift) {
  if (!shift) return previous.sparse_points;
  SparseControlPoints out = previous.sparse_points;
  const int T = previous.dense_sequence.length();
  for (int m = 0; m < out.count(); ++m) {
    const int t = std::min(out.knot_indices[m] + 1, T - 1);
    out.points.row(m) = previous.dense_sequence.inputs.row(t);
  }
  return out;
}

namespace {

ControlSequence expand(const SparseControlPoints& points, const SolverConfig& cfg) {
  if (cfg.variant == Variant::Mppi) {
    // M = T: the knots are the sequence.
    return ControlSequence{points.points};
  }
  return interpolate(points, cfg.T);
}

double entropy(const Eigen::VectorXd& w) {
  double h = 0.0;
  for (int i = 0; i < w.size(); ++i) {
    if (w(i) > 0.0) h -= w(i) * std::log(w(i));
  }
  return h;
}

Eigen::MatrixX3d positions_of(const RolloutResult& r) {
  Eigen::MatrixX3d out(static_cast<int>(r.trajectory.size()), 3);
  for (size_t i = 0; i < r.trajectory.size(); ++i) {
    out.row(static_cast<int>(i)) = r.trajectory[i].position.transpose();
  }
  return out;
}

}  // namespace

SolveOutput solve(const State& x0, const Eigen::Vector3d& goal,
                  const SensedObstacles& sensed, const SparseControlPoints& warm,
                  const SolverConfig& cfg, std::uint64_t seed) {
  const auto t_start = std::chrono::steady_clock::now();
  const int K = cfg.K;
  const int M = warm.count();
  if (M != cfg.M) throw std::invalid_argument("solve: warm start M does not match config");

  std::vector<NoiseMatrix> noises = sample_noise(K, M, cfg.sigma, seed);

  // One spline fit serves every candidate: interpolation is linear in the
  // knot values. At M = T the basis is exactly the identity and the knots
  // pass through verbatim.
  const bool dense_knots = M == cfg.T;
  const Eigen::MatrixXd basis =
      dense_knots ? Eigen::MatrixXd() : interpolation_matrix(warm.knot_indices, cfg.T);

  auto score_noise = [&](const NoiseMatrix& delta) {
    ControlSequence seq;
    if (dense_knots) {
      seq.inputs = warm.points + delta;
    } else {
      seq.inputs = basis * (warm.points + delta);
    }
    return rollout_cost(x0, seq, sensed, goal, cfg).cost;
  };

  Eigen::VectorXd costs(K);
  parallel_for(K, cfg.threads, [&](int k) { costs(k) = score_noise(noises[k]); });

  SolveDiagnostics diagnostics;
  diagnostics.costs_initial = costs;

  const bool run_svgd = cfg.variant == Variant::ScpSvgd && cfg.L > 0;
  if (run_svgd) {
    ParticleBatch batch;
    batch.particles.resize(K, M * 3);
    for (int k = 0; k < K; ++k) batch.particles.row(k) = flatten(noises[k]).transpose();
    batch.scores = costs;

    batch = transport(batch, [&](const Eigen::VectorXd& flat) {
      return score_noise(unflatten(flat, M));
    }, cfg);

    for (int k = 0; k < K; ++k) noises[k] = unflatten(batch.particles.row(k).transpose(), M);
    parallel_for(K, cfg.threads, [&](int k) { costs(k) = score_noise(noises[k]); });
    diagnostics.costs_after_svgd = costs;
  }

  if (cfg.capture_candidates) {
    diagnostics.candidate_paths.resize(K);
    parallel_for(K, cfg.threads, [&](int k) {
      SparseControlPoints candidate = warm;
      candidate.points += noises[k];
      diagnostics.candidate_paths[k] =
          positions_of(rollout(x0, expand(candidate, cfg), sensed, goal, cfg));
    });
  }

  const Eigen::VectorXd weights = compute_weights(costs, cfg.lambda);

  SolveOutput out;
  out.sparse_points = weighted_update(warm, noises, weights);
  out.dense_sequence = expand(out.sparse_points, cfg);
  out.first_command = out.dense_sequence.at(0);

  diagnostics.best_cost = costs.minCoeff();
  diagnostics.weights_entropy = entropy(weights);
  diagnostics.effective_sample_size = 1.0 / weights.squaredNorm();
  diagnostics.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  out.diagnostics = std::move(diagnostics);
  return out;
}

}  // namespace scpmppi
