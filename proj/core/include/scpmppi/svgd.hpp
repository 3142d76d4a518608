#pragma once

#include "scpmppi/types.hpp"

#include <functional>
#include <utility>

namespace scpmppi {

struct DegenerateBatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NonFiniteScore : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// K particles, one per row, each a flattened knot-perturbation matrix
// (M*3 coordinates), plus their sequence costs.
struct ParticleBatch {
  Eigen::MatrixXd particles;  // K x D
  Eigen::VectorXd scores;     // K

  int count() const { return static_cast<int>(particles.rows()); }
  int dim() const { return static_cast<int>(particles.cols()); }
};

using ParticleScorer = std::function<double(const Eigen::VectorXd&)>;
using ParticleGradient = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

Eigen::VectorXd flatten(const NoiseMatrix& m);
NoiseMatrix unflatten(const Eigen::VectorXd& v, int rows);

// k(a, b) = exp(-|a - b|^2 / sigma_k) and its gradient with respect to a.
std::pair<double, Eigen::VectorXd> rbf_kernel(const Eigen::VectorXd& a,
                                              const Eigen::VectorXd& b, double sigma_k);

// Kernel width from the batch. Paper mode: median of individual particle
// squared norms over log K. Pairwise mode: the conventional heuristic,
// median pairwise squared distance over log K. Floored at 1e-8.
double median_bandwidth(const Eigen::MatrixXd& particles,
                        BandwidthMode mode = BandwidthMode::Paper);

// Central finite difference of log p at batch particle `index`, where
// p(x) = ((scorer(x) - beta) + offset)^-1 and beta is the min of the
// batch scores, held fixed across the perturbations.
Eigen::VectorXd numerical_grad_log_p(int index, const ParticleBatch& batch,
                                     const ParticleScorer& scorer, double h,
                                     double offset = 1000.0);

// One synchronous update: particle_i += epsilon * Phi(particle_i) with
// Phi_i = (1/K) sum_j [k(x_j, x_i) grad_j + grad_{x_j} k(x_j, x_i)].
// The bandwidth is recomputed once from the pre-step batch.
ParticleBatch svgd_step(const ParticleBatch& batch, const Eigen::MatrixXd& grads,
                        double epsilon, BandwidthMode mode = BandwidthMode::Paper);

// L iterations of rescoring, finite-difference gradients, and svgd_step.
// Scores in the returned batch are stale (pre-step of the last iteration);
// callers re-score after the final transport.
ParticleBatch transport(ParticleBatch batch, const ParticleScorer& scorer,
                        const SolverConfig& cfg);

// Same iteration driven by an externally supplied gradient of log p
// (used for synthetic targets where the gradient is analytic).
ParticleBatch transport_with_grad(ParticleBatch batch, const ParticleGradient& grad_log_p,
                                  int iterations, double epsilon,
                                  BandwidthMode mode = BandwidthMode::Paper,
                                  int threads = 0);

}  // namespace scpmppi
