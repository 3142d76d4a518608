#include "scpmppi/svgd.hpp"

#include "scpmppi/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace scpmppi {

Eigen::VectorXd flatten(const NoiseMatrix& m) {
  // Row-major flattening: (knot 0 xyz, knot 1 xyz, ...).
  Eigen::VectorXd v(m.size());
  for (int r = 0; r < m.rows(); ++r) v.segment(r * 3, 3) = m.row(r).transpose();
  return v;
}

NoiseMatrix unflatten(const Eigen::VectorXd& v, int rows) {
  NoiseMatrix m(rows, 3);
  for (int r = 0; r < rows; ++r) m.row(r) = v.segment(r * 3, 3).transpose();
  return m;
}

std::pair<double, Eigen::VectorXd> rbf_kernel(const Eigen::VectorXd& a,
                                              const Eigen::VectorXd& b, double sigma_k) {
  const Eigen::VectorXd diff = a - b;
  const double value = std::exp(-diff.squaredNorm() / sigma_k);
  return {value, (-2.0 / sigma_k) * value * diff};
}

double median_bandwidth(const Eigen::MatrixXd& particles, BandwidthMode mode) {
  const int K = static_cast<int>(particles.rows());
  if (K < 2) throw DegenerateBatch("median_bandwidth requires K >= 2");

  std::vector<double> values;
  if (mode == BandwidthMode::Paper) {
    values.resize(K);
    for (int i = 0; i < K; ++i) values[i] = particles.row(i).squaredNorm();
  } else {
    values.reserve(static_cast<size_t>(K) * (K - 1) / 2);
    for (int i = 0; i < K; ++i) {
      for (int j = i + 1; j < K; ++j) {
        values.push_back((particles.row(i) - particles.row(j)).squaredNorm());
      }
    }
  }

  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  const double median = (n % 2 == 1) ? values[n / 2]
                                     : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  return std::max(median / std::log(static_cast<double>(K)), 1e-8);
}

namespace {

double log_likelihood(double score, double beta, double offset) {
  if (!std::isfinite(score)) throw NonFiniteScore("scorer returned a non-finite value");
  // Guard the log argument; with the paper's offset this only binds if a
  // perturbation drops the score more than `offset` below the batch min.
  const double arg = std::max((score - beta) + offset, 1e-12);
  return -std::log(arg);
}

}  // namespace

Eigen::VectorXd numerical_grad_log_p(int index, const ParticleBatch& batch,
                                     const ParticleScorer& scorer, double h,
                                     double offset) {
  if (batch.count() == 0) throw DegenerateBatch("numerical_grad_log_p on empty batch");
  const double beta = batch.scores.minCoeff();

  Eigen::VectorXd x = batch.particles.row(index).transpose();
  Eigen::VectorXd grad(x.size());
  for (int i = 0; i < x.size(); ++i) {
    const double orig = x(i);
    x(i) = orig + h;
    const double up = log_likelihood(scorer(x), beta, offset);
    x(i) = orig - h;
    const double down = log_likelihood(scorer(x), beta, offset);
    x(i) = orig;
    grad(i) = (up - down) / (2.0 * h);
  }
  return grad;
}

ParticleBatch svgd_step(const ParticleBatch& batch, const Eigen::MatrixXd& grads,
                        double epsilon, BandwidthMode mode) {
  const int K = batch.count();
  if (grads.rows() != K || grads.cols() != batch.dim()) {
    throw std::invalid_argument("svgd_step: gradient batch shape mismatch");
  }

  // k(x, x) = 1 and the self-gradient is zero, so the K = 1 update reduces
  // to plain gradient ascent and needs no bandwidth.
  const double sigma_k = K >= 2 ? median_bandwidth(batch.particles, mode) : 1.0;

  ParticleBatch next = batch;
  for (int i = 0; i < K; ++i) {
    const Eigen::VectorXd xi = batch.particles.row(i).transpose();
    Eigen::VectorXd phi = Eigen::VectorXd::Zero(batch.dim());
    for (int j = 0; j < K; ++j) {
      const Eigen::VectorXd xj = batch.particles.row(j).transpose();
      const auto [k, grad_kj] = rbf_kernel(xj, xi, sigma_k);
      phi += k * grads.row(j).transpose() + grad_kj;
    }
    phi /= static_cast<double>(K);
    next.particles.row(i) = (xi + epsilon * phi).transpose();
  }
  return next;
}

ParticleBatch transport(ParticleBatch batch, const ParticleScorer& scorer,
                        const SolverConfig& cfg) {
  const int K = batch.count();
  for (int l = 0; l < cfg.L; ++l) {
    // Refresh scores so beta tracks the moved particles, then freeze it
    // for all of this iteration's finite differences. The incoming scores
    // already belong to the incoming particles, so the first iteration
    // reuses them.
    if (l > 0) {
      parallel_for(K, cfg.threads, [&](int i) {
        batch.scores(i) = scorer(batch.particles.row(i).transpose());
      });
    }
    Eigen::MatrixXd grads(K, batch.dim());
    parallel_for(K, cfg.threads, [&](int i) {
      grads.row(i) =
          numerical_grad_log_p(i, batch, scorer, cfg.fd_step, cfg.likelihood_offset)
              .transpose();
    });
    batch = svgd_step(batch, grads, cfg.epsilon, cfg.bandwidth_mode);
  }
  return batch;
}

ParticleBatch transport_with_grad(ParticleBatch batch, const ParticleGradient& grad_log_p,
                                  int iterations, double epsilon, BandwidthMode mode,
                                  int threads) {
  const int K = batch.count();
  for (int l = 0; l < iterations; ++l) {
    Eigen::MatrixXd grads(K, batch.dim());
    parallel_for(K, threads, [&](int i) {
      grads.row(i) = grad_log_p(batch.particles.row(i).transpose()).transpose();
    });
    batch = svgd_step(batch, grads, epsilon, mode);
  }
  return batch;
}

}  // namespace scpmppi
