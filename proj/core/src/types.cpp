#include "scpmppi/types.hpp"

#include <cmath>
#include <sstream>

namespace scpmppi {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Mppi: return "mppi";
    case Variant::ScpNoSvgd: return "scp";
    case Variant::ScpSvgd: return "scp-svgd";
  }
  return "?";
}

std::string to_string(BandwidthMode m) {
  return m == BandwidthMode::Paper ? "paper" : "pairwise";
}

Variant parse_variant(const std::string& s) {
  if (s == "mppi") return Variant::Mppi;
  if (s == "scp") return Variant::ScpNoSvgd;
  if (s == "scp-svgd" || s == "scp_svgd") return Variant::ScpSvgd;
  throw std::invalid_argument("unknown variant '" + s + "' (expected mppi|scp|scp-svgd)");
}

BandwidthMode parse_bandwidth_mode(const std::string& s) {
  if (s == "paper") return BandwidthMode::Paper;
  if (s == "pairwise") return BandwidthMode::Pairwise;
  throw std::invalid_argument("unknown bandwidth_mode '" + s + "' (expected paper|pairwise)");
}

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::ostringstream out;
  out << "invalid solver config:";
  for (const auto& p : parts) out << "\n  - " << p;
  return out.str();
}

bool symmetric_psd(const Eigen::Matrix3d& m) {
  if (!m.isApprox(m.transpose(), 1e-12)) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(m);
  return es.eigenvalues().minCoeff() >= -1e-12;
}

}  // namespace

InvalidConfig::InvalidConfig(std::vector<std::string> v)
    : std::runtime_error(join(v)), violations(std::move(v)) {}

std::vector<std::string> config_violations(const SolverConfig& c) {
  std::vector<std::string> out;
  if (c.K < 1) out.push_back("K must be >= 1");
  if (c.T < 2) out.push_back("T must be >= 2");
  if (c.M < 2) out.push_back("M must be >= 2");
  if (c.M > c.T) out.push_back("M must be <= T");
  if (c.L < 0) out.push_back("L must be >= 0");
  if (!(c.lambda > 0.0)) out.push_back("lambda must be > 0");
  if (!(c.epsilon > 0.0)) out.push_back("epsilon must be > 0");
  if (!(c.dt > 0.0)) out.push_back("dt must be > 0");
  if (!(c.fd_step > 0.0)) out.push_back("fd_step must be > 0");
  if (!(c.sigma.array() > 0.0).all()) out.push_back("sigma diagonal must be positive definite");
  if (!c.sigma.allFinite()) out.push_back("sigma must be finite");
  if (!c.u_max.allFinite()) out.push_back("u_max must be finite");
  if (c.variant == Variant::Mppi && c.M != c.T) out.push_back("variant mppi requires M = T");
  if (!symmetric_psd(c.cost_weights.Q)) out.push_back("Q must be symmetric positive semidefinite");
  if (!symmetric_psd(c.cost_weights.R)) out.push_back("R must be symmetric positive semidefinite");
  if (c.cost_weights.w_d < 0.0) out.push_back("w_d must be >= 0");
  if (c.cost_weights.w_v < 0.0) out.push_back("w_v must be >= 0");
  if (!(c.likelihood_offset > 0.0)) out.push_back("likelihood_offset must be > 0");
  if (!(c.d_min > 0.0)) out.push_back("d_min must be > 0");
  if (c.d_max < c.d_min) out.push_back("d_max must be >= d_min");
  if (c.collision_penalty < 0.0) out.push_back("collision_penalty must be >= 0");
  if (c.robot_radius < 0.0) out.push_back("robot_radius must be >= 0");
  if (c.threads < 0) out.push_back("threads must be >= 0");
  return out;
}

SolverConfig validate_config(const SolverConfig& config) {
  auto violations = config_violations(config);
  if (!violations.empty()) throw InvalidConfig(std::move(violations));
  return config;
}

}  // namespace scpmppi
