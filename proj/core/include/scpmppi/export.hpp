#pragma once

#include "scpmppi/trial.hpp"
#include "scpmppi/world.hpp"

namespace scpmppi {

// CSV with header t,x,y,z,ux,uy,uz,outcome_flag: one row per executed state
// (N steps -> N+1 rows). The control columns hold the command executed from
// that state; the final row carries zeros and the outcome flag. Values are
// printed with 17 significant digits so a reload is exact.
void export_trajectory(const TrialResult& result, const std::string& path);

struct TrajectoryFile {
  std::vector<double> times;
  std::vector<Eigen::Vector3d> positions;
  std::vector<ControlInput> controls;  // one per step (last row's zeros dropped)
  Outcome outcome{Outcome::Timeout};
};

TrajectoryFile load_trajectory(const std::string& path);

// Standalone SVG: bounds, cylinders, executed path, start/goal markers, and
// optionally one set of predicted candidate paths as faint polylines.
void export_plot(const Environment& env, const TrialResult& result, const std::string& path,
                 const std::vector<Eigen::MatrixX3d>& candidates = {});

}  // namespace scpmppi
