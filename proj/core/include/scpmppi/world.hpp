#pragma once

#include "scpmppi/types.hpp"

namespace scpmppi {

struct Cylinder {
  Eigen::Vector2d center{Eigen::Vector2d::Zero()};  // x, y in meters
  double radius{0.75};
};

struct Bounds {
  Eigen::Vector2d lo{Eigen::Vector2d::Zero()};
  Eigen::Vector2d hi{Eigen::Vector2d::Zero()};

  double width() const { return hi.x() - lo.x(); }
  double height() const { return hi.y() - lo.y(); }
  double area() const { return width() * height(); }
  bool contains(const Eigen::Vector2d& p) const {
    return p.x() >= lo.x() && p.x() <= hi.x() && p.y() >= lo.y() && p.y() <= hi.y();
  }
};

// Obstacles are infinite vertical cylinders; planning is 2.5D, altitude is
// held by the cost's z goal term.
struct Environment {
  std::vector<Cylinder> obstacles;
  Bounds bounds;
  Eigen::Vector3d start{Eigen::Vector3d::Zero()};
  Eigen::Vector3d goal{Eigen::Vector3d::Zero()};
  std::uint64_t seed{0};
};

// Obstacles the robot has discovered so far. `discovered` is indexed like
// Environment::obstacles; `known` is the compacted snapshot that rollouts
// query. Grows monotonically over a trial and never shrinks.
struct SensedObstacles {
  std::vector<Cylinder> known;
  std::vector<char> discovered;
};

struct LidarScan {
  std::vector<double> ranges;   // meters, (0, max_range]
  std::vector<double> angles;   // bearings, radians
  std::vector<int> hit_index;   // obstacle index behind each return, -1 if none
  double max_range{0.0};
};

struct Unsatisfiable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Poisson-style forest of fixed-radius cylinders at the given density
// (obstacles per m^2). Cylinders within corridor_clearance of the start or
// goal are rejected, as are those not fully inside the bounds. The result
// is guaranteed connected from start to goal by a coarse grid flood fill;
// on failure the placement reseeds, up to 100 attempts.
Environment generate_forest(double density, const Bounds& bounds, double corridor_clearance,
                            std::uint64_t seed, const Eigen::Vector3d& start,
                            const Eigen::Vector3d& goal, double cylinder_radius = 0.75,
                            double robot_radius = 0.25);

// Planar scan with evenly spaced bearings and exact analytic ray-circle
// intersections against all (true) obstacles.
LidarScan lidar_scan(const State& x, const Environment& env, int beams, double max_range);

// Adds every obstacle responsible for a sub-max-range return to the known
// set. Idempotent once everything visible has been seen.
SensedObstacles integrate_scan(SensedObstacles known, const LidarScan& scan,
                               const Environment& env);

// Unclamped signed distance to the nearest sensed obstacle surface inflated
// by the robot radius; <= 0 means penetration, +inf when nothing is sensed.
double raw_surface_distance(const Eigen::Vector3d& p, const SensedObstacles& known,
                            double robot_radius);

// Distance from p to the nearest sensed obstacle surface, inflated by the
// robot radius and clamped to [d_min, d_max]; d_max when nothing is sensed.
double nearest_surface_distance(const Eigen::Vector3d& p, const SensedObstacles& known,
                                double robot_radius, double d_min = 0.01,
                                double d_max = 100.0);

// Ground truth: true iff p penetrates any true obstacle inflated by the
// robot radius (closed containment) or leaves the bounds.
bool collision(const Eigen::Vector3d& p, const Environment& env, double robot_radius);

// Start->goal connectivity on a coarse occupancy grid (free = collision-free
// for the inflated robot). Used by generate_forest and the world tests.
bool path_exists(const Environment& env, double robot_radius, double cell_size = 0.25);

void save_environment(const Environment& env, const std::string& path);
Environment load_environment(const std::string& path);

}  // namespace scpmppi
