#include "scpmppi/world.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <random>
#include <sstream>

namespace scpmppi {

namespace {

// splitmix64; used to derive independent reseeds from one base seed.
std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

bool clear_of(const Eigen::Vector2d& p, const Cylinder& c, double clearance) {
  return (p - c.center).norm() > c.radius + clearance;
}

}  // namespace

Environment generate_forest(double density, const Bounds& bounds, double corridor_clearance,
                            std::uint64_t seed, const Eigen::Vector3d& start,
                            const Eigen::Vector3d& goal, double cylinder_radius,
                            double robot_radius) {
  if (density < 0.0) throw std::invalid_argument("density must be >= 0");

  std::uint64_t attempt_seed = seed;
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::mt19937_64 rng(attempt_seed);
    std::poisson_distribution<int> count_dist(density * bounds.area());
    const int target = density > 0.0 ? count_dist(rng) : 0;

    std::uniform_real_distribution<double> ux(bounds.lo.x() + cylinder_radius,
                                              bounds.hi.x() - cylinder_radius);
    std::uniform_real_distribution<double> uy(bounds.lo.y() + cylinder_radius,
                                              bounds.hi.y() - cylinder_radius);

    Environment env;
    env.bounds = bounds;
    env.start = start;
    env.goal = goal;
    env.seed = seed;
    env.obstacles.reserve(target);
    for (int i = 0; i < target; ++i) {
      Cylinder c{{ux(rng), uy(rng)}, cylinder_radius};
      if (!clear_of(start.head<2>(), c, corridor_clearance)) continue;
      if (!clear_of(goal.head<2>(), c, corridor_clearance)) continue;
      env.obstacles.push_back(c);
    }

    if (path_exists(env, robot_radius)) return env;
    attempt_seed = mix_seed(attempt_seed);
  }
  throw Unsatisfiable("generate_forest: no connected placement after 100 attempts");
}

LidarScan lidar_scan(const State& x, const Environment& env, int beams, double max_range) {
  if (beams < 1) throw std::invalid_argument("lidar_scan requires beams >= 1");

  LidarScan scan;
  scan.max_range = max_range;
  scan.ranges.resize(beams);
  scan.angles.resize(beams);
  scan.hit_index.resize(beams, -1);

  const Eigen::Vector2d origin = x.position.head<2>();
  for (int b = 0; b < beams; ++b) {
    const double angle = 2.0 * M_PI * b / beams;
    scan.angles[b] = angle;
    const Eigen::Vector2d dir(std::cos(angle), std::sin(angle));

    double best = max_range;
    int best_idx = -1;
    for (int i = 0; i < static_cast<int>(env.obstacles.size()); ++i) {
      const Cylinder& c = env.obstacles[i];
      // Ray-circle: |o + t d - c|^2 = r^2 with |d| = 1.
      const Eigen::Vector2d oc = c.center - origin;
      const double proj = dir.dot(oc);
      const double disc = proj * proj - oc.squaredNorm() + c.radius * c.radius;
      if (disc < 0.0) continue;
      const double sq = std::sqrt(disc);
      double t = proj - sq;
      if (t < 0.0) t = proj + sq;  // origin inside: take the exit point
      if (t >= 0.0 && t < best) {
        best = t;
        best_idx = i;
      }
    }
    scan.ranges[b] = best;
    scan.hit_index[b] = best_idx;
  }
  return scan;
}

SensedObstacles integrate_scan(SensedObstacles known, const LidarScan& scan,
                               const Environment& env) {
  if (known.discovered.size() < env.obstacles.size()) {
    known.discovered.resize(env.obstacles.size(), 0);
  }
  for (int idx : scan.hit_index) {
    if (idx < 0 || known.discovered[idx]) continue;
    known.discovered[idx] = 1;
    known.known.push_back(env.obstacles[idx]);
  }
  return known;
}

double raw_surface_distance(const Eigen::Vector3d& p, const SensedObstacles& known,
                            double robot_radius) {
  const Eigen::Vector2d xy = p.head<2>();
  double best = std::numeric_limits<double>::infinity();
  for (const Cylinder& c : known.known) {
    best = std::min(best, (xy - c.center).norm() - c.radius - robot_radius);
  }
  return best;
}

double nearest_surface_distance(const Eigen::Vector3d& p, const SensedObstacles& known,
                                double robot_radius, double d_min, double d_max) {
  if (known.known.empty()) return d_max;
  return std::clamp(raw_surface_distance(p, known, robot_radius), d_min, d_max);
}

bool collision(const Eigen::Vector3d& p, const Environment& env, double robot_radius) {
  const Eigen::Vector2d xy = p.head<2>();
  if (!env.bounds.contains(xy)) return true;
  for (const Cylinder& c : env.obstacles) {
    if ((xy - c.center).norm() <= c.radius + robot_radius) return true;
  }
  return false;
}

bool path_exists(const Environment& env, double robot_radius, double cell_size) {
  const int nx = std::max(1, static_cast<int>(std::ceil(env.bounds.width() / cell_size)));
  const int ny = std::max(1, static_cast<int>(std::ceil(env.bounds.height() / cell_size)));

  auto cell_center = [&](int ix, int iy) {
    return Eigen::Vector2d(env.bounds.lo.x() + (ix + 0.5) * cell_size,
                           env.bounds.lo.y() + (iy + 0.5) * cell_size);
  };
  auto cell_of = [&](const Eigen::Vector2d& p) {
    int ix = std::clamp(static_cast<int>((p.x() - env.bounds.lo.x()) / cell_size), 0, nx - 1);
    int iy = std::clamp(static_cast<int>((p.y() - env.bounds.lo.y()) / cell_size), 0, ny - 1);
    return std::pair<int, int>{ix, iy};
  };
  auto free_cell = [&](int ix, int iy) {
    const Eigen::Vector2d p = cell_center(ix, iy);
    for (const Cylinder& c : env.obstacles) {
      if ((p - c.center).norm() <= c.radius + robot_radius) return false;
    }
    return true;
  };

  const auto [sx, sy] = cell_of(env.start.head<2>());
  const auto [gx, gy] = cell_of(env.goal.head<2>());
  if (!free_cell(sx, sy) || !free_cell(gx, gy)) return false;

  std::vector<char> visited(static_cast<size_t>(nx) * ny, 0);
  auto id = [&](int ix, int iy) { return static_cast<size_t>(iy) * nx + ix; };
  std::deque<std::pair<int, int>> queue{{sx, sy}};
  visited[id(sx, sy)] = 1;
  while (!queue.empty()) {
    auto [ix, iy] = queue.front();
    queue.pop_front();
    if (ix == gx && iy == gy) return true;
    constexpr int dx[4] = {1, -1, 0, 0};
    constexpr int dy[4] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      const int jx = ix + dx[k];
      const int jy = iy + dy[k];
      if (jx < 0 || jx >= nx || jy < 0 || jy >= ny) continue;
      if (visited[id(jx, jy)] || !free_cell(jx, jy)) continue;
      visited[id(jx, jy)] = 1;
      queue.emplace_back(jx, jy);
    }
  }
  return false;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void save_environment(const Environment& env, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "# scpmppi environment v1\n";
  out << "bounds " << fmt(env.bounds.lo.x()) << ' ' << fmt(env.bounds.lo.y()) << ' '
      << fmt(env.bounds.hi.x()) << ' ' << fmt(env.bounds.hi.y()) << '\n';
  out << "start " << fmt(env.start.x()) << ' ' << fmt(env.start.y()) << ' '
      << fmt(env.start.z()) << '\n';
  out << "goal " << fmt(env.goal.x()) << ' ' << fmt(env.goal.y()) << ' '
      << fmt(env.goal.z()) << '\n';
  out << "seed " << env.seed << '\n';
  out << "obstacles " << env.obstacles.size() << '\n';
  for (const Cylinder& c : env.obstacles) {
    out << fmt(c.center.x()) << ' ' << fmt(c.center.y()) << ' ' << fmt(c.radius) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

Environment load_environment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);

  Environment env;
  std::string line;
  size_t obstacle_count = 0;
  bool have_count = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    if (!have_count) {
      std::string key;
      ss >> key;
      if (key == "bounds") {
        ss >> env.bounds.lo.x() >> env.bounds.lo.y() >> env.bounds.hi.x() >> env.bounds.hi.y();
      } else if (key == "start") {
        ss >> env.start.x() >> env.start.y() >> env.start.z();
      } else if (key == "goal") {
        ss >> env.goal.x() >> env.goal.y() >> env.goal.z();
      } else if (key == "seed") {
        ss >> env.seed;
      } else if (key == "obstacles") {
        ss >> obstacle_count;
        have_count = true;
        env.obstacles.reserve(obstacle_count);
      } else {
        throw std::runtime_error("unknown field '" + key + "' in " + path);
      }
      if (ss.fail()) throw std::runtime_error("malformed line in " + path + ": " + line);
    } else {
      Cylinder c;
      ss >> c.center.x() >> c.center.y() >> c.radius;
      if (ss.fail()) throw std::runtime_error("malformed obstacle in " + path + ": " + line);
      env.obstacles.push_back(c);
    }
  }
  if (env.obstacles.size() != obstacle_count) {
    throw std::runtime_error("obstacle count mismatch in " + path);
  }
  return env;
}

}  // namespace scpmppi
