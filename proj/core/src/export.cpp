#include "scpmppi/export.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace scpmppi {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int outcome_flag(Outcome o) {
  switch (o) {
    case Outcome::Reached: return 1;
    case Outcome::Collided: return 2;
    case Outcome::Stuck: return 3;
    case Outcome::Timeout: return 4;
  }
  return 0;
}

Outcome outcome_from_flag(int flag) {
  switch (flag) {
    case 1: return Outcome::Reached;
    case 2: return Outcome::Collided;
    case 3: return Outcome::Stuck;
    default: return Outcome::Timeout;
  }
}

}  // namespace

void export_trajectory(const TrialResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "t,x,y,z,ux,uy,uz,outcome_flag\n";
  const size_t n = result.path.size();
  for (size_t i = 0; i < n; ++i) {
    const Eigen::Vector3d& p = result.path[i].position;
    const bool last = i + 1 == n;
    const ControlInput u = last ? ControlInput::Zero() : result.controls[i];
    out << result.path[i].time_index << ',' << fmt(p.x()) << ',' << fmt(p.y()) << ','
        << fmt(p.z()) << ',' << fmt(u.x()) << ',' << fmt(u.y()) << ',' << fmt(u.z())
        << ',' << (last ? outcome_flag(result.outcome) : 0) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

TrajectoryFile load_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("t,x,y,z", 0) != 0) {
    throw std::runtime_error("not a trajectory file: " + path);
  }

  TrajectoryFile traj;
  std::vector<ControlInput> controls;
  int last_flag = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 8) throw std::runtime_error("malformed row in " + path);
    traj.times.push_back(std::stod(fields[0]));
    traj.positions.emplace_back(std::stod(fields[1]), std::stod(fields[2]),
                                std::stod(fields[3]));
    controls.emplace_back(std::stod(fields[4]), std::stod(fields[5]), std::stod(fields[6]));
    last_flag = std::stoi(fields[7]);
  }
  if (!controls.empty()) controls.pop_back();  // final row carries no executed control
  traj.controls = std::move(controls);
  traj.outcome = outcome_from_flag(last_flag);
  return traj;
}

void export_plot(const Environment& env, const TrialResult& result, const std::string& path,
                 const std::vector<Eigen::MatrixX3d>& candidates) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);

  const double margin = 1.0;
  const double x0 = env.bounds.lo.x() - margin;
  const double y0 = env.bounds.lo.y() - margin;
  const double w = env.bounds.width() + 2 * margin;
  const double h = env.bounds.height() + 2 * margin;
  const double scale = 40.0;  // px per meter

  // SVG y grows downward; flip so +y is up in the figure.
  auto px = [&](double x) { return (x - x0) * scale; };
  auto py = [&](double y) { return (y0 + h - y) * scale; };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w * scale
      << "\" height=\"" << h * scale << "\" viewBox=\"0 0 " << w * scale << ' '
      << h * scale << "\">\n";
  out << "  <rect x=\"" << px(env.bounds.lo.x()) << "\" y=\"" << py(env.bounds.hi.y())
      << "\" width=\"" << env.bounds.width() * scale << "\" height=\""
      << env.bounds.height() * scale
      << "\" fill=\"white\" stroke=\"black\" stroke-width=\"2\"/>\n";

  for (const Cylinder& c : env.obstacles) {
    out << "  <circle cx=\"" << px(c.center.x()) << "\" cy=\"" << py(c.center.y())
        << "\" r=\"" << c.radius * scale << "\" fill=\"#b0b0b0\" stroke=\"#606060\"/>\n";
  }

  auto polyline = [&](const auto& points, auto get_xy, const char* style) {
    out << "  <polyline fill=\"none\" " << style << " points=\"";
    for (size_t i = 0; i < points.size(); ++i) {
      const auto [x, y] = get_xy(points[i]);
      out << px(x) << ',' << py(y) << ' ';
    }
    out << "\"/>\n";
  };

  for (const Eigen::MatrixX3d& cand : candidates) {
    out << "  <polyline fill=\"none\" stroke=\"#9ecae1\" stroke-width=\"1\" "
           "stroke-opacity=\"0.4\" points=\"";
    for (int i = 0; i < cand.rows(); ++i) {
      out << px(cand(i, 0)) << ',' << py(cand(i, 1)) << ' ';
    }
    out << "\"/>\n";
  }

  if (!result.path.empty()) {
    polyline(result.path,
             [](const State& s) { return std::pair{s.position.x(), s.position.y()}; },
             "stroke=\"#1f4e9c\" stroke-width=\"3\"");
  }

  out << "  <circle cx=\"" << px(env.start.x()) << "\" cy=\"" << py(env.start.y())
      << "\" r=\"8\" fill=\"orange\"/>\n";
  out << "  <circle cx=\"" << px(env.goal.x()) << "\" cy=\"" << py(env.goal.y())
      << "\" r=\"8\" fill=\"#2a7de1\"/>\n";
  out << "</svg>\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace scpmppi
