#include "scpmppi/config_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace scpmppi {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::istringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

}  // namespace

KeyValueFile KeyValueFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_text(buffer.str());
}

KeyValueFile KeyValueFile::parse_text(const std::string& text) {
  KeyValueFile file;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               " is not 'key = value': " + line);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::runtime_error("empty key on config line " + std::to_string(line_no));
    }
    file.values_[key] = value;
  }
  return file;
}

bool KeyValueFile::has(const std::string& key) const { return values_.count(key) > 0; }

void KeyValueFile::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

std::string KeyValueFile::get_string(const std::string& key,
                                     const std::string& fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  read_[key] = true;
  return it->second;
}

double KeyValueFile::get_double(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  read_[key] = true;
  size_t pos = 0;
  const double v = std::stod(it->second, &pos);
  if (pos != it->second.size()) throw std::runtime_error("bad number for key " + key);
  return v;
}

int KeyValueFile::get_int(const std::string& key, int fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  read_[key] = true;
  size_t pos = 0;
  const int v = std::stoi(it->second, &pos);
  if (pos != it->second.size()) throw std::runtime_error("bad integer for key " + key);
  return v;
}

std::uint64_t KeyValueFile::get_u64(const std::string& key, std::uint64_t fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  read_[key] = true;
  return std::stoull(it->second);
}

bool KeyValueFile::get_bool(const std::string& key, bool fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  read_[key] = true;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::runtime_error("bad boolean for key " + key + ": " + v);
}

Eigen::Vector3d KeyValueFile::get_vec3(const std::string& key,
                                       const Eigen::Vector3d& fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  read_[key] = true;
  const auto parts = split(it->second, ',');
  if (parts.size() == 1) {
    const double v = std::stod(parts[0]);
    return Eigen::Vector3d::Constant(v);
  }
  if (parts.size() != 3) throw std::runtime_error("key " + key + " needs 1 or 3 values");
  return {std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2])};
}

std::vector<std::string> KeyValueFile::get_list(
    const std::string& key, const std::vector<std::string>& fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  read_[key] = true;
  return split(it->second, ',');
}

std::vector<std::string> KeyValueFile::unread_keys() const {
  std::vector<std::string> out;
  for (const auto& [key, _] : values_) {
    auto it = read_.find(key);
    if (it == read_.end() || !it->second) out.push_back(key);
  }
  return out;
}

SolverConfig load_solver_config(const KeyValueFile& file, SolverConfig base) {
  SolverConfig cfg = base;
  cfg.variant = parse_variant(file.get_string("variant", to_string(base.variant)));
  cfg.K = file.get_int("K", base.K);
  cfg.T = file.get_int("T", base.T);
  cfg.M = file.get_int("M", base.M);
  cfg.L = file.get_int("L", base.L);
  cfg.lambda = file.get_double("lambda", base.lambda);
  cfg.epsilon = file.get_double("epsilon", base.epsilon);
  cfg.sigma = file.get_vec3("sigma", base.sigma);
  cfg.dt = file.get_double("dt", base.dt);
  cfg.u_max = file.get_vec3("u_max", base.u_max);
  cfg.fd_step = file.get_double("fd_step", base.fd_step);
  cfg.cost_weights.Q = file.get_vec3("q_diag", base.cost_weights.Q.diagonal()).asDiagonal();
  cfg.cost_weights.R = file.get_vec3("r_diag", base.cost_weights.R.diagonal()).asDiagonal();
  cfg.cost_weights.w_d = file.get_double("w_d", base.cost_weights.w_d);
  cfg.cost_weights.w_v = file.get_double("w_v", base.cost_weights.w_v);
  cfg.likelihood_offset = file.get_double("likelihood_offset", base.likelihood_offset);
  cfg.d_min = file.get_double("d_min", base.d_min);
  cfg.d_max = file.get_double("d_max", base.d_max);
  cfg.collision_penalty = file.get_double("collision_penalty", base.collision_penalty);
  cfg.robot_radius = file.get_double("robot_radius", base.robot_radius);
  cfg.bandwidth_mode = parse_bandwidth_mode(
      file.get_string("bandwidth_mode", to_string(base.bandwidth_mode)));
  cfg.shift_warm_start = file.get_bool("shift_warm_start", base.shift_warm_start);
  cfg.capture_candidates = file.get_bool("capture_candidates", base.capture_candidates);
  cfg.threads = file.get_int("threads", base.threads);
  if (cfg.variant == Variant::Mppi && !file.has("M")) cfg.M = cfg.T;
  return cfg;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt3(const Eigen::Vector3d& v) {
  return fmt(v.x()) + "," + fmt(v.y()) + "," + fmt(v.z());
}

}  // namespace

void save_solver_config(const SolverConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "variant = " << to_string(cfg.variant) << '\n'
      << "K = " << cfg.K << '\n'
      << "T = " << cfg.T << '\n'
      << "M = " << cfg.M << '\n'
      << "L = " << cfg.L << '\n'
      << "lambda = " << fmt(cfg.lambda) << '\n'
      << "epsilon = " << fmt(cfg.epsilon) << '\n'
      << "sigma = " << fmt3(cfg.sigma) << '\n'
      << "dt = " << fmt(cfg.dt) << '\n'
      << "u_max = " << fmt3(cfg.u_max) << '\n'
      << "fd_step = " << fmt(cfg.fd_step) << '\n'
      << "q_diag = " << fmt3(cfg.cost_weights.Q.diagonal()) << '\n'
      << "r_diag = " << fmt3(cfg.cost_weights.R.diagonal()) << '\n'
      << "w_d = " << fmt(cfg.cost_weights.w_d) << '\n'
      << "w_v = " << fmt(cfg.cost_weights.w_v) << '\n'
      << "likelihood_offset = " << fmt(cfg.likelihood_offset) << '\n'
      << "d_min = " << fmt(cfg.d_min) << '\n'
      << "d_max = " << fmt(cfg.d_max) << '\n'
      << "collision_penalty = " << fmt(cfg.collision_penalty) << '\n'
      << "robot_radius = " << fmt(cfg.robot_radius) << '\n'
      << "bandwidth_mode = " << to_string(cfg.bandwidth_mode) << '\n'
      << "shift_warm_start = " << (cfg.shift_warm_start ? "true" : "false") << '\n'
      << "capture_candidates = " << (cfg.capture_candidates ? "true" : "false") << '\n'
      << "threads = " << cfg.threads << '\n';
}

}  // namespace scpmppi
