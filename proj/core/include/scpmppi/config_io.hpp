#pragma once

#include "scpmppi/types.hpp"

#include <map>
#include <optional>

namespace scpmppi {

// Flat `key = value` file: one pair per line, '#' starts a comment.
// Consumers mark the keys they read so the CLI can reject typos.
class KeyValueFile {
 public:
  KeyValueFile() = default;
  static KeyValueFile parse_file(const std::string& path);
  static KeyValueFile parse_text(const std::string& text);

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  // Scalar values broadcast to all three components.
  Eigen::Vector3d get_vec3(const std::string& key, const Eigen::Vector3d& fallback) const;
  std::vector<std::string> get_list(const std::string& key,
                                    const std::vector<std::string>& fallback) const;

  // Keys present in the file but never read by any consumer.
  std::vector<std::string> unread_keys() const;

 private:
  std::map<std::string, std::string> values_;
  mutable std::map<std::string, bool> read_;
};

// Reads every solver key present (missing keys keep the defaults of the
// passed-in base). Keys are documented in the README.
SolverConfig load_solver_config(const KeyValueFile& file, SolverConfig base = {});

void save_solver_config(const SolverConfig& cfg, const std::string& path);

}  // namespace scpmppi
