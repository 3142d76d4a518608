#include "scpmppi/suite.hpp"

#include "scpmppi/export.hpp"
#include "scpmppi/parallel.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace scpmppi {

namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

SuiteConfig load_suite_config(const KeyValueFile& file) {
  SuiteConfig cfg;
  cfg.solver = load_solver_config(file);

  cfg.cells.clear();
  for (const std::string& entry : file.get_list("cells", {"mppi:50", "scp:50", "scp-svgd:50"})) {
    const auto colon = entry.find(':');
    SuiteCell cell;
    cell.variant = parse_variant(colon == std::string::npos ? entry : entry.substr(0, colon));
    cell.K = colon == std::string::npos ? cfg.solver.K : std::stoi(entry.substr(colon + 1));
    cfg.cells.push_back(cell);
  }

  cfg.tiers = file.get_list("tiers", {"low", "mid", "high"});
  const auto density_strings = file.get_list("densities", {"0.02", "0.05", "0.08"});
  cfg.tier_densities.clear();
  for (const auto& s : density_strings) cfg.tier_densities.push_back(std::stod(s));
  if (cfg.tier_densities.size() != cfg.tiers.size()) {
    throw std::runtime_error("densities must list one value per tier");
  }
  cfg.env_files = file.get_list("envs", {});

  cfg.trials = file.get_int("trials", cfg.trials);
  cfg.base_seed = file.get_u64("base_seed", cfg.base_seed);
  cfg.limits.goal_tol = file.get_double("goal_tol", cfg.limits.goal_tol);
  cfg.limits.max_time = file.get_double("max_time", cfg.limits.max_time);
  cfg.limits.stuck_window = file.get_double("stuck_window", cfg.limits.stuck_window);
  cfg.limits.stuck_radius = file.get_double("stuck_radius", cfg.limits.stuck_radius);
  cfg.sensor.beams = file.get_int("beams", cfg.sensor.beams);
  cfg.sensor.max_range = file.get_double("max_range", cfg.sensor.max_range);

  const auto field = file.get_list("field", {"20", "15"});
  if (field.size() != 2) throw std::runtime_error("field must be width,height in meters");
  cfg.field = Bounds{{0.0, 0.0}, {std::stod(field[0]), std::stod(field[1])}};
  cfg.start = file.get_vec3("start", cfg.start);
  cfg.goal = file.get_vec3("goal", cfg.goal);
  cfg.corridor_clearance = file.get_double("corridor_clearance", cfg.corridor_clearance);
  cfg.cylinder_radius = file.get_double("cylinder_radius", cfg.cylinder_radius);
  cfg.suite_threads = file.get_int("suite_threads", cfg.suite_threads);
  cfg.out_dir = file.get_string("out_dir", cfg.out_dir);
  cfg.export_plots = file.get_bool("export_plots", cfg.export_plots);
  return cfg;
}

Environment suite_environment(const SuiteConfig& cfg, int tier_index, int trial) {
  if (!cfg.env_files.empty()) {
    return load_environment(cfg.env_files[tier_index]);
  }
  return generate_forest(cfg.tier_densities[tier_index], cfg.field, cfg.corridor_clearance,
                         mix(cfg.base_seed, tier_index * 1000 + trial), cfg.start, cfg.goal,
                         cfg.cylinder_radius, cfg.solver.robot_radius);
}

SuiteReport run_suite(const SuiteConfig& cfg) {
  const auto env_labels = cfg.env_files.empty() ? cfg.tiers : cfg.env_files;
  const int n_envs = static_cast<int>(env_labels.size());
  const int n_cells = static_cast<int>(cfg.cells.size());
  const int total = n_cells * n_envs * cfg.trials;

  SuiteReport report;
  report.records.resize(total);

  const int suite_threads = resolve_threads(cfg.suite_threads);
  SolverConfig base = cfg.solver;
  if (suite_threads > 1) base.threads = 1;  // one core per trial

  parallel_for(total, cfg.suite_threads, [&](int idx) {
    const int cell_idx = idx / (n_envs * cfg.trials);
    const int env_idx = (idx / cfg.trials) % n_envs;
    const int trial = idx % cfg.trials;

    SolverConfig solver = base;
    solver.variant = cfg.cells[cell_idx].variant;
    solver.K = cfg.cells[cell_idx].K;
    if (solver.variant == Variant::Mppi) solver.M = solver.T;

    TrialRecord& record = report.records[idx];
    record.variant_label = to_string(solver.variant);
    record.K = solver.K;
    record.env_label = env_labels[env_idx];
    record.trial = trial;
    record.seed = mix(cfg.base_seed, static_cast<std::uint64_t>(idx));
    try {
      const Environment env = suite_environment(cfg, env_idx, trial);
      record.result = run_trial(env, validate_config(solver), cfg.limits, cfg.sensor,
                                record.seed);
      if (!cfg.out_dir.empty()) {
        std::ostringstream stem;
        stem << record.variant_label << "_K" << record.K << '_' << record.env_label
             << "_t" << trial;
        const std::filesystem::path dir(cfg.out_dir);
        export_trajectory(record.result, (dir / (stem.str() + ".csv")).string());
        if (cfg.export_plots) {
          export_plot(env, record.result, (dir / (stem.str() + ".svg")).string(),
                      record.result.first_solve_candidates);
        }
      }
    } catch (const std::exception& e) {
      record.error = e.what();
    }
  });

  report.cells = aggregate(report.records);
  if (!cfg.out_dir.empty()) {
    const std::filesystem::path dir(cfg.out_dir);
    write_results_csv(report, (dir / "results.csv").string());
    write_summary_csv(report, (dir / "summary.csv").string());
  }
  return report;
}

SuiteReport run_suite(const std::string& suite_config_path) {
  SuiteConfig cfg = load_suite_config(KeyValueFile::parse_file(suite_config_path));
  if (!cfg.out_dir.empty()) std::filesystem::create_directories(cfg.out_dir);
  return run_suite(cfg);
}

std::vector<CellReport> aggregate(const std::vector<TrialRecord>& records) {
  std::vector<CellReport> cells;
  auto find_cell = [&](const TrialRecord& r) -> CellReport& {
    for (auto& c : cells) {
      if (c.variant_label == r.variant_label && c.K == r.K && c.env_label == r.env_label) {
        return c;
      }
    }
    cells.push_back(CellReport{r.variant_label, r.K, r.env_label});
    return cells.back();
  };

  struct Sums {
    int successes = 0;
    double ft = 0, as = 0, smooth = 0, rate = 0;
    int measured = 0;
  };
  std::vector<Sums> sums;
  for (const TrialRecord& r : records) {
    CellReport& cell = find_cell(r);
    const size_t i = &cell - cells.data();
    if (sums.size() <= i) sums.resize(i + 1);
    ++cell.trials;
    if (r.error.empty()) {
      ++sums[i].measured;
      sums[i].smooth += r.result.smoothness;
      sums[i].rate += r.result.solve_rate;
      if (r.result.outcome == Outcome::Reached) {
        ++sums[i].successes;
        sums[i].ft += r.result.flight_time;
        sums[i].as += r.result.avg_speed;
      }
    }
  }
  for (size_t i = 0; i < cells.size(); ++i) {
    CellReport& c = cells[i];
    const Sums& s = sums[i];
    c.success_rate = c.trials > 0 ? 100.0 * s.successes / c.trials : 0.0;
    c.mean_flight_time = s.successes > 0 ? s.ft / s.successes
                                         : std::numeric_limits<double>::quiet_NaN();
    c.mean_avg_speed = s.successes > 0 ? s.as / s.successes
                                       : std::numeric_limits<double>::quiet_NaN();
    c.mean_smoothness = s.measured > 0 ? s.smooth / s.measured : 0.0;
    c.mean_solve_rate = s.measured > 0 ? s.rate / s.measured : 0.0;
  }
  return cells;
}

namespace {

std::string cell_value(double v, int precision) {
  if (std::isnan(v)) return "-";
  std::ostringstream out;
  out << std::fixed << std::setprecision(precision) << v;
  return out.str();
}

}  // namespace

std::string format_report(const SuiteReport& report) {
  std::ostringstream out;
  out << std::left << std::setw(22) << "Method" << std::setw(8) << "Env"
      << std::right << std::setw(8) << "SR [%]" << std::setw(10) << "FT [s]"
      << std::setw(10) << "AS [m/s]" << std::setw(14) << "Smooth" << std::setw(12)
      << "Rate [Hz]" << '\n';
  out << std::string(84, '-') << '\n';
  for (const CellReport& c : report.cells) {
    std::ostringstream method;
    method << c.variant_label << " (K=" << c.K << ")";
    out << std::left << std::setw(22) << method.str() << std::setw(8) << c.env_label
        << std::right << std::setw(8) << cell_value(c.success_rate, 0) << std::setw(10)
        << cell_value(c.mean_flight_time, 1) << std::setw(10)
        << cell_value(c.mean_avg_speed, 3) << std::setw(14)
        << cell_value(c.mean_smoothness, 6) << std::setw(12)
        << cell_value(c.mean_solve_rate, 1) << '\n';
  }
  return out.str();
}

void write_results_csv(const SuiteReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "variant,K,env,trial,seed,outcome,flight_time,avg_speed,smoothness,"
         "solve_rate,steps,speed_anomaly,error\n";
  char buf[128];
  for (const TrialRecord& r : report.records) {
    out << r.variant_label << ',' << r.K << ',' << r.env_label << ',' << r.trial << ','
        << r.seed << ',';
    if (!r.error.empty()) {
      std::string msg = r.error;
      for (char& ch : msg) {
        if (ch == ',' || ch == '\n') ch = ' ';
      }
      out << "error,0,0,0,0,0,0," << msg << '\n';
      continue;
    }
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g", r.result.flight_time,
                  r.result.avg_speed, r.result.smoothness, r.result.solve_rate);
    out << to_string(r.result.outcome) << ',' << buf << ',' << r.result.controls.size()
        << ',' << (r.result.speed_anomaly ? 1 : 0) << ",\n";
  }
}

std::vector<TrialRecord> load_results_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty results file: " + path);

  std::vector<TrialRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    while (fields.size() < 13) fields.emplace_back();

    TrialRecord r;
    r.variant_label = fields[0];
    r.K = std::stoi(fields[1]);
    r.env_label = fields[2];
    r.trial = std::stoi(fields[3]);
    r.seed = std::stoull(fields[4]);
    if (fields[5] == "error") {
      r.error = fields[12].empty() ? "unknown" : fields[12];
    } else {
      r.result.outcome = parse_outcome(fields[5]);
      r.result.flight_time = std::stod(fields[6]);
      r.result.avg_speed = std::stod(fields[7]);
      r.result.smoothness = std::stod(fields[8]);
      r.result.solve_rate = std::stod(fields[9]);
      r.result.speed_anomaly = fields[11] == "1";
    }
    records.push_back(std::move(r));
  }
  return records;
}

void write_summary_csv(const SuiteReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "variant,K,env,trials,success_rate,mean_flight_time,mean_avg_speed,"
         "mean_smoothness,mean_solve_rate\n";
  for (const CellReport& c : report.cells) {
    out << c.variant_label << ',' << c.K << ',' << c.env_label << ',' << c.trials << ','
        << c.success_rate << ',' << c.mean_flight_time << ',' << c.mean_avg_speed << ','
        << c.mean_smoothness << ',' << c.mean_solve_rate << '\n';
  }
}

}  // namespace scpmppi
