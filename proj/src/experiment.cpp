#include "amhd/experiment.hpp"

#include "amhd/diagnostics.hpp"
#include "amhd/io.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;

namespace amhd {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

void write_meta(const RunConfig& config, const std::string& status, double wall_seconds, std::size_t records) {
  std::ofstream meta(fs::path(config.output_dir) / "run.meta");
  if (!meta) throw std::runtime_error("cannot write run.meta in " + config.output_dir);
  meta << "# amhd run metadata\n"
       << config.to_text() << "software_version = " << software_version << '\n'
       << "rng = mt19937_64\n"
       << "status = " << status << '\n'
       << "records = " << records << '\n'
       << "wall_time_s = " << format_double(wall_seconds) << '\n';
}

void summarize(const RunConfig& config, const std::vector<DiagnosticsRecord>& trajectory, RunOutcome& outcome) {
  outcome.fitted_rate = nan;
  outcome.f_ratio = nan;
  if (trajectory.empty()) return;
  outcome.final_energy = trajectory.back().energy;
  outcome.final_energy_tilde = trajectory.back().energy_tilde;
  const auto ledger = f_functional(trajectory);
  if (ledger.front().f > 0) outcome.f_ratio = ledger.back().f / ledger.front().f;
  std::vector<double> ts, values;
  for (const auto& r : trajectory) {
    ts.push_back(r.t);
    values.push_back(r.energy_tilde);
  }
  try {
    outcome.fitted_rate = fit_decay_rate(ts, values, 0.1 * config.t_end, config.t_end).rate;
  } catch (const std::exception&) {
    // Too few samples or a vanishing oscillation energy: no rate.
  }
}

}  // namespace

RunOutcome run_experiment(const RunConfig& config) {
  RunOutcome outcome;
  try {
    config.validate();
  } catch (const ConfigError& e) {
    return {exit_code::invalid, e.what()};
  }
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

  std::optional<SimState<double>> initial;
  try {
    initial.emplace(make_initial(config.initial_spec(), config.grid(), config.params()));
  } catch (const std::invalid_argument& e) {
    return {exit_code::invalid, std::string("initial data: ") + e.what()};
  }

  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec) return {exit_code::invalid, "output_dir: " + ec.message()};

  RunOptions<double> options;
  options.cfl = config.cfl;
  options.sobolev_s = config.sobolev_s;
  options.snapshot_every = config.snapshot_every;
  if (config.snapshot_every > 0) {
    const fs::path dir = fs::path(config.output_dir) / "snapshots";
    fs::create_directories(dir);
    options.on_snapshot = [dir](const SimState<double>& s, long n) {
      std::ostringstream name;
      name << "snap_" << std::setw(8) << std::setfill('0') << n << ".amhd";
      write_snapshot((dir / name.str()).string(), s);
    };
  }

  const fs::path csv = fs::path(config.output_dir) / "diagnostics.csv";
  try {
    auto result = run(*initial, config.t_end, config.dt, config.record_every, options);
    write_diagnostics_csv(csv.string(), result.trajectory, config.sobolev_s);
    summarize(config, result.trajectory, outcome);
    write_meta(config, "ok", elapsed(), result.trajectory.size());
  } catch (const NumericalAbort& e) {
    write_diagnostics_csv(csv.string(), e.trajectory, config.sobolev_s);
    write_meta(config, std::string("aborted: ") + e.what(), elapsed(), e.trajectory.size());
    summarize(config, e.trajectory, outcome);
    outcome.exit = exit_code::numerical;
    outcome.message = e.what();
  }
  return outcome;
}

int cmd_run(const std::string& config_path, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config = load_config(config_path);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::invalid;
  }
  RunOutcome outcome;
  try {
    outcome = run_experiment(config);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::invalid;
  }
  if (outcome.exit != exit_code::ok) {
    err << "error: " << outcome.message << '\n';
    return outcome.exit;
  }
  out << "wrote " << (fs::path(config.output_dir) / "diagnostics.csv").string() << '\n'
      << "final E = " << format_double(outcome.final_energy) << ", E_tilde = "
      << format_double(outcome.final_energy_tilde) << '\n';
  return exit_code::ok;
}

unsigned sweep_workers() {
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("AMHD_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) workers = static_cast<unsigned>(v);
  }
  return workers;
}

int cmd_sweep(const std::string& config_path, const std::string& axis, const std::vector<std::string>& values,
              std::ostream& out, std::ostream& err) {
  if (values.empty()) {
    err << "error: values: empty list\n";
    return exit_code::invalid;
  }
  const auto keys = numeric_config_keys();
  if (std::find(keys.begin(), keys.end(), axis) == keys.end()) {
    err << "error: axis: '" << axis << "' is not a numeric configuration key\n";
    return exit_code::invalid;
  }
  RunConfig base;
  std::vector<RunConfig> configs;
  try {
    base = load_config(config_path);
    for (const auto& v : values) {
      RunConfig c = base;
      c.set(axis, v);
      c.output_dir = (fs::path(base.output_dir) / (axis + "=" + v)).string();
      configs.push_back(std::move(c));
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::invalid;
  }

  std::vector<RunOutcome> outcomes(configs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        outcomes[i] = run_experiment(configs[i]);
      } catch (const std::exception& e) {
        outcomes[i] = {exit_code::invalid, e.what()};
      }
    }
  };
  const unsigned n_workers = std::min<unsigned>(sweep_workers(), static_cast<unsigned>(configs.size()));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::error_code ec;
  fs::create_directories(base.output_dir, ec);
  std::ofstream summary(fs::path(base.output_dir) / "sweep_summary.csv");
  if (!summary) {
    err << "error: cannot write sweep_summary.csv in " << base.output_dir << '\n';
    return exit_code::invalid;
  }
  summary << "value,final_E,final_E_tilde,fitted_rate,F_ratio,status\n";
  bool all_ok = true;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const auto& o = outcomes[i];
    const bool ok = o.exit == exit_code::ok;
    all_ok = all_ok && ok;
    summary << values[i] << ',' << format_double(o.final_energy) << ',' << format_double(o.final_energy_tilde) << ','
            << format_double(o.fitted_rate) << ',' << format_double(o.f_ratio) << ','
            << (ok ? std::string("ok") : "failed(" + std::to_string(o.exit) + ")") << '\n';
    if (!ok) err << axis << '=' << values[i] << ": " << o.message << '\n';
  }
  out << "wrote " << (fs::path(base.output_dir) / "sweep_summary.csv").string() << " (" << configs.size()
      << " runs, " << n_workers << " workers)\n";
  return all_ok ? exit_code::ok : exit_code::invalid;
}

std::pair<double, double> parse_window(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("window must look like t0:t1");
  std::size_t used0 = 0, used1 = 0;
  const std::string a = text.substr(0, colon), b = text.substr(colon + 1);
  const double t0 = std::stod(a, &used0);
  const double t1 = std::stod(b, &used1);
  if (used0 != a.size() || used1 != b.size()) throw std::invalid_argument("window must look like t0:t1");
  return {t0, t1};
}

int cmd_fit(const std::string& csv_path, const std::string& column, const std::string& window, std::ostream& out,
            std::ostream& err) {
  try {
    const auto [t0, t1] = parse_window(window);
    const CsvTable table = read_csv(csv_path);
    if (!table.column_index("t")) {
      err << "error: " << csv_path << " has no t column\n";
      return exit_code::invalid;
    }
    if (!table.column_index(column)) {
      err << "error: column: no column named '" << column << "' in " << csv_path << '\n';
      return exit_code::invalid;
    }
    const auto ts = table.column("t");
    if (ts.empty() || !(t1 > t0) || t0 < ts.front() || t1 > ts.back()) {
      err << "error: window: [" << window << "] is not inside the data range [" << format_double(ts.empty() ? 0 : ts.front())
          << ", " << format_double(ts.empty() ? 0 : ts.back()) << "]\n";
      return exit_code::invalid;
    }
    const auto fit = fit_decay_rate(ts, table.column(column), t0, t1);
    out << "rate " << format_double(fit.rate) << '\n'
        << "residual " << format_double(fit.residual) << '\n'
        << "rate_stderr " << format_double(fit.rate_stderr) << '\n'
        << "samples " << fit.samples << '\n';
    return exit_code::ok;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::invalid;
  }
}

}  // namespace amhd
