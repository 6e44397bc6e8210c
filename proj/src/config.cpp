#include "amhd/config.hpp"
#include "amhd/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace amhd {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) throw ConfigError(key, "cannot parse '" + text + "' as a number");
  return value;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_number<double>(key, item));
  }
  return out;
}

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field, what);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void RunConfig::set(const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "model") {
    try {
      model = parse_model(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(key, e.what());
    }
  } else if (key == "Nx") {
    nx = parse_number<int>(key, value);
  } else if (key == "Ny") {
    ny = parse_number<int>(key, value);
  } else if (key == "Ly") {
    ly = parse_number<double>(key, value);
  } else if (key == "nu") {
    nu = parse_number<double>(key, value);
  } else if (key == "eta") {
    eta = parse_number<double>(key, value);
  } else if (key == "dt") {
    dt = parse_number<double>(key, value);
  } else if (key == "T") {
    t_end = parse_number<double>(key, value);
  } else if (key == "record_every") {
    record_every = parse_number<long>(key, value);
  } else if (key == "init") {
    try {
      init = parse_initial_kind(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(key, e.what());
    }
  } else if (key == "amplitude") {
    amplitude = parse_number<double>(key, value);
  } else if (key == "w_amplitude") {
    w_amplitude = parse_number<double>(key, value);
  } else if (key == "delta") {
    if (value == "none" || value.empty()) {
      delta.reset();
    } else {
      delta = parse_number<double>(key, value);
    }
  } else if (key == "seed") {
    seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "mode_x") {
    mode_x = parse_number<int>(key, value);
  } else if (key == "mode_y") {
    mode_y = parse_number<int>(key, value);
  } else if (key == "bandwidth") {
    bandwidth = parse_number<double>(key, value);
  } else if (key == "output_dir") {
    require(!value.empty(), key, "must not be empty");
    output_dir = value;
  } else if (key == "snapshot_every") {
    snapshot_every = parse_number<long>(key, value);
  } else if (key == "sobolev_s") {
    sobolev_s = parse_list(key, value);
  } else if (key == "cfl") {
    cfl = parse_number<double>(key, value);
  } else {
    throw ConfigError(key, "unknown configuration key");
  }
}

void RunConfig::validate() const {
  require(nx >= 4 && nx % 2 == 0, "Nx", "must be even and >= 4");
  require(ny >= 4 && ny % 2 == 0, "Ny", "must be even and >= 4");
  require(finite(ly) && ly > 0, "Ly", "must be positive");
  require(finite(nu) && nu >= 0, "nu", "must be >= 0");
  require(finite(eta) && eta >= 0, "eta", "must be >= 0");
  require(finite(dt) && dt > 0, "dt", "must be positive");
  require(finite(t_end) && t_end >= 0, "T", "must be >= 0");
  if (t_end > 0) {
    try {
      step_count(t_end, dt);
    } catch (const std::invalid_argument&) {
      throw ConfigError("T", "must be an integer multiple of dt");
    }
  }
  require(record_every >= 1, "record_every", "must be >= 1");
  require(finite(amplitude) && amplitude >= 0, "amplitude", "must be >= 0");
  if (w_amplitude) require(finite(*w_amplitude) && *w_amplitude >= 0, "w_amplitude", "must be >= 0");
  if (delta) require(finite(*delta) && *delta > 0, "delta", "must be positive");
  require(finite(bandwidth) && bandwidth > 0, "bandwidth", "must be positive");
  if (init == InitialKind::single_mode) {
    require(mode_x != 0 || mode_y != 0, "mode_x", "single_mode needs a nonzero wavevector");
    require(retained_mode(mode_x, nx), "mode_x", "outside the dealiased band");
    require(retained_mode(mode_y, ny), "mode_y", "outside the dealiased band");
  }
  if (init == InitialKind::gaussian_packet) {
    require(mode_x >= 1 && retained_mode(mode_x, nx), "mode_x", "gaussian_packet needs 1 <= mode_x <= Nx/3");
  }
  if (delta) {
    const double w = w_amplitude.value_or(init == InitialKind::single_mode ? 0.0 : amplitude);
    require(amplitude > 0 || w > 0, "delta", "cannot rescale zero initial data");
  }
  require(snapshot_every >= 0, "snapshot_every", "must be >= 0");
  require(std::all_of(sobolev_s.begin(), sobolev_s.end(), finite), "sobolev_s", "entries must be finite");
  require(finite(cfl) && cfl > 0, "cfl", "must be positive");
}

InitialDataSpec<double> RunConfig::initial_spec() const {
  InitialDataSpec<double> spec;
  spec.kind = init;
  spec.amplitude = amplitude;
  spec.w_amplitude = w_amplitude.value_or(init == InitialKind::single_mode ? 0.0 : amplitude);
  spec.mode_x = mode_x;
  spec.mode_y = mode_y;
  spec.bandwidth = bandwidth;
  spec.seed = seed;
  spec.delta_target = delta;
  return spec;
}

std::string RunConfig::to_text() const {
  std::ostringstream out;
  const auto d = [](double v) { return format_double(v); };
  out << "model = " << to_string(model) << '\n'
      << "Nx = " << nx << '\n'
      << "Ny = " << ny << '\n'
      << "Ly = " << d(ly) << '\n'
      << "nu = " << d(nu) << '\n'
      << "eta = " << d(eta) << '\n'
      << "dt = " << d(dt) << '\n'
      << "T = " << d(t_end) << '\n'
      << "record_every = " << record_every << '\n'
      << "init = " << to_string(init) << '\n'
      << "amplitude = " << d(amplitude) << '\n'
      << "w_amplitude = " << d(initial_spec().w_amplitude) << '\n'
      << "delta = " << (delta ? d(*delta) : std::string("none")) << '\n'
      << "seed = " << seed << '\n'
      << "mode_x = " << mode_x << '\n'
      << "mode_y = " << mode_y << '\n'
      << "bandwidth = " << d(bandwidth) << '\n'
      << "output_dir = " << output_dir << '\n'
      << "snapshot_every = " << snapshot_every << '\n'
      << "sobolev_s = ";
  for (std::size_t i = 0; i < sobolev_s.size(); ++i) out << (i ? "," : "") << d(sobolev_s[i]);
  out << '\n' << "cfl = " << d(cfl) << '\n';
  return out.str();
}

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected key = value");
    }
    cfg.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path);
  return parse_config(in);
}

std::vector<std::string> numeric_config_keys() {
  return {"Nx",     "Ny",        "Ly",       "nu",           "eta",           "dt",
          "T",      "amplitude", "w_amplitude", "delta",     "seed",          "mode_x",
          "mode_y", "bandwidth", "cfl",      "record_every", "snapshot_every"};
}

}  // namespace amhd
