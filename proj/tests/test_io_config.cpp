#include "amhd/config.hpp"
#include "amhd/io.hpp"
#include "amhd/random.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

using namespace amhd;

namespace {

SimState<double> sample_state(int nx, int ny, double ly, Model model, std::uint64_t seed) {
  Rng rng(seed);
  const auto g = make_grid(nx, ny, ly);
  SimState<double> s(random_div_free(g, rng), random_div_free(g, rng), {model, 0.1, 0.2}, 0.375);
  return s;
}

double read_f64(const std::string& bytes, std::size_t offset) {
  std::uint64_t bits = 0;
  for (int b = 7; b >= 0; --b) bits = (bits << 8) | static_cast<unsigned char>(bytes[offset + b]);
  double v;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

std::uint32_t read_u32(const std::string& bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (int b = 3; b >= 0; --b) v = (v << 8) | static_cast<unsigned char>(bytes[offset + b]);
  return v;
}

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

std::string field_of(const std::string& text) {
  try {
    parse(text).validate();
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_CASE("snapshot round trip", "[snapshot]") {
  for (Model model : {Model::mhd, Model::tcm}) {
    const auto s = sample_state(16, 12, 2.5, model, 41);
    std::stringstream buffer;
    write_snapshot(buffer, s);
    const auto back = read_snapshot(buffer);
    CHECK(back.grid.nx() == 16);
    CHECK(back.grid.ny() == 12);
    CHECK(back.grid.ly() == 2.5);
    CHECK(back.t == 0.375);
    CHECK(back.model == model);
    const RealArray<double> a = from_spectral(s.u.x_comp);
    const RealArray<double> b = from_spectral(back.u.x_comp);
    CHECK((a - b).abs().maxCoeff() <= 1e-15 * a.abs().maxCoeff());
    const RealArray<double> c = from_spectral(s.w.y_comp);
    CHECK((c - from_spectral(back.w.y_comp)).abs().maxCoeff() <= 1e-15 * c.abs().maxCoeff());
  }
}

TEST_CASE("snapshot byte layout", "[snapshot]") {
  const auto s = sample_state(8, 6, 1.0, Model::tcm, 42);
  std::ostringstream out;
  write_snapshot(out, s);
  const std::string bytes = out.str();
  const std::size_t header = 4 + 2 + 4 + 4 + 8 + 8 + 1;
  REQUIRE(bytes.size() == header + 4 * 8 * 6 * 8);
  CHECK(bytes.substr(0, 4) == "AMHD");
  CHECK(static_cast<unsigned char>(bytes[4]) == 1);
  CHECK(static_cast<unsigned char>(bytes[5]) == 0);
  CHECK(read_u32(bytes, 6) == 8);
  CHECK(read_u32(bytes, 10) == 6);
  CHECK(read_f64(bytes, 14) == 1.0);
  CHECK(read_f64(bytes, 22) == 0.375);
  CHECK(bytes[30] == 1);

  const RealArray<double> u1 = from_spectral(s.u.x_comp);
  const RealArray<double> w2 = from_spectral(s.w.y_comp);
  for (int ix : {0, 3, 7}) {
    for (int iy : {0, 2, 5}) {
      CHECK(read_f64(bytes, header + 8 * (ix * 6 + iy)) == u1(ix, iy));
      CHECK(read_f64(bytes, header + 8 * (3 * 48 + ix * 6 + iy)) == w2(ix, iy));
    }
  }
}

TEST_CASE("corrupt snapshots are rejected", "[snapshot]") {
  const auto s = sample_state(8, 8, 1.0, Model::mhd, 43);
  std::ostringstream out;
  write_snapshot(out, s);
  const std::string good = out.str();

  std::string bad_magic = good;
  bad_magic[0] = 'X';
  std::istringstream a(bad_magic);
  CHECK_THROWS(read_snapshot(a));

  std::string bad_version = good;
  bad_version[4] = 9;
  std::istringstream b(bad_version);
  CHECK_THROWS(read_snapshot(b));

  std::istringstream c(good.substr(0, good.size() - 5));
  CHECK_THROWS(read_snapshot(c));
  CHECK_THROWS(read_snapshot(std::string("/nonexistent/snap.amhd")));
}

TEST_CASE("doubles format to the shortest round-trip text", "[csv]") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5e-300) == "-2.5e-300");
  for (double v : {std::numbers::pi, 1.0 / 3.0, 6.02214076e23, std::numeric_limits<double>::min()}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("diagnostics CSV round trip", "[csv]") {
  std::vector<DiagnosticsRecord> traj(3);
  for (int n = 0; n < 3; ++n) {
    auto& r = traj[n];
    r.t = 0.5 * n;
    r.energy = 1.0 / (n + 1);
    r.energy_dy = 2.0 / (n + 1);
    r.dissipation = 0.1 * n;
    r.mixed_dissipation = 0.01 * n;
    r.energy_tilde = 0.3 / (n + 1);
    r.int_dissipation = 0.05 * n;
    r.int_mixed_dissipation = 0.005 * n;
    r.sobolev = {{1.0, 3.0 + n}, {2.5, 4.0 + n}};
  }
  const auto header = csv_header({1.0, 2.5});
  CHECK(header == std::vector<std::string>{"t", "E", "E2", "D1", "D12", "E_tilde", "intD1", "intD12", "F", "Hs:1",
                                           "Hs:2.5"});
  std::stringstream buffer;
  write_diagnostics_csv(buffer, traj, {1.0, 2.5});
  const auto table = read_csv(buffer);
  CHECK(table.header == header);
  REQUIRE(table.rows.size() == 3);
  CHECK(table.column("E") == std::vector<double>{1.0, 0.5, 1.0 / 3.0});
  CHECK(table.column("Hs:2.5") == std::vector<double>{4.0, 5.0, 6.0});
  // F = sup E + sup E2 + int D1 + int D12.
  CHECK(table.column("F")[2] == 1.0 + 2.0 + 0.1 + 0.01);
  CHECK(table.column_index("t") == 0u);
  CHECK_FALSE(table.column_index("missing").has_value());
  CHECK_THROWS_AS(table.column("missing"), std::out_of_range);

  std::istringstream ragged("a,b\n1,2\n3\n");
  CHECK_THROWS(read_csv(ragged));
  std::istringstream words("a,b\n1,x\n");
  CHECK_THROWS(read_csv(words));
  std::istringstream empty("");
  CHECK_THROWS(read_csv(empty));
}

TEST_CASE("config parsing", "[config]") {
  const auto cfg = parse(
      "# comment line\n"
      "model = tcm\n"
      "Nx = 64   # trailing comment\n"
      "Ny=48\n"
      "Ly = 4\n"
      "nu = 0.05\n"
      "eta = 0.2\n"
      "dt = 0.01\n"
      "T = 2\n"
      "init = single_mode\n"
      "mode_x = 2\n"
      "delta = 1e-4\n"
      "sobolev_s = 1, 2.5\n"
      "seed = 12345678901\n");
  CHECK(cfg.model == Model::tcm);
  CHECK(cfg.nx == 64);
  CHECK(cfg.ny == 48);
  CHECK(cfg.ly == 4.0);
  CHECK(cfg.nu == 0.05);
  CHECK(cfg.eta == 0.2);
  CHECK(cfg.t_end == 2.0);
  CHECK(cfg.init == InitialKind::single_mode);
  CHECK(cfg.delta == 1e-4);
  CHECK(cfg.sobolev_s == std::vector<double>{1.0, 2.5});
  CHECK(cfg.seed == 12345678901ull);
  CHECK(cfg.initial_spec().w_amplitude == 0.0);
  CHECK_NOTHROW(cfg.validate());

  const auto again = parse(cfg.to_text());
  CHECK(again.to_text() == cfg.to_text());
  CHECK(again.nu == cfg.nu);
  CHECK(again.delta == cfg.delta);

  auto random = parse("init = random_band\namplitude = 0.4\n");
  CHECK(random.initial_spec().w_amplitude == 0.4);
  random.set("delta", "none");
  CHECK_FALSE(random.delta.has_value());
}

TEST_CASE("config errors name the field", "[config]") {
  CHECK(field_of("dt = 0\n") == "dt");
  CHECK(field_of("dt = -1e-3\n") == "dt");
  CHECK(field_of("Nx = 7\n") == "Nx");
  CHECK(field_of("nu = -0.1\n") == "nu");
  CHECK(field_of("T = 1\ndt = 0.3\n") == "T");
  CHECK(field_of("cfl = 0\n") == "cfl");
  CHECK(field_of("init = single_mode\nmode_x = 0\nmode_y = 0\n") == "mode_x");
  CHECK(field_of("record_every = 0\n") == "record_every");
  CHECK(field_of("dt = 1e-3\n").empty());

  CHECK_THROWS_AS(parse("colour = red\n"), ConfigError);
  CHECK_THROWS_AS(parse("nu = fast\n"), ConfigError);
  CHECK_THROWS_AS(parse("model = euler\n"), ConfigError);
  CHECK_THROWS_AS(parse("just words\n"), ConfigError);
  try {
    parse("eta = 1x\n");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "eta");
    CHECK(std::string(e.what()).find("eta") == 0);
  }
  CHECK_THROWS_AS(load_config("/nonexistent/run.cfg"), ConfigError);
}

TEST_CASE("sweepable keys are settable", "[config]") {
  for (const auto& key : numeric_config_keys()) {
    RunConfig cfg;
    CHECK_NOTHROW(cfg.set(key, "2"));
  }
}
