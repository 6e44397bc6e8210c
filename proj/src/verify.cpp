#include "amhd/diagnostics.hpp"
#include "amhd/experiment.hpp"
#include "amhd/io.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

namespace amhd {

namespace {

using G = Grid<double>;
using VF = VectorField<double>;
using SF = SpectralField<double>;

CheckResult check(std::string name, double residual, double tolerance) {
  return {std::move(name), residual, tolerance, std::isfinite(residual) && residual <= tolerance};
}

double relative_difference(const SF& a, const SF& b) {
  const double scale = l2_norm(a);
  return scale > 0 ? l2_norm(a - b) / scale : l2_norm(b);
}

/// A projector that forgets the y-component correction.
VF broken_leray_project(const VF& w) {
  VF out = leray_project(w);
  out.y_comp = w.y_comp;
  return out;
}

void spectral_checks(const VerifyOptions& opt, std::vector<CheckResult>& out) {
  Rng rng(11);
  const G grid(24, 16, 2.0);
  const auto f = random_field(grid, rng, false);
  out.push_back(check("fft_roundtrip", relative_difference(f, to_spectral(grid, from_spectral(f))), 1e-13));

  const auto g = random_field(grid, rng);
  const double idem = relative_difference(dealias(g), dealias(dealias(g)));
  out.push_back(check("dealias_idempotent", idem, 0.0));

  const auto project = opt.faults.count("leray_project") ? broken_leray_project : leray_project<double>;
  const VF w = random_vector_field(grid, rng);
  const VF p = project(w);
  const VF pp = project(p);
  const double idempotence = l2_norm(pp - p) / std::max(l2_norm(p), 1e-300);
  out.push_back(check("leray_project", std::max(divergence_residual(p), idempotence), 1e-12));
}

void anisotropic_checks(const VerifyOptions& opt, std::vector<CheckResult>& out) {
  const int trials = opt.level == VerifyLevel::full ? 100 : 10;
  Rng rng(23);
  const G grid(32, 32, 1.0);
  double poincare_excess = 0;
  double agmon_excess = 0;
  double bar_structure = 0;
  for (int n = 0; n < trials; ++n) {
    const auto f = random_field(grid, rng);
    poincare_excess = std::max(poincare_excess, poincare_ratio(f) - 1.0 / (2.0 * std::numbers::pi));
    agmon_excess = std::max(agmon_excess, agmon_ratio(f) - std::sqrt(2.0));
    const auto report = verify_lemma23(random_div_free(grid, rng));
    bar_structure = std::max({bar_structure, report.bar_u2, report.dy_bar_u2, report.tilde_divergence});
  }
  out.push_back(check("poincare_inequality", std::max(poincare_excess, 0.0), 1e-12));
  out.push_back(check("agmon_inequality", std::max(agmon_excess, 0.0), 1e-6));
  out.push_back(check("bar_structure", bar_structure, 1e-12));
}

void littlewood_paley_checks(std::vector<CheckResult>& out) {
  Rng rng(5);
  const G grid(32, 32, 1.0);
  const ShellSystem<double> shells(grid);
  const auto f = random_field(grid, rng, false);
  SF sum(grid);
  double cross = 0;
  for (int q = -1; q <= shells.q_max(); ++q) {
    const auto bq = dyadic_block(shells, f, q);
    sum += bq;
    for (int r = q + 1; r <= shells.q_max(); ++r) cross = std::max(cross, std::abs(inner(bq, dyadic_block(shells, f, r))));
  }
  out.push_back(check("lp_reconstruction", relative_difference(f, sum), 1e-12));
  out.push_back(check("lp_orthogonality", cross / l2_norm_squared(f), 1e-12));

  double bernstein_excess = 0;
  for (int k = 1; k <= 2; ++k) {
    const double lo = std::pow(0.75, k), hi = std::pow(1.5, k);
    for (int q = 0; q <= shells.q_max(); ++q) {
      const auto b = bernstein_ratio(shells, f, q, k);
      if (b.empty_block) continue;
      bernstein_excess = std::max({bernstein_excess, lo - b.ratio, b.ratio - hi});
    }
  }
  out.push_back(check("bernstein_ratios", std::max(bernstein_excess, 0.0), 1e-12));

  double besov_excess = 0;
  for (double s : {1.0, 2.0}) {
    const double ratio = besov_norm(shells, f, s, 2.0, 2.0) / sobolev_norm(f, s);
    const double bound = std::pow(2.0, 2.0 * s + 2.0);
    besov_excess = std::max({besov_excess, 1.0 / bound - ratio, ratio - bound});
  }
  out.push_back(check("besov_sobolev_equivalence", std::max(besov_excess, 0.0), 0.0));

  const auto g = random_field(grid, rng);
  const auto h = random_field(grid, rng);
  const auto parts = bony_parts(shells, g, h);
  out.push_back(check("bony_reconstruction",
                      relative_difference(multiply(g, h), parts.paraproduct_fg + parts.paraproduct_gf + parts.remainder),
                      1e-10));
}

void identity_checks(const VerifyOptions& opt, std::vector<CheckResult>& out) {
  const int trials = opt.level == VerifyLevel::full ? 50 : 5;
  Rng rng(101);
  const G grid(32, 32, 1.0);
  double worst = 0;
  double tcm = 0;
  bool preconditions = true;
  for (int n = 0; n < trials; ++n) {
    const auto f = random_div_free(grid, rng);
    const auto g = random_div_free(grid, rng);
    const auto h = random_div_free(grid, rng);
    const int q = 1 + n % 3;
    const int k = q + (n % 5) - 2;
    const auto report = vanishing_identity_suite(f, g, h, q, k);
    for (const auto& r : report.residuals) preconditions = preconditions && r.precondition_met;
    worst = std::max(worst, report.max_normalized());
    const auto c = tcm_cancellation(f, g);
    preconditions = preconditions && c.precondition_met;
    tcm = std::max(tcm, c.normalized);
  }
  out.push_back(check("vanishing_identities", preconditions ? worst : INFINITY, 1e-10));
  out.push_back(check("tcm_cancellation", tcm, 1e-10));

  // Quadratic exchange in the full right-hand side.
  const auto u = random_div_free(grid, rng);
  const auto w = random_div_free(grid, rng);
  for (Model m : {Model::mhd, Model::tcm}) {
    const SimState<double> s(u, w, {m, 0.0, 0.0});
    const auto rhs = nonlinear_rhs(s);
    const double scale = max_magnitude(u) * (detail::gradient_norm(u) + detail::gradient_norm(w)) *
                         (l2_norm(u) + l2_norm(w));
    const double power = inner(rhs.du, u) + inner(rhs.dw, w);
    out.push_back(check(std::string("energy_exchange_") + std::string(to_string(m)), std::abs(power) / scale, 1e-10));
  }
}

void solver_checks(const VerifyOptions& opt, std::vector<CheckResult>& out) {
  const bool full = opt.level == VerifyLevel::full;
  const G grid = full ? G(64, 64, 4.0) : G(32, 32, 2.0);
  InitialDataSpec<double> spec;
  spec.kind = InitialKind::random_band;
  spec.delta_target = 1e-2;
  spec.seed = 3;
  const double t_end = full ? 1.0 : 0.1;
  const double dt = 1e-3;

  const auto s0 = make_initial(spec, grid, ModelParams<double>{Model::mhd, 0.1, 0.1});
  const auto viscous = run(s0, t_end, dt, 10L);
  out.push_back(check("energy_identity", energy_identity_residual(viscous.trajectory).value, 1e-6));

  for (Model m : {Model::mhd, Model::tcm}) {
    const auto s = make_initial(spec, grid, ModelParams<double>{m, 0.0, 0.0});
    const auto r = run(s, t_end, dt, 10L);
    double drift = 0;
    for (const auto& rec : r.trajectory) {
      drift = std::max(drift, std::abs(rec.energy - r.trajectory.front().energy) / r.trajectory.front().energy);
    }
    out.push_back(check(std::string("inviscid_conservation_") + std::string(to_string(m)), drift, 1e-8));
  }

  // Heat decay of a single shear mode.
  InitialDataSpec<double> mode;
  mode.kind = InitialKind::single_mode;
  mode.amplitude = 1e-8;
  const double nu = 0.05;
  const auto lin = make_initial(mode, G(16, 16, 1.0), ModelParams<double>{Model::mhd, nu, nu});
  const auto r = run(lin, 0.5, 1e-2, 1L);
  const double rate = 2.0 * nu * 4.0 * std::numbers::pi * std::numbers::pi;
  double heat = 0;
  for (const auto& rec : r.trajectory) {
    const double exact = r.trajectory.front().energy * std::exp(-rate * rec.t);
    heat = std::max(heat, std::abs(rec.energy - exact) / exact);
  }
  out.push_back(check("linear_heat_decay", heat, 1e-10));
}

void io_checks(std::vector<CheckResult>& out) {
  Rng rng(77);
  const G grid(16, 8, 1.5);
  const SimState<double> s(random_div_free(grid, rng), random_div_free(grid, rng), {Model::tcm, 0.1, 0.2}, 0.25);
  std::stringstream buffer;
  write_snapshot(buffer, s);
  const auto back = read_snapshot(buffer);
  const double diff = std::max({relative_difference(s.u.x_comp, back.u.x_comp), relative_difference(s.u.y_comp, back.u.y_comp),
                                relative_difference(s.w.x_comp, back.w.x_comp), relative_difference(s.w.y_comp, back.w.y_comp)});
  const bool header_ok = back.grid == grid && back.t == s.t && back.model == Model::tcm;
  out.push_back(check("snapshot_roundtrip", header_ok ? diff : INFINITY, 1e-13));
}

}  // namespace

std::vector<CheckResult> run_checks(const VerifyOptions& options) {
  std::vector<CheckResult> out;
  spectral_checks(options, out);
  anisotropic_checks(options, out);
  littlewood_paley_checks(out);
  identity_checks(options, out);
  solver_checks(options, out);
  io_checks(out);
  return out;
}

int cmd_verify(const VerifyOptions& options, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const auto results = run_checks(options);
  bool all = true;
  out << std::left << std::setw(30) << "check" << std::setw(14) << "residual" << std::setw(12) << "tolerance"
      << "status\n";
  for (const auto& r : results) {
    all = all && r.passed;
    out << std::left << std::setw(30) << r.name << std::setw(14) << std::setprecision(3) << std::scientific
        << r.residual << std::setw(12) << std::setprecision(1) << r.tolerance << (r.passed ? "PASS" : "FAIL") << '\n';
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out << std::defaultfloat << std::setprecision(3) << results.size() << " checks, "
      << (all ? "all passed" : "FAILURES") << " (" << seconds << " s)\n";
  for (const auto& r : results) {
    if (!r.passed) out << "failed: " << r.name << '\n';
  }
  return all ? exit_code::ok : exit_code::check_failed;
}

}  // namespace amhd
