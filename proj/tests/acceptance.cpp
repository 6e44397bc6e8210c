// Acceptance suite: prints one PASS/FAIL line per criterion and exits nonzero on any failure.

#include "amhd/decomposition.hpp"
#include "amhd/diagnostics.hpp"
#include "amhd/littlewood_paley.hpp"
#include "amhd/random.hpp"
#include "amhd/solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

using namespace amhd;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::vector<double> column(const std::vector<DiagnosticsRecord>& traj, double DiagnosticsRecord::*member) {
  std::vector<double> out;
  for (const auto& r : traj) out.push_back(r.*member);
  return out;
}

SimState<double> small_data_state(int n, double ly, Model model, double nu, double eta, double delta,
                                  std::uint64_t seed) {
  InitialDataSpec<double> spec;
  spec.kind = InitialKind::random_band;
  spec.seed = seed;
  spec.delta_target = delta;
  return make_initial(spec, make_grid(n, n, ly), ModelParams<double>{model, nu, eta});
}

Outcome energy_identity() {
  const auto start = std::chrono::steady_clock::now();
  const auto s = small_data_state(64, 4.0, Model::mhd, 0.1, 0.1, 1e-2, 1);
  const auto traj = run(s, 1.0, 1e-3, 10).trajectory;
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double residual = energy_identity_residual(traj).value;
  return {residual <= 1e-6 && seconds <= 60,
          fmt("max relative residual %.3e, runtime %.1f s", residual, seconds)};
}

Outcome inviscid_conservation() {
  double worst = 0;
  for (Model model : {Model::mhd, Model::tcm}) {
    const auto s = small_data_state(64, 4.0, model, 0.0, 0.0, 1e-2, 2);
    const auto traj = run(s, 1.0, 1e-3, 10).trajectory;
    for (const auto& r : traj) worst = std::max(worst, std::abs(r.energy - traj.front().energy) / traj.front().energy);
  }
  return {worst <= 1e-8, fmt("max relative drift %.3e (MHD and TCM)", worst)};
}

Outcome linear_decay_rate() {
  const double nu = 0.05;
  InitialDataSpec<double> spec;
  spec.kind = InitialKind::single_mode;
  spec.amplitude = 1e-8;
  spec.mode_x = 1;
  spec.mode_y = 0;
  const auto s = make_initial(spec, make_grid(32, 32, 1.0), ModelParams<double>{Model::mhd, nu, nu});
  const double t_end = 2.0;
  const auto traj = run(s, t_end, 1e-2, 1).trajectory;
  const auto fit = fit_decay_rate(column(traj, &DiagnosticsRecord::t), column(traj, &DiagnosticsRecord::energy_tilde),
                                  0.1 * t_end, t_end);
  const double expected = 2 * nu * 4 * pi * pi;
  const double rel = std::abs(fit.rate - expected) / expected;
  return {rel <= 0.01, fmt("fitted rate %.10g, 2 nu (2 pi)^2 = %.10g", fit.rate, expected) + fmt(", rel err %.2e", rel)};
}

// The small-data run shared by the decay, boundedness and dependence criteria.
struct SmallDataRun {
  SimState<double> initial;
  std::vector<DiagnosticsRecord> trajectory;
};

const SmallDataRun& small_data_run() {
  static const SmallDataRun cached = [] {
    auto s = small_data_state(64, 1.0, Model::mhd, 0.1, 0.1, 1e-4, 4);
    RunOptions<double> options;
    options.sobolev_s = {2.0};
    auto traj = run(s, 20.0, 1e-2, 10, options).trajectory;
    return SmallDataRun{std::move(s), std::move(traj)};
  }();
  return cached;
}

Outcome oscillation_decay() {
  const auto& traj = small_data_run().trajectory;
  const auto ts = column(traj, &DiagnosticsRecord::t);
  const auto et = column(traj, &DiagnosticsRecord::energy_tilde);
  const double t_end = ts.back();
  const auto fit = fit_decay_rate(ts, et, 0.1 * t_end, t_end);
  bool decreasing = true;
  for (std::size_t n = 1; n < ts.size(); ++n) {
    if (ts[n] > 0.1 * t_end && et[n] >= et[n - 1]) decreasing = false;
  }
  const double floor = 0.5 * 2 * 0.1 * 4 * pi * pi;
  const bool ok = decreasing && fit.rate >= floor && fit.rate_stderr <= 0.05 * fit.rate;
  return {ok, fmt("fitted rate %.4f (floor %.4f)", fit.rate, floor) +
                  fmt(", slope stderr %.2e, log RMS residual %.2e", fit.rate_stderr, fit.residual) +
                  (decreasing ? ", decreasing" : ", NOT decreasing")};
}

Outcome boundedness() {
  const auto& traj = small_data_run().trajectory;
  const auto ledger = f_functional(traj);
  const double f_ratio = ledger.back().f / ledger.front().f;
  const double h0 = traj.front().sobolev.at(0).second;
  double h_sup = 0;
  for (const auto& r : traj) h_sup = std::max(h_sup, r.sobolev.at(0).second);
  const double h_ratio = h_sup / h0;
  return {f_ratio <= 10 && h_ratio <= 10, fmt("F(T)/F(0) = %.4f, sup H^2 / H^2(0) = %.4f", f_ratio, h_ratio)};
}

Outcome vanishing_identities() {
  Rng rng(6);
  const auto g = make_grid(32, 32, 1.0);
  const ShellSystem<double> shells(g);
  double worst = 0;
  bool preconditions = true;
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = random_div_free(g, rng);
    const auto gg = random_div_free(g, rng);
    const auto h = random_div_free(g, rng);
    for (int q = -1; q <= shells.q_max(); ++q) {
      for (int k = std::max(-1, q - 2); k <= std::min(shells.q_max(), q + 2); ++k) {
        const auto report = vanishing_identity_suite(f, gg, h, q, k);
        worst = std::max(worst, report.max_normalized());
        for (const auto& r : report.residuals) preconditions = preconditions && r.precondition_met;
      }
    }
  }
  return {preconditions && worst <= 1e-10, fmt("max normalized residual %.3e over 50 inputs", worst)};
}

Outcome tcm_cancellation_and_sign() {
  Rng rng(7);
  const auto g = make_grid(32, 32, 1.0);
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto r = tcm_cancellation(random_div_free(g, rng), random_div_free(g, rng));
    worst = std::max(worst, r.precondition_met ? r.normalized : 1.0);
  }
  // w = (sin 2 pi y, sin 4 pi x), u = 0: P(w . grad w) by hand.
  const auto h = make_grid(16, 16, 1.0);
  const VectorField<double> w(project_function(h, [](double, double y) { return std::sin(2 * pi * y); }),
                              project_function(h, [](double x, double) { return std::sin(4 * pi * x); }));
  const VectorField<double> expected(
      project_function(h, [](double x, double y) { return -6 * pi / 5 * std::sin(4 * pi * x) * std::cos(2 * pi * y); }),
      project_function(h, [](double x, double y) { return 12 * pi / 5 * std::cos(4 * pi * x) * std::sin(2 * pi * y); }));
  const auto du_mhd = nonlinear_rhs(SimState<double>(VectorField<double>(h), w, {Model::mhd, 0.0, 0.0})).du;
  const auto du_tcm = nonlinear_rhs(SimState<double>(VectorField<double>(h), w, {Model::tcm, 0.0, 0.0})).du;
  const double sign_err = std::max(l2_norm(du_mhd - expected), l2_norm(du_tcm + expected)) / l2_norm(expected);
  return {worst <= 1e-10 && sign_err <= 1e-12,
          fmt("max normalized I3+J3 %.3e over 50 pairs, sign check error %.2e", worst, sign_err)};
}

Outcome littlewood_paley() {
  Rng rng(8);
  const auto g = make_grid(32, 32, 1.0);
  const ShellSystem<double> shells(g);
  double recon = 0, ortho = 0;
  double ratio_lo = 1e300, ratio_hi = 0;
  bool besov_ok = true, bernstein_ok = true;
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_field(g, rng, false);
    SpectralField<double> sum(g);
    double blocks = 0;
    for (int q = -1; q <= shells.q_max(); ++q) {
      const auto b = dyadic_block(shells, f, q);
      sum += b;
      blocks += l2_norm_squared(b);
    }
    recon = std::max(recon, (sum.coeffs() - f.coeffs()).abs().maxCoeff());
    ortho = std::max(ortho, std::abs(blocks - l2_norm_squared(f)) / l2_norm_squared(f));
    for (double s : {1.0, 2.0}) {
      double direct = 0;
      for (int i = 0; i < g.nx(); ++i) {
        for (int j = 0; j < g.ny(); ++j) {
          const double rho2 = std::pow(g.mode_x(i), 2) + std::pow(g.mode_y(j) / g.ly(), 2);
          direct += std::pow(1 + rho2, s) * std::norm(f.coeffs()(i, j)) * g.area();
        }
      }
      const double r = std::pow(besov_norm(shells, f, s, 2, 2), 2) / direct;
      ratio_lo = std::min(ratio_lo, r);
      ratio_hi = std::max(ratio_hi, r);
      besov_ok = besov_ok && r >= std::pow(2.0, -2 * s - 2) && r <= std::pow(2.0, 2 * s + 2);
    }
    for (int q = 0; q <= shells.q_max(); ++q) {
      for (int k : {1, 2}) {
        const auto b = bernstein_ratio(shells, f, q, k);
        if (b.empty_block) continue;
        bernstein_ok = bernstein_ok && b.ratio >= std::pow(0.75, k) - 1e-14 && b.ratio <= std::pow(1.5, k);
      }
    }
  }
  const bool ok = recon <= 1e-12 && ortho <= 1e-12 && besov_ok && bernstein_ok;
  return {ok, fmt("reconstruction %.2e, orthogonality %.2e", recon, ortho) +
                  fmt(", Besov/Sobolev ratios in [%.3f, %.3f]", ratio_lo, ratio_hi) +
                  (bernstein_ok ? ", Bernstein in range" : ", Bernstein OUT of range")};
}

Outcome anisotropic_inequalities() {
  const auto g = make_grid(32, 32, 1.0);
  const auto mode1 = project_function(g, [](double x, double y) { return std::cos(2 * pi * x) * (2 + std::sin(2 * pi * y)); });
  const double equality = std::abs(poincare_ratio(mode1) - 1 / (2 * pi));
  Rng rng(9);
  double poincare = 0, agmon = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = random_field(g, rng);
    poincare = std::max(poincare, poincare_ratio(f));
    agmon = std::max(agmon, agmon_ratio(f));
  }
  const bool ok = equality <= 1e-12 && poincare <= 1 / (2 * pi) + 1e-12 && agmon <= std::sqrt(2.0) + 1e-6;
  return {ok, fmt("mode-1 Poincare error %.2e, max Poincare ratio %.6f", equality, poincare) +
                  fmt(", max Agmon ratio %.6f (sqrt 2 = %.6f)", agmon, std::sqrt(2.0))};
}

Outcome solver_order() {
  InitialDataSpec<double> spec;
  spec.kind = InitialKind::random_band;
  spec.amplitude = 0.2;
  spec.w_amplitude = 0.2;
  spec.seed = 10;
  const auto s = make_initial(spec, make_grid(32, 32, 1.0), ModelParams<double>{Model::mhd, 0.05, 0.05});
  std::vector<SimState<double>> finals;
  for (double dt : {0.02, 0.01, 0.005}) finals.push_back(run(s, 0.5, dt, 1000).final_state);
  const auto diff = [](const SimState<double>& a, const SimState<double>& b) {
    return std::sqrt(l2_norm_squared(a.u - b.u) + l2_norm_squared(a.w - b.w));
  };
  const double e1 = diff(finals[0], finals[1]);
  const double e2 = diff(finals[1], finals[2]);
  const double order = std::log2(e1 / e2);
  return {order >= 3.7, fmt("observed order %.3f", order) + fmt(" (differences %.2e, %.2e)", e1, e2)};
}

Outcome continuous_dependence_growth() {
  const auto& initial = small_data_run().initial;
  const auto report = continuous_dependence(initial, 1e-6, 5.0, 1e-2, 11);
  return {report.growth_factor <= 2, fmt("growth factor %.6f over T = 5, final ratio %.3e", report.growth_factor,
                                         report.series.back().second)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"energy identity", energy_identity},
      {"inviscid conservation", inviscid_conservation},
      {"linear decay rate", linear_decay_rate},
      {"oscillation decay", oscillation_decay},
      {"small-data boundedness", boundedness},
      {"vanishing identities", vanishing_identities},
      {"TCM cancellation and sign", tcm_cancellation_and_sign},
      {"Littlewood-Paley", littlewood_paley},
      {"anisotropic inequalities", anisotropic_inequalities},
      {"solver order", solver_order},
      {"continuous dependence", continuous_dependence_growth},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.passed) ++failures;
    std::printf("criterion %2zu %-4s %s: %s\n", i + 1, o.passed ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
