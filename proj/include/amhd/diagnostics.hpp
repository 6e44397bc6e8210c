#ifndef AMHD_DIAGNOSTICS_HPP
#define AMHD_DIAGNOSTICS_HPP

#include "amhd/decomposition.hpp"
#include "amhd/littlewood_paley.hpp"
#include "amhd/random.hpp"
#include "amhd/record.hpp"
#include "amhd/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace amhd {

// ---------------------------------------------------------------------------
// Energy ledgers

enum class TimeQuadrature {
  /// Use the integrals accumulated by the stepper (RK4 stage weights).
  accumulated,
  /// Trapezoid rule over the recorded D1 values.
  trapezoid,
};

struct EnergyResidual {
  double value = 0;
  /// True when E(0) = 0 and the residual is absolute rather than relative.
  bool absolute = false;
};

/// Cumulative trapezoid integral of values over ts; result[0] = 0.
inline std::vector<double> trapezoid_cumulative(const std::vector<double>& ts, const std::vector<double>& values) {
  if (ts.size() != values.size()) throw std::invalid_argument("trapezoid: size mismatch");
  std::vector<double> out(ts.size(), 0.0);
  for (std::size_t n = 1; n < ts.size(); ++n) {
    out[n] = out[n - 1] + 0.5 * (ts[n] - ts[n - 1]) * (values[n] + values[n - 1]);
  }
  return out;
}

/// max_t |E(t) + 2 int_0^t D1 - E(0)| / E(0).
inline EnergyResidual energy_identity_residual(const std::vector<DiagnosticsRecord>& trajectory,
                                               TimeQuadrature quadrature = TimeQuadrature::accumulated) {
  if (trajectory.size() < 2) return {};
  std::vector<double> integral(trajectory.size());
  if (quadrature == TimeQuadrature::trapezoid) {
    std::vector<double> ts, d1;
    for (const auto& r : trajectory) {
      ts.push_back(r.t);
      d1.push_back(r.dissipation);
    }
    integral = trapezoid_cumulative(ts, d1);
  } else {
    for (std::size_t n = 0; n < trajectory.size(); ++n) {
      integral[n] = trajectory[n].int_dissipation - trajectory[0].int_dissipation;
    }
  }
  const double e0 = trajectory.front().energy;
  double worst = 0;
  for (std::size_t n = 0; n < trajectory.size(); ++n) {
    worst = std::max(worst, std::abs(trajectory[n].energy + 2.0 * integral[n] - e0));
  }
  if (e0 == 0.0) return {worst, true};
  return {worst / e0, false};
}

struct FLedgerEntry {
  double t = 0;
  double sup_energy = 0;
  double sup_energy_dy = 0;
  double int_dissipation = 0;
  double int_mixed_dissipation = 0;
  double f = 0;
};

/// F(t) = sup E + sup E2 + int D1 + int D12 along the trajectory.
inline std::vector<FLedgerEntry> f_functional(const std::vector<DiagnosticsRecord>& trajectory) {
  std::vector<FLedgerEntry> out;
  out.reserve(trajectory.size());
  FLedgerEntry run;
  for (const auto& r : trajectory) {
    run.t = r.t;
    run.sup_energy = std::max(run.sup_energy, r.energy);
    run.sup_energy_dy = std::max(run.sup_energy_dy, r.energy_dy);
    // Integrals are nondecreasing in exact arithmetic; clamp round-off.
    run.int_dissipation = std::max(run.int_dissipation, r.int_dissipation);
    run.int_mixed_dissipation = std::max(run.int_mixed_dissipation, r.int_mixed_dissipation);
    run.f = run.sup_energy + run.sup_energy_dy + run.int_dissipation + run.int_mixed_dissipation;
    out.push_back(run);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Decay fits

struct DecayFit {
  double rate = 0;        ///< minus the least-squares slope of log(value)
  double residual = 0;    ///< RMS of the log residuals
  double rate_stderr = 0; ///< standard error of the slope
  std::size_t samples = 0;
};

/// Least-squares fit of log(value) against t over samples with t0 <= t <= t1.
inline DecayFit fit_decay_rate(const std::vector<double>& ts, const std::vector<double>& values, double t0,
                               double t1) {
  if (ts.size() != values.size()) throw std::invalid_argument("fit_decay_rate: size mismatch");
  if (!(t1 > t0)) throw std::invalid_argument("fit_decay_rate: empty window");
  std::vector<double> x, y;
  for (std::size_t n = 0; n < ts.size(); ++n) {
    if (ts[n] < t0 || ts[n] > t1) continue;
    if (!(values[n] > 0.0)) {
      throw std::domain_error("fit_decay_rate: nonpositive value at t=" + std::to_string(ts[n]));
    }
    x.push_back(ts[n]);
    y.push_back(std::log(values[n]));
  }
  if (x.size() < 10) {
    throw std::invalid_argument("fit_decay_rate: window holds " + std::to_string(x.size()) +
                                " samples, need at least 10");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_decay_rate: window has no time spread");
  const double slope = sxy / sxx;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (my + slope * (x[i] - mx));
    ss += r * r;
  }
  DecayFit fit;
  fit.rate = -slope;
  fit.residual = std::sqrt(ss / n);
  fit.rate_stderr = std::sqrt(ss / (n - 2.0) / sxx);
  fit.samples = x.size();
  return fit;
}

// ---------------------------------------------------------------------------
// Structural identities

struct IdentityResidual {
  std::string name;
  double value = 0;       ///< the discrete integral
  double scale = 0;       ///< Hoelder bound sup|A| ||B|| ||C|| of its factors
  double normalized = 0;  ///< |value| / scale (0 when scale = 0)
  bool precondition_met = true;
};

struct IdentityReport {
  std::vector<IdentityResidual> residuals;

  double max_normalized() const {
    double m = 0;
    for (const auto& r : residuals) m = std::max(m, r.normalized);
    return m;
  }
  bool passed(double tolerance = 1e-10) const {
    return std::all_of(residuals.begin(), residuals.end(),
                       [&](const IdentityResidual& r) { return r.precondition_met && r.normalized <= tolerance; });
  }
  const IdentityResidual& operator[](const std::string& name) const {
    for (const auto& r : residuals) {
      if (r.name == name) return r;
    }
    throw std::out_of_range("no identity named " + name);
  }
};

namespace detail {

inline constexpr double divergence_free_tolerance = 1e-10;

inline IdentityResidual make_residual(std::string name, double value, double scale, bool ok = true) {
  const double normalized = scale > 0 ? std::abs(value) / scale : 0.0;
  return {std::move(name), value, scale, normalized, ok};
}

template <typename Scalar>
bool is_div_free(const VectorField<Scalar>& w) {
  return divergence_residual(w) <= Scalar(divergence_free_tolerance);
}

/// sqrt(||d_x w||^2 + ||d_y w||^2).
template <typename Scalar>
Scalar gradient_norm(const VectorField<Scalar>& w) {
  return std::sqrt(derivative_norm_squared(w, 1, 0) + derivative_norm_squared(w, 0, 1));
}

template <typename Scalar>
VectorField<Scalar> map_components(const VectorField<Scalar>& w, auto&& op) {
  return {op(w.x_comp), op(w.y_comp)};
}

template <typename Scalar>
VectorField<Scalar> scale_by(const SpectralField<Scalar>& a, const VectorField<Scalar>& b) {
  return {multiply(a, b.x_comp), multiply(a, b.y_comp)};
}

/// Dealiased (a . grad) b.
template <typename Scalar>
VectorField<Scalar> advection(const VectorField<Scalar>& a, const VectorField<Scalar>& b) {
  const auto& grid = a.grid();
  auto [a1, a2] = from_spectral_pair(a.x_comp, a.y_comp);
  auto [b1x, b1y] = from_spectral_pair(derivative(b.x_comp, Axis::x), derivative(b.x_comp, Axis::y));
  auto [b2x, b2y] = from_spectral_pair(derivative(b.y_comp, Axis::x), derivative(b.y_comp, Axis::y));
  auto [c1, c2] = to_spectral_pair(grid, RealArray<Scalar>(a1 * b1x + a2 * b1y), RealArray<Scalar>(a1 * b2x + a2 * b2y));
  return {dealias(std::move(c1)), dealias(std::move(c2))};
}

/// int Delta_q(a B) . Delta_q C with scalar a and vector B, C.
template <typename Scalar>
Scalar blocked_triple(const ShellSystem<Scalar>& shells, const SpectralField<Scalar>& a, const VectorField<Scalar>& b,
                      const VectorField<Scalar>& c, int q) {
  const auto block = [&](const SpectralField<Scalar>& f) { return dyadic_block(shells, f, q); };
  const auto ab = scale_by(a, b);
  return inner(map_components(ab, block), map_components(c, block));
}

}  // namespace detail

/// Discrete versions of the integrals that vanish by the bar/tilde structure or by incompressibility.
///
/// Each residual is |integral| / (sup|A| ||B|| ||C||) over its three factors. The
/// block-localized terms use f as the low-frequency multiplier, g as the
/// differentiated factor and h as the tested factor. The quadratic-exchange
/// terms use (u, b) = (g, h) and need both divergence-free; A311 uses (u, b) = (f, g).
template <typename Scalar>
IdentityReport vanishing_identity_suite(const VectorField<Scalar>& f, const VectorField<Scalar>& g,
                                        const VectorField<Scalar>& h, int q, int k) {
  const ShellSystem<Scalar> shells(f.grid());
  const auto D = [&](const SpectralField<Scalar>& x, int j) { return dyadic_block(shells, x, j); };
  const auto S = [&](const SpectralField<Scalar>& x, int j) { return low_pass(shells, x, j); };
  const auto Dw = [&](const SpectralField<Scalar>& x, int j) { return widened_block(shells, x, j); };
  const auto vD = [&](const VectorField<Scalar>& x, int j) {
    return detail::map_components(x, [&](const SpectralField<Scalar>& c) { return D(c, j); });
  };
  const auto vS = [&](const VectorField<Scalar>& x, int j) {
    return detail::map_components(x, [&](const SpectralField<Scalar>& c) { return S(c, j); });
  };
  const auto vDw = [&](const VectorField<Scalar>& x, int j) {
    return detail::map_components(x, [&](const SpectralField<Scalar>& c) { return Dw(c, j); });
  };
  const auto dx = [](const VectorField<Scalar>& x) {
    return detail::map_components(x, [](const SpectralField<Scalar>& c) { return derivative(c, Axis::x); });
  };
  const auto dy = [](const VectorField<Scalar>& x) {
    return detail::map_components(x, [](const SpectralField<Scalar>& c) { return derivative(c, Axis::y); });
  };

  const auto f1_bar = x_average(f.x_comp);
  const auto f2_tilde = oscillation(f.y_comp);
  const auto g_bar = x_average(g);
  const auto g_tilde = oscillation(g);
  const auto h_bar_q = vD(x_average(h), q);
  const Scalar h_bar_q_norm = l2_norm(h_bar_q);
  const bool f_ok = detail::is_div_free(f);

  IdentityReport report;
  const auto push_blocked = [&](std::string name, const SpectralField<Scalar>& a, const VectorField<Scalar>& b,
                                bool ok) {
    const Scalar value = detail::blocked_triple(shells, a, b, x_average(h), q);
    const Scalar scale = max_abs(a) * l2_norm(b) * h_bar_q_norm;
    report.residuals.push_back(detail::make_residual(std::move(name), value, scale, ok));
  };

  // Bar multiplier times d_x of a tilde factor, tested against a bar field.
  push_blocked("P13", S(f1_bar, k - 1), dx(vD(g_tilde, k)), true);
  push_blocked("P22", D(f1_bar, k), dx(vS(g_tilde, k - 1)), true);
  push_blocked("P32", D(f1_bar, k), dx(vDw(g_tilde, k)), true);

  // Tilde multiplier times d_y of a bar factor, tested against a bar field.
  {
    const auto a = S(f2_tilde, k - 1);
    const auto b = dy(vD(g_bar, k));
    const auto bq = vD(b, q);
    const Scalar value = detail::blocked_triple(shells, a, b, x_average(h), q) -
                         inner(detail::scale_by(a, bq), h_bar_q);
    const Scalar scale = max_abs(a) * (l2_norm(b) + l2_norm(bq)) * h_bar_q_norm;
    report.residuals.push_back(detail::make_residual("Q111", value, scale, f_ok));
  }
  {
    const auto a = S(f2_tilde, k - 1) - S(f2_tilde, q);
    const auto b = dy(vD(vD(g_bar, k), q));
    const Scalar value = inner(detail::scale_by(a, b), h_bar_q);
    const Scalar scale = max_abs(a) * l2_norm(b) * h_bar_q_norm;
    report.residuals.push_back(detail::make_residual("Q121", value, scale, f_ok));
  }
  push_blocked("Q21", D(f2_tilde, k), dy(vS(g_bar, k - 1)), f_ok);
  push_blocked("Q31", D(f2_tilde, k), dy(vDw(g_bar, k)), f_ok);

  // -int d_y ubar^1 d_x btilde^1 d_y bbar^1 with (u, b) = (f, g).
  {
    const auto a = derivative(f1_bar, Axis::y);
    const auto b = derivative(g_tilde.x_comp, Axis::x);
    const auto c = derivative(g_bar.x_comp, Axis::y);
    const Scalar value = -inner(multiply(a, b), c);
    report.residuals.push_back(detail::make_residual("A311", value, max_abs(a) * l2_norm(b) * l2_norm(c)));
  }

  // Quadratic exchange on the oscillation equations with (u, b) = (g, h).
  const bool g_ok = detail::is_div_free(g);
  const bool h_ok = detail::is_div_free(h);
  const auto h_tilde = oscillation(h);
  {
    const Scalar value = -inner(oscillation(detail::advection(g, g_tilde)), g_tilde);
    const Scalar scale = max_magnitude(g) * detail::gradient_norm(g_tilde) * l2_norm(g_tilde);
    report.residuals.push_back(detail::make_residual("M11", value, scale, g_ok));
  }
  {
    const Scalar value = -inner(oscillation(detail::advection(g, h_tilde)), h_tilde);
    const Scalar scale = max_magnitude(g) * detail::gradient_norm(h_tilde) * l2_norm(h_tilde);
    report.residuals.push_back(detail::make_residual("M13", value, scale, g_ok));
  }
  {
    const Scalar value = inner(oscillation(detail::advection(h, h_tilde)), g_tilde) +
                         inner(oscillation(detail::advection(h, g_tilde)), h_tilde);
    const Scalar scale = max_magnitude(h) * (detail::gradient_norm(h_tilde) * l2_norm(g_tilde) +
                                             detail::gradient_norm(g_tilde) * l2_norm(h_tilde));
    report.residuals.push_back(detail::make_residual("M12+M14", value, scale, h_ok));
  }
  return report;
}

/// I3 + J3 = -int v.grad(d_y v).d_y u - int v.grad(d_y u).d_y v; vanishes for divergence-free v.
template <typename Scalar>
IdentityResidual tcm_cancellation(const VectorField<Scalar>& u, const VectorField<Scalar>& v) {
  const auto dy = [](const VectorField<Scalar>& x) {
    return detail::map_components(x, [](const SpectralField<Scalar>& c) { return derivative(c, Axis::y); });
  };
  const auto uy = dy(u);
  const auto vy = dy(v);
  const Scalar value = -inner(detail::advection(v, vy), uy) - inner(detail::advection(v, uy), vy);
  const Scalar scale =
      max_magnitude(v) * (detail::gradient_norm(vy) * l2_norm(uy) + detail::gradient_norm(uy) * l2_norm(vy));
  return detail::make_residual("I3+J3", value, scale, detail::is_div_free(v));
}

// ---------------------------------------------------------------------------
// Trilinear commutator probe

template <typename Scalar>
struct CommutatorProbe {
  Scalar lhs = 0;        ///< -int Delta_q(f.grad g) . Delta_q h
  Scalar remainder = 0;  ///< -int S_q ftilde^2 d_y Delta_q g . Delta_q h
  Scalar rhs_low = 0;    ///< 2^{-2qs} (f and g coefficient norms) (||f||_{H^s}^2 + ||g||_{H^s}^2 + ||h||_{H^s}^2)
  Scalar rhs_mid = 0;    ///< 2^{-2qs} (||f||^{1/2} ||d_y f||^{1/2} + ||d_y g||) (sum of ||d_x .||_{H^s}^2)
  Scalar rhs_eps = 0;    ///< 2^{-2qs} (sum of ||d_x .||_{H^s}^2), epsilon_0 = 1
  Scalar ratio = 0;      ///< |lhs - remainder| / (rhs_low + rhs_mid + rhs_eps)
};

/// Evaluates both sides of the trilinear block estimate with every generic constant set to 1.
template <typename Scalar>
CommutatorProbe<Scalar> commutator_probe(const VectorField<Scalar>& f, const VectorField<Scalar>& g,
                                         const VectorField<Scalar>& h, int q, Scalar s) {
  const ShellSystem<Scalar> shells(f.grid());
  const auto vD = [&](const VectorField<Scalar>& x) {
    return detail::map_components(x, [&](const SpectralField<Scalar>& c) { return dyadic_block(shells, c, q); });
  };
  CommutatorProbe<Scalar> out;
  const auto hq = vD(h);
  out.lhs = -inner(vD(detail::advection(f, g)), hq);
  const auto low = low_pass(shells, oscillation(f.y_comp), q);
  const auto gq_y = detail::map_components(vD(g), [](const SpectralField<Scalar>& c) { return derivative(c, Axis::y); });
  out.remainder = -inner(detail::scale_by(low, gq_y), hq);

  const auto n = [](const VectorField<Scalar>& w, int ox, int oy) { return std::sqrt(derivative_norm_squared(w, ox, oy)); };
  const auto dxv = [](const VectorField<Scalar>& w) {
    return detail::map_components(w, [](const SpectralField<Scalar>& c) { return derivative(c, Axis::x); });
  };
  const auto hs2 = [&](const VectorField<Scalar>& w) {
    const Scalar v = sobolev_norm(w, s);
    return v * v;
  };
  const Scalar weight = std::pow(Scalar(2), Scalar(-2 * q) * s);
  const Scalar f0 = n(f, 0, 0), f1 = n(f, 1, 0), f2 = n(f, 0, 1), f12 = n(f, 1, 1);
  const Scalar g1 = n(g, 1, 0), g2 = n(g, 0, 1), g12 = n(g, 1, 1);
  const Scalar coefficient_low = f1 * f12 + f0 * f0 * f1 * f1 + f0 * f0 * f12 * f12 + g1 * g12 + g12 * g12;
  const Scalar hs_sum = hs2(f) + hs2(g) + hs2(h);
  const Scalar dx_hs_sum = hs2(dxv(f)) + hs2(dxv(g)) + hs2(dxv(h));
  out.rhs_low = weight * coefficient_low * hs_sum;
  out.rhs_mid = weight * (std::sqrt(f0 * f2) + g2) * dx_hs_sum;
  out.rhs_eps = weight * dx_hs_sum;
  const Scalar denominator = out.rhs_low + out.rhs_mid + out.rhs_eps;
  const Scalar numerator = std::abs(out.lhs - out.remainder);
  out.ratio = denominator > Scalar(0) ? numerator / denominator : Scalar(0);
  return out;
}

// ---------------------------------------------------------------------------
// Continuous dependence

struct DependenceReport {
  double growth_factor = 1;
  std::vector<std::pair<double, double>> series;  ///< (t, ||delta||^2 / ||delta(0)||^2)
};

/// Runs from state0 and from a copy perturbed by a random divergence-free field of L^2 size eps_p.
template <typename Scalar>
DependenceReport continuous_dependence(const SimState<Scalar>& state0, Scalar eps_p, Scalar t_end, Scalar dt,
                                       std::uint64_t seed = 0, double cfl = 0.5) {
  if (!(eps_p >= Scalar(0))) throw std::invalid_argument("perturbation size must be >= 0");
  DependenceReport report;
  report.series.emplace_back(static_cast<double>(state0.t), 1.0);
  if (eps_p == Scalar(0) || t_end == Scalar(0)) return report;
  const long steps = step_count(static_cast<double>(t_end), static_cast<double>(dt));

  Rng rng(seed);
  auto du = random_div_free(state0.grid(), rng);
  auto dw = random_div_free(state0.grid(), rng);
  const Scalar size = std::sqrt(l2_norm_squared(du) + l2_norm_squared(dw));
  du = (eps_p / size) * du;
  dw = (eps_p / size) * dw;

  SimState<Scalar> a = state0;
  SimState<Scalar> b(state0.u + du, state0.w + dw, state0.params, state0.t);
  const auto gap = [](const SimState<Scalar>& x, const SimState<Scalar>& y) {
    return static_cast<double>(l2_norm_squared(x.u - y.u) + l2_norm_squared(x.w - y.w));
  };
  const double initial = gap(a, b);
  const StepOptions options{cfl};
  for (long n = 1; n <= steps; ++n) {
    a = step(a, dt, options);
    b = step(b, dt, options);
    const double ratio = gap(a, b) / initial;
    if (!std::isfinite(ratio)) throw NumericalError("continuous_dependence: non-finite perturbation norm");
    report.growth_factor = std::max(report.growth_factor, ratio);
    report.series.emplace_back(static_cast<double>(a.t), ratio);
  }
  return report;
}

}  // namespace amhd

#endif  // AMHD_DIAGNOSTICS_HPP
