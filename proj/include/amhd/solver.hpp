#ifndef AMHD_SOLVER_HPP
#define AMHD_SOLVER_HPP

// Dealiased pseudo-spectral integrator for
//   d_t u + u.grad u - nu d_x^2 u + grad p   = sigma w.grad w
//   d_t w + u.grad w - eta d_x^2 w (+ grad Phi) = sigma w.grad u
// with sigma = +1 (MHD, w = b) or sigma = -1 (tropical model, w = v).
// Pressure and Phi are removed by the Leray projector. The horizontal
// dissipation is diagonal in Fourier space and is applied exactly through an
// integrating factor; the nonlinear terms go through classical RK4.

#include "amhd/random.hpp"
#include "amhd/record.hpp"
#include "amhd/state.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace amhd {

/// Base for failures of the time integration itself (as opposed to bad input).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CflViolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Thrown by run(); carries every record taken before the failure.
class NumericalAbort : public NumericalError {
 public:
  NumericalAbort(const std::string& what, std::vector<DiagnosticsRecord> partial)
      : NumericalError(what), trajectory(std::move(partial)) {}
  std::vector<DiagnosticsRecord> trajectory;
};

// ---------------------------------------------------------------------------
// Initial data

enum class InitialKind { single_mode, gaussian_packet, random_band };

inline std::string_view to_string(InitialKind k) {
  switch (k) {
    case InitialKind::single_mode: return "single_mode";
    case InitialKind::gaussian_packet: return "gaussian_packet";
    case InitialKind::random_band: return "random_band";
  }
  return "?";
}

inline InitialKind parse_initial_kind(std::string_view s) {
  if (s == "single_mode") return InitialKind::single_mode;
  if (s == "gaussian_packet") return InitialKind::gaussian_packet;
  if (s == "random_band") return InitialKind::random_band;
  throw std::invalid_argument("unknown initial data kind '" + std::string(s) + "'");
}

/// single_mode: u = a (-k_y, k_x)/|k| cos(k.x) for k = 2 pi (mode_x, mode_y / Ly); w likewise with w_amplitude.
/// gaussian_packet: stream functions exp(-((y - Ly/2)/(Ly/10))^2) times random x-harmonics 0..mode_x.
/// random_band: random stream functions on 0 < |k|/(2 pi) <= bandwidth.
/// For the two random kinds amplitudes are RMS speeds. A delta target rescales (u, w) jointly.
template <typename Scalar>
struct InitialDataSpec {
  InitialKind kind = InitialKind::random_band;
  Scalar amplitude = 1;
  Scalar w_amplitude = 0;
  int mode_x = 1;
  int mode_y = 0;
  Scalar bandwidth = 3;
  std::uint64_t seed = 0;
  std::optional<Scalar> delta_target;
};

namespace detail {

template <typename Scalar>
VectorField<Scalar> perp_gradient(const SpectralField<Scalar>& psi) {
  return {derivative(psi, Axis::y), -derivative(psi, Axis::x), true};
}

/// Enforces c(-k) = conj(c(k)) on an arbitrary coefficient array.
template <typename Scalar>
ComplexArray<Scalar> hermitian_part(const ComplexArray<Scalar>& c) {
  const Eigen::Index nx = c.rows(), ny = c.cols();
  ComplexArray<Scalar> out(nx, ny);
  for (Eigen::Index j = 0; j < ny; ++j) {
    for (Eigen::Index i = 0; i < nx; ++i) {
      out(i, j) = Scalar(0.5) * (c(i, j) + std::conj(c((nx - i) % nx, (ny - j) % ny)));
    }
  }
  return out;
}

template <typename Scalar>
VectorField<Scalar> single_mode_field(const Grid<Scalar>& grid, int mx, int my, Scalar amplitude) {
  if (mx == 0 && my == 0) throw std::invalid_argument("single_mode needs a nonzero wavevector");
  if (!retained_mode(mx, grid.nx()) || !retained_mode(my, grid.ny())) {
    throw std::invalid_argument("single_mode wavevector lies outside the dealiased band");
  }
  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  const Scalar kx = two_pi * Scalar(mx);
  const Scalar ky = two_pi * Scalar(my) / grid.ly();
  const Scalar kmag = std::hypot(kx, ky);
  auto a = project_function(grid, [&](Scalar x, Scalar y) { return -amplitude * ky / kmag * std::cos(kx * x + ky * y); });
  auto b = project_function(grid, [&](Scalar x, Scalar y) { return amplitude * kx / kmag * std::cos(kx * x + ky * y); });
  return {std::move(a), std::move(b), true};
}

template <typename Scalar>
VectorField<Scalar> random_band_field(const Grid<Scalar>& grid, Scalar bandwidth, Rng& rng) {
  ComplexArray<Scalar> c = ComplexArray<Scalar>::Zero(grid.nx(), grid.ny());
  const Scalar b2 = bandwidth * bandwidth;
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      const Scalar re = static_cast<Scalar>(uniform_pm1(rng));
      const Scalar im = static_cast<Scalar>(uniform_pm1(rng));
      const Scalar mx = Scalar(grid.mode_x(i));
      const Scalar my = Scalar(grid.mode_y(j)) / grid.ly();
      const Scalar rho2 = mx * mx + my * my;
      if (rho2 == Scalar(0) || rho2 > b2) continue;
      if (!retained_mode(grid.mode_x(i), grid.nx()) || !retained_mode(grid.mode_y(j), grid.ny())) continue;
      c(i, j) = std::complex<Scalar>(re, im) / rho2;
    }
  }
  return perp_gradient(SpectralField<Scalar>(grid, hermitian_part(c)));
}

template <typename Scalar>
VectorField<Scalar> gaussian_packet_field(const Grid<Scalar>& grid, int harmonics, Rng& rng) {
  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  const Scalar centre = grid.ly() / Scalar(2);
  const Scalar width = grid.ly() / Scalar(10);
  std::vector<Scalar> amp(harmonics + 1), phase(harmonics + 1);
  for (int m = 0; m <= harmonics; ++m) {
    amp[m] = Scalar(0.75) + Scalar(0.25) * static_cast<Scalar>(uniform_pm1(rng));
    phase[m] = std::numbers::pi_v<Scalar> * static_cast<Scalar>(uniform_pm1(rng));
  }
  auto psi = project_function(grid, [&](Scalar x, Scalar y) {
    const Scalar z = (y - centre) / width;
    Scalar s = 0;
    for (int m = 0; m <= harmonics; ++m) s += amp[m] * std::cos(two_pi * Scalar(m) * x + phase[m]);
    return std::exp(-z * z) * s;
  });
  return perp_gradient(dealias(std::move(psi)));
}

template <typename Scalar>
VectorField<Scalar> normalized_rms(VectorField<Scalar> w, Scalar rms) {
  const Scalar current = std::sqrt(l2_norm_squared(w) / w.grid().area());
  if (current == Scalar(0)) return w;
  return (rms / current) * w;
}

}  // namespace detail

template <typename Scalar>
SimState<Scalar> make_initial(const InitialDataSpec<Scalar>& spec, const Grid<Scalar>& grid,
                              const ModelParams<Scalar>& params) {
  params.validate();
  if (!std::isfinite(static_cast<double>(spec.amplitude)) || !std::isfinite(static_cast<double>(spec.w_amplitude)) ||
      spec.amplitude < Scalar(0) || spec.w_amplitude < Scalar(0)) {
    throw std::invalid_argument("initial amplitudes must be finite and >= 0");
  }
  if (spec.delta_target && !(*spec.delta_target > Scalar(0))) {
    throw std::invalid_argument("delta target must be positive");
  }
  Rng rng(spec.seed);
  VectorField<Scalar> u(grid), w(grid);
  switch (spec.kind) {
    case InitialKind::single_mode:
      u = detail::single_mode_field(grid, spec.mode_x, spec.mode_y, spec.amplitude);
      w = detail::single_mode_field(grid, spec.mode_x, spec.mode_y, spec.w_amplitude);
      break;
    case InitialKind::gaussian_packet:
      if (spec.mode_x < 1 || !retained_mode(spec.mode_x, grid.nx())) {
        throw std::invalid_argument("gaussian_packet needs 1 <= mode_x within the dealiased band");
      }
      u = detail::normalized_rms(detail::gaussian_packet_field(grid, spec.mode_x, rng), spec.amplitude);
      w = detail::normalized_rms(detail::gaussian_packet_field(grid, spec.mode_x, rng), spec.w_amplitude);
      break;
    case InitialKind::random_band:
      if (!(spec.bandwidth > Scalar(0))) throw std::invalid_argument("random_band needs bandwidth > 0");
      u = detail::normalized_rms(detail::random_band_field(grid, spec.bandwidth, rng), spec.amplitude);
      w = detail::normalized_rms(detail::random_band_field(grid, spec.bandwidth, rng), spec.w_amplitude);
      break;
  }
  u = leray_project(dealias(u));
  w = leray_project(dealias(w));
  if (spec.delta_target) {
    const Scalar delta0 = smallness_measure(u, w);
    if (delta0 == Scalar(0)) throw std::invalid_argument("cannot rescale zero initial data to a delta target");
    const Scalar c = std::sqrt(*spec.delta_target / delta0);
    u = c * u;
    w = c * w;
  }
  return SimState<Scalar>(std::move(u), std::move(w), params, Scalar(0));
}

// ---------------------------------------------------------------------------
// Right-hand side

template <typename Scalar>
struct NonlinearRhs {
  VectorField<Scalar> du;
  VectorField<Scalar> dw;
};

namespace detail {

inline constexpr double rhs_divergence_tolerance = 1e-10;

template <typename Scalar>
struct RhsEvaluation {
  NonlinearRhs<Scalar> rhs;
  Scalar max_speed = 0;
};

template <typename Scalar>
RhsEvaluation<Scalar> evaluate_rhs(const VectorField<Scalar>& u, const VectorField<Scalar>& w,
                                   const ModelParams<Scalar>& params) {
  if (divergence_residual(u) > Scalar(rhs_divergence_tolerance)) {
    throw std::invalid_argument("nonlinear_rhs: u is not divergence-free");
  }
  if (divergence_residual(w) > Scalar(rhs_divergence_tolerance)) {
    throw std::invalid_argument("nonlinear_rhs: w is not divergence-free");
  }
  const auto& grid = u.grid();
  const Scalar sigma = params.coupling_sign();
  auto [u1, u2] = from_spectral_pair(u.x_comp, u.y_comp);
  auto [w1, w2] = from_spectral_pair(w.x_comp, w.y_comp);
  auto [u1x, u1y] = from_spectral_pair(derivative(u.x_comp, Axis::x), derivative(u.x_comp, Axis::y));
  auto [u2x, u2y] = from_spectral_pair(derivative(u.y_comp, Axis::x), derivative(u.y_comp, Axis::y));
  auto [w1x, w1y] = from_spectral_pair(derivative(w.x_comp, Axis::x), derivative(w.x_comp, Axis::y));
  auto [w2x, w2y] = from_spectral_pair(derivative(w.y_comp, Axis::x), derivative(w.y_comp, Axis::y));

  RealArray<Scalar> a1 = -(u1 * u1x + u2 * u1y) + sigma * (w1 * w1x + w2 * w1y);
  RealArray<Scalar> a2 = -(u1 * u2x + u2 * u2y) + sigma * (w1 * w2x + w2 * w2y);
  RealArray<Scalar> b1 = -(u1 * w1x + u2 * w1y) + sigma * (w1 * u1x + w2 * u1y);
  RealArray<Scalar> b2 = -(u1 * w2x + u2 * w2y) + sigma * (w1 * u2x + w2 * u2y);

  auto [da1, da2] = to_spectral_pair(grid, a1, a2);
  auto [db1, db2] = to_spectral_pair(grid, b1, b2);
  VectorField<Scalar> du = leray_project(VectorField<Scalar>(dealias(std::move(da1)), dealias(std::move(da2))));
  VectorField<Scalar> dw(dealias(std::move(db1)), dealias(std::move(db2)));
  if (params.model == Model::tcm) dw = leray_project(dw);

  const Scalar speed_u = (u1.square() + u2.square()).sqrt().maxCoeff();
  const Scalar speed_w = (w1.square() + w2.square()).sqrt().maxCoeff();
  return {{std::move(du), std::move(dw)}, std::max(speed_u, speed_w)};
}

}  // namespace detail

/// Projected nonlinear tendencies; dissipation is not included.
template <typename Scalar>
NonlinearRhs<Scalar> nonlinear_rhs(const SimState<Scalar>& state) {
  return detail::evaluate_rhs(state.u, state.w, state.params).rhs;
}

// ---------------------------------------------------------------------------
// Time stepping

struct StepOptions {
  double cfl = 0.5;
};

namespace detail {

/// exp(-c k_x^2 h) as a complex column over the x index.
template <typename Scalar>
Eigen::Array<std::complex<Scalar>, Eigen::Dynamic, 1> horizontal_decay(const Grid<Scalar>& grid, Scalar c,
                                                                        Scalar h) {
  return (-c * h * grid.kx().square()).exp().template cast<std::complex<Scalar>>();
}

template <typename Scalar>
VectorField<Scalar> apply_decay(VectorField<Scalar> w, const Eigen::Array<std::complex<Scalar>, Eigen::Dynamic, 1>& f) {
  w.x_comp.coeffs().colwise() *= f;
  w.y_comp.coeffs().colwise() *= f;
  return w;
}

}  // namespace detail

/// One integrating-factor RK4 step. Refuses (throws CflViolation) instead of shrinking dt.
template <typename Scalar>
SimState<Scalar> step(const SimState<Scalar>& state, Scalar dt, const StepOptions& options = {}) {
  if (!(dt > Scalar(0)) || !std::isfinite(static_cast<double>(dt))) {
    throw std::invalid_argument("time step must be positive and finite");
  }
  const auto& grid = state.grid();
  const auto& p = state.params;
  const Scalar half = dt / Scalar(2);

  auto stage0 = detail::evaluate_rhs(state.u, state.w, p);
  const Scalar limit = Scalar(options.cfl) * std::min(grid.dx(), grid.dy());
  if (stage0.max_speed > Scalar(0) && dt * stage0.max_speed > limit) {
    throw CflViolation("CFL violation at t=" + std::to_string(static_cast<double>(state.t)) + ": dt=" +
                       std::to_string(static_cast<double>(dt)) + " exceeds " +
                       std::to_string(static_cast<double>(limit / stage0.max_speed)) + " (cfl=" +
                       std::to_string(options.cfl) + ", max speed " +
                       std::to_string(static_cast<double>(stage0.max_speed)) + ")");
  }

  const auto eu_half = detail::horizontal_decay(grid, p.nu, half);
  const auto ew_half = detail::horizontal_decay(grid, p.eta, half);
  const auto eu_full = detail::horizontal_decay(grid, p.nu, dt);
  const auto ew_full = detail::horizontal_decay(grid, p.eta, dt);
  using detail::apply_decay;

  const auto& a = stage0.rhs;
  VectorField<Scalar> u1 = leray_project(apply_decay(state.u + half * a.du, eu_half));
  VectorField<Scalar> w1 = leray_project(apply_decay(state.w + half * a.dw, ew_half));
  const auto b = detail::evaluate_rhs(u1, w1, p).rhs;

  VectorField<Scalar> u2 = leray_project(apply_decay(state.u, eu_half) + half * b.du);
  VectorField<Scalar> w2 = leray_project(apply_decay(state.w, ew_half) + half * b.dw);
  const auto c = detail::evaluate_rhs(u2, w2, p).rhs;

  VectorField<Scalar> u3 = leray_project(apply_decay(state.u, eu_full) + dt * apply_decay(c.du, eu_half));
  VectorField<Scalar> w3 = leray_project(apply_decay(state.w, ew_full) + dt * apply_decay(c.dw, ew_half));
  const auto d = detail::evaluate_rhs(u3, w3, p).rhs;

  const Scalar sixth = dt / Scalar(6);
  VectorField<Scalar> u_next = apply_decay(state.u, eu_full) +
                               sixth * (apply_decay(a.du, eu_full) + Scalar(2) * apply_decay(b.du + c.du, eu_half) + d.du);
  VectorField<Scalar> w_next = apply_decay(state.w, ew_full) +
                               sixth * (apply_decay(a.dw, ew_full) + Scalar(2) * apply_decay(b.dw + c.dw, ew_half) + d.dw);

  SimState<Scalar> next(leray_project(u_next), leray_project(w_next), p, state.t + dt);
  // Dissipation integrals ride along as extra RK4 components with zero linear part.
  next.dissipation_integral =
      state.dissipation_integral +
      sixth * (horizontal_dissipation(state.u, state.w, p) + Scalar(2) * horizontal_dissipation(u1, w1, p) +
               Scalar(2) * horizontal_dissipation(u2, w2, p) + horizontal_dissipation(u3, w3, p));
  next.mixed_dissipation_integral =
      state.mixed_dissipation_integral +
      sixth * (mixed_dissipation(state.u, state.w, p) + Scalar(2) * mixed_dissipation(u1, w1, p) +
               Scalar(2) * mixed_dissipation(u2, w2, p) + mixed_dissipation(u3, w3, p));
  return next;
}

template <typename Scalar>
struct RunOptions {
  double cfl = 0.5;
  std::vector<double> sobolev_s;
  /// Calls on_snapshot every this many steps (and at step 0); 0 disables.
  long snapshot_every = 0;
  std::function<void(const SimState<Scalar>&, long)> on_snapshot;
};

template <typename Scalar>
struct RunResult {
  std::vector<DiagnosticsRecord> trajectory;
  SimState<Scalar> final_state;
};

/// Number of steps of size dt covering [0, T]; T must be an integer multiple of dt.
inline long step_count(double t_end, double dt) {
  const double n = std::round(t_end / dt);
  if (std::abs(n * dt - t_end) > 1e-9 * std::max(1.0, std::abs(t_end))) {
    throw std::invalid_argument("T must be an integer multiple of dt");
  }
  return static_cast<long>(n);
}

/// Integrates to time t0 + T, recording every `record_every` steps plus the final step.
template <typename Scalar>
RunResult<Scalar> run(const SimState<Scalar>& initial, Scalar t_end, Scalar dt, long record_every,
                      const RunOptions<Scalar>& options = {}) {
  if (!(t_end >= Scalar(0))) throw std::invalid_argument("run length T must be >= 0");
  if (t_end == Scalar(0)) return {{}, initial};
  if (!(dt > Scalar(0))) throw std::invalid_argument("time step must be positive");
  if (record_every < 1) throw std::invalid_argument("record_every must be >= 1");
  const long steps = step_count(static_cast<double>(t_end), static_cast<double>(dt));

  RunResult<Scalar> result{{}, initial};
  result.trajectory.push_back(record(initial, options.sobolev_s));
  if (options.snapshot_every > 0 && options.on_snapshot) options.on_snapshot(initial, 0);
  const StepOptions step_options{options.cfl};
  for (long n = 1; n <= steps; ++n) {
    try {
      result.final_state = step(result.final_state, dt, step_options);
    } catch (const NumericalError& e) {
      throw NumericalAbort(e.what(), std::move(result.trajectory));
    }
    const bool due = n % record_every == 0 || n == steps;
    const bool snap = options.snapshot_every > 0 && options.on_snapshot && n % options.snapshot_every == 0;
    if (due || snap) {
      auto rec = record(result.final_state, options.sobolev_s);
      if (!std::isfinite(rec.energy) || !std::isfinite(rec.energy_dy)) {
        throw NumericalAbort("non-finite energy at t=" + std::to_string(rec.t), std::move(result.trajectory));
      }
      if (due) result.trajectory.push_back(std::move(rec));
      if (snap) options.on_snapshot(result.final_state, n);
    } else if (!std::isfinite(static_cast<double>(l2_norm_squared(result.final_state.u) +
                                                  l2_norm_squared(result.final_state.w)))) {
      throw NumericalAbort("non-finite energy at t=" + std::to_string(static_cast<double>(result.final_state.t)),
                           std::move(result.trajectory));
    }
  }
  // Pin the clock to the requested end time; the accumulated sum drifts by round-off.
  result.final_state.t = initial.t + t_end;
  if (!result.trajectory.empty()) result.trajectory.back().t = static_cast<double>(result.final_state.t);
  return result;
}

}  // namespace amhd

#endif  // AMHD_SOLVER_HPP
