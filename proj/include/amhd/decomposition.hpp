#ifndef AMHD_DECOMPOSITION_HPP
#define AMHD_DECOMPOSITION_HPP

// x-average / oscillation splitting f = fbar(y) + ftilde(x, y) and the
// anisotropic Lebesgue norms L^q_y L^p_x used to measure the two parts.

#include "amhd/spectral_core.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace amhd {

template <typename Scalar>
struct SplitField {
  /// fbar sampled at the y nodes.
  RealColumn<Scalar> bar;
  /// ftilde; its n_x = 0 row is exactly zero.
  SpectralField<Scalar> tilde;
};

/// The n_x = 0 part of f, kept as a 2D field (constant in x).
template <typename Scalar>
SpectralField<Scalar> x_average(const SpectralField<Scalar>& f) {
  SpectralField<Scalar> out(f.grid());
  out.coeffs().row(0) = f.coeffs().row(0);
  return out;
}

template <typename Scalar>
SpectralField<Scalar> oscillation(SpectralField<Scalar> f) {
  f.coeffs().row(0).setZero();
  return f;
}

template <typename Scalar>
VectorField<Scalar> x_average(const VectorField<Scalar>& w) {
  return {x_average(w.x_comp), x_average(w.y_comp), false};
}

/// Oscillation part; divergence-free whenever w is (the x-average of w^2 is then constant).
template <typename Scalar>
VectorField<Scalar> oscillation(const VectorField<Scalar>& w) {
  return {oscillation(w.x_comp), oscillation(w.y_comp), false};
}

template <typename Scalar>
SplitField<Scalar> split(const SpectralField<Scalar>& f) {
  const auto& grid = f.grid();
  ComplexArray<Scalar> row0 = ComplexArray<Scalar>::Zero(1, grid.ny());
  row0.row(0) = f.coeffs().row(0);
  RealColumn<Scalar> bar = detail::inverse_fft_y(row0).row(0).real().transpose();
  return {std::move(bar), oscillation(f)};
}

namespace detail {

inline bool is_two(double p) { return p == 2.0; }
inline bool is_inf(double p) { return p == std::numeric_limits<double>::infinity(); }

}  // namespace detail

/// ||f||_{L^q_y L^p_x}, p and q in {2, inf}. L^2 by nodal quadrature, L^inf by nodal max.
template <typename Scalar>
Scalar anisotropic_norm(const SpectralField<Scalar>& f, double p_x, double q_y) {
  if (!(detail::is_two(p_x) || detail::is_inf(p_x)) || !(detail::is_two(q_y) || detail::is_inf(q_y))) {
    throw std::invalid_argument("anisotropic_norm supports exponents 2 and infinity only");
  }
  const auto& grid = f.grid();
  const RealArray<Scalar> s = from_spectral(f);
  RealColumn<Scalar> inner_norm(grid.ny());
  for (int j = 0; j < grid.ny(); ++j) {
    inner_norm(j) = detail::is_two(p_x) ? std::sqrt(s.col(j).square().sum() * grid.dx()) : s.col(j).abs().maxCoeff();
  }
  return detail::is_two(q_y) ? std::sqrt(inner_norm.square().sum() * grid.dy()) : inner_norm.maxCoeff();
}

/// ||ftilde|| / ||d_x ftilde||; at most 1/(2 pi) on the unit period. Zero when ftilde = 0.
template <typename Scalar>
Scalar poincare_ratio(const SpectralField<Scalar>& f) {
  const auto tilde = oscillation(f);
  const Scalar num = l2_norm_squared(tilde);
  if (num == Scalar(0)) return Scalar(0);
  return std::sqrt(num / derivative_norm_squared(tilde, 1, 0));
}

/// max_y ||ftilde||_{L^inf_x} / (||ftilde||_{L^2_x} ||d_x ftilde||_{L^2_x})^{1/2}.
/// Any zero-mean periodic function vanishes somewhere, which bounds this by sqrt(2).
template <typename Scalar>
Scalar agmon_ratio(const SpectralField<Scalar>& f) {
  const auto tilde = oscillation(f);
  const auto& grid = f.grid();
  if (tilde.coeffs().abs2().maxCoeff() == Scalar(0)) {
    throw std::invalid_argument("agmon_ratio is undefined for a field without oscillation part");
  }
  // Row spectra in x at every y node.
  const ComplexArray<Scalar> rows = detail::inverse_fft_y(tilde.coeffs());
  const RealArray<Scalar> samples = from_spectral(tilde);
  const RealColumn<Scalar> kx2 = grid.kx().square();
  Scalar worst = 0;
  for (int j = 0; j < grid.ny(); ++j) {
    const Scalar l2 = std::sqrt(rows.col(j).abs2().sum());
    const Scalar d1 = std::sqrt((kx2 * rows.col(j).abs2()).sum());
    if (l2 == Scalar(0) || d1 == Scalar(0)) continue;
    const Scalar linf = samples.col(j).abs().maxCoeff();
    worst = std::max(worst, linf / std::sqrt(l2 * d1));
  }
  return worst;
}

struct Lemma23Report {
  double bar_u2 = 0;          ///< max modal |ubar^2| / modal scale
  double dy_bar_u2 = 0;       ///< max modal |k_y ubar^2| / gradient scale
  double tilde_divergence = 0;
  double input_divergence = 0;
  double tolerance = 1e-12;
  bool passed = false;
};

/// Checks ubar^2 = 0, d_y ubar^2 = 0 and div utilde = 0. Failures are reported, never thrown.
template <typename Scalar>
Lemma23Report verify_lemma23(const VectorField<Scalar>& u, double tolerance = 1e-12) {
  const auto& grid = u.grid();
  Scalar scale = 0;
  Scalar gradient_scale = 0;
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      const Scalar m = std::sqrt(std::norm(u.x_comp.coeffs()(i, j)) + std::norm(u.y_comp.coeffs()(i, j)));
      const Scalar k = std::sqrt(grid.kx_odd()(i) * grid.kx_odd()(i) + grid.ky_odd()(j) * grid.ky_odd()(j));
      scale = std::max(scale, m);
      gradient_scale = std::max(gradient_scale, k * m);
    }
  }
  Lemma23Report report;
  report.tolerance = tolerance;
  if (scale == Scalar(0)) {
    report.passed = true;
    return report;
  }
  const auto bar2 = u.y_comp.coeffs().row(0);
  Scalar bar_max = 0;
  Scalar dbar_max = 0;
  for (int j = 0; j < grid.ny(); ++j) {
    bar_max = std::max(bar_max, std::abs(bar2(j)));
    dbar_max = std::max(dbar_max, std::abs(grid.ky_odd()(j) * bar2(j)));
  }
  report.bar_u2 = static_cast<double>(bar_max / scale);
  report.dy_bar_u2 = gradient_scale > 0 ? static_cast<double>(dbar_max / gradient_scale) : 0.0;
  report.tilde_divergence = static_cast<double>(divergence_residual(oscillation(u)));
  report.input_divergence = static_cast<double>(divergence_residual(u));
  report.passed = report.bar_u2 <= tolerance && report.dy_bar_u2 <= tolerance &&
                  report.tilde_divergence <= tolerance && report.input_divergence <= tolerance;
  return report;
}

}  // namespace amhd

#endif  // AMHD_DECOMPOSITION_HPP
