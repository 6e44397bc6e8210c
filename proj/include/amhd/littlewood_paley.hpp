#ifndef AMHD_LITTLEWOOD_PALEY_HPP
#define AMHD_LITTLEWOOD_PALEY_HPP

// Dyadic frequency decomposition with sharp shells.
//
// With rho = |k| / k0 and k0 = 2 pi, shell -1 is the ball rho < 3/4 and shell
// q >= 0 is the ring (3/4) 2^q <= rho < (3/4) 2^(q+1). Every stored
// wavevector belongs to exactly one shell, so the blocks partition each field
// and are mutually L^2-orthogonal.

#include "amhd/spectral_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace amhd {

template <typename Scalar>
class ShellSystem {
 public:
  static constexpr Scalar reference_scale() { return Scalar(2) * std::numbers::pi_v<Scalar>; }

  explicit ShellSystem(const Grid<Scalar>& grid) : grid_(grid), shell_(grid.nx(), grid.ny()) {
    q_max_ = -1;
    for (int j = 0; j < grid.ny(); ++j) {
      for (int i = 0; i < grid.nx(); ++i) {
        const int q = shell_of(rho_squared(grid, i, j));
        shell_(i, j) = q;
        q_max_ = std::max(q_max_, q);
      }
    }
  }

  const Grid<Scalar>& grid() const { return grid_; }
  static constexpr int q_min() { return -1; }
  int q_max() const { return q_max_; }
  int shell(int i, int j) const { return shell_(i, j); }

  /// (|k| / k0)^2 = n_x^2 + (n_y / Ly)^2; exact for dyadic Ly, so shell edges are classified exactly.
  static Scalar rho_squared(const Grid<Scalar>& grid, int i, int j) {
    const Scalar mx = Scalar(grid.mode_x(i)) / grid.lx();
    const Scalar my = Scalar(grid.mode_y(j)) / grid.ly();
    return mx * mx + my * my;
  }

  static int shell_of(Scalar rho2) {
    Scalar edge = Scalar(9) / Scalar(16);  // (3/4)^2
    if (rho2 < edge) return -1;
    int q = 0;
    while (rho2 >= Scalar(4) * edge) {
      edge *= Scalar(4);
      ++q;
    }
    return q;
  }

  bool empty(int q) const { return q < -1 || q > q_max_ || !(shell_ == q).any(); }

 private:
  Grid<Scalar> grid_;
  Eigen::Array<int, Eigen::Dynamic, Eigen::Dynamic> shell_;
  int q_max_;
};

/// Delta_q f. Zero for q < -1 and for q beyond the grid.
template <typename Scalar>
SpectralField<Scalar> dyadic_block(const ShellSystem<Scalar>& shells, const SpectralField<Scalar>& f, int q) {
  SpectralField<Scalar> out(f.grid());
  if (q < -1 || q > shells.q_max()) return out;
  const auto& grid = f.grid();
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      if (shells.shell(i, j) == q) out.coeffs()(i, j) = f.coeffs()(i, j);
    }
  }
  return out;
}

template <typename Scalar>
SpectralField<Scalar> dyadic_block(const SpectralField<Scalar>& f, int q) {
  return dyadic_block(ShellSystem<Scalar>(f.grid()), f, q);
}

/// S_q f = sum_{j=-1}^{q-1} Delta_j f (zero for q <= -1).
template <typename Scalar>
SpectralField<Scalar> low_pass(const ShellSystem<Scalar>& shells, const SpectralField<Scalar>& f, int q) {
  SpectralField<Scalar> out(f.grid());
  const auto& grid = f.grid();
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      if (shells.shell(i, j) < q) out.coeffs()(i, j) = f.coeffs()(i, j);
    }
  }
  return out;
}

template <typename Scalar>
SpectralField<Scalar> low_pass(const SpectralField<Scalar>& f, int q) {
  return low_pass(ShellSystem<Scalar>(f.grid()), f, q);
}

/// Delta~_k = Delta_{k-1} + Delta_k + Delta_{k+1}.
template <typename Scalar>
SpectralField<Scalar> widened_block(const ShellSystem<Scalar>& shells, const SpectralField<Scalar>& f, int k) {
  SpectralField<Scalar> out(f.grid());
  const auto& grid = f.grid();
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      if (std::abs(shells.shell(i, j) - k) <= 1) out.coeffs()(i, j) = f.coeffs()(i, j);
    }
  }
  return out;
}

/// (sum_k (1 + |k/k0|^2)^s |f_k|^2)^{1/2}, with the box measure.
template <typename Scalar>
Scalar sobolev_norm(const SpectralField<Scalar>& f, Scalar s) {
  const auto& grid = f.grid();
  Scalar sum = 0;
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      const Scalar w = std::pow(Scalar(1) + ShellSystem<Scalar>::rho_squared(grid, i, j), s);
      sum += w * std::norm(f.coeffs()(i, j));
    }
  }
  return std::sqrt(grid.area() * sum);
}

template <typename Scalar>
Scalar sobolev_norm(const VectorField<Scalar>& w, Scalar s) {
  return std::hypot(sobolev_norm(w.x_comp, s), sobolev_norm(w.y_comp, s));
}

/// Non-homogeneous Besov norm B^s_{p,r}; p in {2, inf}, r in {1, 2, inf}.
template <typename Scalar>
Scalar besov_norm(const ShellSystem<Scalar>& shells, const SpectralField<Scalar>& f, Scalar s, double p, double r) {
  const double inf = std::numeric_limits<double>::infinity();
  if (p != 2.0 && p != inf) throw std::invalid_argument("besov_norm supports p = 2 or p = infinity");
  if (r != 1.0 && r != 2.0 && r != inf) throw std::invalid_argument("besov_norm supports r = 1, 2 or infinity");
  Scalar acc = 0;
  for (int q = -1; q <= shells.q_max(); ++q) {
    const auto block = dyadic_block(shells, f, q);
    const Scalar lp = p == 2.0 ? l2_norm(block) : max_abs(block);
    const Scalar term = std::pow(Scalar(2), Scalar(q) * s) * lp;
    if (r == inf) {
      acc = std::max(acc, term);
    } else if (r == 1.0) {
      acc += term;
    } else {
      acc += term * term;
    }
  }
  return r == 2.0 ? std::sqrt(acc) : acc;
}

template <typename Scalar>
Scalar besov_norm(const SpectralField<Scalar>& f, Scalar s, double p, double r) {
  return besov_norm(ShellSystem<Scalar>(f.grid()), f, s, p, r);
}

template <typename Scalar>
struct BonyParts {
  SpectralField<Scalar> paraproduct_fg;  ///< T_f g = sum_q S_{q-1} f Delta_q g
  SpectralField<Scalar> paraproduct_gf;  ///< T_g f
  SpectralField<Scalar> remainder;       ///< R(f, g) = sum_k Delta_k f Delta~_k g
};

/// Bony's splitting of the dealiased product f g; the three parts sum to multiply(f, g).
template <typename Scalar>
BonyParts<Scalar> bony_parts(const ShellSystem<Scalar>& shells, const SpectralField<Scalar>& f,
                             const SpectralField<Scalar>& g) {
  f.check_same_grid(g);
  const auto& grid = f.grid();
  const int nq = shells.q_max() + 2;  // shells -1 .. q_max
  std::vector<RealArray<Scalar>> fq, gq;
  fq.reserve(nq);
  gq.reserve(nq);
  for (int q = -1; q <= shells.q_max(); ++q) {
    auto [a, b] = from_spectral_pair(dyadic_block(shells, f, q), dyadic_block(shells, g, q));
    fq.push_back(std::move(a));
    gq.push_back(std::move(b));
  }
  const auto zero = RealArray<Scalar>::Zero(grid.nx(), grid.ny());
  RealArray<Scalar> t_fg = zero, t_gf = zero, rem = zero;
  RealArray<Scalar> low_f = zero, low_g = zero;  // S_{q-1} f, S_{q-1} g
  for (int idx = 0; idx < nq; ++idx) {
    if (idx >= 2) {
      low_f += fq[idx - 2];
      low_g += gq[idx - 2];
    }
    t_fg += low_f * gq[idx];
    t_gf += low_g * fq[idx];
    RealArray<Scalar> widened = gq[idx];
    if (idx >= 1) widened += gq[idx - 1];
    if (idx + 1 < nq) widened += gq[idx + 1];
    rem += fq[idx] * widened;
  }
  auto [s_fg, s_gf] = to_spectral_pair(grid, t_fg, t_gf);
  return {dealias(std::move(s_fg)), dealias(std::move(s_gf)), dealias(to_spectral(grid, rem))};
}

template <typename Scalar>
BonyParts<Scalar> bony_parts(const SpectralField<Scalar>& f, const SpectralField<Scalar>& g) {
  return bony_parts(ShellSystem<Scalar>(f.grid()), f, g);
}

template <typename Scalar>
struct BernsteinRatio {
  Scalar ratio = 0;
  bool empty_block = false;
};

/// ||nabla^k Delta_q f|| / (2^{qk} k0^k ||Delta_q f||), in [(3/4)^k, (3/2)^k) for q >= 0.
template <typename Scalar>
BernsteinRatio<Scalar> bernstein_ratio(const ShellSystem<Scalar>& shells, const SpectralField<Scalar>& f, int q,
                                       int derivative_order) {
  const auto block = dyadic_block(shells, f, q);
  const auto& grid = f.grid();
  Scalar base = 0;
  Scalar derived = 0;
  const Scalar k0 = ShellSystem<Scalar>::reference_scale();
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      const Scalar c2 = std::norm(block.coeffs()(i, j));
      if (c2 == Scalar(0)) continue;
      const Scalar k2 = grid.kx()(i) * grid.kx()(i) + grid.ky()(j) * grid.ky()(j);
      base += c2;
      derived += std::pow(k2, Scalar(derivative_order)) * c2;
    }
  }
  if (base == Scalar(0)) return {Scalar(0), true};
  const Scalar scale = std::pow(std::pow(Scalar(2), Scalar(q)) * k0, Scalar(derivative_order));
  return {std::sqrt(derived / base) / scale, false};
}

}  // namespace amhd

#endif  // AMHD_LITTLEWOOD_PALEY_HPP
