#ifndef AMHD_RANDOM_HPP
#define AMHD_RANDOM_HPP

#include "amhd/spectral_core.hpp"

#include <cstdint>
#include <random>

namespace amhd {

/// All randomness in the project flows through this generator.
using Rng = std::mt19937_64;

/// Uniform draw in [-1, 1) built directly from the 64-bit stream, so results
/// do not depend on the standard library's distribution implementations.
inline double uniform_pm1(Rng& rng) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

/// Random real field with uniform samples; truncated to the 2/3 band when requested.
template <typename Scalar>
SpectralField<Scalar> random_field(const Grid<Scalar>& grid, Rng& rng, bool band_limited = true) {
  RealArray<Scalar> s(grid.nx(), grid.ny());
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) s(i, j) = static_cast<Scalar>(uniform_pm1(rng));
  }
  auto f = to_spectral(grid, s);
  return band_limited ? dealias(std::move(f)) : f;
}

template <typename Scalar>
VectorField<Scalar> random_vector_field(const Grid<Scalar>& grid, Rng& rng, bool band_limited = true) {
  auto a = random_field(grid, rng, band_limited);
  auto b = random_field(grid, rng, band_limited);
  return {std::move(a), std::move(b)};
}

/// Random band-limited divergence-free field with zero mean.
template <typename Scalar>
VectorField<Scalar> random_div_free(const Grid<Scalar>& grid, Rng& rng) {
  auto w = leray_project(random_vector_field(grid, rng));
  w.x_comp.coeffs()(0, 0) = 0;
  w.y_comp.coeffs()(0, 0) = 0;
  return w;
}

}  // namespace amhd

#endif  // AMHD_RANDOM_HPP
