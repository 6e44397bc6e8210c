#ifndef AMHD_STATE_HPP
#define AMHD_STATE_HPP

#include "amhd/spectral_core.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace amhd {

/// MHD: magnetic field coupling (sigma = +1). TCM: simplified tropical climate model (sigma = -1).
enum class Model : std::uint8_t { mhd = 0, tcm = 1 };

inline std::string_view to_string(Model m) { return m == Model::mhd ? "mhd" : "tcm"; }

inline Model parse_model(std::string_view s) {
  if (s == "mhd" || s == "MHD") return Model::mhd;
  if (s == "tcm" || s == "TCM") return Model::tcm;
  throw std::invalid_argument("unknown model '" + std::string(s) + "' (expected mhd or tcm)");
}

template <typename Scalar>
struct ModelParams {
  Model model = Model::mhd;
  Scalar nu = 0;   ///< horizontal viscosity
  Scalar eta = 0;  ///< horizontal diffusion of the second field

  Scalar coupling_sign() const { return model == Model::mhd ? Scalar(1) : Scalar(-1); }

  void validate() const {
    if (!std::isfinite(static_cast<double>(nu)) || nu < Scalar(0)) throw std::invalid_argument("nu must be finite and >= 0");
    if (!std::isfinite(static_cast<double>(eta)) || eta < Scalar(0)) {
      throw std::invalid_argument("eta must be finite and >= 0");
    }
  }
};

/// One simulation snapshot. `w` is b for MHD and v for the tropical model.
///
/// `dissipation_integral` and `mixed_dissipation_integral` accumulate
/// int_0^t D1 and int_0^t D12 with the same Runge-Kutta weights as the fields,
/// so the energy ledger stays fourth-order accurate in dt.
template <typename Scalar>
struct SimState {
  VectorField<Scalar> u;
  VectorField<Scalar> w;
  Scalar t = 0;
  ModelParams<Scalar> params;
  Scalar dissipation_integral = 0;
  Scalar mixed_dissipation_integral = 0;

  SimState(VectorField<Scalar> u_, VectorField<Scalar> w_, ModelParams<Scalar> p, Scalar time = 0)
      : u(std::move(u_)), w(std::move(w_)), t(time), params(p) {
    u.x_comp.check_same_grid(w.x_comp);
  }

  const Grid<Scalar>& grid() const { return u.grid(); }
};

/// D1 = nu ||d_x u||^2 + eta ||d_x w||^2.
template <typename Scalar>
Scalar horizontal_dissipation(const VectorField<Scalar>& u, const VectorField<Scalar>& w,
                              const ModelParams<Scalar>& p) {
  return p.nu * derivative_norm_squared(u, 1, 0) + p.eta * derivative_norm_squared(w, 1, 0);
}

/// D12 = nu ||d_x d_y u||^2 + eta ||d_x d_y w||^2.
template <typename Scalar>
Scalar mixed_dissipation(const VectorField<Scalar>& u, const VectorField<Scalar>& w, const ModelParams<Scalar>& p) {
  return p.nu * derivative_norm_squared(u, 1, 1) + p.eta * derivative_norm_squared(w, 1, 1);
}

/// ||(u, w)||^2 + ||d_y (u, w)||^2, the quantity bounded by the smallness condition.
template <typename Scalar>
Scalar smallness_measure(const VectorField<Scalar>& u, const VectorField<Scalar>& w) {
  return l2_norm_squared(u) + l2_norm_squared(w) + derivative_norm_squared(u, 0, 1) + derivative_norm_squared(w, 0, 1);
}

}  // namespace amhd

#endif  // AMHD_STATE_HPP
