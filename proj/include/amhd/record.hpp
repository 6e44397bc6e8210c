#ifndef AMHD_RECORD_HPP
#define AMHD_RECORD_HPP

#include "amhd/decomposition.hpp"
#include "amhd/littlewood_paley.hpp"
#include "amhd/state.hpp"

#include <utility>
#include <vector>

namespace amhd {

/// Per-record ledger. All norms are over the whole box and computed by Parseval.
struct DiagnosticsRecord {
  double t = 0;
  double energy = 0;             ///< E   = ||u||^2 + ||w||^2
  double energy_dy = 0;          ///< E2  = ||d_y u||^2 + ||d_y w||^2
  double dissipation = 0;        ///< D1  = nu ||d_x u||^2 + eta ||d_x w||^2
  double mixed_dissipation = 0;  ///< D12 = nu ||d_x d_y u||^2 + eta ||d_x d_y w||^2
  double energy_tilde = 0;       ///< ||utilde||^2 + ||wtilde||^2
  double int_dissipation = 0;    ///< int_0^t D1
  double int_mixed_dissipation = 0;
  /// (s, sqrt(||u||_{H^s}^2 + ||w||_{H^s}^2)) for each requested s.
  std::vector<std::pair<double, double>> sobolev;
};

template <typename Scalar>
DiagnosticsRecord record(const SimState<Scalar>& state, const std::vector<double>& sobolev_s = {}) {
  DiagnosticsRecord r;
  r.t = static_cast<double>(state.t);
  r.energy = static_cast<double>(l2_norm_squared(state.u) + l2_norm_squared(state.w));
  r.energy_dy = static_cast<double>(derivative_norm_squared(state.u, 0, 1) + derivative_norm_squared(state.w, 0, 1));
  r.dissipation = static_cast<double>(horizontal_dissipation(state.u, state.w, state.params));
  r.mixed_dissipation = static_cast<double>(mixed_dissipation(state.u, state.w, state.params));
  r.energy_tilde =
      static_cast<double>(l2_norm_squared(oscillation(state.u)) + l2_norm_squared(oscillation(state.w)));
  r.int_dissipation = static_cast<double>(state.dissipation_integral);
  r.int_mixed_dissipation = static_cast<double>(state.mixed_dissipation_integral);
  for (double s : sobolev_s) {
    const Scalar hu = sobolev_norm(state.u, static_cast<Scalar>(s));
    const Scalar hw = sobolev_norm(state.w, static_cast<Scalar>(s));
    r.sobolev.emplace_back(s, static_cast<double>(std::hypot(hu, hw)));
  }
  return r;
}

}  // namespace amhd

#endif  // AMHD_RECORD_HPP
