#pragma once

#include "twofluid/core.hpp"

#include <cmath>

namespace twofluid {

/// z^e for z >= 0 and e >= 1, with 0^e taken as exactly 0.
template <typename Scalar>
Scalar density_power(Scalar z, Scalar exponent) {
  using std::pow;
  return z == Scalar(0) ? Scalar(0) : pow(z, exponent);
}

/// rho^gamma + n^alpha + delta (rho+n)^beta; the last term only when delta > 0.
template <typename Scalar>
Scalar pressure_law(Scalar rho, Scalar n, const ModelParams& p) {
  Scalar value = density_power(rho, Scalar(p.gamma)) + density_power(n, Scalar(p.alpha));
  if (p.delta > 0.0) value += Scalar(p.delta) * density_power(rho + n, Scalar(p.beta));
  return value;
}

/// Potential of the n-pressure: n log n - n + 1 at alpha = 1 (value 1 on
/// vacuum), n^alpha / (alpha - 1) otherwise.
template <typename Scalar>
Scalar potential_G(Scalar n, Scalar alpha) {
  using std::log;
  if (alpha == Scalar(1)) {
    return n == Scalar(0) ? Scalar(1) : n * log(n) - n + Scalar(1);
  }
  return density_power(n, alpha) / (alpha - Scalar(1));
}

ScalarField pressure_field(const ScalarField& rho, const ScalarField& n, const ModelParams& p);
ScalarField potential_G(const ScalarField& n, double alpha);

/// H = P_total - (2 mu + lambda) div u, with the dual-cell divergence used by
/// the transport scheme.
ScalarField effective_flux(const FluidState& state, const ModelParams& p);
ScalarField effective_flux(const ScalarField& rho, const ScalarField& n, const VectorField& u, const ModelParams& p);

}  // namespace twofluid
