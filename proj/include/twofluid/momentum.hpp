#pragma once

#include "twofluid/basis.hpp"
#include "twofluid/core.hpp"

#include <Eigen/Dense>

#include <utility>

namespace twofluid {

struct StepOptions {
  double tolerance = 1e-10;  // max |c^(m+1) - c^(m)| at convergence
  int max_iterations = 50;

  friend bool operator==(const StepOptions&, const StepOptions&) = default;
};

struct StepReport {
  int iterations = 0;
  double residual = 0.0;
  double dt = 0.0;
  bool vacuum_regularized = false;
};

/// Block matrix of the viscous form
///   mu sum_b (d_b psi_i, d_b psi_j) delta_ac + (mu + lambda) (d_a psi_i, d_c psi_j)
/// on coefficients stacked component by component.
Eigen::MatrixXd viscous_operator(const GalerkinBasis& basis, const ModelParams& p);

/// Galerkin velocity of a state: c solving M(rho + n) c = projection of (rho + n) u.
SpectralCoeffs galerkin_velocity(const FluidState& state, const GalerkinBasis& basis);

/// Weak momentum right-hand side tested against each mode:
///   (d u_a u_b, d_b psi_i) + (P_total, d_a psi_i) - viscous form - eps (d_b u_a d_b d, psi_i).
/// The velocity enters through its projection onto the basis.
SpectralCoeffs momentum_rhs(const FluidState& state, const ModelParams& p, const GalerkinBasis& basis);

/// One time step of the coupled system: Crank-Nicolson in the Galerkin
/// momentum, transport of rho and n with the midpoint velocity, closed by a
/// Picard iteration. The returned velocity lies in the span of the basis.
std::pair<FluidState, StepReport> step_state(const FluidState& state, const ModelParams& p,
                                             const GalerkinBasis& basis, double dt, const StepOptions& options = {});

}  // namespace twofluid
