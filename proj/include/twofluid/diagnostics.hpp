#pragma once

#include "twofluid/basis.hpp"
#include "twofluid/core.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace twofluid {

inline constexpr double kDefaultVacuumFloor = 1e-12;

// ---------------------------------------------------------------------------
// Energy
// ---------------------------------------------------------------------------

struct EnergyBudget {
  double kinetic = 0.0;
  double potential_n = 0.0;
  double potential_rho = 0.0;
  double artificial = 0.0;
  double dissipation_rate = 0.0;
  double eps_dissipation_rate = 0.0;
  double total = 0.0;  // kinetic + the three potentials
};

/// Energy terms by grid quadrature. Velocity gradients use face differences;
/// the overload with a basis differentiates the projected velocity exactly.
/// Throws ValidationError for gamma = 1.
EnergyBudget energy_budget(const FluidState& state, const ModelParams& p);
EnergyBudget energy_budget(const FluidState& state, const ModelParams& p, const GalerkinBasis& basis);

/// Nodewise average of two states on the same grid.
FluidState midpoint(const FluidState& a, const FluidState& b);

/// Per step: (E(t+dt) - E(t))/dt + dissipation + eps-dissipation at the midpoint state.
std::vector<double> energy_equality_residual(const std::vector<FluidState>& trajectory, const ModelParams& p);
std::vector<double> energy_equality_residual(const std::vector<FluidState>& trajectory, const ModelParams& p,
                                             const GalerkinBasis& basis);

// ---------------------------------------------------------------------------
// Density structure
// ---------------------------------------------------------------------------

/// max(n - c0 rho, rho/c0 - n) over non-vacuum nodes; <= 0 when the sandwich
/// holds. Zero when every node is vacuum.
double comparability_check(const FluidState& state, double c0, double vacuum_floor = kDefaultVacuumFloor);

enum class DensityComponent { rho, n };

/// Quadrature of b^2 / (rho + n + sigma_floor), b the selected density.
double convex_ratio(const FluidState& state, DensityComponent which, double sigma_floor = 0.0);

struct Fractions {
  ScalarField a;  // n / d
  ScalarField b;  // rho / d
  std::vector<bool> vacuum;
};

/// A = B = 0 on nodes with d below the floor.
Fractions fractions(const FluidState& state, double vacuum_floor = kDefaultVacuumFloor);

/// Quadrature of d |A - A_ref|^s.
double reduction_metric(const FluidState& state, const ScalarField& a_ref, double s,
                        double vacuum_floor = kDefaultVacuumFloor);

/// (integral of rho log rho, integral of n log n), with 0 log 0 = 0.
std::pair<double, double> llogl(const FluidState& state);

/// Reason the pair (theta1, theta2) is inadmissible for (alpha, gamma), or empty.
std::string higher_integrability_violation(const ModelParams& p, double theta1, double theta2);

/// Integrals of n^(alpha+theta1), rho^(gamma+theta2), delta n^(beta+theta1)
/// and delta rho^(beta+theta2). Throws ValidationError for inadmissible exponents.
std::map<std::string, double> higher_integrability(const FluidState& state, const ModelParams& p, double theta1,
                                                   double theta2);

enum class Pairing { density_sum, cutoff_k };

/// weight_t * integral of weight_x * H * G, with G = rho + n or T_k(rho) + T_k(n).
/// Throws ValidationError when weight_x is nonzero on a wall node.
double flux_pairing(const FluidState& state, const ModelParams& p, double weight_t, const ScalarField& weight_x,
                    Pairing pairing, double k = 1.0);

/// Smooth interior cutoff: 0 within distance `scale` of every wall, 1 beyond 2 scale.
ScalarField interior_cutoff(const Grid& grid, double scale);
/// Member j of the frozen weight family: interior_cutoff at scale 1/j.
ScalarField interior_weight(const Grid& grid, int j);

// ---------------------------------------------------------------------------
// Aggregated report
// ---------------------------------------------------------------------------

struct DefectReport {
  std::vector<double> times;
  std::vector<double> comparability_series;  // empty without c0
  std::optional<double> comparability_margin;
  std::vector<double> convex_ratio_rho;
  std::vector<double> convex_ratio_n;
  std::vector<std::pair<double, double>> llogl_series;
  std::vector<EnergyBudget> energy;
  std::vector<double> energy_residual;  // one per snapshot; first entry 0

  // Space-time integrals, trapezoid rule over the snapshot times.
  double reduction_metric = 0.0;
  std::pair<double, double> llogl{0.0, 0.0};
  std::map<std::string, double> higher_integrability;
  double flux_pairing = 0.0;
};

/// Trapezoid rule over (possibly nonuniform) sample times.
double trapezoid(const std::vector<double>& times, const std::vector<double>& values);

}  // namespace twofluid
