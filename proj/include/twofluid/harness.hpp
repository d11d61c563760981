#pragma once

#include "twofluid/basis.hpp"
#include "twofluid/core.hpp"
#include "twofluid/diagnostics.hpp"
#include "twofluid/momentum.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace twofluid {

// ---------------------------------------------------------------------------
// Initial data
// ---------------------------------------------------------------------------

enum class ProfileFamily { constant, bump, mixture };

std::string to_string(ProfileFamily family);
ProfileFamily parse_profile_family(const std::string& text);

/// Unregularized initial data. Profiles, with c_a = cos(pi x_a / L_a):
///   constant  rho0 = rho_level,                         n0 = n_level
///   bump      rho0 = rho_level + rho_amplitude B(x),    n0 = n_level + n_amplitude B(x)
///             with B = prod_a (1 - cos(2 pi x_a / L_a)) / 2, a centred bump in [0, 1]
///   mixture   rho0 = rho_level (1 + rho_amplitude c_0), n0 = n_level (1 - n_amplitude c_0)
/// n_ratio, when set, replaces n0 by n_ratio * rho0. vacuum_fraction zeroes
/// rho0 on x_0 < vacuum_fraction L_0. The momentum enters through
/// M0 / sqrt(rho0 + n0) = momentum_amplitude prod_a sin(m pi x_a / L_a) e_0.
struct InitialSpec {
  ProfileFamily profile = ProfileFamily::constant;
  double rho_level = 1.0;
  double rho_amplitude = 0.0;
  double n_level = 1.0;
  double n_amplitude = 0.0;
  std::optional<double> n_ratio;
  double momentum_amplitude = 0.0;
  int momentum_mode = 1;
  double vacuum_fraction = 0.0;
  std::optional<double> c0;
  /// Mollification radius for the velocity; delta when unset.
  std::optional<double> mollifier_radius;

  friend bool operator==(const InitialSpec&, const InitialSpec&) = default;
};

/// Regularized initial state: densities clamped into [delta, delta^(-1/(2 beta))]
/// when delta > 0; u0 = phi (eta * (M0 / sqrt(rho0 + n0))) / sqrt(rho0' + n0')
/// with phi an interior cutoff. Throws ValidationError for unresolved radii.
FluidState make_initial(const InitialSpec& spec, const Grid& grid, const ModelParams& p);

// ---------------------------------------------------------------------------
// Runs
// ---------------------------------------------------------------------------

struct DiagnosticsOptions {
  bool energy = true;
  bool comparability = true;
  bool convex = true;
  bool llogl = true;
  std::optional<double> theta1;
  std::optional<double> theta2;
  int weight_j = 4;
  Pairing pairing = Pairing::density_sum;
  double pairing_k = 1.0;
  double vacuum_floor = kDefaultVacuumFloor;

  friend bool operator==(const DiagnosticsOptions&, const DiagnosticsOptions&) = default;
};

/// One CSV row per snapshot. Columns without data hold NaN.
struct SeriesRow {
  double time = 0.0;
  double kinetic = 0.0;
  double potential_n = 0.0;
  double potential_rho = 0.0;
  double artificial = 0.0;
  double dissipation_rate = 0.0;
  double residual = 0.0;
  double comparability_margin = 0.0;
  double convex_ratio_rho = 0.0;
  double convex_ratio_n = 0.0;
  double llogl_rho = 0.0;
  double llogl_n = 0.0;
};

struct RunResult {
  std::vector<FluidState> snapshots;
  std::vector<SeriesRow> series;
  std::vector<double> step_residuals;  // energy residual of every step
  std::vector<double> step_energy;     // total energy after every step, initial value first
  DefectReport report;
  int steps_taken = 0;
  double time_reached = 0.0;
  bool completed = true;
  std::string failure;
  bool vacuum_regularized = false;
  int max_iterations_used = 0;
};

/// Projects the initial velocity onto the basis, then advances to t_final in
/// steps of dt, keeping every stride-th state and the last one. Throws
/// StabilityError when dt is inadmissible at t = 0; later runtime failures end
/// the run early with completed = false.
RunResult run_simulation(const FluidState& init, const ModelParams& p, const GalerkinBasis& basis, double t_final,
                         double dt, int stride, const StepOptions& step = {}, const DiagnosticsOptions& diag = {});

// ---------------------------------------------------------------------------
// Ladders
// ---------------------------------------------------------------------------

enum class LadderKind { epsilon, delta, basis_k };

std::string to_string(LadderKind kind);
LadderKind parse_ladder_kind(const std::string& text);

struct LadderBase {
  Grid grid;
  ModelParams params;
  InitialSpec initial;
  int modes = 16;
  double t_final = 1.0;
  double dt = 1e-2;
  int stride = 1;
  StepOptions step;
  DiagnosticsOptions diag;
};

struct RungMetrics {
  double parameter = 0.0;
  bool completed = true;
  std::string failure;
  DefectReport report;
  double reduction_metric = 0.0;        // space-time d |A - A_ref|^2
  double llogl_difference = 0.0;        // |space-time L log L - reference|
  double flux_pairing_difference = 0.0; // |space-time pairing - reference|
  double sup_artificial = 0.0;          // sup_t delta int (rho + n)^beta
  double accumulated_artificial = 0.0;  // space-time delta (rho + n)^beta
  double energy_bound = 0.0;            // (beta - 1) E(0)
};

struct LadderResult {
  LadderKind kind = LadderKind::epsilon;
  std::vector<double> parameters;
  std::vector<RungMetrics> rungs;
  std::vector<double> cauchy_ratios;
  double estimated_order = 0.0;
  bool partial = false;
  std::map<std::string, bool> monotone;
};

/// Runs one simulation per parameter value from the shared base and measures
/// each rung against the last (finest) one. epsilon and delta values must not
/// increase; basis sizes must not decrease.
LadderResult ladder(LadderKind kind, const std::vector<double>& values, const LadderBase& base);

// ---------------------------------------------------------------------------
// Manufactured solutions
// ---------------------------------------------------------------------------

enum class ManufacturedCase { equilibrium, diffusion, advection, momentum };

std::string to_string(ManufacturedCase which);

struct ConvergenceStudy {
  ManufacturedCase which = ManufacturedCase::equilibrium;
  std::vector<double> resolutions;  // h for the density cases, dt for momentum
  std::vector<double> errors;
  std::vector<double> orders;       // log2 of consecutive error ratios
  double observed_order = 0.0;      // last entry of orders
};

/// Forced analytic profiles on (0, pi), refined `refinements` times (>= 3):
///   equilibrium  rho = n = 1, u = 0 through step_state
///   diffusion    f = 1 + cos(x) cos(t) / 2, eps = 1/2, u = 0, dt = h^2 / 2, T = 1/2
///   advection    f = 1 + cos(x - t) / 2, u = sin(x) / 2, eps = 0, dt = h / 2, T = 1
///   momentum     linearized single-mode coefficient against its exact propagator
ConvergenceStudy manufactured_convergence(ManufacturedCase which, int refinements);

struct VerificationCheck {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

/// Manufactured studies plus a short invariant suite.
std::vector<VerificationCheck> verification_suite();

}  // namespace twofluid
