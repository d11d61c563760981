#include "twofluid/harness.hpp"

#include "twofluid/pressure.hpp"
#include "twofluid/transport.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace twofluid {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double profile_bump(const Grid& grid, double x, double y) {
  const std::array<double, 2> xs{x, y};
  double value = 1.0;
  for (int a = 0; a < grid.dimension(); ++a) {
    value *= 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * xs[static_cast<std::size_t>(a)] / grid.extent(a)));
  }
  return value;
}

double monotone_tolerance(const std::vector<double>& values) {
  double scale = 0.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  return 1e-12 * scale;
}

bool non_increasing(const std::vector<double>& values) {
  const double tol = monotone_tolerance(values);
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] <= values[i - 1] + tol)) return false;
  }
  return true;
}

double mean_of_finite(const std::vector<double>& values) {
  double sum = 0.0;
  int count = 0;
  for (double v : values) {
    if (std::isfinite(v)) {
      sum += v;
      ++count;
    }
  }
  return count > 0 ? sum / count : kNaN;
}

// Snapshot-level diagnostics collected during a run.
struct Recorder {
  const ModelParams& p;
  const GalerkinBasis& basis;
  const DiagnosticsOptions& diag;
  ScalarField pairing_weight;
  ScalarField initial_fraction;

  std::vector<double> reduction;
  std::vector<double> pairing;
  std::map<std::string, std::vector<double>> integrability;

  void record(const FluidState& state, double residual, RunResult& out) {
    DefectReport& r = out.report;
    SeriesRow row;
    row.time = state.time();
    r.times.push_back(state.time());

    if (diag.energy) {
      const EnergyBudget e = energy_budget(state, p, basis);
      r.energy.push_back(e);
      r.energy_residual.push_back(residual);
      row.kinetic = e.kinetic;
      row.potential_n = e.potential_n;
      row.potential_rho = e.potential_rho;
      row.artificial = e.artificial;
      row.dissipation_rate = e.dissipation_rate;
      row.residual = residual;
    } else {
      row.kinetic = row.potential_n = row.potential_rho = row.artificial = row.dissipation_rate = row.residual = kNaN;
    }

    row.comparability_margin = kNaN;
    if (diag.comparability && p.c0) {
      const double m = comparability_check(state, *p.c0, diag.vacuum_floor);
      r.comparability_series.push_back(m);
      r.comparability_margin = r.comparability_margin ? std::max(*r.comparability_margin, m) : m;
      row.comparability_margin = m;
    }

    row.convex_ratio_rho = row.convex_ratio_n = kNaN;
    if (diag.convex) {
      row.convex_ratio_rho = convex_ratio(state, DensityComponent::rho);
      row.convex_ratio_n = convex_ratio(state, DensityComponent::n);
      r.convex_ratio_rho.push_back(row.convex_ratio_rho);
      r.convex_ratio_n.push_back(row.convex_ratio_n);
    }

    row.llogl_rho = row.llogl_n = kNaN;
    if (diag.llogl) {
      const auto l = llogl(state);
      r.llogl_series.push_back(l);
      row.llogl_rho = l.first;
      row.llogl_n = l.second;
    }

    reduction.push_back(reduction_metric(state, initial_fraction, 2.0, diag.vacuum_floor));
    pairing.push_back(flux_pairing(state, p, 1.0, pairing_weight, diag.pairing, diag.pairing_k));
    if (diag.theta1 && diag.theta2) {
      for (const auto& [label, value] : higher_integrability(state, p, *diag.theta1, *diag.theta2)) {
        integrability[label].push_back(value);
      }
    }

    out.series.push_back(row);
    out.snapshots.push_back(state);
  }

  void finish(RunResult& out) const {
    DefectReport& r = out.report;
    r.reduction_metric = trapezoid(r.times, reduction);
    r.flux_pairing = trapezoid(r.times, pairing);
    if (!r.llogl_series.empty()) {
      std::vector<double> first;
      std::vector<double> second;
      for (const auto& [a, b] : r.llogl_series) {
        first.push_back(a);
        second.push_back(b);
      }
      r.llogl = {trapezoid(r.times, first), trapezoid(r.times, second)};
    }
    for (const auto& [label, values] : integrability) r.higher_integrability[label] = trapezoid(r.times, values);
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// Initial data
// ---------------------------------------------------------------------------

std::string to_string(ProfileFamily family) {
  switch (family) {
    case ProfileFamily::constant: return "constant";
    case ProfileFamily::bump: return "bump";
    case ProfileFamily::mixture: return "mixture";
  }
  return "constant";
}

ProfileFamily parse_profile_family(const std::string& text) {
  if (text == "constant") return ProfileFamily::constant;
  if (text == "bump") return ProfileFamily::bump;
  if (text == "mixture") return ProfileFamily::mixture;
  throw ValidationError("unknown profile family '" + text + "'");
}

FluidState make_initial(const InitialSpec& spec, const Grid& grid, const ModelParams& p) {
  p.check();
  if (!(spec.vacuum_fraction >= 0.0 && spec.vacuum_fraction < 1.0)) {
    throw ValidationError("initial data: vacuum_fraction must lie in [0, 1)");
  }
  if (spec.n_ratio && !(*spec.n_ratio >= 0.0)) throw ValidationError("initial data: n_ratio must be nonnegative");
  if (spec.momentum_mode < 1) throw ValidationError("initial data: momentum_mode must be positive");

  const double lx = grid.extent(0);
  auto rho_profile = [&](double x, double y) {
    if (x < spec.vacuum_fraction * lx) return 0.0;
    switch (spec.profile) {
      case ProfileFamily::constant: return spec.rho_level;
      case ProfileFamily::bump: return spec.rho_level + spec.rho_amplitude * profile_bump(grid, x, y);
      case ProfileFamily::mixture: return spec.rho_level * (1.0 + spec.rho_amplitude * std::cos(std::numbers::pi * x / lx));
    }
    return spec.rho_level;
  };
  auto n_profile = [&](double x, double y) {
    if (spec.n_ratio) return *spec.n_ratio * rho_profile(x, y);
    switch (spec.profile) {
      case ProfileFamily::constant: return spec.n_level;
      case ProfileFamily::bump: return spec.n_level + spec.n_amplitude * profile_bump(grid, x, y);
      case ProfileFamily::mixture: return spec.n_level * (1.0 - spec.n_amplitude * std::cos(std::numbers::pi * x / lx));
    }
    return spec.n_level;
  };

  ScalarField rho = ScalarField::sample(grid, rho_profile);
  ScalarField n = ScalarField::sample(grid, n_profile);
  rho.require_nonnegative("initial rho");
  n.require_nonnegative("initial n");

  if (p.delta > 0.0) {
    if (!(p.delta < 1.0)) throw ValidationError("initial data: the density clamp needs delta < 1");
    const double lo = p.delta;
    const double hi = std::pow(p.delta, -1.0 / (2.0 * p.beta));
    rho.values() = rho.values().max(lo).min(hi);
    n.values() = n.values().max(lo).min(hi);
  }

  VectorField u = VectorField::zeros(grid);
  if (spec.momentum_amplitude != 0.0) {
    const double radius = spec.mollifier_radius.value_or(p.delta);
    if (!(radius > 0.0)) throw ValidationError("initial data: a mollifier radius is required when delta = 0");
    const int m = spec.momentum_mode;
    const ScalarField v = ScalarField::sample(grid, [&](double x, double y) {
      double value = spec.momentum_amplitude * std::sin(m * std::numbers::pi * x / lx);
      if (grid.dimension() == 2) value *= std::sin(m * std::numbers::pi * y / grid.extent(1));
      return value;
    });
    const ScalarField smooth = mollify(v, MollifierSpec{radius});
    const ScalarField phi = interior_cutoff(grid, p.delta > 0.0 ? p.delta : radius);
    const Eigen::ArrayXd d = rho.values() + n.values();
    for (Eigen::Index q = 0; q < grid.size(); ++q) {
      u.values()(q, 0) = d[q] > 0.0 ? phi[q] * smooth[q] / std::sqrt(d[q]) : 0.0;
    }
  }
  return FluidState(std::move(rho), std::move(n), std::move(u));
}

// ---------------------------------------------------------------------------
// Runs
// ---------------------------------------------------------------------------

RunResult run_simulation(const FluidState& init, const ModelParams& p, const GalerkinBasis& basis, double t_final,
                         double dt, int stride, const StepOptions& step, const DiagnosticsOptions& diag) {
  p.check();
  if (init.grid() != basis.grid()) throw ValidationError("run: state and basis grids differ");
  if (!(dt > 0.0) || !(t_final > 0.0)) throw ValidationError("run: T and dt must be positive");
  if (stride < 1) throw ValidationError("run: snapshot stride must be at least 1");
  if (diag.energy && !(p.gamma > 1.0)) throw ValidationError("run: energy diagnostics need gamma > 1");
  const auto steps = static_cast<long>(std::llround(t_final / dt));
  if (steps < 1 || std::abs(static_cast<double>(steps) * dt - t_final) > 1e-9 * t_final) {
    throw ValidationError("run: T must be a whole number of steps dt");
  }

  const Grid& grid = init.grid();
  FluidState state(init.rho(), init.n(), reconstruct(galerkin_velocity(init, basis), basis), init.time());
  if (const double bound = admissible_dt(state.u()); dt > bound) {
    throw StabilityError("run: dt=" + std::to_string(dt) + " exceeds the admissible step " + std::to_string(bound) +
                             " at t=0",
                         bound);
  }

  Recorder recorder{p, basis, diag, interior_weight(grid, diag.weight_j), fractions(init, diag.vacuum_floor).a, {}, {}, {}};
  RunResult out;
  recorder.record(state, 0.0, out);

  std::optional<EnergyBudget> previous;
  if (diag.energy) {
    previous = energy_budget(state, p, basis);
    out.step_energy.push_back(previous->total);
  }
  double pending = 0.0;
  bool recorded_last = true;
  for (long s = 1; s <= steps; ++s) {
    std::optional<std::pair<FluidState, StepReport>> advanced;
    try {
      advanced.emplace(step_state(state, p, basis, dt, step));
    } catch (const RuntimeFailure& e) {
      out.completed = false;
      out.failure = e.what();
      break;
    }
    FluidState next = std::move(advanced->first);
    out.vacuum_regularized = out.vacuum_regularized || advanced->second.vacuum_regularized;
    out.max_iterations_used = std::max(out.max_iterations_used, advanced->second.iterations);

    if (diag.energy) {
      const EnergyBudget current = energy_budget(next, p, basis);
      const EnergyBudget mid = energy_budget(midpoint(state, next), p, basis);
      const double r = (current.total - previous->total) / dt + mid.dissipation_rate + mid.eps_dissipation_rate;
      out.step_residuals.push_back(r);
      out.step_energy.push_back(current.total);
      if (std::abs(r) > std::abs(pending)) pending = r;
      previous = current;
    }
    state = std::move(next);
    out.steps_taken = static_cast<int>(s);
    recorded_last = false;
    if (s % stride == 0 || s == steps) {
      recorder.record(state, pending, out);
      pending = 0.0;
      recorded_last = true;
    }
  }
  if (!recorded_last) recorder.record(state, pending, out);
  out.time_reached = state.time();
  recorder.finish(out);
  return out;
}

// ---------------------------------------------------------------------------
// Ladders
// ---------------------------------------------------------------------------

std::string to_string(LadderKind kind) {
  switch (kind) {
    case LadderKind::epsilon: return "epsilon";
    case LadderKind::delta: return "delta";
    case LadderKind::basis_k: return "basis_k";
  }
  return "epsilon";
}

LadderKind parse_ladder_kind(const std::string& text) {
  if (text == "epsilon") return LadderKind::epsilon;
  if (text == "delta") return LadderKind::delta;
  if (text == "basis_k") return LadderKind::basis_k;
  throw ValidationError("unknown ladder kind '" + text + "'");
}

LadderResult ladder(LadderKind kind, const std::vector<double>& values, const LadderBase& base) {
  if (values.size() < 3) throw ValidationError("ladder: at least three rungs required");
  for (std::size_t i = 1; i < values.size(); ++i) {
    const bool ordered = kind == LadderKind::basis_k ? values[i] >= values[i - 1] : values[i] <= values[i - 1];
    if (!ordered) {
      throw ValidationError(kind == LadderKind::basis_k ? "ladder: basis sizes must not decrease"
                                                        : "ladder: parameter values must not increase");
    }
  }
  for (double v : values) {
    if (kind == LadderKind::basis_k && (v < 1.0 || v != std::floor(v))) {
      throw ValidationError("ladder: basis sizes must be positive integers");
    }
    if (kind != LadderKind::basis_k && !(v >= 0.0)) throw ValidationError("ladder: parameters must be nonnegative");
  }

  LadderResult result;
  result.kind = kind;
  result.parameters = values;
  std::vector<std::vector<FluidState>> trajectories;
  std::vector<ModelParams> rung_params;

  for (double v : values) {
    ModelParams params = base.params;
    int modes = base.modes;
    switch (kind) {
      case LadderKind::epsilon: params.epsilon = v; break;
      case LadderKind::delta: params.delta = v; break;
      case LadderKind::basis_k: modes = static_cast<int>(v); break;
    }
    RungMetrics rung;
    rung.parameter = v;
    std::vector<FluidState> snapshots;
    try {
      const GalerkinBasis basis = build_basis(base.grid, modes);
      const FluidState init = make_initial(base.initial, base.grid, params);
      RunResult run = run_simulation(init, params, basis, base.t_final, base.dt, base.stride, base.step, base.diag);
      rung.completed = run.completed;
      rung.failure = run.failure;
      rung.report = std::move(run.report);
      snapshots = std::move(run.snapshots);
    } catch (const RuntimeFailure& e) {
      rung.completed = false;
      rung.failure = e.what();
    }
    result.partial = result.partial || !rung.completed;
    result.rungs.push_back(std::move(rung));
    trajectories.push_back(std::move(snapshots));
    rung_params.push_back(params);
  }

  const std::vector<FluidState>& reference = trajectories.back();
  const ModelParams& ref_params = rung_params.back();
  const ScalarField weight = interior_weight(base.grid, base.diag.weight_j);

  auto accumulate = [&](const std::vector<FluidState>& traj, std::size_t count, auto&& integrand) {
    std::vector<double> times;
    std::vector<double> vals;
    for (std::size_t i = 0; i < count; ++i) {
      times.push_back(traj[i].time());
      vals.push_back(integrand(i));
    }
    return trapezoid(times, vals);
  };
  auto entropy_sum = [](const FluidState& s) {
    const auto l = llogl(s);
    return l.first + l.second;
  };

  for (std::size_t r = 0; r < values.size(); ++r) {
    RungMetrics& rung = result.rungs[r];
    const std::vector<FluidState>& traj = trajectories[r];
    const ModelParams& params = rung_params[r];
    const std::size_t common = std::min(traj.size(), reference.size());
    if (common == 0) continue;

    rung.reduction_metric = accumulate(traj, common, [&](std::size_t i) {
      return reduction_metric(traj[i], fractions(reference[i], base.diag.vacuum_floor).a, 2.0, base.diag.vacuum_floor);
    });
    const double ent = accumulate(traj, common, [&](std::size_t i) { return entropy_sum(traj[i]); });
    const double ent_ref = accumulate(reference, common, [&](std::size_t i) { return entropy_sum(reference[i]); });
    rung.llogl_difference = std::abs(ent - ent_ref);
    auto pairing_at = [&](const FluidState& s, const ModelParams& pp) {
      return flux_pairing(s, pp, 1.0, weight, base.diag.pairing, base.diag.pairing_k);
    };
    const double pair = accumulate(traj, common, [&](std::size_t i) { return pairing_at(traj[i], params); });
    const double pair_ref =
        accumulate(reference, common, [&](std::size_t i) { return pairing_at(reference[i], ref_params); });
    rung.flux_pairing_difference = std::abs(pair - pair_ref);

    auto artificial_at = [&](std::size_t i) {
      const Eigen::ArrayXd d = traj[i].total_density();
      const double beta = params.beta;
      return params.delta *
             (base.grid.weights() * d.unaryExpr([beta](double z) { return density_power(z, beta); })).sum();
    };
    for (std::size_t i = 0; i < traj.size(); ++i) rung.sup_artificial = std::max(rung.sup_artificial, artificial_at(i));
    rung.accumulated_artificial = accumulate(traj, traj.size(), artificial_at);
    if (params.gamma > 1.0) rung.energy_bound = (params.beta - 1.0) * energy_budget(traj.front(), params).total;
  }

  std::vector<double> metric;
  std::vector<double> artificial;
  std::vector<double> llogl_diff;
  std::vector<double> pairing_diff;
  for (const RungMetrics& r : result.rungs) {
    metric.push_back(r.reduction_metric);
    artificial.push_back(r.accumulated_artificial);
    llogl_diff.push_back(r.llogl_difference);
    pairing_diff.push_back(r.flux_pairing_difference);
  }
  result.monotone["reduction_metric"] = non_increasing(metric);
  result.monotone["llogl_difference"] = non_increasing(llogl_diff);
  result.monotone["flux_pairing_difference"] = non_increasing(pairing_diff);

  std::vector<double> orders;
  if (kind == LadderKind::delta) {
    result.monotone["accumulated_artificial"] = non_increasing(artificial);
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
      result.cauchy_ratios.push_back(artificial[i + 1] / artificial[i]);
      orders.push_back(std::log(artificial[i] / artificial[i + 1]) / std::log(values[i] / values[i + 1]));
    }
  } else {
    // The reference rung measures zero against itself and is left out.
    for (std::size_t i = 0; i + 2 < values.size(); ++i) {
      result.cauchy_ratios.push_back(metric[i + 1] / metric[i]);
      orders.push_back(std::log(metric[i] / metric[i + 1]) / std::abs(std::log(values[i] / values[i + 1])));
    }
  }
  result.estimated_order = mean_of_finite(orders);
  return result;
}

// ---------------------------------------------------------------------------
// Manufactured solutions
// ---------------------------------------------------------------------------

std::string to_string(ManufacturedCase which) {
  switch (which) {
    case ManufacturedCase::equilibrium: return "equilibrium";
    case ManufacturedCase::diffusion: return "diffusion";
    case ManufacturedCase::advection: return "advection";
    case ManufacturedCase::momentum: return "momentum";
  }
  return "equilibrium";
}

namespace {

double equilibrium_error(int cells) {
  const Grid grid = Grid::line(std::numbers::pi, cells);
  const GalerkinBasis basis = build_basis(grid, 4);
  ModelParams p;
  p.epsilon = 0.1;
  p.delta = 1e-3;
  FluidState state = FluidState::at_rest(grid, 1.0, 1.0);
  const FluidState start = state;
  for (int s = 0; s < 10; ++s) state = step_state(state, p, basis, 0.05).first;
  return std::max({(state.rho().values() - start.rho().values()).abs().maxCoeff(),
                   (state.n().values() - start.n().values()).abs().maxCoeff(), state.u().max_abs()});
}

double diffusion_error(int cells) {
  constexpr double eps = 0.5;
  constexpr double t_final = 0.5;
  const Grid grid = Grid::line(std::numbers::pi, cells);
  const double h = grid.spacing(0);
  const long steps = static_cast<long>(std::ceil(t_final / (0.5 * h * h)));
  const double dt = t_final / static_cast<double>(steps);
  auto exact = [](double x, double t) { return 1.0 + 0.5 * std::cos(x) * std::cos(t); };
  const DensityStepper stepper(grid, eps, dt);
  const VectorField u = VectorField::zeros(grid);
  ScalarField f = ScalarField::sample(grid, [&](double x, double) { return exact(x, 0.0); });
  for (long s = 1; s <= steps; ++s) {
    const double t = static_cast<double>(s) * dt;
    const ScalarField source = ScalarField::sample(grid, [&](double x, double) {
      return -0.5 * std::cos(x) * std::sin(t) + eps * 0.5 * std::cos(x) * std::cos(t);
    });
    f = stepper.advance_forced(f, u, source.values());
  }
  const ScalarField target = ScalarField::sample(grid, [&](double x, double) { return exact(x, t_final); });
  return l2_norm(ScalarField(grid, f.values() - target.values()));
}

double advection_error(int cells) {
  constexpr double t_final = 1.0;
  const Grid grid = Grid::line(std::numbers::pi, cells);
  const long steps = static_cast<long>(std::ceil(t_final / (0.5 * grid.spacing(0))));
  const double dt = t_final / static_cast<double>(steps);
  auto exact = [](double x, double t) { return 1.0 + 0.5 * std::cos(x - t); };
  const DensityStepper stepper(grid, 0.0, dt);
  VectorField u = VectorField::zeros(grid);
  u.component(0) = ScalarField::sample(grid, [](double x, double) { return 0.5 * std::sin(x); }).values();
  for (Eigen::Index q = 0; q < grid.size(); ++q) {
    if (grid.on_boundary(q)) u.values()(q, 0) = 0.0;
  }
  ScalarField f = ScalarField::sample(grid, [&](double x, double) { return exact(x, 0.0); });
  for (long s = 0; s < steps; ++s) {
    const double t = static_cast<double>(s) * dt;
    const ScalarField source = ScalarField::sample(grid, [&](double x, double) {
      const double ft = 0.5 * std::sin(x - t);
      const double fx = -0.5 * std::sin(x - t);
      return ft + fx * 0.5 * std::sin(x) + exact(x, t) * 0.5 * std::cos(x);
    });
    f = stepper.advance_forced(f, u, source.values());
  }
  const ScalarField target = ScalarField::sample(grid, [&](double x, double) { return exact(x, t_final); });
  return l2_norm(ScalarField(grid, f.values() - target.values()));
}

// Linearization about rho = n = 1/2 of the single-mode problem. With u = a psi_1
// and density perturbations r psi_1', q psi_1', the discrete divergence of psi_1
// is (sin h / h) psi_1' exactly, so (a, r, q) obey a closed linear system.
double momentum_error(double dt) {
  constexpr double amplitude = 1e-6;
  constexpr double t_final = 1.0;
  constexpr double rho_bar = 0.5;
  constexpr double n_bar = 0.5;
  const Grid grid = Grid::line(std::numbers::pi, 64);
  const GalerkinBasis basis = build_basis(grid, 4);
  ModelParams p;
  p.mu = 0.5;
  p.lambda = 0.0;
  p.gamma = 2.0;
  p.alpha = 2.0;

  const double h = grid.spacing(0);
  const double sh = std::sin(h) / h;
  const double d_bar = rho_bar + n_bar;
  const double nu = 2.0 * p.mu + p.lambda;
  Eigen::Matrix3d a;
  a << -nu * basis.eigenvalue(0) / d_bar, p.gamma * std::pow(rho_bar, p.gamma - 1.0) / d_bar,
      p.alpha * std::pow(n_bar, p.alpha - 1.0) / d_bar,  //
      -rho_bar * sh, 0.0, 0.0,                            //
      -n_bar * sh, 0.0, 0.0;
  const Eigen::Matrix3d propagator = (a * t_final).exp();
  const double exact = propagator(0, 0) * amplitude;

  const long steps = std::lround(t_final / dt);
  VectorField u(grid, amplitude * basis.modes().col(0).array());
  FluidState state(ScalarField::constant(grid, rho_bar), ScalarField::constant(grid, n_bar), std::move(u));
  const StepOptions options{1e-10 * amplitude, 100};
  for (long s = 0; s < steps; ++s) state = step_state(state, p, basis, dt, options).first;
  return std::abs(project(state.u(), basis)(0, 0) - exact) / amplitude;
}

}  // namespace

ConvergenceStudy manufactured_convergence(ManufacturedCase which, int refinements) {
  if (refinements < 3) throw ValidationError("manufactured_convergence: at least three refinements required");
  ConvergenceStudy study;
  study.which = which;
  for (int r = 0; r < refinements; ++r) {
    const int scale = 1 << r;
    switch (which) {
      case ManufacturedCase::equilibrium:
        study.resolutions.push_back(std::numbers::pi / (32 * scale));
        study.errors.push_back(equilibrium_error(32 * scale));
        break;
      case ManufacturedCase::diffusion:
        study.resolutions.push_back(std::numbers::pi / (16 * scale));
        study.errors.push_back(diffusion_error(16 * scale));
        break;
      case ManufacturedCase::advection:
        study.resolutions.push_back(std::numbers::pi / (32 * scale));
        study.errors.push_back(advection_error(32 * scale));
        break;
      case ManufacturedCase::momentum:
        study.resolutions.push_back(0.2 / scale);
        study.errors.push_back(momentum_error(0.2 / scale));
        break;
    }
  }
  for (std::size_t i = 1; i < study.errors.size(); ++i) {
    const double prev = study.errors[i - 1];
    const double cur = study.errors[i];
    study.orders.push_back(prev > 0.0 && cur > 0.0 ? std::log2(prev / cur) : kNaN);
  }
  study.observed_order = study.orders.empty() ? kNaN : study.orders.back();
  return study;
}

std::vector<VerificationCheck> verification_suite() {
  std::vector<VerificationCheck> checks;
  auto add = [&](std::string name, double value, double threshold, bool passed) {
    checks.push_back({std::move(name), value, threshold, passed});
  };

  const ConvergenceStudy eq = manufactured_convergence(ManufacturedCase::equilibrium, 3);
  const double eq_err = *std::max_element(eq.errors.begin(), eq.errors.end());
  add("equilibrium max error", eq_err, 1e-12, eq_err <= 1e-12);
  const ConvergenceStudy diff = manufactured_convergence(ManufacturedCase::diffusion, 4);
  add("diffusion observed order", diff.observed_order, 1.8, diff.observed_order >= 1.8);
  const ConvergenceStudy adv = manufactured_convergence(ManufacturedCase::advection, 4);
  add("advection observed order", adv.observed_order, 0.8, adv.observed_order >= 0.8);
  const ConvergenceStudy mom = manufactured_convergence(ManufacturedCase::momentum, 4);
  add("momentum observed order", mom.observed_order, 2.0, mom.observed_order >= 2.0);

  // Mass and sign preservation of the transport step.
  const Grid grid = Grid::line(std::numbers::pi, 256);
  VectorField u = VectorField::zeros(grid);
  u.component(0) = ScalarField::sample(grid, [](double x, double) { return std::sin(x) * std::sin(3.0 * x); }).values();
  ScalarField f = ScalarField::sample(grid, [](double x, double) { return 1.0 + 0.5 * std::cos(2.0 * x); });
  const double mass0 = total_mass(f);
  const DensityStepper stepper(grid, 1e-2, 0.5 * admissible_dt(u));
  double min_value = f.values().minCoeff();
  for (int s = 0; s < 200; ++s) {
    f = stepper.advance(f, u);
    min_value = std::min(min_value, f.values().minCoeff());
  }
  const double drift = std::abs(total_mass(f) - mass0) / mass0;
  add("transport relative mass drift", drift, 1e-12, drift <= 1e-12);
  add("transport minimum density", min_value, 0.0, min_value >= 0.0);
  return checks;
}

}  // namespace twofluid
