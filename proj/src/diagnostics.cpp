#include "twofluid/diagnostics.hpp"

#include "twofluid/pressure.hpp"
#include "twofluid/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace twofluid {
namespace {

// Face dissipation of a convex potential F under the diffusion step:
// sum over faces of (|face|/h) (F'(f_q) - F'(f_p)) (f_q - f_p).
template <typename Derivative>
double face_dissipation(const ScalarField& f, Derivative&& dF) {
  const Grid& grid = f.grid();
  double sum = 0.0;
  for_each_face(grid, [&](Eigen::Index p, Eigen::Index q, int axis, double measure) {
    const double jump = f[q] - f[p];
    if (jump == 0.0) return;
    sum += measure / grid.spacing(axis) * (dF(f[q]) - dF(f[p])) * jump;
  });
  return sum;
}

double face_velocity_dissipation(const VectorField& u, const ModelParams& p) {
  const Grid& grid = u.grid();
  double shear = 0.0;
  for_each_face(grid, [&](Eigen::Index a, Eigen::Index b, int axis, double measure) {
    const double h = grid.spacing(axis);
    for (int c = 0; c < u.dimension(); ++c) {
      const double g = (u.values()(b, c) - u.values()(a, c)) / h;
      shear += measure * h * g * g;
    }
  });
  const Eigen::ArrayXd div = divergence(u).values();
  return p.mu * shear + (p.mu + p.lambda) * (grid.weights() * div.square()).sum();
}

double basis_velocity_dissipation(const VectorField& u, const ModelParams& p, const GalerkinBasis& basis) {
  const Grid& grid = u.grid();
  const SpectralCoeffs c = project(u, basis);
  const Eigen::ArrayXd& w = grid.weights();
  double shear = 0.0;
  Eigen::ArrayXd div = Eigen::ArrayXd::Zero(grid.size());
  for (int b = 0; b < grid.dimension(); ++b) {
    const Eigen::MatrixXd du = reconstruct_derivative(c, basis, b);  // d_b u_a in column a
    for (int a = 0; a < grid.dimension(); ++a) {
      shear += (w * du.col(a).array().square()).sum();
      if (a == b) div += du.col(a).array();
    }
  }
  return p.mu * shear + (p.mu + p.lambda) * (w * div.square()).sum();
}

EnergyBudget stored_energy(const FluidState& state, const ModelParams& p) {
  p.check();
  if (!(p.gamma > 1.0)) {
    throw ValidationError("energy_budget: the rho-potential needs gamma > 1");
  }
  const Grid& grid = state.grid();
  const Eigen::ArrayXd& w = grid.weights();
  const Eigen::ArrayXd d = state.total_density();

  EnergyBudget e;
  const Eigen::ArrayXd speed2 = state.u().values().square().rowwise().sum();
  e.kinetic = 0.5 * (w * d * speed2).sum();
  e.potential_n = (w * potential_G(state.n(), p.alpha).values()).sum();
  const double gamma = p.gamma;
  e.potential_rho =
      (w * state.rho().values().unaryExpr([gamma](double z) { return density_power(z, gamma); })).sum() /
      (gamma - 1.0);
  if (p.delta > 0.0) {
    const double beta = p.beta;
    e.artificial = p.delta * (w * d.unaryExpr([beta](double z) { return density_power(z, beta); })).sum() /
                   (beta - 1.0);
  }
  e.total = e.kinetic + e.potential_n + e.potential_rho + e.artificial;

  if (p.epsilon > 0.0) {
    const double alpha = p.alpha;
    const double beta = p.beta;
    double rate = face_dissipation(state.n(), [alpha](double z) {
      return alpha == 1.0 ? std::log(z) : alpha / (alpha - 1.0) * density_power(z, alpha - 1.0);
    });
    rate += face_dissipation(state.rho(),
                             [gamma](double z) { return gamma / (gamma - 1.0) * density_power(z, gamma - 1.0); });
    if (p.delta > 0.0) {
      const ScalarField total(grid, d);
      rate += p.delta * face_dissipation(total, [beta](double z) {
                return beta / (beta - 1.0) * density_power(z, beta - 1.0);
              });
    }
    e.eps_dissipation_rate = p.epsilon * rate;
  }
  return e;
}

template <typename Budget>
std::vector<double> residual_series(const std::vector<FluidState>& trajectory, Budget&& budget) {
  std::vector<double> out;
  if (trajectory.size() < 2) return out;
  out.reserve(trajectory.size() - 1);
  EnergyBudget previous = budget(trajectory.front());
  for (std::size_t s = 1; s < trajectory.size(); ++s) {
    const double dt = trajectory[s].time() - trajectory[s - 1].time();
    if (!(dt > 0.0)) throw ValidationError("energy_equality_residual: snapshot times must increase");
    const EnergyBudget current = budget(trajectory[s]);
    const EnergyBudget mid = budget(midpoint(trajectory[s - 1], trajectory[s]));
    out.push_back((current.total - previous.total) / dt + mid.dissipation_rate + mid.eps_dissipation_rate);
    previous = current;
  }
  return out;
}

}  // namespace

EnergyBudget energy_budget(const FluidState& state, const ModelParams& p) {
  EnergyBudget e = stored_energy(state, p);
  e.dissipation_rate = face_velocity_dissipation(state.u(), p);
  return e;
}

EnergyBudget energy_budget(const FluidState& state, const ModelParams& p, const GalerkinBasis& basis) {
  if (state.grid() != basis.grid()) throw ValidationError("energy_budget: state and basis grids differ");
  EnergyBudget e = stored_energy(state, p);
  e.dissipation_rate = basis_velocity_dissipation(state.u(), p, basis);
  return e;
}

FluidState midpoint(const FluidState& a, const FluidState& b) {
  if (a.grid() != b.grid()) throw ValidationError("midpoint: states live on different grids");
  const Grid& grid = a.grid();
  return FluidState(ScalarField(grid, 0.5 * (a.rho().values() + b.rho().values())),
                    ScalarField(grid, 0.5 * (a.n().values() + b.n().values())),
                    VectorField(grid, 0.5 * (a.u().values() + b.u().values())), 0.5 * (a.time() + b.time()));
}

std::vector<double> energy_equality_residual(const std::vector<FluidState>& trajectory, const ModelParams& p) {
  return residual_series(trajectory, [&](const FluidState& s) { return energy_budget(s, p); });
}

std::vector<double> energy_equality_residual(const std::vector<FluidState>& trajectory, const ModelParams& p,
                                             const GalerkinBasis& basis) {
  return residual_series(trajectory, [&](const FluidState& s) { return energy_budget(s, p, basis); });
}

double comparability_check(const FluidState& state, double c0, double vacuum_floor) {
  if (!(c0 >= 1.0)) throw ValidationError("comparability_check: c0 must be at least 1");
  const auto& rho = state.rho().values();
  const auto& n = state.n().values();
  double margin = -std::numeric_limits<double>::infinity();
  for (Eigen::Index p = 0; p < rho.size(); ++p) {
    if (rho[p] + n[p] <= vacuum_floor) continue;
    margin = std::max({margin, n[p] - c0 * rho[p], rho[p] / c0 - n[p]});
  }
  return std::isfinite(margin) ? margin : 0.0;
}

double convex_ratio(const FluidState& state, DensityComponent which, double sigma_floor) {
  if (!(sigma_floor >= 0.0)) throw ValidationError("convex_ratio: floor must be nonnegative");
  const Eigen::ArrayXd& b = which == DensityComponent::rho ? state.rho().values() : state.n().values();
  const Eigen::ArrayXd d = state.total_density() + sigma_floor;
  const Eigen::ArrayXd& w = state.grid().weights();
  double sum = 0.0;
  for (Eigen::Index p = 0; p < b.size(); ++p) {
    if (b[p] != 0.0) sum += w[p] * b[p] * b[p] / d[p];
  }
  return sum;
}

Fractions fractions(const FluidState& state, double vacuum_floor) {
  if (!(vacuum_floor > 0.0)) throw ValidationError("fractions: vacuum floor must be positive");
  const Grid& grid = state.grid();
  const Eigen::ArrayXd d = state.total_density();
  Eigen::ArrayXd a = Eigen::ArrayXd::Zero(grid.size());
  Eigen::ArrayXd b = Eigen::ArrayXd::Zero(grid.size());
  std::vector<bool> vacuum(static_cast<std::size_t>(grid.size()), false);
  for (Eigen::Index p = 0; p < grid.size(); ++p) {
    if (d[p] < vacuum_floor) {
      vacuum[static_cast<std::size_t>(p)] = true;
      continue;
    }
    a[p] = state.n()[p] / d[p];
    b[p] = 1.0 - a[p];
  }
  return {ScalarField(grid, std::move(a)), ScalarField(grid, std::move(b)), std::move(vacuum)};
}

double reduction_metric(const FluidState& state, const ScalarField& a_ref, double s, double vacuum_floor) {
  if (a_ref.grid() != state.grid()) throw ValidationError("reduction_metric: reference lives on another grid");
  if (!(s > 1.0)) throw ValidationError("reduction_metric: exponent s must exceed 1");
  const Fractions f = fractions(state, vacuum_floor);
  const Eigen::ArrayXd gap = (f.a.values() - a_ref.values()).abs().pow(s);
  return (state.grid().weights() * state.total_density() * gap).sum();
}

std::pair<double, double> llogl(const FluidState& state) {
  const auto entropy = [](double z) { return z > 0.0 ? z * std::log(z) : 0.0; };
  const Eigen::ArrayXd& w = state.grid().weights();
  return {(w * state.rho().values().unaryExpr(entropy)).sum(), (w * state.n().values().unaryExpr(entropy)).sum()};
}

std::string higher_integrability_violation(const ModelParams& p, double theta1, double theta2) {
  if (!(theta1 > 0.0)) return "θ₁>0 fails";
  if (!(theta2 > 0.0)) return "θ₂>0 fails";
  const double a = p.alpha;
  const double g = p.gamma;
  if (a > 1.5 && g > 1.5) {
    if (!(3.0 * theta1 < a)) return "θ₁<α/3 fails";
    if (!(theta1 <= 1.0 && 3.0 * (theta1 + 1.0) <= 2.0 * a)) return "θ₁≤min{1,2α/3−1} fails";
    if (!(3.0 * theta2 < g)) return "θ₂<γ/3 fails";
    if (!(theta2 <= 1.0 && 3.0 * (theta2 + 1.0) <= 2.0 * g)) return "θ₂≤min{1,2γ/3−1} fails";
    return {};
  }
  // Comparable densities share one exponent governed by the larger power.
  if (!(g > 1.5 && a >= 1.0 && p.c0)) return "α,γ>3/2 or comparability (γ>3/2, α≥1, c0) fails";
  if (theta1 != theta2) return "θ₁=θ₂ fails";
  const double m = std::max(a, g);
  if (!(3.0 * theta1 < m)) return "θ<max{α,γ}/3 fails";
  if (!(theta1 <= 1.0 && 3.0 * (theta1 + 1.0) <= 2.0 * m)) return "θ≤min{1,2max{α,γ}/3−1} fails";
  return {};
}

std::map<std::string, double> higher_integrability(const FluidState& state, const ModelParams& p, double theta1,
                                                   double theta2) {
  p.check();
  if (auto v = higher_integrability_violation(p, theta1, theta2); !v.empty()) {
    throw ValidationError("higher_integrability: " + v);
  }
  const Eigen::ArrayXd& w = state.grid().weights();
  const auto integral = [&](const Eigen::ArrayXd& f, double e) {
    return (w * f.unaryExpr([e](double z) { return density_power(z, e); })).sum();
  };
  const Eigen::ArrayXd& rho = state.rho().values();
  const Eigen::ArrayXd& n = state.n().values();
  return {
      {"n^(alpha+theta1)", integral(n, p.alpha + theta1)},
      {"rho^(gamma+theta2)", integral(rho, p.gamma + theta2)},
      {"delta n^(beta+theta1)", p.delta * integral(n, p.beta + theta1)},
      {"delta rho^(beta+theta2)", p.delta * integral(rho, p.beta + theta2)},
  };
}

double flux_pairing(const FluidState& state, const ModelParams& p, double weight_t, const ScalarField& weight_x,
                    Pairing pairing, double k) {
  const Grid& grid = state.grid();
  if (weight_x.grid() != grid) throw ValidationError("flux_pairing: weight lives on another grid");
  for (Eigen::Index q = 0; q < grid.size(); ++q) {
    if (grid.on_boundary(q) && weight_x[q] != 0.0) {
      throw ValidationError("flux_pairing: spatial weight must vanish on the walls");
    }
  }
  const Eigen::ArrayXd h = effective_flux(state, p).values();
  Eigen::ArrayXd g;
  if (pairing == Pairing::density_sum) {
    g = state.total_density();
  } else {
    g = cutoff_T(state.rho(), k).values() + cutoff_T(state.n(), k).values();
  }
  return weight_t * (grid.weights() * weight_x.values() * h * g).sum();
}

ScalarField interior_weight(const Grid& grid, int j) {
  if (j < 1) throw ValidationError("interior_weight: j must be positive");
  return interior_cutoff(grid, 1.0 / j);
}

ScalarField interior_cutoff(const Grid& grid, double scale) {
  if (!(scale > 0.0)) throw ValidationError("interior_cutoff: scale must be positive");
  for (int a = 0; a < grid.dimension(); ++a) {
    if (!(4.0 * scale < grid.extent(a))) throw ValidationError("interior_cutoff: scale must be below a quarter of the box");
  }
  const auto psi = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
  const auto step = [&](double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return psi(t) / (psi(t) + psi(1.0 - t));
  };
  return ScalarField::sample(grid, [&](double x, double y) {
    double value = 1.0;
    const std::array<double, 2> xs{x, y};
    for (int a = 0; a < grid.dimension(); ++a) {
      const double xa = xs[static_cast<std::size_t>(a)];
      const double dist = std::min(xa, grid.extent(a) - xa);
      value *= step(dist / scale - 1.0);
    }
    return value;
  });
}

double trapezoid(const std::vector<double>& times, const std::vector<double>& values) {
  if (times.size() != values.size()) throw ValidationError("trapezoid: size mismatch");
  double sum = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    sum += 0.5 * (times[i] - times[i - 1]) * (values[i] + values[i - 1]);
  }
  return sum;
}

}  // namespace twofluid
