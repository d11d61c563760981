#include "twofluid/momentum.hpp"

#include "twofluid/pressure.hpp"
#include "twofluid/transport.hpp"

#include <cmath>

namespace twofluid {
namespace {

constexpr double kVacuumShift = 1e-14;

Eigen::VectorXd stacked(const SpectralCoeffs& c) {
  return Eigen::Map<const Eigen::VectorXd>(c.data(), c.size());
}

SpectralCoeffs unstacked(const Eigen::VectorXd& v, Eigen::Index k, Eigen::Index dim) {
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), k, dim);
}

bool has_interior_vacuum(const Grid& grid, const Eigen::ArrayXd& d) {
  for (Eigen::Index p = 0; p < grid.size(); ++p) {
    if (!grid.on_boundary(p) && d[p] <= 0.0) return true;
  }
  return false;
}

Eigen::MatrixXd mass_gram(const GalerkinBasis& basis, const Eigen::ArrayXd& d, bool regularize) {
  Eigen::MatrixXd m = basis.weighted_gram(d);
  if (regularize) m.diagonal().array() += kVacuumShift;
  return m;
}

// Convective, pressure and artificial-viscosity parts of the weak right-hand side.
SpectralCoeffs explicit_terms(const ScalarField& rho, const ScalarField& n, const SpectralCoeffs& c,
                              const ModelParams& p, const GalerkinBasis& basis) {
  const Grid& grid = basis.grid();
  const int dim = grid.dimension();
  const Eigen::ArrayXd& w = grid.weights();
  const Eigen::ArrayXd d = rho.values() + n.values();
  const Eigen::ArrayXd pressure = pressure_field(rho, n, p).values();
  const Eigen::MatrixXd u = basis.modes() * c;

  std::array<Eigen::ArrayXd, 2> grad_d;
  if (p.epsilon > 0.0) {
    const ScalarField total(grid, d);
    for (int b = 0; b < dim; ++b) grad_d[static_cast<std::size_t>(b)] = nodal_gradient(total, b);
  }

  SpectralCoeffs r(basis.size(), dim);
  for (int a = 0; a < dim; ++a) {
    Eigen::VectorXd col = basis.mode_derivatives(a).transpose() * (w * pressure).matrix();
    for (int b = 0; b < dim; ++b) {
      const Eigen::ArrayXd flux = w * d * u.col(a).array() * u.col(b).array();
      col += basis.mode_derivatives(b).transpose() * flux.matrix();
    }
    if (p.epsilon > 0.0) {
      Eigen::ArrayXd coupling = Eigen::ArrayXd::Zero(grid.size());
      for (int b = 0; b < dim; ++b) {
        const Eigen::VectorXd dua = basis.mode_derivatives(b) * c.col(a);
        coupling += dua.array() * grad_d[static_cast<std::size_t>(b)];
      }
      col -= p.epsilon * (basis.modes().transpose() * (w * coupling).matrix());
    }
    r.col(a) = col;
  }
  return r;
}

}  // namespace

Eigen::MatrixXd viscous_operator(const GalerkinBasis& basis, const ModelParams& p) {
  const int dim = basis.grid().dimension();
  const Eigen::Index k = basis.size();
  std::array<std::array<Eigen::MatrixXd, 2>, 2> g;
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) g[a][b] = basis.derivative_gram(a, b);
  }
  Eigen::MatrixXd laplace = Eigen::MatrixXd::Zero(k, k);
  for (int a = 0; a < dim; ++a) laplace += g[a][a];

  Eigen::MatrixXd v(k * dim, k * dim);
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) {
      Eigen::MatrixXd block = (p.mu + p.lambda) * g[a][b];
      if (a == b) block += p.mu * laplace;
      v.block(a * k, b * k, k, k) = block;
    }
  }
  return v;
}

SpectralCoeffs galerkin_velocity(const FluidState& state, const GalerkinBasis& basis) {
  if (state.grid() != basis.grid()) throw ValidationError("galerkin_velocity: state and basis grids differ");
  const Eigen::ArrayXd d = state.total_density();
  const Eigen::MatrixXd m = mass_gram(basis, d, has_interior_vacuum(state.grid(), d));
  const Eigen::MatrixXd momentum =
      basis.modes().transpose() * ((state.grid().weights() * d).matrix().asDiagonal() * state.u().values().matrix());
  return m.ldlt().solve(momentum);
}

SpectralCoeffs momentum_rhs(const FluidState& state, const ModelParams& p, const GalerkinBasis& basis) {
  p.check();
  if (state.grid() != basis.grid()) throw ValidationError("momentum_rhs: state and basis grids differ");
  const SpectralCoeffs c = project(state.u(), basis);
  const Eigen::VectorXd viscous = viscous_operator(basis, p) * stacked(c);
  return explicit_terms(state.rho(), state.n(), c, p, basis) - unstacked(viscous, basis.size(), c.cols());
}

std::pair<FluidState, StepReport> step_state(const FluidState& state, const ModelParams& p,
                                             const GalerkinBasis& basis, double dt, const StepOptions& options) {
  p.check();
  if (state.grid() != basis.grid()) throw ValidationError("step_state: state and basis grids differ");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("step_state: dt must be positive");
  if (options.max_iterations < 1 || !(options.tolerance > 0.0)) {
    throw ValidationError("step_state: invalid fixed-point options");
  }
  if (const double bound = admissible_dt(state.u()); dt > bound) {
    throw StabilityError("step_state: dt=" + std::to_string(dt) + " exceeds the admissible step " +
                             std::to_string(bound),
                         bound);
  }

  const Grid& grid = state.grid();
  const Eigen::Index k = basis.size();
  const int dim = grid.dimension();
  const Eigen::ArrayXd& w = grid.weights();

  StepReport report;
  report.dt = dt;
  const Eigen::ArrayXd d0 = state.total_density();
  report.vacuum_regularized = has_interior_vacuum(grid, d0);
  const Eigen::MatrixXd m0 = mass_gram(basis, d0, report.vacuum_regularized);
  const SpectralCoeffs momentum0 =
      basis.modes().transpose() * ((w * d0).matrix().asDiagonal() * state.u().values().matrix());
  const SpectralCoeffs c0 = m0.ldlt().solve(momentum0);

  const Eigen::MatrixXd v = viscous_operator(basis, p);
  const Eigen::VectorXd fixed_part = stacked(momentum0) - 0.5 * dt * v * stacked(c0);
  const DensityStepper stepper(grid, p.epsilon, dt);

  SpectralCoeffs c = c0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const SpectralCoeffs c_mid = 0.5 * (c0 + c);
    const VectorField u_mid = reconstruct(c_mid, basis);
    ScalarField rho1 = stepper.advance(state.rho(), u_mid);
    ScalarField n1 = stepper.advance(state.n(), u_mid);

    const Eigen::ArrayXd d1 = rho1.values() + n1.values();
    const bool vacuum = has_interior_vacuum(grid, d1);
    report.vacuum_regularized = report.vacuum_regularized || vacuum;
    const Eigen::MatrixXd m1 = mass_gram(basis, d1, vacuum);

    const ScalarField rho_mid(grid, 0.5 * (state.rho().values() + rho1.values()));
    const ScalarField n_mid(grid, 0.5 * (state.n().values() + n1.values()));
    const SpectralCoeffs r = explicit_terms(rho_mid, n_mid, c_mid, p, basis);

    Eigen::MatrixXd a = 0.5 * dt * v;
    for (int comp = 0; comp < dim; ++comp) a.block(comp * k, comp * k, k, k) += m1;
    const Eigen::VectorXd solution = a.ldlt().solve(fixed_part + dt * stacked(r));
    const SpectralCoeffs c_next = unstacked(solution, k, dim);

    report.iterations = it;
    report.residual = (c_next - c).cwiseAbs().maxCoeff();
    c = c_next;
    if (!std::isfinite(report.residual)) break;
    if (report.residual <= options.tolerance) {
      FluidState next(std::move(rho1), std::move(n1), reconstruct(c, basis), state.time() + dt);
      return {std::move(next), report};
    }
  }
  throw FixedPointError("step_state: fixed point did not converge (residual " + std::to_string(report.residual) +
                            " after " + std::to_string(report.iterations) + " iterations)",
                        report.residual, report.iterations);
}

}  // namespace twofluid
