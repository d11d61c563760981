#pragma once

#include "twofluid/core.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <functional>
#include <memory>
#include <vector>

namespace twofluid {

// ---------------------------------------------------------------------------
// Discrete operators on the dual mesh
// ---------------------------------------------------------------------------

/// Largest dt for which the upwind step keeps every node coefficient
/// nonnegative: 1 / sum_a (2 max|u_a| / h_a). Infinite for u = 0.
double admissible_dt(const VectorField& u);

/// Dual-cell divergence of u. Wall faces carry the velocity of the wall node,
/// so fields that vanish on the walls see closed boundaries.
ScalarField divergence(const VectorField& u);

/// Upwind flux balance (1/w_p) sum_faces F_pq for the density f carried by u,
/// with face velocity (u_p + u_q)/2 and closed walls.
Eigen::ArrayXd upwind_flux_divergence(const ScalarField& f, const VectorField& u);

/// Centered differences inside, one-sided on the walls.
Eigen::ArrayXd nodal_gradient(const ScalarField& f, int axis);

/// Neumann stiffness K of the dual mesh: (K f)_p = sum_faces (|face|/h)(f_p - f_q).
/// Columns sum to zero.
Eigen::SparseMatrix<double> neumann_stiffness(const Grid& grid);

/// Factorized (W + dt eps K) for repeated implicit diffusion solves.
class ImplicitDiffusion {
 public:
  ImplicitDiffusion(const Grid& grid, double epsilon, double dt);

  /// Solves (W + dt eps K) g = W f.
  Eigen::ArrayXd apply(const Eigen::ArrayXd& f) const;
  bool active() const noexcept { return solver_ != nullptr; }

 private:
  Grid grid_;
  std::shared_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> solver_;
};

/// One transport step: explicit upwind advection followed by implicit
/// diffusion. Reusable across densities and velocities for fixed (eps, dt).
class DensityStepper {
 public:
  DensityStepper(const Grid& grid, double epsilon, double dt);

  /// Throws StabilityError when dt exceeds admissible_dt(u).
  ScalarField advance(const ScalarField& f, const VectorField& u) const;
  /// Same step with an explicit source term; no sign requirement.
  ScalarField advance_forced(const ScalarField& f, const VectorField& u, const Eigen::ArrayXd& source) const;

  double epsilon() const noexcept { return epsilon_; }
  double dt() const noexcept { return dt_; }

 private:
  Eigen::ArrayXd advect(const ScalarField& f, const VectorField& u) const;

  Grid grid_;
  double epsilon_;
  double dt_;
  ImplicitDiffusion diffusion_;
};

/// d_t f + div(f u) = eps Laplace f with closed walls, one step of size dt.
ScalarField advance_density(const ScalarField& f, const VectorField& u, double epsilon, double dt);
ScalarField advance_density(const ScalarField& f, const VectorField& u, double epsilon, double dt,
                            const Eigen::ArrayXd& source);

// ---------------------------------------------------------------------------
// Cut-off renormalizations
// ---------------------------------------------------------------------------

/// Concave C^2 cut-off on the unit scale: t below 1, 2 above 3, quartic between.
template <typename Scalar>
Scalar cutoff_unit(Scalar t) {
  if (t <= Scalar(1)) return t;
  if (t >= Scalar(3)) return Scalar(2);
  const Scalar s = (t - Scalar(1)) / Scalar(2);
  return Scalar(1) + s * (Scalar(2) + s * s * (s - Scalar(2)));
}

template <typename Scalar>
Scalar cutoff_unit_derivative(Scalar t) {
  if (t <= Scalar(1)) return Scalar(1);
  if (t >= Scalar(3)) return Scalar(0);
  const Scalar s = (t - Scalar(1)) / Scalar(2);
  return Scalar(1) + s * s * (Scalar(2) * s - Scalar(3));
}

/// T_k(z) = k T(z/k).
template <typename Scalar>
Scalar cutoff_T(Scalar z, Scalar k) {
  return k * cutoff_unit(z / k);
}

/// Integral of T(t)/t^2 over [1, tau].
template <typename Scalar>
Scalar cutoff_integral_unit(Scalar tau) {
  if (tau <= Scalar(1)) return Scalar(0);
  if (tau >= Scalar(3)) return Scalar(5) / Scalar(3) - Scalar(2) / tau;
  const Scalar u = tau - Scalar(1);
  return u * (u * (u * (u - Scalar(8)) + Scalar(24)) + Scalar(48)) / (Scalar(48) * (Scalar(1) + u));
}

template <typename Scalar>
Scalar beta_k(Scalar k) {
  using std::log;
  return log(k) + Scalar(5) / Scalar(3);
}

/// L_k(z) = z * integral_1^z T_k(s)/s^2 ds, in closed form.
template <typename Scalar>
Scalar cutoff_L(Scalar z, Scalar k) {
  using std::log;
  if (z <= Scalar(0)) return Scalar(0);
  if (z <= k) return z * log(z);
  if (z >= Scalar(3) * k) return beta_k(k) * z - Scalar(2) * k;
  return z * log(k) + z * cutoff_integral_unit(z / k);
}

/// b_k = L_k - beta_k z; constant -2k for z >= 3k.
template <typename Scalar>
Scalar cutoff_b(Scalar z, Scalar k) {
  if (z >= Scalar(3) * k) return Scalar(-2) * k;
  return cutoff_L(z, k) - beta_k(k) * z;
}

/// b_k'(z); unbounded as z -> 0.
template <typename Scalar>
Scalar cutoff_b_derivative(Scalar z, Scalar k) {
  using std::log;
  if (z >= Scalar(3) * k) return Scalar(0);
  if (z <= k) return log(z) + Scalar(1) - beta_k(k);
  return log(k) + cutoff_integral_unit(z / k) + cutoff_T(z, k) / z - beta_k(k);
}

ScalarField cutoff_T(const ScalarField& f, double k);

/// A renormalizing function b with derivative, plus b'(z) z - b(z).
struct Renormalization {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::function<double(double)> defect;  // b'(z) z - b(z)

  static Renormalization identity();
  static Renormalization square();
  /// z log z, defect z.
  static Renormalization entropy();
  /// b_k, defect T_k.
  static Renormalization cutoff(double k);
  /// T_k itself, defect z T_k'(z) - T_k(z); the identity below k.
  static Renormalization truncation(double k);
};

/// Discrete time integral of the weighted renormalized-transport defect
///   sum_steps dt * | sum_p w_p phi_p [ (b(f1)-b(f0))/dt + div_h(b(f0) u) + (b'(f0) f0 - b(f0)) div u ] |
/// along a density trajectory driven by the given velocities.
double renormalization_residual(const std::vector<ScalarField>& densities, const std::vector<VectorField>& velocities,
                                const Renormalization& b, const ScalarField& weight, double dt);

/// The same functional with b the identity.
double continuity_residual(const std::vector<ScalarField>& densities, const std::vector<VectorField>& velocities,
                           const ScalarField& weight, double dt);

// ---------------------------------------------------------------------------
// Mollification
// ---------------------------------------------------------------------------

struct MollifierSpec {
  double radius = 0.0;
};

/// Standard bump exp(-1/(1-r^2/sigma^2)) sampled on lattice offsets and
/// renormalized so that its lattice sum (times the node weight) is one.
struct MollifierKernel {
  std::array<int, 2> reach{0, 0};
  Eigen::ArrayXXd values;  // (2 reach_x + 1) x (2 reach_y + 1)
  double lattice_weight = 1.0;
};

/// Throws ValidationError unless 2 h_min <= radius < min extent / 4.
MollifierKernel mollifier_kernel(const Grid& grid, const MollifierSpec& spec);

/// Zero extension, lattice convolution, restriction to the box.
ScalarField mollify(const ScalarField& f, const MollifierSpec& spec);

/// ||eta_sigma * div(f u) - div(u (eta_sigma * f))||_{L^1(R^d)} on a padded
/// lattice with centered differences. f is extended by zero and u by its wall
/// values, which is the zero extension for velocities obeying no-slip.
double commutator_error(const ScalarField& f, const VectorField& u, const MollifierSpec& spec);

/// Quadrature L^2 norm of u plus face-difference L^2 norm of its gradient.
double h1_norm(const VectorField& u);
/// Quadrature L^2 norm over the box.
double l2_norm(const ScalarField& f);

}  // namespace twofluid
