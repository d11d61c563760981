#pragma once

#include "twofluid/core.hpp"

#include <Eigen/Core>

#include <array>
#include <vector>

namespace twofluid {

/// Galerkin coefficients, one row per mode and one column per velocity
/// component.
using SpectralCoeffs = Eigen::MatrixXd;

/// Dirichlet eigenfunctions of the Laplacian on the box, sampled at the grid
/// nodes. Mode i is prod_a sin(m_a pi x_a / L_a), scaled to unit norm under
/// the grid quadrature, with eigenvalue sum_a (m_a pi / L_a)^2.
class GalerkinBasis {
 public:
  const Grid& grid() const noexcept { return grid_; }
  int size() const noexcept { return static_cast<int>(eigenvalues_.size()); }

  const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }
  double eigenvalue(int i) const { return eigenvalues_[i]; }
  const std::array<int, 2>& multi_index(int i) const { return indices_[static_cast<std::size_t>(i)]; }

  /// nodes x k table of mode values; rows of wall nodes are exactly zero.
  const Eigen::MatrixXd& modes() const noexcept { return modes_; }
  /// nodes x k table of the analytic partial derivative along `axis`.
  const Eigen::MatrixXd& mode_derivatives(int axis) const {
    return derivatives_[static_cast<std::size_t>(axis)];
  }

  /// Quadrature of d_a psi_i d_b psi_j, a k x k matrix.
  Eigen::MatrixXd derivative_gram(int axis_a, int axis_b) const;

  /// Quadrature of weight * psi_i * psi_j.
  Eigen::MatrixXd weighted_gram(const Eigen::ArrayXd& weight) const;

  friend GalerkinBasis build_basis(const Grid& grid, int k);

 private:
  explicit GalerkinBasis(Grid grid) : grid_(std::move(grid)) {}

  Grid grid_;
  Eigen::VectorXd eigenvalues_;
  std::vector<std::array<int, 2>> indices_;
  Eigen::MatrixXd modes_;
  std::array<Eigen::MatrixXd, 2> derivatives_;
};

/// Throws ValidationError when k exceeds the number of interior nodes.
GalerkinBasis build_basis(const Grid& grid, int k);

/// c(i,a) = quadrature of f_a * psi_i.
SpectralCoeffs project(const VectorField& f, const GalerkinBasis& basis);

/// Pointwise sum_i c(i,a) psi_i; exactly zero on the walls.
VectorField reconstruct(const SpectralCoeffs& c, const GalerkinBasis& basis);

/// Analytic partial derivative d_axis u_a of the field represented by c.
Eigen::MatrixXd reconstruct_derivative(const SpectralCoeffs& c, const GalerkinBasis& basis, int axis);

}  // namespace twofluid
