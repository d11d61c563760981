#include "twofluid/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

namespace twofluid {
namespace {

// sin(m pi i / N) and cos(m pi i / N) with the angle reduced in integers.
double sin_ratio(long m, long i, long n) {
  const long r = (m * i) % (2 * n);
  if (r == 0 || r == n) return 0.0;
  return std::sin(std::numbers::pi * static_cast<double>(r) / static_cast<double>(n));
}

double cos_ratio(long m, long i, long n) {
  const long r = (m * i) % (2 * n);
  return std::cos(std::numbers::pi * static_cast<double>(r) / static_cast<double>(n));
}

}  // namespace

GalerkinBasis build_basis(const Grid& grid, int k) {
  const int dim = grid.dimension();
  long interior = 1;
  for (int a = 0; a < dim; ++a) interior *= grid.cells(a) - 1;
  if (k < 1 || k > interior) {
    throw ValidationError("build_basis: k=" + std::to_string(k) + " outside [1, " + std::to_string(interior) +
                          "] (interior node count)");
  }

  // The k lowest modes never need m_a > k.
  struct Candidate {
    double eigenvalue;
    std::array<int, 2> m;
  };
  std::vector<Candidate> candidates;
  const int mx = std::min(grid.cells(0) - 1, k);
  const int my = dim == 2 ? std::min(grid.cells(1) - 1, k) : 1;
  for (int m1 = 1; m1 <= mx; ++m1) {
    for (int m2 = 1; m2 <= my; ++m2) {
      double lam = 0.0;
      const std::array<int, 2> m{m1, dim == 2 ? m2 : 0};
      for (int a = 0; a < dim; ++a) {
        const double wave = std::numbers::pi / grid.extent(a);
        lam += static_cast<double>(m[static_cast<std::size_t>(a)]) * m[static_cast<std::size_t>(a)] * wave * wave;
      }
      candidates.push_back({lam, m});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
    return std::tie(x.eigenvalue, x.m) < std::tie(y.eigenvalue, y.m);
  });
  candidates.resize(static_cast<std::size_t>(k));

  GalerkinBasis basis(grid);
  const Eigen::Index nodes = grid.size();
  basis.eigenvalues_.resize(k);
  basis.modes_.resize(nodes, k);
  for (int a = 0; a < dim; ++a) basis.derivatives_[static_cast<std::size_t>(a)].resize(nodes, k);

  for (int col = 0; col < k; ++col) {
    const auto& cand = candidates[static_cast<std::size_t>(col)];
    basis.eigenvalues_[col] = cand.eigenvalue;
    basis.indices_.push_back(cand.m);

    for (Eigen::Index p = 0; p < nodes; ++p) {
      const auto idx = grid.multi_index(p);
      std::array<double, 2> s{1.0, 1.0};
      std::array<double, 2> c{1.0, 1.0};
      for (int a = 0; a < dim; ++a) {
        const auto ua = static_cast<std::size_t>(a);
        s[ua] = sin_ratio(cand.m[ua], idx[ua], grid.cells(a));
        c[ua] = cos_ratio(cand.m[ua], idx[ua], grid.cells(a)) * cand.m[ua] * std::numbers::pi / grid.extent(a);
      }
      basis.modes_(p, col) = s[0] * s[1];
      basis.derivatives_[0](p, col) = c[0] * s[1];
      if (dim == 2) basis.derivatives_[1](p, col) = s[0] * c[1];
    }

    const double norm = std::sqrt((grid.weights().matrix().asDiagonal() * basis.modes_.col(col)).dot(basis.modes_.col(col)));
    basis.modes_.col(col) /= norm;
    for (int a = 0; a < dim; ++a) basis.derivatives_[static_cast<std::size_t>(a)].col(col) /= norm;
  }
  return basis;
}

Eigen::MatrixXd GalerkinBasis::derivative_gram(int axis_a, int axis_b) const {
  const auto& da = mode_derivatives(axis_a);
  const auto& db = mode_derivatives(axis_b);
  return da.transpose() * grid_.weights().matrix().asDiagonal() * db;
}

Eigen::MatrixXd GalerkinBasis::weighted_gram(const Eigen::ArrayXd& weight) const {
  const Eigen::VectorXd w = (grid_.weights() * weight).matrix();
  return modes_.transpose() * w.asDiagonal() * modes_;
}

SpectralCoeffs project(const VectorField& f, const GalerkinBasis& basis) {
  if (f.grid() != basis.grid()) throw ValidationError("project: field and basis grids differ");
  return basis.modes().transpose() * basis.grid().weights().matrix().asDiagonal() * f.values().matrix();
}

VectorField reconstruct(const SpectralCoeffs& c, const GalerkinBasis& basis) {
  const int dim = basis.grid().dimension();
  if (c.rows() != basis.size() || c.cols() != dim) {
    throw ValidationError("reconstruct: coefficient shape does not match basis");
  }
  return VectorField(basis.grid(), (basis.modes() * c).array());
}

Eigen::MatrixXd reconstruct_derivative(const SpectralCoeffs& c, const GalerkinBasis& basis, int axis) {
  return basis.mode_derivatives(axis) * c;
}

}  // namespace twofluid
