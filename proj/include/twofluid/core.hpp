#pragma once

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

namespace twofluid {

// ---------------------------------------------------------------------------
// Error hierarchy. The CLI maps these onto exit codes 1 (validation),
// 2 (runtime: stability / fixed point) and 3 (I/O).
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class RuntimeFailure : public Error {
 public:
  using Error::Error;
};

/// Raised when a step would violate the advective positivity bound.
class StabilityError : public RuntimeFailure {
 public:
  StabilityError(const std::string& what, double admissible_dt)
      : RuntimeFailure(what), admissible_dt_(admissible_dt) {}
  double admissible_dt() const noexcept { return admissible_dt_; }

 private:
  double admissible_dt_;
};

class FixedPointError : public RuntimeFailure {
 public:
  FixedPointError(const std::string& what, double residual, int iterations)
      : RuntimeFailure(what), residual_(residual), iterations_(iterations) {}
  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Grid
// ---------------------------------------------------------------------------

/// Uniform vertex grid on the box (0,L_1) x ... x (0,L_d), d in {1,2}.
///
/// Axis a carries cells(a) intervals of width spacing(a) = extent(a)/cells(a)
/// and cells(a)+1 nodes, the first and last of which sit on the walls.
/// Nodes are flattened with the x index running fastest. Copies share one
/// immutable description, so passing grids by value is cheap.
class Grid {
 public:
  static constexpr int kMinCells = 8;

  Grid(int dimension, std::array<double, 2> extent, std::array<int, 2> cells);

  static Grid line(double length, int cells) { return Grid(1, {length, 1.0}, {cells, 1}); }
  static Grid box(double lx, double ly, int nx, int ny) { return Grid(2, {lx, ly}, {nx, ny}); }

  int dimension() const noexcept { return data_->dimension; }
  double extent(int axis) const { return data_->extent[static_cast<std::size_t>(axis)]; }
  int cells(int axis) const { return data_->cells[static_cast<std::size_t>(axis)]; }
  int nodes_along(int axis) const { return cells(axis) + 1; }
  double spacing(int axis) const { return data_->spacing[static_cast<std::size_t>(axis)]; }
  Eigen::Index size() const noexcept { return data_->size; }

  std::array<int, 2> multi_index(Eigen::Index node) const;
  Eigen::Index flat(int i, int j = 0) const { return i + static_cast<Eigen::Index>(nodes_along(0)) * j; }
  double coordinate(Eigen::Index node, int axis) const;
  bool on_boundary(Eigen::Index node) const;

  /// Tensor-product trapezoid weights; they are also the dual-cell volumes.
  const Eigen::ArrayXd& weights() const noexcept { return data_->weights; }
  double volume() const;
  /// Product of spacings; the weight of one node of the unbounded lattice.
  double lattice_weight() const;
  /// Smallest spacing over the active axes.
  double min_spacing() const;

  friend bool operator==(const Grid& a, const Grid& b);
  friend bool operator!=(const Grid& a, const Grid& b) { return !(a == b); }

 private:
  struct Data {
    int dimension = 1;
    std::array<double, 2> extent{1.0, 1.0};
    std::array<int, 2> cells{1, 1};
    std::array<double, 2> spacing{1.0, 1.0};
    Eigen::Index size = 0;
    Eigen::ArrayXd weights;
  };
  std::shared_ptr<const Data> data_;
};

/// Visit every interior face of the dual mesh: the segment between
/// neighbouring nodes p and q = p + e_axis. `measure` is the (d-1)-volume of
/// the shared dual-cell face (1 in 1D).
template <typename Visitor>
void for_each_face(const Grid& grid, Visitor&& visit) {
  const int nx = grid.nodes_along(0);
  const int ny = grid.dimension() == 2 ? grid.nodes_along(1) : 1;
  auto dual = [&](int idx, int axis) {
    const int last = grid.nodes_along(axis) - 1;
    const double h = grid.spacing(axis);
    return (idx == 0 || idx == last) ? 0.5 * h : h;
  };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Eigen::Index p = grid.flat(i, j);
      if (i + 1 < nx) {
        const double measure = grid.dimension() == 2 ? dual(j, 1) : 1.0;
        visit(p, grid.flat(i + 1, j), 0, measure);
      }
      if (grid.dimension() == 2 && j + 1 < ny) {
        visit(p, grid.flat(i, j + 1), 1, dual(i, 0));
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Fields
// ---------------------------------------------------------------------------

template <typename Scalar>
class ScalarFieldT {
 public:
  using Values = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  ScalarFieldT(Grid grid, Values values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
      throw ValidationError("scalar field: value count does not match grid node count");
    }
  }

  static ScalarFieldT zeros(const Grid& grid) { return ScalarFieldT(grid, Values::Zero(grid.size())); }
  static ScalarFieldT constant(const Grid& grid, Scalar c) {
    return ScalarFieldT(grid, Values::Constant(grid.size(), c));
  }

  /// Density-role construction: every node must be nonnegative.
  static ScalarFieldT density(const Grid& grid, Values values) {
    ScalarFieldT f(grid, std::move(values));
    f.require_nonnegative("density");
    return f;
  }

  /// Sample f(x, y) at the nodes (y is 0 in 1D).
  template <typename Fn>
  static ScalarFieldT sample(const Grid& grid, Fn&& fn) {
    Values v(grid.size());
    for (Eigen::Index p = 0; p < grid.size(); ++p) {
      const double y = grid.dimension() == 2 ? grid.coordinate(p, 1) : 0.0;
      v[p] = static_cast<Scalar>(fn(grid.coordinate(p, 0), y));
    }
    return ScalarFieldT(grid, std::move(v));
  }

  void require_nonnegative(const char* role) const {
    for (Eigen::Index p = 0; p < values_.size(); ++p) {
      if (!(values_[p] >= Scalar(0))) {
        throw ValidationError(std::string(role) + " field has a negative or NaN node value");
      }
    }
  }

  const Grid& grid() const noexcept { return grid_; }
  const Values& values() const noexcept { return values_; }
  Values& values() noexcept { return values_; }
  Scalar operator[](Eigen::Index p) const { return values_[p]; }
  Eigen::Index size() const noexcept { return values_.size(); }

 private:
  Grid grid_;
  Values values_;
};

/// One component per spatial axis; values are stored nodes x dimension.
template <typename Scalar>
class VectorFieldT {
 public:
  using Values = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  VectorFieldT(Grid grid, Values values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.rows() != grid_.size() || values_.cols() != grid_.dimension()) {
      throw ValidationError("vector field: shape must be (grid nodes) x (grid dimension)");
    }
  }

  static VectorFieldT zeros(const Grid& grid) {
    return VectorFieldT(grid, Values::Zero(grid.size(), grid.dimension()));
  }

  const Grid& grid() const noexcept { return grid_; }
  const Values& values() const noexcept { return values_; }
  Values& values() noexcept { return values_; }
  auto component(int axis) const { return values_.col(axis); }
  auto component(int axis) { return values_.col(axis); }
  int dimension() const noexcept { return static_cast<int>(values_.cols()); }

  /// True when every component is exactly zero on the walls.
  bool vanishes_on_boundary() const {
    for (Eigen::Index p = 0; p < grid_.size(); ++p) {
      if (grid_.on_boundary(p) && (values_.row(p) != Scalar(0)).any()) return false;
    }
    return true;
  }

  Scalar max_abs() const { return values_.size() == 0 ? Scalar(0) : values_.abs().maxCoeff(); }

 private:
  Grid grid_;
  Values values_;
};

using ScalarField = ScalarFieldT<double>;
using VectorField = VectorFieldT<double>;

/// Grid quadrature of a scalar field over the box.
template <typename Scalar>
Scalar total_mass(const ScalarFieldT<Scalar>& f) {
  return (f.grid().weights().template cast<Scalar>() * f.values()).sum();
}

// ---------------------------------------------------------------------------
// State and parameters
// ---------------------------------------------------------------------------

/// (rho, n, u) at one instant. Densities are nonnegative, the velocity obeys
/// the no-slip wall condition, and all three share one grid.
class FluidState {
 public:
  FluidState(ScalarField rho, ScalarField n, VectorField u, double time = 0.0);

  static FluidState at_rest(const Grid& grid, double rho, double n);

  const Grid& grid() const noexcept { return rho_.grid(); }
  const ScalarField& rho() const noexcept { return rho_; }
  const ScalarField& n() const noexcept { return n_; }
  const VectorField& u() const noexcept { return u_; }
  double time() const noexcept { return time_; }

  /// d = rho + n
  Eigen::ArrayXd total_density() const { return rho_.values() + n_.values(); }

 private:
  ScalarField rho_;
  ScalarField n_;
  VectorField u_;
  double time_;
};

struct ModelParams {
  double mu = 1.0;      // shear viscosity
  double lambda = 0.0;  // second viscosity
  double gamma = 2.0;   // rho-pressure exponent
  double alpha = 2.0;   // n-pressure exponent
  double beta = 5.0;    // artificial-pressure exponent
  double epsilon = 0.0; // artificial viscosity
  double delta = 0.0;   // artificial-pressure weight
  std::optional<double> c0;  // comparability constant

  /// Throws ValidationError on a violated type invariant.
  void check() const;
  /// First violated type invariant, or empty.
  std::string structural_violation() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

enum class ValidationMode { comparability, window };

struct Verdict {
  bool accepted = false;
  std::string reason;  // name of the first violated inequality when rejected
  explicit operator bool() const noexcept { return accepted; }
};

/// Classify parameters against the two existence branches: the comparability
/// branch (alpha >= 1, gamma > 9/5, c0 supplied) and the exponent window
/// (alpha, gamma > 9/5 and alpha strictly inside the six-sided window).
Verdict validate_params(const ModelParams& p, ValidationMode mode);

std::string to_string(ValidationMode mode);
ValidationMode parse_validation_mode(const std::string& text);

}  // namespace twofluid
