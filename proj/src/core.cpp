#include "twofluid/core.hpp"

#include <algorithm>
#include <sstream>

namespace twofluid {

Grid::Grid(int dimension, std::array<double, 2> extent, std::array<int, 2> cells) {
  if (dimension != 1 && dimension != 2) {
    throw ValidationError("grid: dimension must be 1 or 2");
  }
  auto data = std::make_shared<Data>();
  data->dimension = dimension;
  data->size = 1;
  for (int a = 0; a < 2; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    if (a >= dimension) {
      data->extent[ua] = 1.0;
      data->cells[ua] = 0;
      data->spacing[ua] = 1.0;
      continue;
    }
    if (!(extent[ua] > 0.0) || !std::isfinite(extent[ua])) {
      throw ValidationError("grid: extent must be positive and finite");
    }
    if (cells[ua] < kMinCells) {
      throw ValidationError("grid: at least " + std::to_string(kMinCells) + " cells per axis required");
    }
    data->extent[ua] = extent[ua];
    data->cells[ua] = cells[ua];
    data->spacing[ua] = extent[ua] / cells[ua];
    data->size *= cells[ua] + 1;
  }

  data->weights.resize(data->size);
  const int nx = data->cells[0] + 1;
  const int ny = dimension == 2 ? data->cells[1] + 1 : 1;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      double w = (i == 0 || i == nx - 1) ? 0.5 * data->spacing[0] : data->spacing[0];
      if (dimension == 2) {
        w *= (j == 0 || j == ny - 1) ? 0.5 * data->spacing[1] : data->spacing[1];
      }
      data->weights[i + static_cast<Eigen::Index>(nx) * j] = w;
    }
  }
  data_ = std::move(data);
}

std::array<int, 2> Grid::multi_index(Eigen::Index node) const {
  const auto nx = static_cast<Eigen::Index>(nodes_along(0));
  return {static_cast<int>(node % nx), static_cast<int>(node / nx)};
}

double Grid::coordinate(Eigen::Index node, int axis) const {
  const auto idx = multi_index(node)[static_cast<std::size_t>(axis)];
  // The last node is placed exactly on the wall.
  if (idx == cells(axis)) return extent(axis);
  return idx * spacing(axis);
}

bool Grid::on_boundary(Eigen::Index node) const {
  const auto idx = multi_index(node);
  for (int a = 0; a < dimension(); ++a) {
    const int i = idx[static_cast<std::size_t>(a)];
    if (i == 0 || i == cells(a)) return true;
  }
  return false;
}

double Grid::volume() const {
  double v = extent(0);
  if (dimension() == 2) v *= extent(1);
  return v;
}

double Grid::lattice_weight() const {
  double v = spacing(0);
  if (dimension() == 2) v *= spacing(1);
  return v;
}

double Grid::min_spacing() const {
  return dimension() == 2 ? std::min(spacing(0), spacing(1)) : spacing(0);
}

bool operator==(const Grid& a, const Grid& b) {
  if (a.data_ == b.data_) return true;
  if (a.dimension() != b.dimension()) return false;
  for (int ax = 0; ax < a.dimension(); ++ax) {
    if (a.extent(ax) != b.extent(ax) || a.cells(ax) != b.cells(ax)) return false;
  }
  return true;
}

FluidState::FluidState(ScalarField rho, ScalarField n, VectorField u, double time)
    : rho_(std::move(rho)), n_(std::move(n)), u_(std::move(u)), time_(time) {
  if (rho_.grid() != n_.grid() || rho_.grid() != u_.grid()) {
    throw ValidationError("fluid state: rho, n and u must share one grid");
  }
  rho_.require_nonnegative("rho");
  n_.require_nonnegative("n");
  if (!u_.vanishes_on_boundary()) {
    throw ValidationError("fluid state: velocity must vanish on the walls");
  }
  if (!(time_ >= 0.0)) throw ValidationError("fluid state: time must be nonnegative");
}

FluidState FluidState::at_rest(const Grid& grid, double rho, double n) {
  return FluidState(ScalarField::constant(grid, rho), ScalarField::constant(grid, n), VectorField::zeros(grid));
}

std::string ModelParams::structural_violation() const {
  if (!(mu > 0.0)) return "mu>0 fails";
  if (!(2.0 * mu + lambda >= 0.0)) return "2mu+lambda>=0 fails";
  if (!(gamma >= 1.0)) return "gamma>=1 fails";
  if (!(alpha >= 1.0)) return "alpha>=1 fails";
  if (!(epsilon >= 0.0)) return "epsilon>=0 fails";
  if (!(delta >= 0.0)) return "delta>=0 fails";
  if (c0 && !(*c0 >= 1.0)) return "c0>=1 fails";
  if (delta > 0.0 && !(beta > std::max({4.0, alpha, gamma}))) return "beta>max{4,alpha,gamma} fails";
  return {};
}

void ModelParams::check() const {
  if (auto v = structural_violation(); !v.empty()) throw ValidationError("model parameters: " + v);
}

Verdict validate_params(const ModelParams& p, ValidationMode mode) {
  if (auto v = p.structural_violation(); !v.empty()) return {false, v};
  const double g = p.gamma;
  const double a = p.alpha;
  constexpr double kNineFifths = 9.0 / 5.0;

  if (mode == ValidationMode::comparability) {
    if (!(a >= 1.0)) return {false, "α≥1 fails"};
    if (!(g > kNineFifths)) return {false, "γ>9/5 fails"};
    if (!p.c0) return {false, "c0 missing"};
    return {true, {}};
  }

  if (!(g > kNineFifths)) return {false, "γ>9/5 fails"};
  if (!(a > kNineFifths)) return {false, "α>9/5 fails"};
  if (!(3.0 * g / 4.0 < a)) return {false, "3γ/4<α fails"};
  if (!(g - 1.0 < a)) return {false, "γ-1<α fails"};
  if (!(3.0 * (g + 1.0) / 5.0 < a)) return {false, "3(γ+1)/5<α fails"};
  if (!(a < 4.0 * g / 3.0)) return {false, "α<4γ/3 fails"};
  if (!(a < g + 1.0)) return {false, "α<γ+1 fails"};
  if (!(a < 5.0 * g / 3.0 - 1.0)) return {false, "α<5γ/3-1 fails"};
  return {true, {}};
}

std::string to_string(ValidationMode mode) {
  return mode == ValidationMode::comparability ? "comparability" : "window";
}

ValidationMode parse_validation_mode(const std::string& text) {
  if (text == "comparability") return ValidationMode::comparability;
  if (text == "window") return ValidationMode::window;
  throw ValidationError("unknown validation mode '" + text + "'");
}

}  // namespace twofluid
