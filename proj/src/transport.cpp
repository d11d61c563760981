#include "twofluid/transport.hpp"

#include <algorithm>
#include <limits>

namespace twofluid {
namespace {

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (a != b) throw ValidationError(std::string(where) + ": fields live on different grids");
}

// Zero-padded copy of nodal values on an (nx + 2 px) x (ny + 2 py) lattice.
struct Padded {
  int px = 0;
  int py = 0;
  Eigen::ArrayXXd values;
};

Padded pad(const Grid& grid, const Eigen::ArrayXd& f, int px, int py) {
  const int nx = grid.nodes_along(0);
  const int ny = grid.dimension() == 2 ? grid.nodes_along(1) : 1;
  Padded out{px, py, Eigen::ArrayXXd::Zero(nx + 2 * px, ny + 2 * py)};
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) out.values(i + px, j + py) = f[grid.flat(i, j)];
  }
  return out;
}

// Padding that repeats the nearest wall value.
Padded pad_clamped(const Grid& grid, const Eigen::ArrayXd& f, int px, int py) {
  const int nx = grid.nodes_along(0);
  const int ny = grid.dimension() == 2 ? grid.nodes_along(1) : 1;
  Padded out{px, py, Eigen::ArrayXXd::Zero(nx + 2 * px, ny + 2 * py)};
  for (int j = 0; j < ny + 2 * py; ++j) {
    const int sj = std::clamp(j - py, 0, ny - 1);
    for (int i = 0; i < nx + 2 * px; ++i) {
      out.values(i, j) = f[grid.flat(std::clamp(i - px, 0, nx - 1), sj)];
    }
  }
  return out;
}

Eigen::ArrayXXd convolve(const Eigen::ArrayXXd& g, const MollifierKernel& kernel) {
  const auto rx = kernel.reach[0];
  const auto ry = kernel.reach[1];
  const auto ex = static_cast<int>(g.rows());
  const auto ey = static_cast<int>(g.cols());
  Eigen::ArrayXXd out = Eigen::ArrayXXd::Zero(ex, ey);
  for (int j = 0; j < ey; ++j) {
    for (int i = 0; i < ex; ++i) {
      double acc = 0.0;
      for (int oy = -ry; oy <= ry; ++oy) {
        const int sj = j - oy;
        if (sj < 0 || sj >= ey) continue;
        for (int ox = -rx; ox <= rx; ++ox) {
          const int si = i - ox;
          if (si < 0 || si >= ex) continue;
          acc += kernel.values(ox + rx, oy + ry) * g(si, sj);
        }
      }
      out(i, j) = kernel.lattice_weight * acc;
    }
  }
  return out;
}

Eigen::ArrayXXd centered_difference(const Eigen::ArrayXXd& g, int axis, double h) {
  const auto ex = static_cast<int>(g.rows());
  const auto ey = static_cast<int>(g.cols());
  Eigen::ArrayXXd out = Eigen::ArrayXXd::Zero(ex, ey);
  auto at = [&](int i, int j) { return (i < 0 || j < 0 || i >= ex || j >= ey) ? 0.0 : g(i, j); };
  for (int j = 0; j < ey; ++j) {
    for (int i = 0; i < ex; ++i) {
      out(i, j) = axis == 0 ? (at(i + 1, j) - at(i - 1, j)) / (2.0 * h) : (at(i, j + 1) - at(i, j - 1)) / (2.0 * h);
    }
  }
  return out;
}

}  // namespace

double admissible_dt(const VectorField& u) {
  const Grid& grid = u.grid();
  double rate = 0.0;
  for (int a = 0; a < grid.dimension(); ++a) {
    rate += 2.0 * u.component(a).abs().maxCoeff() / grid.spacing(a);
  }
  return rate > 0.0 ? 1.0 / rate : std::numeric_limits<double>::infinity();
}

ScalarField divergence(const VectorField& u) {
  const Grid& grid = u.grid();
  Eigen::ArrayXd net = Eigen::ArrayXd::Zero(grid.size());
  for_each_face(grid, [&](Eigen::Index p, Eigen::Index q, int axis, double measure) {
    const double flux = 0.5 * (u.values()(p, axis) + u.values()(q, axis)) * measure;
    net[p] += flux;
    net[q] -= flux;
  });
  // Wall faces.
  for (Eigen::Index p = 0; p < grid.size(); ++p) {
    const auto idx = grid.multi_index(p);
    for (int a = 0; a < grid.dimension(); ++a) {
      const int i = idx[static_cast<std::size_t>(a)];
      if (i != 0 && i != grid.cells(a)) continue;
      double measure = 1.0;
      if (grid.dimension() == 2) {
        const int b = 1 - a;
        const int ib = idx[static_cast<std::size_t>(b)];
        measure = (ib == 0 || ib == grid.cells(b)) ? 0.5 * grid.spacing(b) : grid.spacing(b);
      }
      const double sign = i == 0 ? -1.0 : 1.0;
      net[p] += sign * u.values()(p, a) * measure;
    }
  }
  return ScalarField(grid, net / grid.weights());
}

Eigen::ArrayXd upwind_flux_divergence(const ScalarField& f, const VectorField& u) {
  require_same_grid(f.grid(), u.grid(), "upwind_flux_divergence");
  const Grid& grid = f.grid();
  Eigen::ArrayXd net = Eigen::ArrayXd::Zero(grid.size());
  for_each_face(grid, [&](Eigen::Index p, Eigen::Index q, int axis, double measure) {
    const double uf = 0.5 * (u.values()(p, axis) + u.values()(q, axis));
    const double flux = uf * measure * (uf > 0.0 ? f[p] : f[q]);
    net[p] += flux;
    net[q] -= flux;
  });
  return net / grid.weights();
}

Eigen::ArrayXd nodal_gradient(const ScalarField& f, int axis) {
  const Grid& grid = f.grid();
  const double h = grid.spacing(axis);
  const int last = grid.cells(axis);
  Eigen::ArrayXd g(grid.size());
  for (Eigen::Index p = 0; p < grid.size(); ++p) {
    auto idx = grid.multi_index(p);
    const int i = idx[static_cast<std::size_t>(axis)];
    auto shifted = [&](int di) {
      auto m = idx;
      m[static_cast<std::size_t>(axis)] = i + di;
      return f[grid.flat(m[0], m[1])];
    };
    if (i == 0) {
      g[p] = (shifted(1) - f[p]) / h;
    } else if (i == last) {
      g[p] = (f[p] - shifted(-1)) / h;
    } else {
      g[p] = (shifted(1) - shifted(-1)) / (2.0 * h);
    }
  }
  return g;
}

Eigen::SparseMatrix<double> neumann_stiffness(const Grid& grid) {
  std::vector<Eigen::Triplet<double>> entries;
  for_each_face(grid, [&](Eigen::Index p, Eigen::Index q, int axis, double measure) {
    const double c = measure / grid.spacing(axis);
    entries.emplace_back(p, p, c);
    entries.emplace_back(q, q, c);
    entries.emplace_back(p, q, -c);
    entries.emplace_back(q, p, -c);
  });
  Eigen::SparseMatrix<double> k(grid.size(), grid.size());
  k.setFromTriplets(entries.begin(), entries.end());
  return k;
}

ImplicitDiffusion::ImplicitDiffusion(const Grid& grid, double epsilon, double dt) : grid_(grid) {
  if (!(epsilon >= 0.0)) throw ValidationError("diffusion: epsilon must be nonnegative");
  if (!(dt > 0.0)) throw ValidationError("diffusion: dt must be positive");
  if (epsilon == 0.0) return;
  Eigen::SparseMatrix<double> a = (dt * epsilon) * neumann_stiffness(grid);
  for (Eigen::Index p = 0; p < grid.size(); ++p) a.coeffRef(p, p) += grid.weights()[p];
  solver_ = std::make_shared<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>(a);
  if (solver_->info() != Eigen::Success) throw RuntimeFailure("diffusion: factorization failed");
}

Eigen::ArrayXd ImplicitDiffusion::apply(const Eigen::ArrayXd& f) const {
  if (!solver_) return f;
  const Eigen::VectorXd rhs = (grid_.weights() * f).matrix();
  return solver_->solve(rhs).array();
}

DensityStepper::DensityStepper(const Grid& grid, double epsilon, double dt)
    : grid_(grid), epsilon_(epsilon), dt_(dt), diffusion_(grid, epsilon, dt) {}

Eigen::ArrayXd DensityStepper::advect(const ScalarField& f, const VectorField& u) const {
  require_same_grid(f.grid(), grid_, "advance_density");
  require_same_grid(u.grid(), grid_, "advance_density");
  const double bound = admissible_dt(u);
  if (dt_ > bound) {
    throw StabilityError("advance_density: dt=" + std::to_string(dt_) + " exceeds the admissible step " +
                             std::to_string(bound),
                         bound);
  }
  const Eigen::ArrayXd& w = grid_.weights();
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(grid_.size());
  Eigen::ArrayXd inflow = Eigen::ArrayXd::Zero(grid_.size());
  for_each_face(grid_, [&](Eigen::Index p, Eigen::Index q, int axis, double measure) {
    const double uf = 0.5 * (u.values()(p, axis) + u.values()(q, axis));
    if (uf > 0.0) {
      out[p] += uf * measure;
      inflow[q] += uf * measure * f[p];
    } else if (uf < 0.0) {
      out[q] -= uf * measure;
      inflow[p] -= uf * measure * f[q];
    }
  });
  return f.values() * (1.0 - dt_ * out / w) + dt_ * inflow / w;
}

ScalarField DensityStepper::advance(const ScalarField& f, const VectorField& u) const {
  f.require_nonnegative("advected density");
  return ScalarField(grid_, diffusion_.apply(advect(f, u)));
}

ScalarField DensityStepper::advance_forced(const ScalarField& f, const VectorField& u,
                                           const Eigen::ArrayXd& source) const {
  if (source.size() != grid_.size()) throw ValidationError("advance_density: source size mismatch");
  return ScalarField(grid_, diffusion_.apply(advect(f, u) + dt_ * source));
}

ScalarField advance_density(const ScalarField& f, const VectorField& u, double epsilon, double dt) {
  return DensityStepper(f.grid(), epsilon, dt).advance(f, u);
}

ScalarField advance_density(const ScalarField& f, const VectorField& u, double epsilon, double dt,
                            const Eigen::ArrayXd& source) {
  return DensityStepper(f.grid(), epsilon, dt).advance_forced(f, u, source);
}

ScalarField cutoff_T(const ScalarField& f, double k) {
  if (!(k > 0.0)) throw ValidationError("cutoff: k must be positive");
  return ScalarField(f.grid(), f.values().unaryExpr([k](double z) { return cutoff_T(z, k); }));
}

Renormalization Renormalization::identity() {
  return {[](double z) { return z; }, [](double) { return 1.0; }, [](double) { return 0.0; }};
}

Renormalization Renormalization::square() {
  return {[](double z) { return z * z; }, [](double z) { return 2.0 * z; }, [](double z) { return z * z; }};
}

Renormalization Renormalization::entropy() {
  return {[](double z) { return z > 0.0 ? z * std::log(z) : 0.0; },
          [](double z) { return std::log(z) + 1.0; },
          [](double z) { return z; }};
}

Renormalization Renormalization::truncation(double k) {
  if (!(k > 0.0)) throw ValidationError("cutoff: k must be positive");
  return {[k](double z) { return cutoff_T(z, k); },
          [k](double z) { return cutoff_unit_derivative(z / k); },
          [k](double z) { return z * cutoff_unit_derivative(z / k) - cutoff_T(z, k); }};
}

Renormalization Renormalization::cutoff(double k) {
  if (!(k > 0.0)) throw ValidationError("cutoff: k must be positive");
  return {[k](double z) { return cutoff_b(z, k); },
          [k](double z) { return cutoff_b_derivative(z, k); },
          [k](double z) { return cutoff_T(z, k); }};
}

double renormalization_residual(const std::vector<ScalarField>& densities, const std::vector<VectorField>& velocities,
                                const Renormalization& b, const ScalarField& weight, double dt) {
  if (densities.empty() || velocities.size() + 1 != densities.size()) {
    throw ValidationError("renormalization_residual: one velocity per step required");
  }
  if (!(dt > 0.0)) throw ValidationError("renormalization_residual: dt must be positive");
  const Grid& grid = weight.grid();
  const Eigen::ArrayXd ww = grid.weights() * weight.values();
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < densities.size(); ++s) {
    const ScalarField& f0 = densities[s];
    const ScalarField& f1 = densities[s + 1];
    const VectorField& u = velocities[s];
    require_same_grid(f0.grid(), grid, "renormalization_residual");
    const ScalarField b0(grid, f0.values().unaryExpr(b.value));
    const Eigen::ArrayXd b1 = f1.values().unaryExpr(b.value);
    const Eigen::ArrayXd defect = f0.values().unaryExpr(b.defect);
    const Eigen::ArrayXd local =
        (b1 - b0.values()) / dt + upwind_flux_divergence(b0, u) + defect * divergence(u).values();
    total += dt * std::abs((ww * local).sum());
  }
  return total;
}

double continuity_residual(const std::vector<ScalarField>& densities, const std::vector<VectorField>& velocities,
                           const ScalarField& weight, double dt) {
  return renormalization_residual(densities, velocities, Renormalization::identity(), weight, dt);
}

MollifierKernel mollifier_kernel(const Grid& grid, const MollifierSpec& spec) {
  const double sigma = spec.radius;
  const double h = grid.min_spacing();
  double min_extent = grid.extent(0);
  if (grid.dimension() == 2) min_extent = std::min(min_extent, grid.extent(1));
  if (!(sigma >= 2.0 * h)) {
    throw ValidationError("mollifier radius " + std::to_string(sigma) + " is below two grid spacings (" +
                          std::to_string(2.0 * h) + ")");
  }
  if (!(sigma < 0.25 * min_extent)) {
    throw ValidationError("mollifier radius must stay below a quarter of the box");
  }
  MollifierKernel k;
  k.lattice_weight = grid.lattice_weight();
  for (int a = 0; a < grid.dimension(); ++a) {
    k.reach[static_cast<std::size_t>(a)] = static_cast<int>(std::floor(sigma / grid.spacing(a)));
  }
  const int rx = k.reach[0];
  const int ry = k.reach[1];
  k.values = Eigen::ArrayXXd::Zero(2 * rx + 1, 2 * ry + 1);
  for (int oy = -ry; oy <= ry; ++oy) {
    for (int ox = -rx; ox <= rx; ++ox) {
      const double x = ox * grid.spacing(0);
      const double y = grid.dimension() == 2 ? oy * grid.spacing(1) : 0.0;
      const double r2 = (x * x + y * y) / (sigma * sigma);
      if (r2 < 1.0) k.values(ox + rx, oy + ry) = std::exp(-1.0 / (1.0 - r2));
    }
  }
  k.values /= k.lattice_weight * k.values.sum();
  return k;
}

ScalarField mollify(const ScalarField& f, const MollifierSpec& spec) {
  const Grid& grid = f.grid();
  const MollifierKernel kernel = mollifier_kernel(grid, spec);
  const Padded padded = pad(grid, f.values(), kernel.reach[0], kernel.reach[1]);
  const Eigen::ArrayXXd smooth = convolve(padded.values, kernel);
  Eigen::ArrayXd out(grid.size());
  for (Eigen::Index p = 0; p < grid.size(); ++p) {
    const auto idx = grid.multi_index(p);
    out[p] = smooth(idx[0] + padded.px, idx[1] + padded.py);
  }
  return ScalarField(grid, std::move(out));
}

double commutator_error(const ScalarField& f, const VectorField& u, const MollifierSpec& spec) {
  require_same_grid(f.grid(), u.grid(), "commutator_error");
  const Grid& grid = f.grid();
  const MollifierKernel kernel = mollifier_kernel(grid, spec);
  const int px = kernel.reach[0] + 2;
  const int py = grid.dimension() == 2 ? kernel.reach[1] + 2 : 0;

  const Eigen::ArrayXXd fe = pad(grid, f.values(), px, py).values;
  const Eigen::ArrayXXd smooth_f = convolve(fe, kernel);
  Eigen::ArrayXXd div_flux = Eigen::ArrayXXd::Zero(fe.rows(), fe.cols());
  Eigen::ArrayXXd div_transported = Eigen::ArrayXXd::Zero(fe.rows(), fe.cols());
  for (int a = 0; a < grid.dimension(); ++a) {
    const Eigen::ArrayXd ua = u.component(a);
    const Eigen::ArrayXXd ue = pad_clamped(grid, ua, px, py).values;
    div_flux += centered_difference(fe * ue, a, grid.spacing(a));
    div_transported += centered_difference(ue * smooth_f, a, grid.spacing(a));
  }
  return grid.lattice_weight() * (convolve(div_flux, kernel) - div_transported).abs().sum();
}

double h1_norm(const VectorField& u) {
  const Grid& grid = u.grid();
  double sum = (grid.weights() * u.values().square().rowwise().sum()).sum();
  for_each_face(grid, [&](Eigen::Index p, Eigen::Index q, int axis, double measure) {
    const double h = grid.spacing(axis);
    for (int c = 0; c < u.dimension(); ++c) {
      const double g = (u.values()(q, c) - u.values()(p, c)) / h;
      sum += measure * h * g * g;
    }
  });
  return std::sqrt(sum);
}

double l2_norm(const ScalarField& f) {
  return std::sqrt((f.grid().weights() * f.values().square()).sum());
}

}  // namespace twofluid
