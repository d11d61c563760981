#include "doctest.h"

#include "twofluid/harness.hpp"

#include <cmath>
#include <numbers>

using namespace twofluid;

namespace {

ModelParams regularized(double eps, double delta) {
  ModelParams p;
  p.epsilon = eps;
  p.delta = delta;
  return p;
}

LadderBase small_base() {
  LadderBase b{Grid::line(std::numbers::pi, 96), {}, {}, 16, 1.0, 1e-2, 1, {}, {}};
  b.initial.profile = ProfileFamily::mixture;
  b.initial.rho_amplitude = 0.3;
  b.initial.n_amplitude = 0.3;
  b.initial.momentum_amplitude = 0.5;
  b.initial.mollifier_radius = 4.0 * b.grid.spacing(0);
  b.params.delta = 1e-3;
  b.modes = 8;
  b.t_final = 0.2;
  b.dt = 5e-3;
  b.stride = 8;
  return b;
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("profile family names") {
    for (auto f : {ProfileFamily::constant, ProfileFamily::bump, ProfileFamily::mixture}) {
      CHECK(parse_profile_family(to_string(f)) == f);
    }
    CHECK_THROWS_AS(parse_profile_family("gaussian"), ValidationError);
    CHECK(parse_ladder_kind("basis_k") == LadderKind::basis_k);
    CHECK(to_string(LadderKind::delta) == "delta");
    CHECK_THROWS_AS(parse_ladder_kind("mu"), ValidationError);
  }

  TEST_CASE("constant initial data inside the clamp band are untouched") {
    const Grid g = Grid::line(1.0, 64);
    const FluidState s = make_initial(InitialSpec{}, g, regularized(0.0, 1e-3));
    CHECK((s.rho().values() == 1.0).all());
    CHECK((s.n().values() == 1.0).all());
    CHECK(s.u().max_abs() == 0.0);
  }

  TEST_CASE("vacuum regions are lifted to exactly delta") {
    const Grid g = Grid::line(1.0, 64);
    InitialSpec spec;
    spec.vacuum_fraction = 0.3;
    const FluidState s = make_initial(spec, g, regularized(0.0, 1e-3));
    for (Eigen::Index p = 0; p < g.size(); ++p) {
      if (g.coordinate(p, 0) < 0.3) {
        CHECK(s.rho()[p] == 1e-3);
      } else {
        CHECK(s.rho()[p] == 1.0);
      }
    }
  }

  TEST_CASE("clamping keeps densities in the band and the comparability sandwich") {
    const Grid g = Grid::line(1.0, 128);
    InitialSpec spec;
    spec.profile = ProfileFamily::bump;
    spec.rho_level = 1e-4;
    spec.rho_amplitude = 1.5;
    spec.n_ratio = 2.0;
    spec.c0 = 2.0;
    const ModelParams p = regularized(0.0, 1e-3);
    const FluidState s = make_initial(spec, g, p);
    const double lo = p.delta;
    const double hi = std::pow(p.delta, -1.0 / (2.0 * p.beta));
    CHECK(s.rho().values().minCoeff() >= lo);
    CHECK(s.rho().values().maxCoeff() <= hi);
    CHECK(s.n().values().minCoeff() >= lo);
    CHECK(s.n().values().maxCoeff() == hi);
    CHECK((s.n().values() <= 2.0 * s.rho().values()).all());
    CHECK((s.rho().values() / 2.0 <= s.n().values()).all());
  }

  TEST_CASE("regularized velocity") {
    const Grid g = Grid::line(std::numbers::pi, 256);
    InitialSpec spec;
    spec.momentum_amplitude = 0.4;
    spec.rho_level = 1.0;
    spec.n_level = 1.25;
    const ModelParams p = regularized(0.0, 0.05);
    const FluidState s = make_initial(spec, g, p);
    CHECK(s.u().vanishes_on_boundary());
    const Eigen::Index mid = g.size() / 2;
    CHECK(s.u().values()(mid, 0) == doctest::Approx(0.4 / 1.5).epsilon(1e-2));

    ModelParams unresolved = regularized(0.0, 1e-3);
    CHECK_THROWS_AS(make_initial(spec, g, unresolved), ValidationError);
    spec.mollifier_radius = 4.0 * g.spacing(0);
    CHECK_NOTHROW(make_initial(spec, g, unresolved));
  }

  TEST_CASE("initial data validation") {
    const Grid g = Grid::line(1.0, 32);
    InitialSpec spec;
    spec.vacuum_fraction = 1.0;
    CHECK_THROWS_AS(make_initial(spec, g, ModelParams{}), ValidationError);
    spec = InitialSpec{};
    spec.rho_level = -1.0;
    CHECK_THROWS_AS(make_initial(spec, g, ModelParams{}), ValidationError);
    CHECK_THROWS_AS(make_initial(InitialSpec{}, g, regularized(0.0, 1.0)), ValidationError);
  }

  TEST_CASE("equilibrium run keeps every residual at round-off") {
    const Grid g = Grid::line(std::numbers::pi, 64);
    const GalerkinBasis b = build_basis(g, 6);
    ModelParams p = regularized(0.05, 1e-3);
    p.c0 = 2.0;
    const RunResult r = run_simulation(FluidState::at_rest(g, 1.0, 1.5), p, b, 0.5, 0.05, 3);
    CHECK(r.completed);
    CHECK(r.steps_taken == 10);
    CHECK(r.snapshots.size() == 5);  // t = 0, 0.15, 0.3, 0.45 and the final state
    CHECK(r.time_reached == doctest::Approx(0.5));
    for (double x : r.step_residuals) CHECK(std::abs(x) <= 1e-12);
    for (const auto& row : r.series) CHECK(std::abs(row.residual) <= 1e-12);
    CHECK(*r.report.comparability_margin <= 0.0);
    CHECK(r.report.reduction_metric <= 1e-12);
    CHECK(r.report.energy.size() == r.snapshots.size());
    CHECK(r.report.convex_ratio_rho.size() == r.snapshots.size());
  }

  TEST_CASE("runs are deterministic") {
    const LadderBase b = small_base();
    const GalerkinBasis basis = build_basis(b.grid, b.modes);
    const FluidState init = make_initial(b.initial, b.grid, b.params);
    const RunResult r1 = run_simulation(init, b.params, basis, 0.1, 5e-3, 4);
    const RunResult r2 = run_simulation(init, b.params, basis, 0.1, 5e-3, 4);
    REQUIRE(r1.snapshots.size() == r2.snapshots.size());
    for (std::size_t i = 0; i < r1.snapshots.size(); ++i) {
      CHECK((r1.snapshots[i].rho().values() == r2.snapshots[i].rho().values()).all());
      CHECK((r1.snapshots[i].u().values() == r2.snapshots[i].u().values()).all());
    }
    CHECK(r1.step_residuals == r2.step_residuals);
  }

  TEST_CASE("run preconditions") {
    const Grid g = Grid::line(std::numbers::pi, 64);
    const GalerkinBasis b = build_basis(g, 4);
    const FluidState rest = FluidState::at_rest(g, 1.0, 1.0);
    CHECK_THROWS_AS(run_simulation(rest, ModelParams{}, b, 0.5, 0.04, 1), ValidationError);
    CHECK_THROWS_AS(run_simulation(rest, ModelParams{}, b, 0.5, 0.05, 0), ValidationError);

    SpectralCoeffs c = SpectralCoeffs::Zero(4, 1);
    c(0, 0) = 3.0;
    const FluidState fast(ScalarField::constant(g, 1.0), ScalarField::constant(g, 1.0), reconstruct(c, b));
    CHECK_THROWS_AS(run_simulation(fast, ModelParams{}, b, 1.0, 0.5, 1), StabilityError);
  }

  TEST_CASE("a failing step ends the run early with a record") {
    const Grid g = Grid::line(std::numbers::pi, 64);
    const GalerkinBasis b = build_basis(g, 4);
    SpectralCoeffs c = SpectralCoeffs::Zero(4, 1);
    c(0, 0) = 0.5;
    const FluidState s(ScalarField::constant(g, 1.0), ScalarField::constant(g, 1.0), reconstruct(c, b));
    const RunResult r = run_simulation(s, ModelParams{}, b, 0.1, 0.01, 1, StepOptions{1e-15, 2});
    CHECK_FALSE(r.completed);
    CHECK(r.failure.find("fixed point") != std::string::npos);
    CHECK(r.steps_taken == 0);
    CHECK(r.snapshots.size() == 1);
    CHECK(r.time_reached == 0.0);
  }

  TEST_CASE("inviscid-limit run never gains energy beyond its residual") {
    const Grid g = Grid::line(std::numbers::pi, 128);
    const GalerkinBasis b = build_basis(g, 8);
    SpectralCoeffs c = SpectralCoeffs::Zero(8, 1);
    c(0, 0) = 1e-3;
    const FluidState s(ScalarField::constant(g, 1.0), ScalarField::constant(g, 1.0), reconstruct(c, b));
    const double dt = 0.01;
    const RunResult r = run_simulation(s, ModelParams{}, b, 1.0, dt, 10);
    REQUIRE(r.completed);
    for (std::size_t i = 0; i + 1 < r.step_energy.size(); ++i) {
      CHECK(r.step_energy[i + 1] - r.step_energy[i] <= dt * std::abs(r.step_residuals[i]) + 1e-15);
    }
    CHECK(r.step_energy.back() < r.step_energy.front());
  }

  TEST_CASE("comparability is propagated by a viscous run") {
    LadderBase base = small_base();
    base.initial.n_ratio = 2.0;
    base.params.c0 = 2.0;
    base.params.epsilon = 1e-2;
    const GalerkinBasis basis = build_basis(base.grid, base.modes);
    const FluidState init = make_initial(base.initial, base.grid, base.params);
    const RunResult r = run_simulation(init, base.params, basis, 0.2, 5e-3, 4);
    REQUIRE(r.completed);
    for (double m : r.report.comparability_series) CHECK(m <= 1e-10);
  }

  TEST_CASE("ladder argument validation") {
    const LadderBase b = small_base();
    CHECK_THROWS_AS(ladder(LadderKind::epsilon, {0.1, 0.01}, b), ValidationError);
    CHECK_THROWS_AS(ladder(LadderKind::epsilon, {0.01, 0.1, 0.001}, b), ValidationError);
    CHECK_THROWS_AS(ladder(LadderKind::basis_k, {8, 4, 16}, b), ValidationError);
    CHECK_THROWS_AS(ladder(LadderKind::basis_k, {4, 6.5, 8}, b), ValidationError);
  }

  TEST_CASE("degenerate ladder has zero differences") {
    LadderBase b = small_base();
    b.t_final = 0.05;
    const LadderResult r = ladder(LadderKind::epsilon, {0.01, 0.01, 0.01}, b);
    CHECK_FALSE(r.partial);
    REQUIRE(r.rungs.size() == 3);
    for (const RungMetrics& rung : r.rungs) {
      CHECK(rung.reduction_metric == 0.0);
      CHECK(rung.llogl_difference == 0.0);
      CHECK(rung.flux_pairing_difference == 0.0);
    }
    CHECK(r.monotone.at("reduction_metric"));
  }

  TEST_CASE("epsilon ladder contracts towards the reference rung") {
    const LadderResult r = ladder(LadderKind::epsilon, {1e-1, 1e-2, 1e-3}, small_base());
    REQUIRE_FALSE(r.partial);
    CHECK(r.rungs[0].reduction_metric > r.rungs[1].reduction_metric);
    CHECK(r.rungs[1].reduction_metric > r.rungs[2].reduction_metric);
    CHECK(r.rungs[2].reduction_metric == 0.0);
    CHECK(r.cauchy_ratios.size() == 1);
    CHECK(r.monotone.at("reduction_metric"));
  }

  TEST_CASE("delta ladder scales the artificial pressure linearly") {
    LadderBase b = small_base();
    b.params.epsilon = 1e-2;
    const LadderResult r = ladder(LadderKind::delta, {1e-1, 1e-2, 1e-3}, b);
    REQUIRE_FALSE(r.partial);
    CHECK(r.cauchy_ratios.size() == 2);
    CHECK(r.estimated_order == doctest::Approx(1.0).epsilon(0.3));
    CHECK(r.monotone.at("accumulated_artificial"));
    for (const RungMetrics& rung : r.rungs) CHECK(rung.sup_artificial <= rung.energy_bound);
  }

  TEST_CASE("basis ladder runs") {
    LadderBase b = small_base();
    b.t_final = 0.05;
    const LadderResult r = ladder(LadderKind::basis_k, {2, 4, 8}, b);
    CHECK_FALSE(r.partial);
    CHECK(r.rungs.back().reduction_metric == 0.0);
  }

  TEST_CASE("manufactured equilibrium is exact") {
    const ConvergenceStudy s = manufactured_convergence(ManufacturedCase::equilibrium, 3);
    CHECK(s.errors.size() == 3);
    for (double e : s.errors) CHECK(e <= 1e-12);
    CHECK_THROWS_AS(manufactured_convergence(ManufacturedCase::diffusion, 2), ValidationError);
  }

  TEST_CASE("manufactured orders") {
    CHECK(manufactured_convergence(ManufacturedCase::diffusion, 3).observed_order >= 1.8);
    CHECK(manufactured_convergence(ManufacturedCase::advection, 3).observed_order >= 0.8);
    CHECK(manufactured_convergence(ManufacturedCase::momentum, 3).observed_order >= 2.0);
  }

  TEST_CASE("verification suite passes") {
    for (const VerificationCheck& c : verification_suite()) {
      INFO(c.name << " = " << c.value);
      CHECK(c.passed);
    }
  }
}
