#include "doctest.h"
#include "oracles.hpp"

#include "twofluid/diagnostics.hpp"
#include "twofluid/transport.hpp"

#include <cmath>
#include <numbers>

using namespace twofluid;

namespace {

VectorField sine_velocity(const Grid& g, double amplitude, int mode = 1) {
  VectorField u = VectorField::zeros(g);
  for (Eigen::Index p = 0; p < g.size(); ++p) {
    if (!g.on_boundary(p)) u.values()(p, 0) = amplitude * std::sin(mode * std::numbers::pi * g.coordinate(p, 0) / g.extent(0));
  }
  return u;
}

ScalarField bump(const Grid& g, double centre, double width) {
  return ScalarField::sample(g, [=](double x, double) { return std::exp(-(x - centre) * (x - centre) / (width * width)); });
}

}  // namespace

TEST_SUITE("transport") {
  TEST_CASE("stationary equation leaves f unchanged") {
    const Grid g = Grid::line(1.0, 32);
    const ScalarField f = bump(g, 0.4, 0.1);
    const ScalarField out = advance_density(f, VectorField::zeros(g), 0.0, 0.01);
    CHECK((out.values() == f.values()).all());
  }

  TEST_CASE("pure diffusion of a bump keeps mass and lowers the maximum") {
    const Grid g = Grid::line(std::numbers::pi, 128);
    const ScalarField f = bump(g, 1.2, 0.3);
    const ScalarField out = advance_density(f, VectorField::zeros(g), 0.1, 0.01);
    CHECK(std::abs(total_mass(out) - total_mass(f)) <= 1e-12 * total_mass(f));
    CHECK(out.values().maxCoeff() < f.values().maxCoeff());
  }

  TEST_CASE("diffusion tracks the exact Neumann heat solution") {
    const double eps = 0.1;
    const double t_final = 0.5;
    auto error = [&](int cells, double dt) {
      const Grid g = Grid::line(std::numbers::pi, cells);
      ScalarField f = ScalarField::sample(g, [](double x, double) { return oracle::neumann_heat(x, 0.0, 0.1, 0.5, 2); });
      const DensityStepper stepper(g, eps, dt);
      const int steps = static_cast<int>(std::lround(t_final / dt));
      for (int s = 0; s < steps; ++s) f = stepper.advance(f, VectorField::zeros(g));
      double e = 0.0;
      for (Eigen::Index p = 0; p < g.size(); ++p) {
        e = std::max(e, std::abs(f[p] - oracle::neumann_heat(g.coordinate(p, 0), t_final, eps, 0.5, 2)));
      }
      return e;
    };
    CHECK(error(128, 1e-3) <= 1e-4);
    // Backward Euler in time: halving dt halves the error once space is resolved.
    const double e1 = error(512, 4e-3);
    const double e2 = error(512, 2e-3);
    CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.1));
  }

  TEST_CASE("constants are preserved by a discretely divergence-free flow") {
    const Grid g = Grid::box(std::numbers::pi, std::numbers::pi, 40, 40);
    const double hx = g.spacing(0);
    const double hy = g.spacing(1);
    auto stream = [&](int i, int j) {
      const double x = i * hx - std::numbers::pi / 2;
      const double y = j * hy - std::numbers::pi / 2;
      const double r2 = x * x + y * y;
      return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
    };
    VectorField u = VectorField::zeros(g);
    for (int j = 1; j < 40; ++j) {
      for (int i = 1; i < 40; ++i) {
        u.values()(g.flat(i, j), 0) = (stream(i, j + 1) - stream(i, j - 1)) / (2.0 * hy);
        u.values()(g.flat(i, j), 1) = -(stream(i + 1, j) - stream(i - 1, j)) / (2.0 * hx);
      }
    }
    CHECK(divergence(u).values().abs().maxCoeff() <= 1e-12);
    const ScalarField f = ScalarField::constant(g, 1.7);
    const double dt = 0.9 * admissible_dt(u);
    const ScalarField out = advance_density(f, u, 0.05, dt);
    CHECK((out.values() - 1.7).abs().maxCoeff() <= 1e-12);
  }

  TEST_CASE("mass conservation and positivity with transport") {
    const Grid g = Grid::line(std::numbers::pi, 256);
    const VectorField u = sine_velocity(g, 0.8, 2);
    ScalarField f = bump(g, 1.0, 0.2);
    const double m0 = total_mass(f);
    for (double eps : {0.0, 1e-2}) {
      const DensityStepper stepper(g, eps, admissible_dt(u));
      ScalarField h = f;
      for (int s = 0; s < 300; ++s) h = stepper.advance(h, u);
      CHECK(std::abs(total_mass(h) - m0) <= 1e-12 * m0);
      CHECK(h.values().minCoeff() >= 0.0);
    }
  }

  TEST_CASE("inadmissible steps are rejected with the admissible dt") {
    const Grid g = Grid::line(std::numbers::pi, 64);
    const VectorField u = sine_velocity(g, 1.0);
    const double limit = admissible_dt(u);
    CHECK(limit == doctest::Approx(g.spacing(0) / (2.0 * u.max_abs())));
    try {
      advance_density(ScalarField::constant(g, 1.0), u, 0.0, 1.5 * limit);
      FAIL("expected a stability error");
    } catch (const StabilityError& e) {
      CHECK(e.admissible_dt() == doctest::Approx(limit));
    }
    CHECK(std::isinf(admissible_dt(VectorField::zeros(g))));
  }

  TEST_CASE("comparability propagates through one step") {
    const Grid g = Grid::line(std::numbers::pi, 128);
    const VectorField u = sine_velocity(g, 0.6, 3);
    const ScalarField rho = ScalarField::sample(g, [](double x, double) { return 1.0 + 0.5 * std::cos(3.0 * x); });
    const ScalarField n = ScalarField::sample(g, [](double x, double) { return 1.5 + 0.7 * std::cos(3.0 * x); });
    const double c0 = 2.0;
    REQUIRE((n.values() <= c0 * rho.values()).all());
    const double dt = admissible_dt(u);
    for (double eps : {0.0, 0.05}) {
      const ScalarField r1 = advance_density(rho, u, eps, dt);
      const ScalarField n1 = advance_density(n, u, eps, dt);
      CHECK((n1.values() <= c0 * r1.values() * (1.0 + 1e-12)).all());
    }
  }

  TEST_CASE("cut-off T examples") {
    for (double k : {0.5, 1.0, 7.0}) {
      for (double z = 0.0; z <= k; z += k / 50) CHECK(cutoff_T(z, k) == z);
      CHECK(cutoff_T(5.0 * k, k) == 2.0 * k);
      const double h = 1e-3 * k;
      for (double z = h; z < 5.0 * k; z += 0.01 * k) {
        CHECK(cutoff_T(z + h, k) - 2.0 * cutoff_T(z, k) + cutoff_T(z - h, k) <= 1e-10);
        CHECK(cutoff_T(z, k) >= 0.0);
        CHECK(cutoff_T(z, k) <= std::min(z, 2.0 * k) + 1e-15);
        CHECK(cutoff_T(z + h, k) >= cutoff_T(z, k));
      }
    }
  }

  TEST_CASE("cut-off T agrees with its polynomial form") {
    for (double k : {0.3, 1.0, 4.0}) {
      for (double z = 0.0; z < 4.0 * k; z += 0.0137 * k) {
        CHECK(oracle::rel_dev(cutoff_T(z, k), oracle::cutoff_T(z, k)) <= 1e-13);
      }
    }
  }

  TEST_CASE("cut-off L examples") {
    for (double k : {0.5, 2.0}) {
      for (double z = 0.01; z <= k; z += 0.05) CHECK(cutoff_L(z, k) == doctest::Approx(z * std::log(z)));
      const double beta = oracle::beta_k(k);
      CHECK(cutoff_L(3.0 * k, k) == doctest::Approx(beta * 3.0 * k - 2.0 * k).epsilon(1e-12));
      CHECK(beta_k(k) == doctest::Approx(beta).epsilon(1e-13));
    }
    CHECK(cutoff_L(1.0, 1.0) == 0.0);
    CHECK(cutoff_L(0.0, 1.0) == 0.0);
  }

  TEST_CASE("cut-off L matches the quadrature oracle") {
    for (double k : {0.25, 1.0, 3.0}) {
      for (double z = 0.0; z < 5.0 * k; z += 0.031 * k) {
        CHECK(oracle::rel_dev(cutoff_L(z, k), oracle::cutoff_L(z, k)) <= 1e-12);
        CHECK(oracle::rel_dev(cutoff_b(z, k), oracle::cutoff_b(z, k)) <= 1e-12);
      }
    }
  }

  TEST_CASE("cut-off b examples and the defect identity") {
    const double step = 1e-5;
    for (double k : {0.5, 1.0, 3.0}) {
      for (double z = 0.01; z < 5.0 * k; z += 0.017 * k) {
        CHECK(cutoff_b(z, k) + beta_k(k) * z == doctest::Approx(cutoff_L(z, k)).epsilon(1e-12));
        const double fd = (cutoff_b(z + step, k) - cutoff_b(z - step, k)) / (2.0 * step);
        CHECK(std::abs(fd * z - cutoff_b(z, k) - cutoff_T(z, k)) <= 1e-6);
        CHECK(std::abs(fd - cutoff_b_derivative(z, k)) <= 1e-6);
      }
      for (double z = 3.0 * k; z < 6.0 * k; z += 0.1 * k) {
        const double fd = (cutoff_b(z + step, k) - cutoff_b(z - step, k)) / (2.0 * step);
        CHECK(std::abs(cutoff_b_derivative(z, k)) <= 1e-10);
        if (z > 3.0 * k + step) CHECK(std::abs(fd) <= 1e-10);
      }
    }
  }

  TEST_CASE("elementwise cut-off on fields") {
    const Grid g = Grid::line(1.0, 8);
    const ScalarField f = ScalarField::sample(g, [](double x, double) { return 4.0 * x; });
    const ScalarField t = cutoff_T(f, 1.0);
    for (Eigen::Index p = 0; p < g.size(); ++p) CHECK(t[p] == cutoff_T(f[p], 1.0));
  }

  TEST_CASE("renormalization defects") {
    for (double z : {0.0, 0.3, 1.0, 2.5}) {
      CHECK(Renormalization::identity().defect(z) == 0.0);
      CHECK(Renormalization::square().defect(z) == doctest::Approx(z * z));
      CHECK(Renormalization::entropy().defect(z) == doctest::Approx(z));
      CHECK(Renormalization::cutoff(1.0).defect(z) == doctest::Approx(cutoff_T(z, 1.0)));
    }
    CHECK(Renormalization::truncation(2.0).value(1.5) == 1.5);
    CHECK(Renormalization::truncation(2.0).defect(1.5) == 0.0);
  }

  TEST_CASE("renormalization residual examples") {
    const Grid g = Grid::line(std::numbers::pi, 64);
    const ScalarField w = interior_weight(g, 4);
    const double dt = 0.01;
    std::vector<ScalarField> still(5, ScalarField::constant(g, 1.3));
    std::vector<VectorField> rest(4, VectorField::zeros(g));
    for (const auto& b : {Renormalization::identity(), Renormalization::square(), Renormalization::entropy(),
                          Renormalization::cutoff(1.0), Renormalization::truncation(0.5)}) {
      CHECK(renormalization_residual(still, rest, b, w, dt) <= 1e-12);
    }

    const VectorField u = sine_velocity(g, 0.5, 2);
    std::vector<ScalarField> traj{bump(g, 1.5, 0.4)};
    std::vector<VectorField> us;
    // Arbitrary (non-solution) sequence so the continuity residual is not zero.
    for (int s = 0; s < 4; ++s) {
      traj.push_back(ScalarField(g, traj.back().values() * 1.01));
      us.push_back(u);
    }
    const double cont = continuity_residual(traj, us, w, dt);
    CHECK(cont > 0.0);
    CHECK(renormalization_residual(traj, us, Renormalization::identity(), w, dt) == cont);
    CHECK(std::abs(renormalization_residual(traj, us, Renormalization::truncation(10.0), w, dt) - cont) <= 1e-12);

    us.pop_back();
    CHECK_THROWS_AS(continuity_residual(traj, us, w, dt), ValidationError);
  }

  TEST_CASE("truncated renormalization residual of an upwind trajectory is first order") {
    // Upwind numerical diffusion leaves a defect proportional to h |u| b''(f) f_x^2.
    std::vector<double> residuals;
    for (int cells : {128, 256, 512}) {
      const Grid g = Grid::line(std::numbers::pi, cells);
      const VectorField u = sine_velocity(g, 0.5, 2);
      const double dt = 0.5 * g.spacing(0);
      DensityStepper stepper(g, 0.0, dt);
      std::vector<ScalarField> fs{ScalarField::sample(g, [](double x, double) { return 1.0 + 0.5 * std::cos(x); })};
      std::vector<VectorField> us;
      for (long s = 0; s < std::lround(0.5 / dt); ++s) {
        us.push_back(u);
        fs.push_back(stepper.advance(fs.back(), u));
      }
      residuals.push_back(renormalization_residual(fs, us, Renormalization::truncation(0.8), interior_weight(g, 4), dt));
    }
    for (std::size_t i = 0; i + 1 < residuals.size(); ++i) {
      CHECK(residuals[i] / residuals[i + 1] == doctest::Approx(2.0).epsilon(0.1));
    }
  }

  TEST_CASE("mollifier kernel is a nonnegative even unit bump") {
    for (const Grid& g : {Grid::line(2.0, 200), Grid::box(1.0, 1.0, 64, 64)}) {
      const MollifierKernel k = mollifier_kernel(g, MollifierSpec{5.5 * g.min_spacing()});
      CHECK((k.values >= 0.0).all());
      CHECK(std::abs(k.values.sum() * k.lattice_weight - 1.0) <= 1e-10);
      CHECK((k.values - k.values.reverse()).abs().maxCoeff() <= 1e-15);
    }
  }

  TEST_CASE("unresolved or oversized mollifiers are rejected") {
    const Grid g = Grid::line(1.0, 64);
    CHECK_THROWS_AS(mollifier_kernel(g, MollifierSpec{1.5 * g.spacing(0)}), ValidationError);
    CHECK_THROWS_AS(mollifier_kernel(g, MollifierSpec{0.3}), ValidationError);
    CHECK_NOTHROW(mollifier_kernel(g, MollifierSpec{2.0 * g.spacing(0)}));
  }

  TEST_CASE("mollify keeps interior constants and zero-extends at the walls") {
    const Grid g = Grid::line(1.0, 100);
    const double r = 0.05;
    const ScalarField m = mollify(ScalarField::constant(g, 2.0), MollifierSpec{r});
    for (Eigen::Index p = 0; p < g.size(); ++p) {
      const double x = g.coordinate(p, 0);
      if (x > r + 1e-12 && x < 1.0 - r - 1e-12) CHECK(m[p] == doctest::Approx(2.0).epsilon(1e-12));
    }
    CHECK(m[0] < 2.0);
  }

  TEST_CASE("commutator examples") {
    const Grid g = Grid::line(std::numbers::pi, 256);
    const ScalarField f = ScalarField::sample(g, [](double x, double) { return 1.0 + 0.2 * std::cos(x); });
    const VectorField constant(g, Eigen::ArrayXXd::Constant(g.size(), 1, 0.7));
    CHECK(commutator_error(f, constant, MollifierSpec{8 * g.spacing(0)}) <= 1e-10);
    CHECK(commutator_error(ScalarField::zeros(g), sine_velocity(g, 0.5), MollifierSpec{8 * g.spacing(0)}) == 0.0);
  }

  TEST_CASE("commutator decreases with the radius at a stable normalized rate") {
    const Grid g = Grid::line(std::numbers::pi, 512);
    const ScalarField f = ScalarField::sample(g, [](double x, double) { return 1.0 + 0.2 * std::cos(x); });
    const VectorField u = sine_velocity(g, 0.5);
    const double norm = h1_norm(u) * l2_norm(f);
    std::vector<double> normalized;
    double previous = INFINITY;
    for (int m : {32, 16, 8, 4}) {
      const double e = commutator_error(f, u, MollifierSpec{m * g.spacing(0)});
      CHECK(e < previous);
      previous = e;
      normalized.push_back(e / norm);
    }
    CHECK(normalized.front() / normalized.back() < 10.0);
  }

  TEST_CASE("norms of simple fields") {
    const Grid g = Grid::line(std::numbers::pi, 400);
    CHECK(l2_norm(ScalarField::constant(g, 2.0)) == doctest::Approx(2.0 * std::sqrt(std::numbers::pi)));
    const VectorField u = sine_velocity(g, 1.0);
    // ||sin||^2 + ||cos||^2 = pi.
    CHECK(h1_norm(u) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-4));
  }
}
