#include "twofluid/pressure.hpp"

#include "twofluid/transport.hpp"

namespace twofluid {

ScalarField pressure_field(const ScalarField& rho, const ScalarField& n, const ModelParams& p) {
  if (rho.grid() != n.grid()) throw ValidationError("pressure_field: grids differ");
  Eigen::ArrayXd out(rho.size());
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = pressure_law(rho[i], n[i], p);
  return ScalarField(rho.grid(), std::move(out));
}

ScalarField potential_G(const ScalarField& n, double alpha) {
  return ScalarField(n.grid(), n.values().unaryExpr([alpha](double z) { return potential_G(z, alpha); }));
}

ScalarField effective_flux(const ScalarField& rho, const ScalarField& n, const VectorField& u, const ModelParams& p) {
  ScalarField h = pressure_field(rho, n, p);
  h.values() -= (2.0 * p.mu + p.lambda) * divergence(u).values();
  return h;
}

ScalarField effective_flux(const FluidState& state, const ModelParams& p) {
  return effective_flux(state.rho(), state.n(), state.u(), p);
}

}  // namespace twofluid
