#include "twofluid/io.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <iomanip>
#include <ostream>

namespace twofluid {

namespace fs = std::filesystem;

namespace {

struct CommonFlags {
  std::string config;
  std::string out;
  std::vector<std::string> overrides;
};

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

RunConfig resolve_config(const CommonFlags& flags) {
  RunConfig config = load_config(flags.config, flags.overrides);
  if (!flags.out.empty()) config.output_dir = flags.out;
  return config;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out || !(out << text)) throw IoError("cannot write '" + path.string() + "'");
}

std::string snapshot_name(std::size_t index) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "snapshot_%05zu.tfs", index);
  return buf.data();
}

int cmd_run(const CommonFlags& flags, std::ostream& out, std::ostream& err) {
  const RunConfig config = resolve_config(flags);
  const Grid grid = make_grid(config.grid);
  const GalerkinBasis basis = build_basis(grid, config.modes);
  const FluidState init = make_initial(config.initial, grid, config.params);
  const RunResult result = run_simulation(init, config.params, basis, config.t_final, config.dt,
                                          config.snapshot_stride, config.step, config.diagnostics);

  const fs::path dir = config.output_dir;
  make_dir(dir / "snapshots");
  write_text(dir / "config.cfg", serialize_config(config));
  write_report(result.series, dir / "series.csv");
  write_report(result.report, dir / "report.json");
  for (std::size_t i = 0; i < result.snapshots.size(); ++i) {
    write_snapshot(result.snapshots[i], dir / "snapshots" / snapshot_name(i));
  }

  double worst = 0.0;
  for (double r : result.step_residuals) worst = std::max(worst, std::abs(r));
  out << std::setprecision(10);
  out << "steps: " << result.steps_taken << "\n";
  out << "time reached: " << result.time_reached << "\n";
  out << "snapshots: " << result.snapshots.size() << "\n";
  if (!result.step_energy.empty()) {
    out << "energy: " << result.step_energy.front() << " -> " << result.step_energy.back() << "\n";
  }
  out << "max energy residual: " << worst << "\n";
  out << "max fixed-point iterations: " << result.max_iterations_used << "\n";
  if (result.vacuum_regularized) out << "vacuum regularization: used\n";
  out << "output: " << dir.string() << "\n";
  if (!result.completed) {
    err << "run stopped at t = " << result.time_reached << ": " << result.failure << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_ladder(const CommonFlags& flags, std::ostream& out, std::ostream& err) {
  const RunConfig config = resolve_config(flags);
  if (!config.ladder) throw ValidationError("ladder: config has no 'ladder_kind' / 'ladder_values'");
  const LadderResult result = ladder(config.ladder->kind, config.ladder->values, ladder_base(config));

  const fs::path dir = config.output_dir;
  make_dir(dir);
  write_text(dir / "config.cfg", serialize_config(config));
  write_report(result, dir / "ladder.json");
  for (std::size_t i = 0; i < result.rungs.size(); ++i) {
    const fs::path rung_dir = dir / ("rung_" + std::to_string(i));
    make_dir(rung_dir);
    write_report(result.rungs[i].report, rung_dir / "report.json");
  }

  out << std::setprecision(6);
  out << "ladder: " << to_string(result.kind) << "\n";
  for (const RungMetrics& r : result.rungs) {
    out << "  " << r.parameter << (r.completed ? "" : " (failed)") << "  reduction " << r.reduction_metric
        << "  llogl " << r.llogl_difference << "  pairing " << r.flux_pairing_difference << "  artificial "
        << r.accumulated_artificial << "\n";
  }
  out << "cauchy ratios:";
  for (double c : result.cauchy_ratios) out << ' ' << c;
  out << "\nestimated order: " << result.estimated_order << "\n";
  if (result.partial) {
    err << "ladder incomplete: at least one rung failed\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_verify(const std::string& out_dir, std::ostream& out) {
  const auto checks = verification_suite();
  bool ok = true;
  out << std::setprecision(6);
  for (const auto& c : checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << "  value " << c.value << "  threshold " << c.threshold << "\n";
    ok = ok && c.passed;
  }
  if (!out_dir.empty()) {
    make_dir(out_dir);
    write_report(checks, fs::path(out_dir) / "verify.json");
  }
  return ok ? kExitOk : kExitValidation;
}

int cmd_inspect(const std::string& path, const CommonFlags& flags, std::ostream& out) {
  const FluidState state = read_snapshot(path);
  ModelParams params;
  if (!flags.config.empty()) params = resolve_config(flags).params;
  const Grid& g = state.grid();

  out << std::setprecision(10);
  out << "dimension: " << g.dimension() << "\n";
  out << "extent:";
  for (int a = 0; a < g.dimension(); ++a) out << ' ' << g.extent(a);
  out << "\nnodes:";
  for (int a = 0; a < g.dimension(); ++a) out << ' ' << g.nodes_along(a);
  out << "\ntime: " << state.time() << "\n";
  out << "mass rho: " << total_mass(state.rho()) << "\n";
  out << "mass n: " << total_mass(state.n()) << "\n";
  out << "max |u|: " << state.u().max_abs() << "\n";
  const EnergyBudget e = energy_budget(state, params);
  out << "kinetic: " << e.kinetic << "\n";
  out << "potential_n: " << e.potential_n << "\n";
  out << "potential_rho: " << e.potential_rho << "\n";
  out << "artificial: " << e.artificial << "\n";
  out << "total energy: " << e.total << "\n";
  out << "dissipation rate: " << e.dissipation_rate << "\n";
  out << "convex ratio rho: " << convex_ratio(state, DensityComponent::rho) << "\n";
  out << "convex ratio n: " << convex_ratio(state, DensityComponent::n) << "\n";
  const auto [l_rho, l_n] = llogl(state);
  out << "llogl rho: " << l_rho << "\n";
  out << "llogl n: " << l_n << "\n";
  if (params.c0) out << "comparability margin: " << comparability_check(state, *params.c0) << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-fluid compressible Navier-Stokes laboratory"};
  app.require_subcommand(1);

  CommonFlags run_flags, ladder_flags, inspect_flags;
  std::string verify_out, snapshot_path;

  auto add_common = [](CLI::App* sub, CommonFlags& f, bool config_required) {
    auto* opt = sub->add_option("--config", f.config, "configuration file");
    if (config_required) opt->required();
    sub->add_option("--out", f.out, "output directory (overrides output_dir)");
    sub->add_option("--override", f.overrides, "key=value applied after the config file")->take_all();
  };

  CLI::App* run = app.add_subcommand("run", "single simulation from a config");
  add_common(run, run_flags, true);
  CLI::App* lad = app.add_subcommand("ladder", "continuation study from a config");
  add_common(lad, ladder_flags, true);
  CLI::App* ver = app.add_subcommand("verify", "manufactured-solution convergence and invariant suite");
  ver->add_option("--out", verify_out, "directory receiving verify.json");
  CLI::App* ins = app.add_subcommand("inspect", "print diagnostics of a snapshot file");
  ins->add_option("snapshot", snapshot_path, "snapshot file")->required();
  add_common(ins, inspect_flags, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*run) return cmd_run(run_flags, out, err);
    if (*lad) return cmd_ladder(ladder_flags, out, err);
    if (*ver) return cmd_verify(verify_out, out);
    return cmd_inspect(snapshot_path, inspect_flags, out);
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const RuntimeFailure& e) {
    err << "runtime failure: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace twofluid
