#include "doctest.h"

#include "twofluid/io.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace twofluid;

namespace {

constexpr std::string_view kMinimal = "gamma = 2\nalpha = 2\n";

std::string rejection(std::string_view text, const std::vector<std::string>& overrides = {}) {
  try {
    parse_config(text, overrides);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return {};
}

std::string io_failure(const std::string& bytes) {
  std::istringstream in(bytes);
  try {
    read_snapshot(in);
  } catch (const IoError& e) {
    return e.what();
  }
  return {};
}

FluidState sample_state(const Grid& g) {
  const ScalarField rho = ScalarField::sample(g, [](double x, double y) { return 1.0 + 0.1 * std::sin(3.0 * x + y); });
  const ScalarField n = ScalarField::sample(g, [](double x, double y) { return 1.0 / 3.0 + x * y; });
  VectorField u = VectorField::zeros(g);
  for (Eigen::Index p = 0; p < g.size(); ++p) {
    if (g.on_boundary(p)) continue;
    for (int a = 0; a < g.dimension(); ++a) u.values()(p, a) = std::exp(-g.coordinate(p, 0)) * (a + 1) * 1e-7;
  }
  return FluidState(rho, n, u, 0.1 + 0.2);
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& name) : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

int cli(const std::vector<std::string>& args, std::string* output = nullptr) {
  std::vector<const char*> argv{"twofluid"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (output) *output = out.str() + err.str();
  return code;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path) << text;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("minimal config takes the documented defaults") {
    const RunConfig c = parse_config(kMinimal);
    CHECK(c == RunConfig{});
    CHECK(c.params.gamma == 2.0);
    CHECK(c.mode == ValidationMode::window);
    CHECK(c.grid.extent[0] == std::numbers::pi);
  }

  TEST_CASE("window mode rejects gamma = 1.5 naming the inequality") {
    const std::string msg = rejection("gamma = 1.5\nalpha = 2\n");
    CHECK(msg.find("γ>9/5") != std::string::npos);
    CHECK(msg.find("window") != std::string::npos);
  }

  TEST_CASE("comparability mode requires c0") {
    CHECK(rejection("gamma = 2\nalpha = 1\nmode = comparability\n").find("c0") != std::string::npos);
    const RunConfig c = parse_config("gamma = 2\nalpha = 1\nmode = comparability\nc0 = 2\n");
    CHECK(*c.params.c0 == 2.0);
    CHECK(*c.initial.c0 == 2.0);
  }

  TEST_CASE("serialization round trip") {
    RunConfig c = parse_config(
        "gamma = 2.5  # comment\n"
        "alpha = 2.6\n"
        "mu = 0.7\nlambda = 0.1\nbeta = 6\nepsilon = 1e-3\ndelta = 1e-4\n"
        "dimension = 2\nextent_x = pi\nextent_y = 1.5\ncells_x = 32\ncells_y = 24\nmodes = 9\n"
        "profile = mixture\nrho_amplitude = 0.3\nn_ratio = 1.5\nmomentum_amplitude = 0.2\nmollifier_radius = 0.2\n"
        "t_final = 0.5\ndt = 0.01\nsnapshot_stride = 5\ntolerance = 1e-11\nmax_iterations = 40\n"
        "ladder_kind = delta\nladder_values = 0.1, 0.01, 0.001\n"
        "output_dir = results/a\n"
        "diag_llogl = false\ntheta1 = 0.1\ntheta2 = 0.1\npairing = cutoff_k\npairing_k = 3\n");
    CHECK(c.grid.extent[0] == std::numbers::pi);
    CHECK(c.ladder->values.size() == 3);
    CHECK_FALSE(c.diagnostics.llogl);
    CHECK(parse_config(serialize_config(c)) == c);
    c.params.mu = 0.1 + 0.2;
    c.dt = 1.0 / 3.0;
    c.t_final = 1.0;
    c.ladder.reset();
    CHECK(parse_config(serialize_config(c)) == c);
  }

  TEST_CASE("every documented key appears in the serialized defaults") {
    const std::string text = serialize_config(RunConfig{});
    for (const ConfigKey& k : config_keys()) {
      if (k.name == "c0" || k.name.starts_with("ladder") || k.name.starts_with("theta") || k.name == "n_ratio" ||
          k.name == "mollifier_radius") {
        continue;
      }
      INFO(k.name);
      CHECK(text.find(k.name + " = ") != std::string::npos);
    }
  }

  TEST_CASE("config error messages name line and key") {
    CHECK(rejection("gamma = 2\nalpha = 2\nmu = fast\n").find("line 3, key 'mu'") != std::string::npos);
    CHECK(rejection("gamma = 2\nalpha = 2\nviscosity = 1\n").find("line 3: unknown key 'viscosity'") !=
          std::string::npos);
    CHECK(rejection("gamma = 2\nalpha = 2\ngamma = 3\n").find("duplicate") != std::string::npos);
    CHECK(rejection("alpha = 2\n").find("missing required key 'gamma'") != std::string::npos);
    CHECK(rejection("gamma = 2\nalpha = 2\ncells_x = 2.5\n").find("cells_x") != std::string::npos);
    CHECK(rejection("gamma = 2\nalpha = 2\ndiag_energy = yes\n").find("diag_energy") != std::string::npos);
    CHECK(rejection(kMinimal, {"mu"}).find("override 'mu'") != std::string::npos);
    CHECK(rejection(kMinimal, {"mu=-1"}).find("mu") != std::string::npos);
    CHECK(rejection("gamma = 2\nalpha = 2\ntheta1 = 0.1\n").find("theta") != std::string::npos);
    CHECK(rejection("gamma = 2\nalpha = 2\ndt = 0\n").find("dt") != std::string::npos);
  }

  TEST_CASE("overrides apply after the file") {
    const RunConfig c = parse_config(kMinimal, {"mu=0.5", "cells_x = 64"});
    CHECK(c.params.mu == 0.5);
    CHECK(c.grid.cells[0] == 64);
  }

  TEST_CASE("missing config file is an io error") {
    CHECK_THROWS_AS(load_config("/nonexistent/twofluid.cfg"), IoError);
  }

  TEST_CASE("ladder base carries the run settings") {
    const RunConfig c = parse_config("gamma = 2\nalpha = 2\ncells_x = 40\nmodes = 5\ndt = 0.02\nsnapshot_stride = 3\n");
    const LadderBase b = ladder_base(c);
    CHECK(b.grid.cells(0) == 40);
    CHECK(b.modes == 5);
    CHECK(b.dt == 0.02);
    CHECK(b.stride == 3);
  }

  TEST_CASE("snapshot round trip is bit-identical") {
    for (const Grid& g : {Grid::line(std::numbers::pi, 33), Grid::box(1.0, 2.0, 9, 8)}) {
      const FluidState s = sample_state(g);
      std::stringstream buf;
      write_snapshot(s, buf);
      const FluidState r = read_snapshot(buf);
      CHECK(r.grid().dimension() == g.dimension());
      CHECK(r.grid().size() == g.size());
      CHECK(r.time() == s.time());
      CHECK((r.rho().values() == s.rho().values()).all());
      CHECK((r.n().values() == s.n().values()).all());
      CHECK((r.u().values() == s.u().values()).all());
      for (int a = 0; a < g.dimension(); ++a) CHECK(r.grid().extent(a) == g.extent(a));
    }
  }

  TEST_CASE("snapshot file round trip") {
    TempDir dir("twofluid_io_snapshot");
    const FluidState s = sample_state(Grid::line(2.0, 16));
    write_snapshot(s, dir.path / "s.tfs");
    CHECK((read_snapshot(dir.path / "s.tfs").rho().values() == s.rho().values()).all());
    CHECK_THROWS_AS(read_snapshot(dir.path / "missing.tfs"), IoError);
  }

  TEST_CASE("corrupted snapshots are rejected") {
    std::stringstream buf;
    write_snapshot(sample_state(Grid::line(1.0, 8)), buf);
    const std::string good = buf.str();

    std::string bad_magic = good;
    bad_magic[0] = 'X';
    CHECK(io_failure(bad_magic).find("bad magic") != std::string::npos);

    std::string bumped = good;
    const auto at = bumped.find("version 1");
    REQUIRE(at != std::string::npos);
    bumped.replace(at, 9, "version 2");
    CHECK(io_failure(bumped).find("unsupported version 2") != std::string::npos);

    CHECK(io_failure(good.substr(0, good.size() - 3)).find("truncated") != std::string::npos);
    CHECK(io_failure(good + "x").find("trailing") != std::string::npos);
    CHECK(io_failure(std::string(kSnapshotMagic) + "\nversion one\n").find("version") != std::string::npos);
    CHECK(io_failure(good).empty());
  }

  TEST_CASE("series CSV header matches the golden file") {
    std::ifstream golden(std::string(TWOFLUID_TEST_DATA_DIR) + "/golden/series_header.csv");
    std::string expected;
    REQUIRE(std::getline(golden, expected));
    std::ostringstream out;
    write_report(std::vector<SeriesRow>{}, out);
    CHECK(out.str() == expected + "\n");
  }

  TEST_CASE("equilibrium series rows report round-off residuals") {
    const Grid g = Grid::line(std::numbers::pi, 32);
    const RunResult r = run_simulation(FluidState::at_rest(g, 1.0, 1.0), ModelParams{}, build_basis(g, 4), 0.1, 0.05, 1);
    std::ostringstream out;
    write_report(r.series, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line)) {
      ++rows;
      std::vector<std::string> cells;
      std::stringstream ls(line);
      for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
      REQUIRE(cells.size() == series_columns().size());
      CHECK(std::abs(std::stod(cells[6])) <= 1e-12);
    }
    CHECK(rows == 3);
  }

  TEST_CASE("ladder report structure") {
    LadderResult r;
    r.kind = LadderKind::delta;
    r.parameters = {0.1, 0.01, 0.001};
    r.rungs.resize(3);
    r.cauchy_ratios = {0.1, 0.1};
    r.estimated_order = 1.0;
    r.monotone["accumulated_artificial"] = true;
    const auto j = nlohmann::json::parse(report_json(r));
    CHECK(j.at("kind") == "delta");
    CHECK(j.at("rungs").size() == 3);
    CHECK(j.at("rungs")[0].contains("reduction_metric"));
    CHECK(j.at("rungs")[0].contains("report"));
    CHECK(j.at("cauchy_ratios").size() == 2);
    CHECK(j.at("estimated_order") == 1.0);
    CHECK(j.at("partial") == false);
    CHECK(j.at("monotone").at("accumulated_artificial") == true);
  }

  TEST_CASE("command line exit codes") {
    TempDir dir("twofluid_io_cli");
    const auto cfg = dir.path / "eq.cfg";
    write_text(cfg, "gamma = 2\nalpha = 2\ncells_x = 32\nmodes = 4\nt_final = 0.1\ndt = 0.05\n");
    std::string output;

    CHECK(cli({"run", "--config", cfg.string(), "--out", (dir.path / "run").string()}, &output) == kExitOk);
    CHECK(std::filesystem::exists(dir.path / "run" / "series.csv"));
    CHECK(std::filesystem::exists(dir.path / "run" / "report.json"));
    CHECK(std::filesystem::exists(dir.path / "run" / "snapshots" / "snapshot_00000.tfs"));
    RunConfig expected = load_config(cfg);
    expected.output_dir = (dir.path / "run").string();
    CHECK(load_config(dir.path / "run" / "config.cfg") == expected);

    CHECK(cli({"inspect", (dir.path / "run" / "snapshots" / "snapshot_00000.tfs").string()}, &output) == kExitOk);
    CHECK(output.find("energy") != std::string::npos);

    CHECK(cli({"run", "--config", cfg.string(), "--override", "gamma=1.5"}, &output) == kExitValidation);
    CHECK(output.find("γ>9/5") != std::string::npos);
    CHECK(cli({"run", "--config", cfg.string(), "--override", "dt=0.03"}) == kExitValidation);
    CHECK(cli({"run", "--config", (dir.path / "none.cfg").string()}) == kExitIo);
    CHECK(cli({"bogus"}) == kExitValidation);
    CHECK(cli({"--help"}) == kExitOk);

    write_text(dir.path / "bad.tfs", "NOT-A-SNAPSHOT\n");
    CHECK(cli({"inspect", (dir.path / "bad.tfs").string()}) == kExitIo);

    const auto stiff = dir.path / "stiff.cfg";
    write_text(stiff,
               "gamma = 2\nalpha = 2\ncells_x = 32\nmodes = 4\nt_final = 0.1\ndt = 0.01\n"
               "momentum_amplitude = 0.5\nmollifier_radius = 0.4\ntolerance = 1e-15\nmax_iterations = 1\n");
    CHECK(cli({"run", "--config", stiff.string(), "--out", (dir.path / "stiff").string()}, &output) == kExitRuntime);
  }
}
