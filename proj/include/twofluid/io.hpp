#pragma once

#include "twofluid/core.hpp"
#include "twofluid/diagnostics.hpp"
#include "twofluid/harness.hpp"
#include "twofluid/momentum.hpp"

#include <array>
#include <filesystem>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace twofluid {

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

struct GridSpec {
  int dimension = 1;
  std::array<double, 2> extent{std::numbers::pi, std::numbers::pi};
  std::array<int, 2> cells{256, 256};

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

Grid make_grid(const GridSpec& spec);

struct LadderSpec {
  LadderKind kind = LadderKind::epsilon;
  std::vector<double> values;

  friend bool operator==(const LadderSpec&, const LadderSpec&) = default;
};

struct RunConfig {
  ModelParams params;
  ValidationMode mode = ValidationMode::window;
  GridSpec grid;
  int modes = 16;
  InitialSpec initial;
  double t_final = 1.0;
  double dt = 1e-2;
  int snapshot_stride = 1;
  StepOptions step;
  std::optional<LadderSpec> ladder;
  std::string output_dir = "out";
  DiagnosticsOptions diagnostics;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses the line-oriented `key = value` format. `#` starts a comment, "pi"
/// is accepted wherever a real is expected, and gamma and alpha are required.
/// Overrides are `key=value` strings applied after the text. Every rejection
/// is a ValidationError naming the line (or override) and the key.
RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides = {});

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

/// Reads and parses a config file; IoError when it cannot be read.
RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

/// Name, type and default of every accepted key, in file order.
struct ConfigKey {
  std::string name;
  std::string type;
  std::string default_value;
  std::string meaning;
};
const std::vector<ConfigKey>& config_keys();

LadderBase ladder_base(const RunConfig& config);

// ---------------------------------------------------------------------------
// Snapshots
// ---------------------------------------------------------------------------

inline constexpr std::string_view kSnapshotMagic = "TWOFLUID-SNAPSHOT";
inline constexpr int kSnapshotVersion = 1;

/// Plain-text header (magic, version, dimension, extents, node counts, time)
/// followed by rho, n and the velocity components as little-endian doubles.
void write_snapshot(const FluidState& state, const std::filesystem::path& path);
void write_snapshot(const FluidState& state, std::ostream& out);

/// Throws IoError on a bad magic, an unsupported version, a malformed header
/// or a truncated payload.
FluidState read_snapshot(const std::filesystem::path& path);
FluidState read_snapshot(std::istream& in);

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

/// Frozen CSV column order for time series.
const std::vector<std::string>& series_columns();

void write_report(const std::vector<SeriesRow>& series, const std::filesystem::path& path);
void write_report(const std::vector<SeriesRow>& series, std::ostream& out);
void write_report(const DefectReport& report, const std::filesystem::path& path);
void write_report(const LadderResult& result, const std::filesystem::path& path);
void write_report(const std::vector<VerificationCheck>& checks, const std::filesystem::path& path);

std::string report_json(const DefectReport& report);
std::string report_json(const LadderResult& result);
std::string report_json(const std::vector<VerificationCheck>& checks);

// ---------------------------------------------------------------------------
// Command line
// ---------------------------------------------------------------------------

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitRuntime = 2, kExitIo = 3 };

/// Entry point of the command-line tool: subcommands run, ladder, verify and
/// inspect. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace twofluid
