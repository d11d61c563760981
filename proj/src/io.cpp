#include "twofluid/io.hpp"

#include "json.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace twofluid {

namespace {

// ---------------------------------------------------------------------------
// Value codecs
// ---------------------------------------------------------------------------

struct BadValue {
  std::string expected;
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string format_real(double v) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

double parse_real(const std::string& text) {
  if (text == "pi") return std::numbers::pi;
  if (text == "-pi") return -std::numbers::pi;
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || text.empty() || !std::isfinite(v)) throw BadValue{"a real number"};
  return v;
}

int parse_int(const std::string& text) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) throw BadValue{"an integer"};
  return v;
}

bool parse_bool(const std::string& text) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw BadValue{"true or false"};
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(trim(item)));
  if (out.empty()) throw BadValue{"a comma-separated list of reals"};
  return out;
}

std::string format_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format_real(values[i]);
  }
  return out;
}

template <typename Parse>
auto parse_enum(const std::string& text, Parse&& parse, const char* choices) {
  try {
    return parse(text);
  } catch (const ValidationError&) {
    throw BadValue{choices};
  }
}

std::string to_string(Pairing p) { return p == Pairing::density_sum ? "density_sum" : "cutoff_k"; }

Pairing parse_pairing(const std::string& text) {
  if (text == "density_sum") return Pairing::density_sum;
  if (text == "cutoff_k") return Pairing::cutoff_k;
  throw ValidationError("unknown pairing");
}

// ---------------------------------------------------------------------------
// Key table
// ---------------------------------------------------------------------------

struct Entry {
  ConfigKey key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::optional<std::string>(const RunConfig&)> get;
  bool required = false;
};

template <typename Access>
Entry real_entry(std::string name, std::string meaning, Access access, bool required = false) {
  const RunConfig defaults;
  return Entry{{std::move(name), "real", required ? "(required)" : format_real(access(defaults)),
                std::move(meaning)},
               [access](RunConfig& c, const std::string& v) { access(c) = parse_real(v); },
               [access](const RunConfig& c) -> std::optional<std::string> {
                 return format_real(access(c));
               },
               required};
}

template <typename Access>
Entry optional_real_entry(std::string name, std::string meaning, Access access) {
  return Entry{{std::move(name), "real", "(unset)", std::move(meaning)},
               [access](RunConfig& c, const std::string& v) { access(c) = parse_real(v); },
               [access](const RunConfig& c) -> std::optional<std::string> {
                 const auto& v = access(c);
                 if (!v) return std::nullopt;
                 return format_real(*v);
               }};
}

template <typename Access>
Entry int_entry(std::string name, std::string meaning, Access access) {
  const RunConfig defaults;
  return Entry{{std::move(name), "integer", std::to_string(access(defaults)),
                std::move(meaning)},
               [access](RunConfig& c, const std::string& v) { access(c) = parse_int(v); },
               [access](const RunConfig& c) -> std::optional<std::string> {
                 return std::to_string(access(c));
               }};
}

template <typename Access>
Entry bool_entry(std::string name, std::string meaning, Access access) {
  const RunConfig defaults;
  return Entry{{std::move(name), "boolean", access(defaults) ? "true" : "false",
                std::move(meaning)},
               [access](RunConfig& c, const std::string& v) { access(c) = parse_bool(v); },
               [access](const RunConfig& c) -> std::optional<std::string> {
                 return access(c) ? "true" : "false";
               }};
}

std::vector<Entry> build_entries() {
  std::vector<Entry> e;
  // Model parameters
  e.push_back(real_entry("gamma", "rho-pressure exponent", [](auto& c) -> auto& { return c.params.gamma; }, true));
  e.push_back(real_entry("alpha", "n-pressure exponent", [](auto& c) -> auto& { return c.params.alpha; }, true));
  e.push_back(real_entry("mu", "shear viscosity, > 0", [](auto& c) -> auto& { return c.params.mu; }));
  e.push_back(real_entry("lambda", "second viscosity, 2 mu + lambda >= 0",
                         [](auto& c) -> auto& { return c.params.lambda; }));
  e.push_back(real_entry("beta", "artificial-pressure exponent", [](auto& c) -> auto& { return c.params.beta; }));
  e.push_back(real_entry("epsilon", "artificial viscosity, >= 0",
                         [](auto& c) -> auto& { return c.params.epsilon; }));
  e.push_back(real_entry("delta", "artificial-pressure weight, >= 0",
                         [](auto& c) -> auto& { return c.params.delta; }));
  e.push_back(Entry{{"c0", "real", "(unset)", "comparability constant, >= 1; required in comparability mode"},
                    [](RunConfig& c, const std::string& v) {
                      c.params.c0 = parse_real(v);
                      c.initial.c0 = c.params.c0;
                    },
                    [](const RunConfig& c) -> std::optional<std::string> {
                      if (!c.params.c0) return std::nullopt;
                      return format_real(*c.params.c0);
                    }});
  e.push_back(Entry{{"mode", "window | comparability", "window", "parameter gate applied on load"},
                    [](RunConfig& c, const std::string& v) {
                      c.mode = parse_enum(v, parse_validation_mode, "window or comparability");
                    },
                    [](const RunConfig& c) -> std::optional<std::string> { return to_string(c.mode); }});

  // Grid and basis
  e.push_back(int_entry("dimension", "1 or 2", [](auto& c) -> auto& { return c.grid.dimension; }));
  e.push_back(real_entry("extent_x", "box length along x", [](auto& c) -> auto& { return c.grid.extent[0]; }));
  e.push_back(real_entry("extent_y", "box length along y (2D)", [](auto& c) -> auto& { return c.grid.extent[1]; }));
  e.push_back(int_entry("cells_x", "intervals along x", [](auto& c) -> auto& { return c.grid.cells[0]; }));
  e.push_back(int_entry("cells_y", "intervals along y (2D)", [](auto& c) -> auto& { return c.grid.cells[1]; }));
  e.push_back(int_entry("modes", "Galerkin basis size k", [](auto& c) -> auto& { return c.modes; }));

  // Initial data
  e.push_back(Entry{{"profile", "constant | bump | mixture", "constant", "initial density profile family"},
                    [](RunConfig& c, const std::string& v) {
                      c.initial.profile = parse_enum(v, parse_profile_family, "constant, bump or mixture");
                    },
                    [](const RunConfig& c) -> std::optional<std::string> { return to_string(c.initial.profile); }});
  e.push_back(real_entry("rho_level", "base level of rho0", [](auto& c) -> auto& { return c.initial.rho_level; }));
  e.push_back(real_entry("rho_amplitude", "profile amplitude of rho0",
                         [](auto& c) -> auto& { return c.initial.rho_amplitude; }));
  e.push_back(real_entry("n_level", "base level of n0", [](auto& c) -> auto& { return c.initial.n_level; }));
  e.push_back(real_entry("n_amplitude", "profile amplitude of n0",
                         [](auto& c) -> auto& { return c.initial.n_amplitude; }));
  e.push_back(optional_real_entry("n_ratio", "when set, n0 = n_ratio rho0",
                                  [](auto& c) -> auto& { return c.initial.n_ratio; }));
  e.push_back(real_entry("momentum_amplitude", "amplitude of M0 / sqrt(rho0 + n0)",
                         [](auto& c) -> auto& { return c.initial.momentum_amplitude; }));
  e.push_back(int_entry("momentum_mode", "sine mode number of the momentum",
                        [](auto& c) -> auto& { return c.initial.momentum_mode; }));
  e.push_back(real_entry("vacuum_fraction", "rho0 vanishes on x < vacuum_fraction extent_x",
                         [](auto& c) -> auto& { return c.initial.vacuum_fraction; }));
  e.push_back(optional_real_entry("mollifier_radius", "velocity mollification radius; delta when unset",
                                  [](auto& c) -> auto& { return c.initial.mollifier_radius; }));

  // Time stepping
  e.push_back(real_entry("t_final", "final time T", [](auto& c) -> auto& { return c.t_final; }));
  e.push_back(real_entry("dt", "time step; T / dt must be an integer", [](auto& c) -> auto& { return c.dt; }));
  e.push_back(int_entry("snapshot_stride", "keep every n-th state",
                        [](auto& c) -> auto& { return c.snapshot_stride; }));
  e.push_back(real_entry("tolerance", "fixed-point tolerance on the velocity coefficients",
                         [](auto& c) -> auto& { return c.step.tolerance; }));
  e.push_back(int_entry("max_iterations", "fixed-point iteration cap",
                        [](auto& c) -> auto& { return c.step.max_iterations; }));

  // Ladder
  e.push_back(Entry{{"ladder_kind", "epsilon | delta | basis_k", "(unset)", "parameter varied by the ladder command"},
                    [](RunConfig& c, const std::string& v) {
                      if (!c.ladder) c.ladder.emplace();
                      c.ladder->kind = parse_enum(v, parse_ladder_kind, "epsilon, delta or basis_k");
                    },
                    [](const RunConfig& c) -> std::optional<std::string> {
                      if (!c.ladder) return std::nullopt;
                      return to_string(c.ladder->kind);
                    }});
  e.push_back(Entry{{"ladder_values", "list of reals", "(unset)", "rung values, comma separated, finest last"},
                    [](RunConfig& c, const std::string& v) {
                      if (!c.ladder) c.ladder.emplace();
                      c.ladder->values = parse_list(v);
                    },
                    [](const RunConfig& c) -> std::optional<std::string> {
                      if (!c.ladder) return std::nullopt;
                      return format_list(c.ladder->values);
                    }});

  // Output
  e.push_back(Entry{{"output_dir", "path", "out", "directory receiving snapshots and reports"},
                    [](RunConfig& c, const std::string& v) {
                      if (v.empty()) throw BadValue{"a non-empty path"};
                      c.output_dir = v;
                    },
                    [](const RunConfig& c) -> std::optional<std::string> { return c.output_dir; }});

  // Diagnostics
  e.push_back(bool_entry("diag_energy", "record the energy budget",
                         [](auto& c) -> auto& { return c.diagnostics.energy; }));
  e.push_back(bool_entry("diag_comparability", "record the comparability margin (needs c0)",
                         [](auto& c) -> auto& { return c.diagnostics.comparability; }));
  e.push_back(bool_entry("diag_convex", "record the convex ratios",
                         [](auto& c) -> auto& { return c.diagnostics.convex; }));
  e.push_back(bool_entry("diag_llogl", "record L log L integrals",
                         [](auto& c) -> auto& { return c.diagnostics.llogl; }));
  e.push_back(optional_real_entry("theta1", "higher-integrability gain for n",
                                  [](auto& c) -> auto& { return c.diagnostics.theta1; }));
  e.push_back(optional_real_entry("theta2", "higher-integrability gain for rho",
                                  [](auto& c) -> auto& { return c.diagnostics.theta2; }));
  e.push_back(int_entry("weight_j", "member of the interior weight family",
                        [](auto& c) -> auto& { return c.diagnostics.weight_j; }));
  e.push_back(Entry{{"pairing", "density_sum | cutoff_k", "density_sum", "flux pairing variant"},
                    [](RunConfig& c, const std::string& v) {
                      c.diagnostics.pairing = parse_enum(v, parse_pairing, "density_sum or cutoff_k");
                    },
                    [](const RunConfig& c) -> std::optional<std::string> { return to_string(c.diagnostics.pairing); }});
  e.push_back(real_entry("pairing_k", "cut-off level of the cutoff_k pairing",
                         [](auto& c) -> auto& { return c.diagnostics.pairing_k; }));
  e.push_back(real_entry("vacuum_floor", "total density treated as vacuum",
                         [](auto& c) -> auto& { return c.diagnostics.vacuum_floor; }));
  return e;
}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = build_entries();
  return table;
}

const Entry* find_entry(const std::string& name) {
  const auto& table = entries();
  const auto it = std::find_if(table.begin(), table.end(), [&](const Entry& e) { return e.key.name == name; });
  return it == table.end() ? nullptr : &*it;
}

void check_config(const RunConfig& c) {
  const Verdict verdict = validate_params(c.params, c.mode);
  if (!verdict) {
    throw ValidationError("config: parameters rejected in " + to_string(c.mode) + " mode: " + verdict.reason);
  }
  try {
    static_cast<void>(make_grid(c.grid));
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("config: grid: ") + e.what());
  }
  if (c.modes < 1) throw ValidationError("config: key 'modes' must be at least 1");
  if (!(c.t_final > 0.0)) throw ValidationError("config: key 't_final' must be positive");
  if (!(c.dt > 0.0)) throw ValidationError("config: key 'dt' must be positive");
  if (c.snapshot_stride < 1) throw ValidationError("config: key 'snapshot_stride' must be at least 1");
  if (!(c.step.tolerance > 0.0)) throw ValidationError("config: key 'tolerance' must be positive");
  if (c.step.max_iterations < 1) throw ValidationError("config: key 'max_iterations' must be at least 1");
  if (c.diagnostics.weight_j < 1) throw ValidationError("config: key 'weight_j' must be at least 1");
  if (c.diagnostics.theta1.has_value() != c.diagnostics.theta2.has_value()) {
    throw ValidationError("config: keys 'theta1' and 'theta2' must be given together");
  }
  if (c.diagnostics.theta1) {
    const std::string v = higher_integrability_violation(c.params, *c.diagnostics.theta1, *c.diagnostics.theta2);
    if (!v.empty()) throw ValidationError("config: keys 'theta1'/'theta2': " + v);
  }
  if (c.ladder && c.ladder->values.empty()) {
    throw ValidationError("config: key 'ladder_values' is required with 'ladder_kind'");
  }
}

}  // namespace

Grid make_grid(const GridSpec& spec) {
  if (spec.dimension == 1) return Grid::line(spec.extent[0], spec.cells[0]);
  return Grid(spec.dimension, spec.extent, spec.cells);
}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const auto& e : entries()) out.push_back(e.key);
    return out;
  }();
  return keys;
}

RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides) {
  RunConfig config;
  std::map<std::string, int> seen;
  bool ladder_kind_seen = false;

  auto apply = [&](const std::string& where, const std::string& key, const std::string& value) {
    const Entry* entry = find_entry(key);
    if (!entry) throw ValidationError(where + ": unknown key '" + key + "'");
    try {
      entry->set(config, value);
    } catch (const BadValue& bad) {
      throw ValidationError(where + ", key '" + key + "': expected " + bad.expected + ", got '" + value + "'");
    }
    if (key == "ladder_kind") ladder_kind_seen = true;
  };

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(std::string_view(raw).substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "config line " + std::to_string(line_no);
    if (eq == std::string::npos) throw ValidationError(where + ": expected 'key = value', got '" + line + "'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ValidationError(where + ": missing key before '='");
    if (const auto it = seen.find(key); it != seen.end()) {
      throw ValidationError(where + ", key '" + key + "': duplicate of line " + std::to_string(it->second));
    }
    seen.emplace(key, line_no);
    apply(where, key, value);
  }

  for (const std::string& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos) throw ValidationError("override '" + ov + "': expected key=value");
    const std::string key = trim(std::string_view(ov).substr(0, eq));
    apply("override '" + ov + "'", key, trim(std::string_view(ov).substr(eq + 1)));
    seen.emplace(key, 0);
  }

  for (const auto& e : entries()) {
    if (e.required && !seen.count(e.key.name)) {
      throw ValidationError("config: missing required key '" + e.key.name + "'");
    }
  }
  if (config.ladder && !ladder_kind_seen) {
    throw ValidationError("config: key 'ladder_values' needs 'ladder_kind'");
  }
  check_config(config);
  return config;
}

std::string serialize_config(const RunConfig& config) {
  std::string out;
  for (const auto& e : entries()) {
    if (const auto v = e.get(config)) out += e.key.name + " = " + *v + "\n";
  }
  return out;
}

RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), overrides);
}

LadderBase ladder_base(const RunConfig& config) {
  return LadderBase{make_grid(config.grid), config.params,          config.initial, config.modes,
                    config.t_final,           config.dt,              config.snapshot_stride, config.step,
                    config.diagnostics};
}

// ---------------------------------------------------------------------------
// Snapshots
// ---------------------------------------------------------------------------

namespace {

void put_le(std::ostream& out, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  std::array<char, 8> bytes{};
  for (auto& b : bytes) {
    b = static_cast<char>(bits & 0xffu);
    bits >>= 8;
  }
  out.write(bytes.data(), bytes.size());
}

bool get_le(std::istream& in, double& v) {
  std::array<unsigned char, 8> bytes{};
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) return false;
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | bytes[static_cast<std::size_t>(i)];
  v = std::bit_cast<double>(bits);
  return true;
}

std::vector<std::string> header_line(std::istream& in, const std::string& label) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("snapshot header: missing '" + label + "' line");
  std::istringstream ss(line);
  std::vector<std::string> words;
  for (std::string w; ss >> w;) words.push_back(w);
  if (words.empty() || words.front() != label) {
    throw IoError("snapshot header: expected '" + label + "', got '" + line + "'");
  }
  words.erase(words.begin());
  return words;
}

template <typename T, typename Parse>
T header_value(const std::string& word, const std::string& label, Parse&& parse) {
  try {
    return parse(word);
  } catch (const BadValue&) {
    throw IoError("snapshot header: bad value '" + word + "' for '" + label + "'");
  }
}

}  // namespace

void write_snapshot(const FluidState& state, std::ostream& out) {
  const Grid& g = state.grid();
  const int d = g.dimension();
  out << kSnapshotMagic << "\n";
  out << "version " << kSnapshotVersion << "\n";
  out << "dimension " << d << "\n";
  out << "extent";
  for (int a = 0; a < d; ++a) out << ' ' << format_real(g.extent(a));
  out << "\nnodes";
  for (int a = 0; a < d; ++a) out << ' ' << g.nodes_along(a);
  out << "\ntime " << format_real(state.time()) << "\n";
  out << "fields rho n";
  for (int a = 0; a < d; ++a) out << " u" << a;
  out << "\nend\n";
  for (Eigen::Index p = 0; p < g.size(); ++p) put_le(out, state.rho()[p]);
  for (Eigen::Index p = 0; p < g.size(); ++p) put_le(out, state.n()[p]);
  for (int a = 0; a < d; ++a) {
    for (Eigen::Index p = 0; p < g.size(); ++p) put_le(out, state.u().values()(p, a));
  }
  if (!out) throw IoError("snapshot: write failed");
}

void write_snapshot(const FluidState& state, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_snapshot(state, out);
}

FluidState read_snapshot(std::istream& in) {
  std::string magic;
  if (!std::getline(in, magic) || magic != kSnapshotMagic) throw IoError("snapshot: bad magic");
  const auto version = header_line(in, "version");
  if (version.size() != 1) throw IoError("snapshot header: malformed version line");
  const int v = header_value<int>(version[0], "version", parse_int);
  if (v != kSnapshotVersion) {
    throw IoError("snapshot: unsupported version " + std::to_string(v) + " (this build reads version " +
                  std::to_string(kSnapshotVersion) + ")");
  }
  const auto dim_words = header_line(in, "dimension");
  if (dim_words.size() != 1) throw IoError("snapshot header: malformed dimension line");
  const int d = header_value<int>(dim_words[0], "dimension", parse_int);
  if (d != 1 && d != 2) throw IoError("snapshot header: dimension must be 1 or 2");
  const auto ext_words = header_line(in, "extent");
  const auto node_words = header_line(in, "nodes");
  if (ext_words.size() != static_cast<std::size_t>(d) || node_words.size() != static_cast<std::size_t>(d)) {
    throw IoError("snapshot header: extent and nodes need one entry per dimension");
  }
  const auto time_words = header_line(in, "time");
  if (time_words.size() != 1) throw IoError("snapshot header: malformed time line");
  const double time = header_value<double>(time_words[0], "time", parse_real);
  const auto field_words = header_line(in, "fields");
  std::vector<std::string> expected{"rho", "n"};
  for (int a = 0; a < d; ++a) expected.push_back("u" + std::to_string(a));
  if (field_words != expected) throw IoError("snapshot header: unexpected field list");
  header_line(in, "end");

  std::array<double, 2> extent{1.0, 1.0};
  std::array<int, 2> cells{1, 1};
  for (int a = 0; a < d; ++a) {
    const auto i = static_cast<std::size_t>(a);
    extent[i] = header_value<double>(ext_words[i], "extent", parse_real);
    cells[i] = header_value<int>(node_words[i], "nodes", parse_int) - 1;
  }
  Grid grid = [&] {
    try {
      return Grid(d, extent, cells);
    } catch (const ValidationError& e) {
      throw IoError(std::string("snapshot header: ") + e.what());
    }
  }();

  const Eigen::Index n_nodes = grid.size();
  auto read_block = [&](Eigen::ArrayXd& dst) {
    dst.resize(n_nodes);
    for (Eigen::Index p = 0; p < n_nodes; ++p) {
      if (!get_le(in, dst[p])) throw IoError("snapshot: truncated payload");
    }
  };
  Eigen::ArrayXd rho, n;
  read_block(rho);
  read_block(n);
  Eigen::ArrayXXd u(n_nodes, d);
  for (int a = 0; a < d; ++a) {
    Eigen::ArrayXd col;
    read_block(col);
    u.col(a) = col;
  }
  if (in.peek() != std::char_traits<char>::eof()) throw IoError("snapshot: trailing bytes after payload");
  try {
    return FluidState(ScalarField(grid, rho), ScalarField(grid, n), VectorField(grid, u), time);
  } catch (const ValidationError& e) {
    throw IoError(std::string("snapshot: invalid state: ") + e.what());
  }
}

FluidState read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open snapshot '" + path.string() + "'");
  return read_snapshot(in);
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

const std::vector<std::string>& series_columns() {
  static const std::vector<std::string> columns{
      "time",     "kinetic", "potential_n",          "potential_rho",    "artificial",     "dissipation_rate",
      "residual", "comparability_margin", "convex_ratio_rho", "convex_ratio_n", "llogl_rho",   "llogl_n"};
  return columns;
}

void write_report(const std::vector<SeriesRow>& series, std::ostream& out) {
  const auto& cols = series_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\n";
  for (const SeriesRow& r : series) {
    const std::array<double, 12> values{r.time,       r.kinetic,  r.potential_n,          r.potential_rho,
                                        r.artificial, r.dissipation_rate, r.residual, r.comparability_margin,
                                        r.convex_ratio_rho, r.convex_ratio_n, r.llogl_rho, r.llogl_n};
    for (std::size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << format_real(values[i]);
    out << "\n";
  }
}

namespace {

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  writer(out);
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

nlohmann::json to_json(const EnergyBudget& e) {
  return {{"kinetic", e.kinetic},
          {"potential_n", e.potential_n},
          {"potential_rho", e.potential_rho},
          {"artificial", e.artificial},
          {"dissipation_rate", e.dissipation_rate},
          {"eps_dissipation_rate", e.eps_dissipation_rate},
          {"total", e.total}};
}

nlohmann::json to_json(const DefectReport& r) {
  nlohmann::json energy = nlohmann::json::array();
  for (const auto& e : r.energy) energy.push_back(to_json(e));
  nlohmann::json llogl_series = nlohmann::json::array();
  for (const auto& [a, b] : r.llogl_series) llogl_series.push_back({a, b});
  nlohmann::json j{{"times", r.times},
                   {"comparability_series", r.comparability_series},
                   {"comparability_margin", nullptr},
                   {"convex_ratio_rho", r.convex_ratio_rho},
                   {"convex_ratio_n", r.convex_ratio_n},
                   {"llogl_series", llogl_series},
                   {"energy", energy},
                   {"energy_residual", r.energy_residual},
                   {"reduction_metric", r.reduction_metric},
                   {"llogl", {r.llogl.first, r.llogl.second}},
                   {"higher_integrability", r.higher_integrability},
                   {"flux_pairing", r.flux_pairing}};
  if (r.comparability_margin) j["comparability_margin"] = *r.comparability_margin;
  return j;
}

nlohmann::json to_json(const LadderResult& result) {
  nlohmann::json rungs = nlohmann::json::array();
  for (const RungMetrics& r : result.rungs) {
    rungs.push_back({{"parameter", r.parameter},
                     {"completed", r.completed},
                     {"failure", r.failure},
                     {"reduction_metric", r.reduction_metric},
                     {"llogl_difference", r.llogl_difference},
                     {"flux_pairing_difference", r.flux_pairing_difference},
                     {"sup_artificial", r.sup_artificial},
                     {"accumulated_artificial", r.accumulated_artificial},
                     {"energy_bound", r.energy_bound},
                     {"report", to_json(r.report)}});
  }
  return {{"kind", to_string(result.kind)},
          {"parameters", result.parameters},
          {"rungs", rungs},
          {"cauchy_ratios", result.cauchy_ratios},
          {"estimated_order", result.estimated_order},
          {"partial", result.partial},
          {"monotone", result.monotone}};
}

nlohmann::json to_json(const std::vector<VerificationCheck>& checks) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : checks) {
    out.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"passed", c.passed}});
  }
  return out;
}

}  // namespace

std::string report_json(const DefectReport& report) { return to_json(report).dump(2); }
std::string report_json(const LadderResult& result) { return to_json(result).dump(2); }
std::string report_json(const std::vector<VerificationCheck>& checks) { return to_json(checks).dump(2); }

void write_report(const std::vector<SeriesRow>& series, const std::filesystem::path& path) {
  write_file(path, [&](std::ostream& out) { write_report(series, out); });
}

void write_report(const DefectReport& report, const std::filesystem::path& path) {
  write_file(path, [&](std::ostream& out) { out << report_json(report) << "\n"; });
}

void write_report(const LadderResult& result, const std::filesystem::path& path) {
  write_file(path, [&](std::ostream& out) { out << report_json(result) << "\n"; });
}

void write_report(const std::vector<VerificationCheck>& checks, const std::filesystem::path& path) {
  write_file(path, [&](std::ostream& out) { out << report_json(checks) << "\n"; });
}

}  // namespace twofluid
