#include "dwell/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "dwell/errors.hpp"
#include "dwell/numfmt.hpp"

namespace dwell {

namespace {

const std::vector<ExperimentInfo> kExperiments = {
    {ExperimentKind::eigen, "eigen", "lowest k eigenpairs and the ground tunneling gap"},
    {ExperimentKind::evolve, "evolve", "split-operator run of an ansatz state, recording <x>, <x^3>, Q(t)"},
    {ExperimentKind::ansatz, "ansatz", "two-Gaussian parameters and tunneling splitting over a list of hbar"},
    {ExperimentKind::duffing, "duffing", "driven centroid trajectory, stroboscopic section, Lyapunov sweep"},
    {ExperimentKind::epsilon, "epsilon", "intra-well displacement dynamics of the ansatz"},
    {ExperimentKind::poposc, "poposc", "slow population oscillation between the wells"},
    {ExperimentKind::crossover, "crossover", "short/long-window Q(t), spectra and Lyapunov exponents of both drives"},
};

struct BadValue {
  std::string message;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view v) {
  double out = 0.0;
  if (!parse_double(v, out)) throw BadValue{"expected a number, got '" + std::string(v) + "'"};
  if (!std::isfinite(out)) throw BadValue{"must be finite"};
  return out;
}

template <class Int>
Int to_integer(std::string_view v) {
  Int out{};
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || ptr != end || v.empty()) {
    throw BadValue{"expected a non-negative integer, got '" + std::string(v) + "'"};
  }
  return out;
}

bool to_bool(std::string_view v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw BadValue{"expected true or false, got '" + std::string(v) + "'"};
}

std::vector<double> to_list(std::string_view v) {
  std::vector<double> out;
  while (!v.empty()) {
    const auto comma = v.find(',');
    out.push_back(to_double(trim(v.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  if (out.empty()) throw BadValue{"expected a comma-separated list of numbers"};
  return out;
}

std::string list_text(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format_double(values[i]);
  }
  return out;
}

template <class E>
struct Names {
  std::vector<std::pair<std::string_view, E>> table;

  E parse(std::string_view v) const {
    for (const auto& [name, value] : table) {
      if (name == v) return value;
    }
    std::string allowed;
    for (const auto& [name, value] : table) allowed += (allowed.empty() ? "" : ", ") + std::string(name);
    throw BadValue{"unknown value '" + std::string(v) + "' (expected one of: " + allowed + ")"};
  }
  std::string name(E e) const {
    for (const auto& [name, value] : table) {
      if (value == e) return std::string(name);
    }
    return {};
  }
};

const Names<DriveKindConfig> kDriveNames{{{"none", DriveKindConfig::none},
                                          {"sinusoid", DriveKindConfig::sinusoid},
                                          {"replay", DriveKindConfig::replay}}};
const Names<SweepParam> kSweepNames{{{"none", SweepParam::none},
                                     {"amplitude", SweepParam::amplitude},
                                     {"omega", SweepParam::omega},
                                     {"x0", SweepParam::x0},
                                     {"ensemble", SweepParam::ensemble}}};

struct Field {
  std::string_view key;
  std::function<void(ExperimentConfig&, std::string_view)> set;
  /// nullopt: not emitted by serialize (unset optional).
  std::function<std::optional<std::string>(const ExperimentConfig&)> get;
};

template <class Ref>
Field real(std::string_view key, Ref ref) {
  return {key, [ref](ExperimentConfig& c, std::string_view v) { ref(c) = to_double(v); },
          [ref](const ExperimentConfig& c) -> std::optional<std::string> {
            return format_double(ref(const_cast<ExperimentConfig&>(c)));
          }};
}

template <class Ref>
Field optional_real(std::string_view key, Ref ref) {
  return {key, [ref](ExperimentConfig& c, std::string_view v) { ref(c) = to_double(v); },
          [ref](const ExperimentConfig& c) -> std::optional<std::string> {
            const auto& value = ref(const_cast<ExperimentConfig&>(c));
            if (!value) return std::nullopt;
            return format_double(*value);
          }};
}

template <class Ref>
Field count(std::string_view key, Ref ref) {
  return {key, [ref](ExperimentConfig& c, std::string_view v) { ref(c) = to_integer<std::size_t>(v); },
          [ref](const ExperimentConfig& c) -> std::optional<std::string> {
            return std::to_string(ref(const_cast<ExperimentConfig&>(c)));
          }};
}

GridSpec& grid_of(ExperimentConfig& c) {
  if (!c.grid) c.grid = GridSpec{std::nan(""), std::nan(""), 2048};
  return *c.grid;
}

Field grid_real(std::string_view key, double GridSpec::*member) {
  return {key, [member](ExperimentConfig& c, std::string_view v) { grid_of(c).*member = to_double(v); },
          [member](const ExperimentConfig& c) -> std::optional<std::string> {
            if (!c.grid) return std::nullopt;
            return format_double((*c.grid).*member);
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back({"experiment",
                 [](ExperimentConfig& c, std::string_view v) {
                   for (const auto& info : kExperiments) {
                     if (info.name == v) {
                       c.experiment = info.kind;
                       return;
                     }
                   }
                   throw BadValue{"unknown experiment '" + std::string(v) + "' (see list-experiments)"};
                 },
                 [](const ExperimentConfig& c) -> std::optional<std::string> {
                   return std::string(experiment_name(c.experiment));
                 }});
    f.push_back({"seed", [](ExperimentConfig& c, std::string_view v) { c.seed = to_integer<std::uint64_t>(v); },
                 [](const ExperimentConfig& c) -> std::optional<std::string> { return std::to_string(c.seed); }});
    f.push_back(real("params.lambda", [](ExperimentConfig& c) -> double& { return c.params.lambda; }));
    f.push_back(real("params.hbar", [](ExperimentConfig& c) -> double& { return c.params.hbar; }));
    f.push_back(real("params.mass", [](ExperimentConfig& c) -> double& { return c.params.mass; }));
    f.push_back(grid_real("grid.x_min", &GridSpec::x_min));
    f.push_back(grid_real("grid.x_max", &GridSpec::x_max));
    f.push_back({"grid.n_points",
                 [](ExperimentConfig& c, std::string_view v) { grid_of(c).n_points = to_integer<std::size_t>(v); },
                 [](const ExperimentConfig& c) -> std::optional<std::string> {
                   if (!c.grid) return std::nullopt;
                   return std::to_string(c.grid->n_points);
                 }});
    f.push_back({"drive.kind", [](ExperimentConfig& c, std::string_view v) { c.drive.kind = kDriveNames.parse(v); },
                 [](const ExperimentConfig& c) -> std::optional<std::string> { return kDriveNames.name(c.drive.kind); }});
    f.push_back(real("drive.amplitude", [](ExperimentConfig& c) -> double& { return c.drive.amplitude; }));
    f.push_back(real("drive.omega", [](ExperimentConfig& c) -> double& { return c.drive.omega; }));
    f.push_back(real("drive.offset", [](ExperimentConfig& c) -> double& { return c.drive.offset; }));
    f.push_back(real("drive.phase", [](ExperimentConfig& c) -> double& { return c.drive.phase; }));
    f.push_back({"drive.file", [](ExperimentConfig& c, std::string_view v) { c.drive.file = std::string(v); },
                 [](const ExperimentConfig& c) -> std::optional<std::string> {
                   if (c.drive.file.empty()) return std::nullopt;
                   return c.drive.file;
                 }});
    f.push_back(real("run.dt", [](ExperimentConfig& c) -> double& { return c.run.dt; }));
    f.push_back(real("run.t_end", [](ExperimentConfig& c) -> double& { return c.run.t_end; }));
    f.push_back(count("run.sample_every", [](ExperimentConfig& c) -> std::size_t& { return c.run.sample_every; }));
    f.push_back({"output.dir", [](ExperimentConfig& c, std::string_view v) { c.output_dir = std::string(v); },
                 [](const ExperimentConfig& c) -> std::optional<std::string> { return c.output_dir; }});
    f.push_back(real("initial.n1", [](ExperimentConfig& c) -> double& { return c.initial.n1; }));
    f.push_back(real("initial.n2", [](ExperimentConfig& c) -> double& { return c.initial.n2; }));
    f.push_back(real("initial.epsilon", [](ExperimentConfig& c) -> double& { return c.initial.epsilon; }));
    f.push_back(optional_real("initial.x", [](ExperimentConfig& c) -> std::optional<double>& { return c.initial.x; }));
    f.push_back(real("initial.v", [](ExperimentConfig& c) -> double& { return c.initial.v; }));
    f.push_back(real("initial.pop_diff", [](ExperimentConfig& c) -> double& { return c.initial.pop_diff; }));
    f.push_back(real("initial.rate", [](ExperimentConfig& c) -> double& { return c.initial.rate; }));
    f.push_back(count("eigen.k", [](ExperimentConfig& c) -> std::size_t& { return c.eigen_k; }));
    f.push_back({"ansatz.hbar_values", [](ExperimentConfig& c, std::string_view v) { c.ansatz_hbar = to_list(v); },
                 [](const ExperimentConfig& c) -> std::optional<std::string> {
                   if (c.ansatz_hbar.empty()) return std::nullopt;
                   return list_text(c.ansatz_hbar);
                 }});
    f.push_back({"sweep.param", [](ExperimentConfig& c, std::string_view v) { c.sweep.param = kSweepNames.parse(v); },
                 [](const ExperimentConfig& c) -> std::optional<std::string> { return kSweepNames.name(c.sweep.param); }});
    f.push_back({"sweep.values", [](ExperimentConfig& c, std::string_view v) { c.sweep.values = to_list(v); },
                 [](const ExperimentConfig& c) -> std::optional<std::string> {
                   if (c.sweep.values.empty()) return std::nullopt;
                   return list_text(c.sweep.values);
                 }});
    f.push_back(count("sweep.count", [](ExperimentConfig& c) -> std::size_t& { return c.sweep.count; }));
    f.push_back(real("sweep.min", [](ExperimentConfig& c) -> double& { return c.sweep.min; }));
    f.push_back(real("sweep.max", [](ExperimentConfig& c) -> double& { return c.sweep.max; }));
    f.push_back(count("lyapunov.renorm_every", [](ExperimentConfig& c) -> std::size_t& { return c.lyapunov.renorm_every; }));
    f.push_back(real("lyapunov.delta0", [](ExperimentConfig& c) -> double& { return c.lyapunov.delta0; }));
    f.push_back(optional_real("lyapunov.t_end",
                              [](ExperimentConfig& c) -> std::optional<double>& { return c.lyapunov.t_end; }));
    f.push_back(real("crossover.displacement", [](ExperimentConfig& c) -> double& { return c.crossover.displacement; }));
    f.push_back(real("crossover.short_periods", [](ExperimentConfig& c) -> double& { return c.crossover.short_periods; }));
    f.push_back(real("crossover.long_periods", [](ExperimentConfig& c) -> double& { return c.crossover.long_periods; }));
    f.push_back(real("crossover.long_dt", [](ExperimentConfig& c) -> double& { return c.crossover.long_dt; }));
    f.push_back(count("crossover.long_sample_every",
                      [](ExperimentConfig& c) -> std::size_t& { return c.crossover.long_sample_every; }));
    f.push_back(real("crossover.lyapunov_periods",
                     [](ExperimentConfig& c) -> double& { return c.crossover.lyapunov_periods; }));
    f.push_back(real("crossover.lyapunov_dt", [](ExperimentConfig& c) -> double& { return c.crossover.lyapunov_dt; }));
    f.push_back(real("crossover.x0", [](ExperimentConfig& c) -> double& { return c.crossover.x0; }));
    f.push_back({"crossover.replay", [](ExperimentConfig& c, std::string_view v) { c.crossover.replay = to_bool(v); },
                 [](const ExperimentConfig& c) -> std::optional<std::string> {
                   return std::string(c.crossover.replay ? "true" : "false");
                 }});
    return f;
  }();
  return table;
}

const Field* find_field(std::string_view key) {
  for (const auto& f : fields()) {
    if (f.key == key) return &f;
  }
  return nullptr;
}

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

class Checker {
 public:
  explicit Checker(const std::map<std::string, std::size_t>& lines) : lines_(lines) {}

  void require(bool ok, const std::string& key, const std::string& message) const {
    if (ok) return;
    const auto it = lines_.find(key);
    const std::string where = it == lines_.end() ? " (default)" : " (line " + std::to_string(it->second) + ")";
    throw ConfigError(key, message + where);
  }
  bool given(const std::string& key) const { return lines_.count(key) != 0; }

 private:
  const std::map<std::string, std::size_t>& lines_;
};

void check(const ExperimentConfig& c, const Checker& ck) {
  ck.require(ck.given("experiment"), "experiment", "is required");
  ck.require(ck.given("params.lambda"), "params.lambda", "is required");
  ck.require(c.params.lambda > 0.0, "params.lambda", "must be > 0");
  ck.require(c.params.hbar > 0.0, "params.hbar", "must be > 0");
  ck.require(c.params.mass > 0.0, "params.mass", "must be > 0");

  if (c.grid) {
    const auto& g = *c.grid;
    ck.require(std::isfinite(g.x_min), "grid.x_min", "is required when a grid section is given");
    ck.require(std::isfinite(g.x_max), "grid.x_max", "is required when a grid section is given");
    ck.require(g.x_max > g.x_min, "grid.x_max", "must exceed grid.x_min");
    ck.require(g.n_points >= 256 && is_pow2(g.n_points), "grid.n_points", "must be a power of two >= 256");
  }

  if (c.drive.kind == DriveKindConfig::sinusoid) {
    ck.require(c.drive.omega >= 0.0, "drive.omega", "must be >= 0");
  }
  if (c.drive.kind == DriveKindConfig::replay) {
    ck.require(!c.drive.file.empty(), "drive.file", "is required for a replay drive");
  }

  ck.require(c.run.dt > 0.0, "run.dt", "must be > 0");
  ck.require(c.run.t_end > 0.0, "run.t_end", "must be > 0");
  ck.require(c.run.sample_every >= 1, "run.sample_every", "must be >= 1");
  const bool reduced = c.experiment == ExperimentKind::duffing || c.experiment == ExperimentKind::epsilon;
  if (reduced) ck.require(c.run.dt <= 0.01, "run.dt", "must be <= 0.01 for the fourth-order integrator");
  ck.require(!c.output_dir.empty(), "output.dir", "must not be empty");

  ck.require(c.initial.n1 != 0.0 || c.initial.n2 != 0.0, "initial.n1", "n1 and n2 cannot both be zero");
  ck.require(std::abs(c.initial.pop_diff) <= 1.0, "initial.pop_diff", "must lie in [-1, 1]");

  ck.require(c.eigen_k >= 1 && c.eigen_k <= 16, "eigen.k", "must lie in [1, 16]");
  for (double h : c.ansatz_hbar) ck.require(h > 0.0, "ansatz.hbar_values", "entries must be > 0");

  if (c.sweep.param == SweepParam::ensemble) {
    ck.require(c.sweep.count >= 1, "sweep.count", "must be >= 1 for an ensemble sweep");
    ck.require(c.sweep.max > c.sweep.min, "sweep.max", "must exceed sweep.min");
  } else if (c.sweep.param != SweepParam::none) {
    ck.require(!c.sweep.values.empty(), "sweep.values", "is required for this sweep");
  }

  ck.require(c.lyapunov.renorm_every >= 1, "lyapunov.renorm_every", "must be >= 1");
  ck.require(c.lyapunov.delta0 >= 1e-9 && c.lyapunov.delta0 <= 1e-6, "lyapunov.delta0", "must lie in [1e-9, 1e-6]");
  if (c.lyapunov.t_end) ck.require(*c.lyapunov.t_end > 0.0, "lyapunov.t_end", "must be > 0");

  const auto& x = c.crossover;
  ck.require(x.displacement >= 0.0, "crossover.displacement", "must be >= 0");
  ck.require(x.short_periods > 0.0, "crossover.short_periods", "must be > 0");
  ck.require(x.long_periods > 0.0, "crossover.long_periods", "must be > 0");
  ck.require(x.long_dt > 0.0, "crossover.long_dt", "must be > 0");
  ck.require(x.long_sample_every >= 1, "crossover.long_sample_every", "must be >= 1");
  ck.require(x.lyapunov_periods > 0.0, "crossover.lyapunov_periods", "must be > 0");
  ck.require(x.lyapunov_dt > 0.0 && x.lyapunov_dt <= 0.01, "crossover.lyapunov_dt", "must lie in (0, 0.01]");
}

}  // namespace

const std::vector<ExperimentInfo>& experiments() { return kExperiments; }

std::string_view experiment_name(ExperimentKind kind) noexcept {
  for (const auto& info : kExperiments) {
    if (info.kind == kind) return info.name;
  }
  return "unknown";
}

ExperimentConfig validate_config(std::string_view text) {
  ExperimentConfig config;
  std::map<std::string, std::size_t> lines;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no);
    if (eq == std::string_view::npos) throw ConfigError("", where + ": expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    const Field* field = find_field(key);
    if (!field) throw ConfigError(key, "unknown key (" + where + ")");
    if (lines.count(key)) throw ConfigError(key, "duplicate key (" + where + ")");
    if (value.empty()) throw ConfigError(key, "missing value (" + where + ")");
    lines.emplace(key, line_no);
    try {
      field->set(config, value);
    } catch (const BadValue& bad) {
      throw ConfigError(key, bad.message + " (" + where + ")");
    }
  }
  check(config, Checker(lines));
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return validate_config(buffer.str());
}

std::string serialize(const ExperimentConfig& config) {
  std::string out;
  for (const auto& f : fields()) {
    if (const auto value = f.get(config)) out += std::string(f.key) + " = " + *value + "\n";
  }
  return out;
}

GridSpec effective_grid(const ExperimentConfig& config) {
  if (config.grid) return *config.grid;
  return symmetric_grid(4.0 / std::sqrt(config.params.lambda), 2048);
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  ExperimentConfig copy = config;
  copy.output_dir = "-";
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : serialize(copy)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace dwell
