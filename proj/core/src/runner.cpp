#include "dwell/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <new>
#include <json.hpp>
#include <numbers>
#include <ostream>
#include <sstream>

#include "dwell/ansatz.hpp"
#include "dwell/chaos.hpp"
#include "dwell/csv.hpp"
#include "dwell/eigen.hpp"
#include "dwell/errors.hpp"
#include "dwell/numfmt.hpp"
#include "dwell/propagator.hpp"
#include "dwell/reduced.hpp"
#include "dwell/rng.hpp"
#include "fft.hpp"
#include "parallel.hpp"

namespace dwell {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMaxSteps = 2e9;

class Artifacts {
 public:
  explicit Artifacts(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec || !std::filesystem::is_directory(dir_)) {
      throw IoError("cannot create output directory " + dir_.string() + (ec ? ": " + ec.message() : ""));
    }
  }

  std::filesystem::path add(const std::string& name) {
    files_.push_back(name);
    return dir_ / name;
  }

  const std::filesystem::path& dir() const noexcept { return dir_; }
  const std::vector<std::string>& files() const noexcept { return files_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> files_;
};

class Summary {
 public:
  void add(std::string key, double value) { rows_.emplace_back(std::move(key), value); }

  void write(const std::filesystem::path& path) const {
    auto out = open_output(path);
    out << "key,value\n";
    for (const auto& [key, value] : rows_) out << key << ',' << format_double(value) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
  }

 private:
  std::vector<std::pair<std::string, double>> rows_;
};

class Log {
 public:
  explicit Log(std::ostream* out) : out_(out) {}
  template <class... Parts>
  void operator()(const Parts&... parts) const {
    if (!out_) return;
    ((*out_) << ... << parts) << '\n';
    out_->flush();
  }

 private:
  std::ostream* out_;
};

std::size_t steps_for(double span, double dt, const char* what) {
  const double steps = std::ceil(span / dt - 1e-9);
  if (!(steps >= 1.0) || steps > kMaxSteps) {
    throw ParameterError(std::string(what) + " needs " + format_double(steps) + " steps of " + format_double(dt) +
                         "; adjust the parameters");
  }
  return static_cast<std::size_t>(steps);
}

/// Smallest power-of-two grid on [-4/sqrt(lambda), 4/sqrt(lambda)] that
/// resolves the ansatz width (dx < b0/8), at least 1024 points.
GridSpec eigen_grid(const SystemParams& p, double b0) {
  const double half = 4.0 / std::sqrt(p.lambda);
  std::size_t n = 1024;
  while (2.0 * half / static_cast<double>(n) >= b0 / 8.0 && n < (std::size_t{1} << 16)) n *= 2;
  return symmetric_grid(half, n);
}

std::vector<double> read_column(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows,
                                std::string_view name, const std::string& source) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw ParameterError(source + ": no '" + std::string(name) + "' column");
  const auto col = static_cast<std::size_t>(it - header.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row.at(col));
  return out;
}

DriveSpec load_replay(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot read replay drive file " + file);
  std::string line;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (header.empty()) {
      header = cells;
      continue;
    }
    if (cells.size() != header.size()) throw ParameterError(file + ": ragged row '" + line + "'");
    std::vector<double> row(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (!parse_double(cells[i], row[i])) throw ParameterError(file + ": bad number '" + cells[i] + "'");
    }
    rows.push_back(std::move(row));
  }
  return DriveSpec::replay(read_column(header, rows, "t", file), read_column(header, rows, "q", file));
}

DriveSpec make_drive(const DriveConfig& d) {
  switch (d.kind) {
    case DriveKindConfig::none:
      return DriveSpec::none();
    case DriveKindConfig::sinusoid:
      return DriveSpec::sinusoid(d.amplitude, d.omega, d.offset, d.phase);
    case DriveKindConfig::replay:
      return load_replay(d.file);
  }
  return DriveSpec::none();
}

void write_lyapunov_csv(const std::filesystem::path& path, const std::vector<double>& params,
                        const std::vector<LyapunovResult>& results) {
  auto out = open_output(path);
  out << "param_value,exponent,converged_flag\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    out << format_double(params[i]) << ',' << format_double(results[i].exponent) << ','
        << (results[i].converged ? 1 : 0) << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

void write_manifest(const Artifacts& art, const ExperimentConfig& c, std::uint64_t hash) {
  char hex[17];
  for (int i = 0; i < 16; ++i) hex[i] = "0123456789abcdef"[(hash >> (60 - 4 * i)) & 0xF];
  hex[16] = '\0';
  nlohmann::ordered_json j;
  j["experiment"] = std::string(experiment_name(c.experiment));
  j["version"] = std::string(version());
  j["config_hash"] = std::string("fnv1a64:") + hex;
  j["seed"] = c.seed;
  j["files"] = art.files();
  const auto path = art.dir() / "manifest.json";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

// ---- experiments ----------------------------------------------------------

void run_eigen(const ExperimentConfig& c, Artifacts& art, const Log& log) {
  const auto grid = effective_grid(c);
  log("eigen: diagonalizing on ", grid.n_points, " points");
  const auto pairs = eigenpairs(c.params, grid, c.eigen_k);
  {
    const auto path = art.add("eigen.csv");
    auto out = open_output(path);
    out << "n,energy,discrete_energy,parity\n";
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      out << i << ',' << format_double(pairs[i].energy) << ',' << format_double(pairs[i].discrete_energy) << ','
          << pairs[i].parity << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
  }
  Summary s;
  if (pairs.size() >= 2) s.add("e1_minus_e0", pairs[1].energy - pairs[0].energy);
  if (grid.symmetric()) {
    const auto gap = tunneling_gap(c.params, grid);
    s.add("tunneling_gap", gap.extrapolated);
    s.add("tunneling_gap_discrete", gap.discrete);
    s.add("tunneling_period", kTwoPi * c.params.hbar / gap.extrapolated);
  }
  s.write(art.add("summary.csv"));
}

void run_evolve(const ExperimentConfig& c, Artifacts& art, const Log& log) {
  const auto shape = solve_ansatz_params(c.params);
  const auto state = normalize(TwoGaussianState{c.initial.n1, c.initial.n2, c.initial.epsilon, shape});
  const auto grid = effective_grid(c);
  const auto psi = synthesize_wavefunction(state, grid);
  const auto n_steps = steps_for(c.run.t_end, c.run.dt, "evolve");
  log("evolve: ", n_steps, " steps on ", grid.n_points, " points");
  SplitOperator op(grid, c.params, c.run.dt);
  auto current = psi;
  ObservableSeries series;
  series.push(op.measure(current));
  for (std::size_t done = 0; done + c.run.sample_every <= n_steps;) {
    op.advance(current, c.run.sample_every);
    done += c.run.sample_every;
    current.time = static_cast<double>(done) * c.run.dt;
    series.push(op.measure(current));
  }
  write_csv(art.add("observables.csv"), series);
  write_snapshot(art.add("final_state.bin"), current);

  Summary s;
  s.add("a0", shape.a0);
  s.add("b0", shape.b0);
  s.add("norm_final", current.norm());
  s.add("energy_drift", series.energy.back() - series.energy.front());
  if (series.size() >= 256) {
    const auto spectrum = power_spectrum(series.times, series.q_drive);
    write_csv(art.add("spectrum.csv"), spectrum);
    s.add("q_dominant_omega", spectrum.dominant_omega());
    s.add("x_dominant_omega", power_spectrum(series.times, series.mean_x).dominant_omega());
  }
  s.write(art.add("summary.csv"));
}

void run_ansatz(const ExperimentConfig& c, Artifacts& art, const Log& log, unsigned jobs) {
  auto hbars = c.ansatz_hbar;
  if (hbars.empty()) hbars.push_back(c.params.hbar);
  log("ansatz: ", hbars.size(), " value(s) of hbar");
  struct Row {
    AnsatzShape shape;
    TunnelingSplitting split;
    double omega = 0.0;
  };
  std::vector<Row> rows(hbars.size());
  detail::parallel_for(hbars.size(), jobs, [&](std::size_t i) {
    const auto p = make_params(c.params.lambda, hbars[i], c.params.mass);
    rows[i].shape = solve_ansatz_params(p);
    rows[i].split = tunneling_splitting(rows[i].shape);
    rows[i].omega = population_frequency(rows[i].shape);
  });
  {
    const auto path = art.add("ansatz.csv");
    auto out = open_output(path);
    out << "hbar,a0,b0,condition_residual,delta_e_ansatz,delta_e_asymptotic,delta_e_variational,population_omega\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      write_row(out, {hbars[i], r.shape.a0, r.shape.b0, r.shape.condition_residual(), r.split.ansatz,
                      r.split.asymptotic, r.split.variational, r.omega});
    }
    if (!out) throw IoError("write failed: " + path.string());
  }
  const auto shape = solve_ansatz_params(c.params);
  const auto state = normalize(TwoGaussianState{c.initial.n1, c.initial.n2, c.initial.epsilon, shape});
  auto out = open_output(art.add("state.txt"));
  out << to_record(state);
  if (!out) throw IoError("write failed: state.txt");
}

void run_duffing(const ExperimentConfig& c, Artifacts& art, const Log& log, unsigned jobs) {
  const auto drive = make_drive(c.drive);
  const double x0 = c.initial.x.value_or(well_minima(c.params).right);
  const auto start = make_phase_point(x0, c.initial.v, 0.0);
  log("duffing: integrating to t = ", format_double(c.run.t_end));
  const auto traj = integrate(start, c.params, drive, c.run.t_end, c.run.dt, c.run.sample_every);
  write_csv(art.add("trajectory.csv"), traj);

  Summary s;
  if (drive.kind == DriveKind::sinusoid && drive.angular_frequency > 0.0) {
    const double period = kTwoPi / drive.angular_frequency;
    if (period > 10.0 * traj.sample_interval) {
      const auto section = poincare_section(traj, period, 0.0);
      write_section_csv(art.add("section.csv"), section);
      s.add("section_points", static_cast<double>(section.size()));
      if (section.size() >= 10) s.add("correlation_dimension", correlation_dimension(section));
    }
  }

  std::vector<double> params;
  std::vector<PhasePoint> starts;
  std::vector<DriveSpec> drives;
  auto add_point = [&](double param, PhasePoint p0, DriveSpec d) {
    params.push_back(param);
    starts.push_back(p0);
    drives.push_back(std::move(d));
  };
  switch (c.sweep.param) {
    case SweepParam::none:
      add_point(drive.amplitude, start, drive);
      break;
    case SweepParam::amplitude:
      for (double a : c.sweep.values) {
        auto d = drive;
        d.amplitude = a;
        if (d.kind == DriveKind::none) d.kind = DriveKind::sinusoid;
        add_point(a, start, d);
      }
      break;
    case SweepParam::omega:
      for (double w : c.sweep.values) {
        auto d = drive;
        d.angular_frequency = w;
        if (d.kind == DriveKind::none) d.kind = DriveKind::sinusoid;
        add_point(w, start, d);
      }
      break;
    case SweepParam::x0:
      for (double x : c.sweep.values) add_point(x, make_phase_point(x, c.initial.v, 0.0), drive);
      break;
    case SweepParam::ensemble: {
      SplitMix64 rng(c.seed);
      for (std::size_t i = 0; i < c.sweep.count; ++i) {
        const double x = rng.uniform(c.sweep.min, c.sweep.max);
        add_point(x, make_phase_point(x, c.initial.v, 0.0), drive);
      }
      break;
    }
  }
  const double t_lyap = c.lyapunov.t_end.value_or(c.run.t_end);
  log("duffing: ", params.size(), " Lyapunov point(s) to t = ", format_double(t_lyap));
  std::vector<LyapunovResult> results(params.size());
  detail::parallel_for(params.size(), jobs, [&](std::size_t i) {
    results[i] = largest_lyapunov(starts[i], c.params, drives[i], t_lyap, c.run.dt, c.lyapunov.renorm_every,
                                  c.lyapunov.delta0);
  });
  write_lyapunov_csv(art.add("lyapunov.csv"), params, results);
  if (!traj.energy.empty()) s.add("energy_drift", traj.energy.back() - traj.energy.front());
  s.write(art.add("summary.csv"));
}

void run_epsilon(const ExperimentConfig& c, Artifacts& art, const Log& log) {
  const auto shape = solve_ansatz_params(c.params);
  const double eps0 = c.initial.x.value_or(c.initial.epsilon);
  log("epsilon: a0 = ", format_double(shape.a0), ", epsilon(0) = ", format_double(eps0));
  const auto traj = epsilon_dynamics(make_phase_point(eps0, c.initial.v, 0.0), shape, c.run.t_end, c.run.dt,
                                     c.run.sample_every);
  write_csv(art.add("epsilon.csv"), traj);
  Summary s;
  s.add("a0", shape.a0);
  s.add("b0", shape.b0);
  s.add("linear_omega", small_oscillation_frequency(c.params, shape.a0));
  if (const auto w = crossing_frequency(traj, 0.0)) s.add("measured_omega", *w);
  s.add("regime_exit", traj.regime_exit ? 1.0 : 0.0);
  if (traj.regime_exit) s.add("regime_exit_time", traj.regime_exit_time);
  s.write(art.add("summary.csv"));
}

void run_poposc(const ExperimentConfig& c, Artifacts& art, const Log& log) {
  const auto shape = solve_ansatz_params(c.params);
  const double omega = population_frequency(shape);
  log("poposc: Omega = ", format_double(omega));
  const auto traj = population_oscillation(c.initial.pop_diff, c.initial.rate, shape, c.run.t_end, c.run.dt);
  write_csv(art.add("poposc.csv"), traj);
  const auto split = tunneling_splitting(shape);
  Summary s;
  s.add("a0", shape.a0);
  s.add("b0", shape.b0);
  s.add("population_omega", omega);
  s.add("population_period", kTwoPi / omega);
  s.add("ansatz_tunneling_period", kTwoPi * c.params.hbar / split.ansatz);
  s.write(art.add("summary.csv"));
}

// Brick-wall low-pass of a uniformly sampled series: DCT-II, drop every
// component at angular frequency >= cutoff, DCT-III back. The DCT works on the
// even extension, so the ends do not wrap around.
std::vector<double> lowpass(const std::vector<double>& v, double interval, double cutoff) {
  const std::size_t n = v.size();
  double* buf = fftw_alloc_real(n);
  if (!buf) throw std::bad_alloc();
  detail::FftwPlan forward;
  detail::FftwPlan backward;
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    const int len = static_cast<int>(n);
    forward = detail::FftwPlan(fftw_plan_r2r_1d(len, buf, buf, FFTW_REDFT10, FFTW_ESTIMATE));
    backward = detail::FftwPlan(fftw_plan_r2r_1d(len, buf, buf, FFTW_REDFT01, FFTW_ESTIMATE));
  }
  std::copy(v.begin(), v.end(), buf);
  forward.execute();
  // Component k has angular frequency pi k / (n interval).
  const double step = std::numbers::pi / (static_cast<double>(n) * interval);
  for (std::size_t k = 0; k < n; ++k) {
    if (static_cast<double>(k) * step >= cutoff) buf[k] = 0.0;
  }
  backward.execute();
  std::vector<double> out(n);
  const double scale = 1.0 / (2.0 * static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) out[i] = buf[i] * scale;
  fftw_free(buf);
  return out;
}

void run_crossover(const ExperimentConfig& c, Artifacts& art, const Log& log, unsigned jobs) {
  const auto& x = c.crossover;
  const auto& p = c.params;
  const auto shape = solve_ansatz_params(p);
  const double well_omega = small_oscillation_frequency(p, shape.a0);

  const auto egrid = eigen_grid(p, shape.b0);
  log("crossover: tunneling gap on ", egrid.n_points, " points");
  const double gap = tunneling_gap(p, egrid).extrapolated;
  const double tunnel_omega = gap / p.hbar;
  const double tunnel_period = kTwoPi / tunnel_omega;

  const auto grid = effective_grid(c);
  const auto packet = synthesize_wavefunction(one_well_state(shape, x.displacement * shape.b0), grid);

  const auto short_steps = steps_for(x.short_periods * kTwoPi / well_omega, c.run.dt, "short window");
  log("crossover: short window, ", short_steps, " steps");
  const auto q_short = record_q_drive(packet, p, c.run.dt, short_steps, c.run.sample_every);
  write_csv(art.add("q_short.csv"), q_short);

  const auto long_steps = steps_for(x.long_periods * tunnel_period, x.long_dt, "long window");
  log("crossover: long window, ", long_steps, " steps");
  const auto q_long = record_q_drive(packet, p, x.long_dt, long_steps, x.long_sample_every);
  write_csv(art.add("q_long.csv"), q_long);

  const auto spec_short = power_spectrum(q_short.times, q_short.q_drive);
  const auto spec_long = power_spectrum(q_long.times, q_long.q_drive);
  write_csv(art.add("spectrum_short.csv"), spec_short);
  write_csv(art.add("spectrum_long.csv"), spec_long);

  // Lines with fewer than two cycles in the short window are not resolved there.
  const double short_floor = 2.0 * spec_short.resolution;
  const double x_omega = power_spectrum(q_short.times, q_short.mean_x).dominant_omega(short_floor);
  const double q_omega = spec_short.dominant_omega(short_floor);
  const double low_cut = 0.1 * std::numbers::sqrt2;
  const double low_fraction = spec_long.fraction_below(low_cut);
  const double low_omega = spec_long.dominant_omega(0.0, low_cut);
  const double amplitude = 1.5 * p.lambda * shape.a0 * shape.b0 * shape.b0;

  struct Point {
    double param;
    PhasePoint start;
    DriveSpec drive;
    double t_end;
  };
  const PhasePoint start = make_phase_point(x.x0, 0.0, 0.0);
  const double t_fast = x.lyapunov_periods * kTwoPi / q_omega;
  std::vector<Point> points = {
      {q_omega, start, DriveSpec::sinusoid(amplitude, q_omega), t_fast},
      {tunnel_omega, start, DriveSpec::sinusoid(amplitude, tunnel_omega), t_fast},
  };
  if (x.replay) {
    const double interval = q_long.times[1] - q_long.times[0];
    auto drive = DriveSpec::replay(q_long.times, lowpass(q_long.q_drive, interval, low_cut));
    PhasePoint s0 = start;
    s0.t = q_long.times.front();
    points.push_back({low_omega, s0, std::move(drive), q_long.times.back()});
  }
  log("crossover: ", points.size(), " Lyapunov runs");
  std::vector<LyapunovResult> results(points.size());
  detail::parallel_for(points.size(), jobs, [&](std::size_t i) {
    results[i] = largest_lyapunov(points[i].start, p, points[i].drive, points[i].t_end, x.lyapunov_dt,
                                  c.lyapunov.renorm_every, c.lyapunov.delta0);
  });
  std::vector<double> params;
  for (const auto& pt : points) params.push_back(pt.param);
  write_lyapunov_csv(art.add("lyapunov.csv"), params, results);

  Summary s;
  s.add("lambda", p.lambda);
  s.add("hbar", p.hbar);
  s.add("mass", p.mass);
  s.add("a0", shape.a0);
  s.add("b0", shape.b0);
  s.add("well_omega", well_omega);
  s.add("tunneling_gap", gap);
  s.add("tunneling_omega", tunnel_omega);
  s.add("drive_amplitude_scale", amplitude);
  s.add("short_x_omega", x_omega);
  s.add("short_q_omega", q_omega);
  s.add("short_q_mean_amplitude", mean_cycle_amplitude(q_short.times, q_short.q_drive, kTwoPi / x_omega));
  s.add("long_low_fraction", low_fraction);
  s.add("long_low_omega", low_omega);
  s.add("lyapunov_fast", results[0].exponent);
  s.add("lyapunov_slow", results[1].exponent);
  if (x.replay) s.add("lyapunov_replay_lowpass", results[2].exponent);
  s.add("lyapunov_gap", results[0].exponent - results[1].exponent);
  s.write(art.add("summary.csv"));
}

template <class E>
[[noreturn]] void rethrow_as(const E& e, std::string_view context) {
  throw E(std::string(context) + ": " + e.what());
}

}  // namespace

std::string_view version() noexcept { return "0.3.0"; }

double mean_cycle_amplitude(const std::vector<double>& times, const std::vector<double>& values, double period) {
  if (times.size() != values.size()) throw ParameterError("mean_cycle_amplitude: length mismatch");
  if (!(period > 0.0)) throw ParameterError("mean_cycle_amplitude: period must be > 0");
  double sum = 0.0;
  std::size_t cycles = 0;
  std::size_t i = 0;
  while (i < times.size()) {
    const double stop = times[i] + period;
    if (times.back() < stop) break;
    double lo = values[i];
    double hi = values[i];
    std::size_t j = i;
    for (; j < times.size() && times[j] < stop; ++j) {
      lo = std::min(lo, values[j]);
      hi = std::max(hi, values[j]);
    }
    sum += 0.5 * (hi - lo);
    ++cycles;
    i = j;
  }
  if (cycles == 0) throw ParameterError("mean_cycle_amplitude: series shorter than one period");
  return sum / static_cast<double>(cycles);
}

RunResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  Artifacts art(options.output_dir.value_or(std::filesystem::path(config.output_dir)));
  const Log log(options.log);
  const unsigned jobs = std::max(1u, options.jobs);
  const std::string_view name = experiment_name(config.experiment);
  try {
    switch (config.experiment) {
      case ExperimentKind::eigen:
        run_eigen(config, art, log);
        break;
      case ExperimentKind::evolve:
        run_evolve(config, art, log);
        break;
      case ExperimentKind::ansatz:
        run_ansatz(config, art, log, jobs);
        break;
      case ExperimentKind::duffing:
        run_duffing(config, art, log, jobs);
        break;
      case ExperimentKind::epsilon:
        run_epsilon(config, art, log);
        break;
      case ExperimentKind::poposc:
        run_poposc(config, art, log);
        break;
      case ExperimentKind::crossover:
        run_crossover(config, art, log, jobs);
        break;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const IoError& e) {
    rethrow_as(e, name);
  } catch (const ParameterError& e) {
    rethrow_as(e, name);
  } catch (const NoSolution& e) {
    rethrow_as(e, name);
  } catch (const DegenerateState& e) {
    rethrow_as(e, name);
  } catch (const GridTooNarrow& e) {
    rethrow_as(e, name);
  } catch (const ResolutionError& e) {
    rethrow_as(e, name);
  } catch (const EdgeLeakage& e) {
    rethrow_as(e, name);
  } catch (const DriveOutOfRange& e) {
    rethrow_as(e, name);
  } catch (const UnstableIntegration& e) {
    rethrow_as(e, name);
  } catch (const PeriodMismatch& e) {
    rethrow_as(e, name);
  } catch (const NonuniformSampling& e) {
    rethrow_as(e, name);
  } catch (const Error& e) {
    rethrow_as(e, name);
  }
  const auto hash = config_hash(config);
  write_manifest(art, config, hash);
  return RunResult{art.dir(), art.files(), hash};
}

}  // namespace dwell
