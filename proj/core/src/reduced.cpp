#include "dwell/reduced.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "dwell/csv.hpp"
#include "dwell/errors.hpp"
#include "dwell/numfmt.hpp"

namespace dwell {

PhasePoint make_phase_point(double x, double v, double t) {
  if (!std::isfinite(x) || !std::isfinite(v) || !std::isfinite(t)) {
    throw ParameterError("phase point components must be finite");
  }
  return {x, v, t};
}

ReplaySeries::ReplaySeries(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
  if (times_.size() != values_.size()) throw ParameterError("replay series: times and values differ in length");
  if (times_.size() < 4) throw ParameterError("replay series needs at least 4 samples");
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1])) throw ParameterError("replay series times must be strictly increasing");
  }
}

double ReplaySeries::operator()(double t) const {
  // Accumulated step times can land a few ulps past either end; that is
  // rounding, not extrapolation.
  const double slack = 1e-12 * std::max({1.0, std::abs(times_.front()), std::abs(times_.back())});
  if (t < times_.front() && t >= times_.front() - slack) t = times_.front();
  if (t > times_.back() && t <= times_.back() + slack) t = times_.back();
  if (!(t >= times_.front()) || !(t <= times_.back())) {
    throw DriveOutOfRange("replay drive sampled at t = " + format_double(t) + " outside [" +
                          format_double(times_.front()) + ", " + format_double(times_.back()) + "]");
  }
  const auto upper = std::upper_bound(times_.begin(), times_.end(), t);
  auto seg = static_cast<std::ptrdiff_t>(upper - times_.begin()) - 1;  // times_[seg] <= t
  const auto last = static_cast<std::ptrdiff_t>(times_.size()) - 1;
  if (seg >= last) return values_.back();
  // Stencil seg-1 .. seg+2, shifted inward at the ends.
  std::ptrdiff_t first = std::clamp<std::ptrdiff_t>(seg - 1, 0, last - 3);
  double result = 0.0;
  for (std::ptrdiff_t i = first; i < first + 4; ++i) {
    double basis = 1.0;
    for (std::ptrdiff_t j = first; j < first + 4; ++j) {
      if (j != i) basis *= (t - times_[j]) / (times_[i] - times_[j]);
    }
    result += basis * values_[i];
  }
  return result;
}

DriveSpec DriveSpec::none() { return {}; }

DriveSpec DriveSpec::sinusoid(double amplitude, double angular_frequency, double offset, double phase) {
  if (!std::isfinite(amplitude) || !std::isfinite(angular_frequency) || !std::isfinite(offset) ||
      !std::isfinite(phase)) {
    throw ParameterError("sinusoid drive parameters must be finite");
  }
  DriveSpec d;
  d.kind = DriveKind::sinusoid;
  d.amplitude = amplitude;
  d.angular_frequency = angular_frequency;
  d.offset = offset;
  d.phase = phase;
  return d;
}

DriveSpec DriveSpec::replay(std::vector<double> times, std::vector<double> values) {
  DriveSpec d;
  d.kind = DriveKind::replay;
  d.series = std::make_shared<const ReplaySeries>(std::move(times), std::move(values));
  return d;
}

double DriveSpec::operator()(double t) const {
  switch (kind) {
    case DriveKind::none:
      return 0.0;
    case DriveKind::sinusoid:
      return offset + amplitude * std::cos(angular_frequency * t + phase);
    case DriveKind::replay:
      return (*series)(t);
  }
  return 0.0;
}

DriveSpec short_time_drive(const AnsatzShape& shape, double eps_amplitude) {
  const auto& p = shape.params;
  const double scale = -1.5 * p.lambda * shape.b0 * shape.b0;
  return DriveSpec::sinusoid(scale * eps_amplitude, small_oscillation_frequency(p, shape.a0), scale * shape.a0);
}

double duffing_energy(double x, double v, const SystemParams& p) noexcept {
  return 0.5 * p.mass * v * v + potential(x, p);
}

namespace {

template <class Accel>
PhasePoint rk4(const PhasePoint& s, double dt, Accel&& accel) {
  const double h = 0.5 * dt;
  const double k1x = s.v;
  const double k1v = accel(s.x, s.t);
  const double k2x = s.v + h * k1v;
  const double k2v = accel(s.x + h * k1x, s.t + h);
  const double k3x = s.v + h * k2v;
  const double k3v = accel(s.x + h * k2x, s.t + h);
  const double k4x = s.v + dt * k3v;
  const double k4v = accel(s.x + dt * k3x, s.t + dt);
  return {s.x + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
          s.v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v), s.t + dt};
}

void check_step(double dt) {
  if (!(dt > 0.0) || dt > 0.01) throw ParameterError("dt must lie in (0, 0.01], got " + format_double(dt));
}

std::size_t step_count(double t0, double t_end, double dt) {
  if (!(t_end >= t0)) throw ParameterError("t_end precedes the initial time");
  return static_cast<std::size_t>(std::llround((t_end - t0) / dt));
}

}  // namespace

PhasePoint duffing_step(const PhasePoint& state, const SystemParams& p, const DriveSpec& drive, double dt) {
  check_step(dt);
  const double inv_m = 1.0 / p.mass;
  return rk4(state, dt, [&](double x, double t) { return (force(x, p) + drive(t)) * inv_m; });
}

Trajectory integrate(const PhasePoint& initial, const SystemParams& p, const DriveSpec& drive, double t_end,
                     double dt, std::size_t sample_every) {
  validate(p);
  check_step(dt);
  if (sample_every == 0) throw ParameterError("sample_every must be >= 1");
  const auto start = make_phase_point(initial.x, initial.v, initial.t);
  const std::size_t n = step_count(start.t, t_end, dt);
  const bool undriven = drive.kind == DriveKind::none;

  Trajectory traj;
  traj.drive = drive;
  traj.params = p;
  traj.sample_interval = dt * static_cast<double>(sample_every);
  traj.samples.reserve(n / sample_every + 1);
  auto record = [&](const PhasePoint& s) {
    traj.samples.push_back(s);
    if (undriven) traj.energy.push_back(duffing_energy(s.x, s.v, p));
  };

  const double inv_m = 1.0 / p.mass;
  auto accel = [&](double x, double t) { return (force(x, p) + drive(t)) * inv_m; };
  PhasePoint s = start;
  record(s);
  for (std::size_t i = 1; i <= n; ++i) {
    s = rk4(s, dt, accel);
    s.t = start.t + static_cast<double>(i) * dt;
    if (i % sample_every == 0) record(s);
  }
  return traj;
}

Trajectory epsilon_dynamics(const PhasePoint& initial, const AnsatzShape& shape, double t_end, double dt,
                            std::size_t sample_every) {
  const auto& p = shape.params;
  validate(p);
  check_step(dt);
  if (sample_every == 0) throw ParameterError("sample_every must be >= 1");
  const auto start = make_phase_point(initial.x, initial.v, initial.t);
  const double a0 = shape.a0;
  if (!(std::abs(start.x) < a0)) throw ParameterError("epsilon_dynamics requires |eps(0)| < a0");

  const double linear = 2.0 * a0 * a0 * p.lambda;
  const double quadratic = 3.0 * a0 * p.lambda;
  const double inv_m = 1.0 / p.mass;
  auto accel = [&](double e, double) { return -(linear * e + quadratic * e * e + p.lambda * e * e * e) * inv_m; };

  Trajectory traj;
  traj.params = p;
  traj.sample_interval = dt * static_cast<double>(sample_every);
  const std::size_t n = step_count(start.t, t_end, dt);
  PhasePoint s = start;
  traj.samples.push_back(s);
  for (std::size_t i = 1; i <= n; ++i) {
    s = rk4(s, dt, accel);
    s.t = start.t + static_cast<double>(i) * dt;
    if (!traj.regime_exit && std::abs(s.x) >= a0) {
      traj.regime_exit = true;
      traj.regime_exit_time = s.t;
    }
    if (i % sample_every == 0) traj.samples.push_back(s);
  }
  return traj;
}

double population_frequency(const AnsatzShape& shape) {
  const auto& p = shape.params;
  const double a0 = shape.a0;
  const double b2 = shape.b0 * shape.b0;
  const double omega_sq = a0 * p.hbar * p.hbar / (4.0 * p.mass * b2 * b2 * b2) * std::exp(-a0 * a0 / b2);
  return std::sqrt(omega_sq);
}

Trajectory population_oscillation(double initial_pop_diff, double initial_rate, const AnsatzShape& shape,
                                  double t_end, double dt) {
  if (!(std::abs(initial_pop_diff) <= 1.0)) throw ParameterError("|initial pop_diff| must be <= 1");
  if (!(dt > 0.0) || !(t_end >= 0.0)) throw ParameterError("population_oscillation needs dt > 0 and t_end >= 0");
  const double omega = population_frequency(shape);
  Trajectory traj;
  traj.params = shape.params;
  traj.sample_interval = dt;
  const auto n = static_cast<std::size_t>(std::floor(t_end / dt + 1e-9));
  traj.samples.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) * dt;
    const double c = std::cos(omega * t);
    const double s = std::sin(omega * t);
    traj.samples.push_back({initial_pop_diff * c + initial_rate / omega * s,
                            -initial_pop_diff * omega * s + initial_rate * c, t});
  }
  return traj;
}

std::optional<double> crossing_frequency(const Trajectory& traj, double centre) {
  std::vector<double> crossings;
  const auto& s = traj.samples;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double a = s[i - 1].x - centre;
    const double b = s[i].x - centre;
    if (a < 0.0 && b >= 0.0) crossings.push_back(s[i - 1].t + (s[i].t - s[i - 1].t) * (-a) / (b - a));
  }
  if (crossings.size() < 2) return std::nullopt;
  const double period = (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
  return 2.0 * std::numbers::pi / period;
}

void write_csv(std::ostream& out, const Trajectory& traj) {
  const bool with_energy = traj.energy.size() == traj.samples.size() && !traj.energy.empty();
  out << (with_energy ? "t,x,v,energy\n" : "t,x,v\n");
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const auto& s = traj.samples[i];
    if (with_energy) {
      write_row(out, {s.t, s.x, s.v, traj.energy[i]});
    } else {
      write_row(out, {s.t, s.x, s.v});
    }
  }
}

void write_csv(const std::filesystem::path& path, const Trajectory& traj) {
  auto out = open_output(path);
  write_csv(out, traj);
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace dwell
