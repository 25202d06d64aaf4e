#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "dwell/ansatz.hpp"
#include "dwell/potential.hpp"

namespace dwell {

/// Centroid phase-space point; x is <x> or epsilon depending on the equation.
struct PhasePoint {
  double x = 0.0;
  double v = 0.0;
  double t = 0.0;
};

/// Throws ParameterError on non-finite components.
PhasePoint make_phase_point(double x, double v, double t = 0.0);

enum class DriveKind { none, sinusoid, replay };

/// Recorded Q(t) samples, strictly increasing in t. Evaluated by local cubic
/// (four-point Lagrange) interpolation; never extrapolated.
class ReplaySeries {
 public:
  ReplaySeries(std::vector<double> times, std::vector<double> values);

  double operator()(double t) const;
  double t_begin() const noexcept { return times_.front(); }
  double t_end() const noexcept { return times_.back(); }
  std::span<const double> times() const noexcept { return times_; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<double> times_;
  std::vector<double> values_;
};

/// Prescribed drive Q(t) entering x'' = (x - lambda x^3 + Q(t)) / m.
struct DriveSpec {
  DriveKind kind = DriveKind::none;
  double amplitude = 0.0;
  double angular_frequency = 0.0;
  double offset = 0.0;
  double phase = 0.0;
  std::shared_ptr<const ReplaySeries> series;

  static DriveSpec none();
  /// C + A cos(omega t + phi)
  static DriveSpec sinusoid(double amplitude, double angular_frequency, double offset = 0.0, double phase = 0.0);
  static DriveSpec replay(std::vector<double> times, std::vector<double> values);

  /// Throws DriveOutOfRange when a replay drive is sampled outside its span.
  double operator()(double t) const;
};

/// Short-time drive of a one-well packet: Q ~ -3/2 lambda b0^2 (a0 + eps(t)) with
/// eps(t) = eps_amplitude cos(omega t), omega = sqrt(2 a0^2 lambda / m).
DriveSpec short_time_drive(const AnsatzShape& shape, double eps_amplitude);

struct Trajectory {
  std::vector<PhasePoint> samples;
  DriveSpec drive;
  SystemParams params;
  /// v^2/2 - x^2/2 + lambda x^4/4 per sample (m = 1 form scaled by m); undriven runs only.
  std::vector<double> energy;
  double sample_interval = 0.0;
  /// Set by epsilon_dynamics when |eps| reached a0; integration continues.
  bool regime_exit = false;
  double regime_exit_time = 0.0;
};

/// m v^2/2 + V(x).
double duffing_energy(double x, double v, const SystemParams& p) noexcept;

/// One classical RK4 step of x'' = (x - lambda x^3 + Q(t)) / m. dt in (0, 0.01].
PhasePoint duffing_step(const PhasePoint& state, const SystemParams& p, const DriveSpec& drive, double dt);

/// Fixed-step integration from initial.t to t_end (rounded to whole steps),
/// sampling every `sample_every` steps including the initial point.
Trajectory integrate(const PhasePoint& initial, const SystemParams& p, const DriveSpec& drive, double t_end,
                     double dt, std::size_t sample_every = 1);

/// eps'' = -(2 a0^2 lambda eps + 3 a0 lambda eps^2 + lambda eps^3) / m, full cubic right-hand side.
Trajectory epsilon_dynamics(const PhasePoint& initial, const AnsatzShape& shape, double t_end, double dt,
                            std::size_t sample_every = 1);

/// Omega = sqrt(a0 hbar^2 / (4 m b0^6) exp(-a0^2/b0^2)).
double population_frequency(const AnsatzShape& shape);

/// Harmonic evolution of pop_diff at population_frequency, sampled every dt
/// (closed-form solution of the linear equation). x = pop_diff, v = its rate.
Trajectory population_oscillation(double initial_pop_diff, double initial_rate, const AnsatzShape& shape,
                                  double t_end, double dt);

/// Mean angular frequency from upward zero crossings of x(t) - centre,
/// linearly interpolated. nullopt when fewer than two crossings exist.
std::optional<double> crossing_frequency(const Trajectory& traj, double centre = 0.0);

/// CSV `t,x,v` or `t,x,v,energy` when energies were recorded.
void write_csv(std::ostream& out, const Trajectory& traj);
void write_csv(const std::filesystem::path& path, const Trajectory& traj);

}  // namespace dwell
