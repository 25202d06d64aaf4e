#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "dwell/reduced.hpp"

namespace dwell {

struct LyapunovResult {
  double exponent = 0.0;
  /// Running estimate (1/t) sum log(d_i/delta0), thinned to at most ~10^4 entries.
  std::vector<double> convergence_times;
  std::vector<double> convergence_series;
  std::size_t renorm_interval = 0;
  double perturbation_size = 0.0;
  /// Final 20% of convergence_series has relative spread < 25%.
  bool converged = false;
};

/// Two-trajectory Benettin estimate of the largest Lyapunov exponent of the
/// driven centroid equation. The perturbed copy starts delta0 away along x
/// and is pulled back to distance delta0 every `renorm_every` steps.
///
/// Driven runs must cover at least 500 reference periods, the reference being
/// the shorter of the drive period and the small-oscillation period
/// 2 pi / sqrt(2/m). Throws UnstableIntegration when either copy leaves
/// |x| <= 10/sqrt(lambda).
LyapunovResult largest_lyapunov(const PhasePoint& initial, const SystemParams& p, const DriveSpec& drive,
                                double t_end, double dt, std::size_t renorm_every = 10, double delta0 = 1e-8);

/// Stroboscopic section: (x, v) at t = phase + n * drive_period, cubic
/// interpolated between samples. Throws PeriodMismatch when
/// drive_period <= 10 * sample interval.
std::vector<PhasePoint> poincare_section(const Trajectory& traj, double drive_period, double phase = 0.0);

/// Grassberger-Procaccia correlation dimension of a point set in the (x, v)
/// plane: radius ladder spanning three decades below the set diameter,
/// least-squares slope of log C(r) over the middle decade.
double correlation_dimension(std::span<const PhasePoint> points);

enum class Window { rectangular, hann };

std::string_view window_name(Window w) noexcept;

struct SpectrumResult {
  std::vector<double> omega;
  std::vector<double> power;
  Window window = Window::hann;
  double resolution = 0.0;  // d omega
  /// Window-weighted variance sum w^2 (y - mean)^2 / sum w^2; equals the plain
  /// variance for the rectangular window. Sum power * resolution reproduces it.
  double weighted_variance = 0.0;
  double variance = 0.0;

  double total_power() const noexcept;
  /// Strongest bin with omega in (min_omega, max_omega], refined by a
  /// three-point log-parabolic fit.
  double dominant_omega(double min_omega = 0.0,
                        double max_omega = std::numeric_limits<double>::infinity()) const;
  /// Share of total power at omega < cutoff (DC excluded).
  double fraction_below(double cutoff) const noexcept;
};

/// One-sided tapered periodogram of a uniformly sampled series (mean removed).
/// Requires >= 256 samples; throws NonuniformSampling otherwise.
SpectrumResult power_spectrum(std::span<const double> times, std::span<const double> values,
                              Window window = Window::hann);

/// CSV `omega,power`.
void write_csv(std::ostream& out, const SpectrumResult& spectrum);
void write_csv(const std::filesystem::path& path, const SpectrumResult& spectrum);

/// CSV `x,v`.
void write_section_csv(const std::filesystem::path& path, std::span<const PhasePoint> points);

}  // namespace dwell
