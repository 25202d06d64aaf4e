#include "dwell/chaos.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>
#include <ostream>

#include "dwell/csv.hpp"
#include "dwell/errors.hpp"
#include "dwell/numfmt.hpp"
#include "fft.hpp"

namespace dwell {

namespace {

double reference_period(const SystemParams& p, const DriveSpec& drive) {
  const double well_omega = std::sqrt(2.0 / p.mass);
  double omega = well_omega;
  if (drive.kind == DriveKind::sinusoid && drive.amplitude != 0.0) {
    omega = std::max(omega, std::abs(drive.angular_frequency));
  }
  return 2.0 * std::numbers::pi / omega;
}

}  // namespace

LyapunovResult largest_lyapunov(const PhasePoint& initial, const SystemParams& p, const DriveSpec& drive,
                                double t_end, double dt, std::size_t renorm_every, double delta0) {
  validate(p);
  if (!(delta0 >= 1e-9 && delta0 <= 1e-6)) throw ParameterError("delta0 must lie in [1e-9, 1e-6]");
  if (renorm_every == 0) throw ParameterError("renorm_every must be >= 1");
  const auto start = make_phase_point(initial.x, initial.v, initial.t);
  const double span = t_end - start.t;
  if (!(span > 0.0)) throw ParameterError("t_end must exceed the initial time");
  if (drive.kind != DriveKind::none && span < 500.0 * reference_period(p, drive)) {
    throw ParameterError("driven Lyapunov runs need t_end >= 500 reference periods");
  }

  const double escape = 10.0 / std::sqrt(p.lambda);
  const auto n_steps = static_cast<std::size_t>(std::llround(span / dt));
  const std::size_t n_renorm = n_steps / renorm_every;
  const std::size_t stride = std::max<std::size_t>(1, n_renorm / 10000);

  LyapunovResult result;
  result.renorm_interval = renorm_every;
  result.perturbation_size = delta0;

  PhasePoint ref = start;
  PhasePoint pert{start.x + delta0, start.v, start.t};
  double log_sum = 0.0;
  double elapsed = 0.0;
  for (std::size_t k = 1; k <= n_renorm; ++k) {
    for (std::size_t s = 0; s < renorm_every; ++s) {
      ref = duffing_step(ref, p, drive, dt);
      pert = duffing_step(pert, p, drive, dt);
    }
    const std::size_t steps_done = k * renorm_every;
    ref.t = pert.t = start.t + static_cast<double>(steps_done) * dt;
    if (!(std::abs(ref.x) <= escape) || !(std::abs(pert.x) <= escape)) {
      throw UnstableIntegration("trajectory escaped |x| <= 10/sqrt(lambda) at t = " + format_double(ref.t));
    }
    const double dx = pert.x - ref.x;
    const double dv = pert.v - ref.v;
    const double d = std::hypot(dx, dv);
    if (!(d > 0.0)) throw UnstableIntegration("perturbed trajectory collapsed onto the reference");
    log_sum += std::log(d / delta0);
    pert.x = ref.x + dx * (delta0 / d);
    pert.v = ref.v + dv * (delta0 / d);
    elapsed = static_cast<double>(steps_done) * dt;
    if (k % stride == 0 || k == n_renorm) {
      result.convergence_times.push_back(ref.t);
      result.convergence_series.push_back(log_sum / elapsed);
    }
  }
  result.exponent = elapsed > 0.0 ? log_sum / elapsed : 0.0;

  const auto& series = result.convergence_series;
  if (series.size() >= 5) {
    const auto tail_begin = series.begin() + static_cast<std::ptrdiff_t>(series.size() * 4 / 5);
    const auto [lo, hi] = std::minmax_element(tail_begin, series.end());
    const double mean = std::accumulate(tail_begin, series.end(), 0.0) / static_cast<double>(series.end() - tail_begin);
    result.converged = mean != 0.0 && (*hi - *lo) / std::abs(mean) < 0.25;
  }
  return result;
}

std::vector<PhasePoint> poincare_section(const Trajectory& traj, double drive_period, double phase) {
  const double h = traj.sample_interval;
  const auto& s = traj.samples;
  if (!(drive_period > 10.0 * h)) {
    throw PeriodMismatch("drive period " + format_double(drive_period) + " is not > 10 sample intervals");
  }
  std::vector<PhasePoint> section;
  if (s.size() < 4) return section;
  const double t0 = s.front().t;
  const double t1 = s.back().t;
  const auto last = static_cast<std::ptrdiff_t>(s.size()) - 1;
  for (auto n = static_cast<long long>(std::ceil((t0 - phase) / drive_period - 1e-12));; ++n) {
    const double t = phase + static_cast<double>(n) * drive_period;
    if (t > t1 + 1e-12 * std::abs(t1)) break;
    if (t < t0) continue;
    const auto i = static_cast<std::ptrdiff_t>(std::floor((t - t0) / h));
    const std::ptrdiff_t first = std::clamp<std::ptrdiff_t>(i - 1, 0, last - 3);
    double x = 0.0;
    double v = 0.0;
    for (std::ptrdiff_t a = first; a < first + 4; ++a) {
      double basis = 1.0;
      for (std::ptrdiff_t b = first; b < first + 4; ++b) {
        if (b != a) basis *= (t - s[b].t) / (s[a].t - s[b].t);
      }
      x += basis * s[a].x;
      v += basis * s[a].v;
    }
    section.push_back({x, v, t});
  }
  return section;
}

double correlation_dimension(std::span<const PhasePoint> points) {
  const std::size_t n = points.size();
  if (n < 10) throw ParameterError("correlation_dimension needs at least 10 points");
  double xmin = points[0].x, xmax = points[0].x, vmin = points[0].v, vmax = points[0].v;
  for (const auto& p : points) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    vmin = std::min(vmin, p.v);
    vmax = std::max(vmax, p.v);
  }
  const double diameter = std::hypot(xmax - xmin, vmax - vmin);
  if (!(diameter > 0.0)) return 0.0;

  constexpr int rungs = 31;       // three decades, ten rungs per decade
  constexpr double decades = 3.0;
  const double log_top = std::log10(diameter);
  std::vector<double> counts(rungs, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = std::hypot(points[i].x - points[j].x, points[i].v - points[j].v);
      if (!(d > 0.0)) {
        counts[0] += 1.0;
        continue;
      }
      // First rung index whose radius exceeds d.
      const double pos = (std::log10(d) - (log_top - decades)) * (rungs - 1) / decades;
      const auto k = static_cast<int>(std::floor(pos)) + 1;
      if (k < rungs) counts[std::max(k, 0)] += 1.0;
    }
  }
  for (int k = 1; k < rungs; ++k) counts[k] += counts[k - 1];

  // Middle decade: radii from diameter/100 to diameter/10.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int used = 0;
  for (int k = 10; k <= 20; ++k) {
    if (counts[k] <= 0.0) continue;
    const double lr = log_top - decades + decades * k / (rungs - 1);
    const double lc = std::log10(counts[k]);
    sx += lr;
    sy += lc;
    sxx += lr * lr;
    sxy += lr * lc;
    ++used;
  }
  if (used < 3) return 0.0;
  return (used * sxy - sx * sy) / (used * sxx - sx * sx);
}

std::string_view window_name(Window w) noexcept {
  return w == Window::hann ? "hann" : "rectangular";
}

double SpectrumResult::total_power() const noexcept {
  double sum = 0.0;
  for (double p : power) sum += p;
  return sum * resolution;
}

double SpectrumResult::dominant_omega(double min_omega, double max_omega) const {
  std::size_t best = 0;
  double best_power = -1.0;
  for (std::size_t k = 1; k < power.size(); ++k) {
    if (omega[k] <= min_omega || omega[k] > max_omega) continue;
    if (power[k] > best_power) {
      best_power = power[k];
      best = k;
    }
  }
  if (best == 0) throw ParameterError("no spectral bin in the requested frequency band");
  if (best + 1 >= power.size() || power[best - 1] <= 0.0 || power[best + 1] <= 0.0 || best_power <= 0.0) {
    return omega[best];
  }
  const double a = std::log(power[best - 1]);
  const double b = std::log(power[best]);
  const double c = std::log(power[best + 1]);
  const double denom = a - 2.0 * b + c;
  const double shift = denom < 0.0 ? std::clamp(0.5 * (a - c) / denom, -0.5, 0.5) : 0.0;
  return omega[best] + shift * resolution;
}

double SpectrumResult::fraction_below(double cutoff) const noexcept {
  double below = 0.0;
  double total = 0.0;
  for (std::size_t k = 1; k < power.size(); ++k) {
    total += power[k];
    if (omega[k] < cutoff) below += power[k];
  }
  return total > 0.0 ? below / total : 0.0;
}

SpectrumResult power_spectrum(std::span<const double> times, std::span<const double> values, Window window) {
  const std::size_t n = values.size();
  if (times.size() != n) throw ParameterError("power_spectrum: times and values differ in length");
  if (n < 256) throw ParameterError("power_spectrum needs at least 256 samples");
  const double step = (times.back() - times.front()) / static_cast<double>(n - 1);
  if (!(step > 0.0)) throw NonuniformSampling("sample times must increase");
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs((times[i] - times[i - 1]) - step) > 1e-6 * step) {
      throw NonuniformSampling("sample spacing varies at index " + std::to_string(i));
    }
  }

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);

  std::vector<double> weights(n, 1.0);
  if (window == Window::hann) {
    for (std::size_t i = 0; i < n; ++i) {
      weights[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n)));
    }
  }

  double* in = fftw_alloc_real(n);
  const std::size_t n_out = n / 2 + 1;
  fftw_complex* out = fftw_alloc_complex(n_out);
  double sum_w2 = 0.0;
  double weighted = 0.0;
  double plain = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = values[i] - mean;
    in[i] = weights[i] * y;
    sum_w2 += weights[i] * weights[i];
    weighted += in[i] * in[i];
    plain += y * y;
  }
  {
    fftw_plan plan;
    {
      std::lock_guard lock(detail::fftw_planner_mutex());
      plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
    }
    detail::FftwPlan guard(plan);
    guard.execute();
  }

  SpectrumResult r;
  r.window = window;
  r.resolution = 2.0 * std::numbers::pi / (static_cast<double>(n) * step);
  r.weighted_variance = weighted / sum_w2;
  r.variance = plain / static_cast<double>(n);
  r.omega.resize(n_out);
  r.power.resize(n_out);
  const double scale = 1.0 / (static_cast<double>(n) * sum_w2 * r.resolution);
  for (std::size_t k = 0; k < n_out; ++k) {
    const bool unpaired = k == 0 || (n % 2 == 0 && k == n / 2);
    const double mag2 = out[k][0] * out[k][0] + out[k][1] * out[k][1];
    r.omega[k] = static_cast<double>(k) * r.resolution;
    r.power[k] = (unpaired ? 1.0 : 2.0) * mag2 * scale;
  }
  fftw_free(in);
  fftw_free(out);
  return r;
}

void write_csv(std::ostream& out, const SpectrumResult& spectrum) {
  out << "omega,power\n";
  for (std::size_t k = 0; k < spectrum.omega.size(); ++k) write_row(out, {spectrum.omega[k], spectrum.power[k]});
}

void write_csv(const std::filesystem::path& path, const SpectrumResult& spectrum) {
  auto out = open_output(path);
  write_csv(out, spectrum);
  if (!out) throw IoError("write failed: " + path.string());
}

void write_section_csv(const std::filesystem::path& path, std::span<const PhasePoint> points) {
  auto out = open_output(path);
  out << "x,v\n";
  for (const auto& p : points) write_row(out, {p.x, p.v});
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace dwell
