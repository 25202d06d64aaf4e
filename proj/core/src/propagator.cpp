#include "dwell/propagator.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "dwell/csv.hpp"
#include "dwell/errors.hpp"
#include "dwell/numfmt.hpp"
#include "fft.hpp"

namespace dwell {

namespace {

constexpr double kEdgeLimit = 1e-6;

std::vector<double> wave_numbers(const GridSpec& grid) {
  const std::size_t n = grid.n_points;
  const double dk = 2.0 * std::numbers::pi / grid.length();
  std::vector<double> k(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto signed_j = j < n / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(n);
    k[j] = dk * signed_j;
  }
  return k;
}

struct Transform {
  explicit Transform(std::size_t n) : buffer(n) {
    std::lock_guard lock(detail::fftw_planner_mutex());
    const int size = static_cast<int>(n);
    forward = detail::FftwPlan(fftw_plan_dft_1d(size, buffer.data, buffer.data, FFTW_FORWARD, FFTW_ESTIMATE));
    backward = detail::FftwPlan(fftw_plan_dft_1d(size, buffer.data, buffer.data, FFTW_BACKWARD, FFTW_ESTIMATE));
  }

  detail::FftwComplexBuffer buffer;
  detail::FftwPlan forward;
  detail::FftwPlan backward;
};

ObservableSample observe(const GridWavefunction& psi, const SystemParams& p, Transform& fft,
                         const std::vector<double>& k) {
  const GridSpec& grid = psi.grid;
  const std::size_t n = grid.n_points;
  const double dx = grid.dx();
  const double zero_tol = 1e-9 * dx;

  double norm = 0.0;
  double sx = 0.0;
  double sx3 = 0.0;
  double sv = 0.0;
  double right = 0.0;
  double left = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid.x(i);
    const double rho = std::norm(psi.amps[i]);
    norm += rho;
    sx += x * rho;
    sx3 += x * x * x * rho;
    sv += potential(x, p) * rho;
    if (x > zero_tol) {
      right += rho;
    } else if (x < -zero_tol) {
      left += rho;
    }
  }

  auto* work = fft.buffer.as_complex();
  std::copy(psi.amps.begin(), psi.amps.end(), work);
  fft.forward.execute();
  double sp = 0.0;
  double sk2 = 0.0;
  double spectral_norm = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double w = std::norm(work[j]);
    spectral_norm += w;
    sp += k[j] * w;
    sk2 += k[j] * k[j] * w;
  }

  ObservableSample s;
  s.t = psi.time;
  s.mean_x = sx / norm;
  s.mean_x3 = sx3 / norm;
  s.mean_p = p.hbar * sp / spectral_norm;
  const double kinetic = p.hbar * p.hbar / (2.0 * p.mass) * sk2 / spectral_norm;
  s.energy = kinetic + sv / norm;
  s.pop_diff = (right - left) / norm;
  s.q = p.lambda * (s.mean_x * s.mean_x * s.mean_x - s.mean_x3);
  return s;
}

}  // namespace

void ObservableSeries::push(const ObservableSample& s) {
  times.push_back(s.t);
  mean_x.push_back(s.mean_x);
  mean_p.push_back(s.mean_p);
  mean_x3.push_back(s.mean_x3);
  q_drive.push_back(s.q);
  energy.push_back(s.energy);
  pop_diff.push_back(s.pop_diff);
}

ObservableSample ObservableSeries::at(std::size_t i) const {
  return {times.at(i), mean_x.at(i), mean_p.at(i), mean_x3.at(i), q_drive.at(i), energy.at(i), pop_diff.at(i)};
}

struct SplitOperator::Impl {
  Impl(const GridSpec& g, const SystemParams& p, double step)
      : grid(g), params(p), dt(step), fft(g.n_points), k(wave_numbers(g)) {
    const std::size_t n = g.n_points;
    const double inv_n = 1.0 / static_cast<double>(n);
    kinetic_half.resize(n);
    kinetic_full.resize(n);
    potential_phase.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double omega = p.hbar * k[j] * k[j] / (2.0 * p.mass);  // kinetic energy / hbar
      kinetic_half[j] = std::polar(1.0, -0.5 * omega * dt);
      kinetic_full[j] = std::polar(1.0, -omega * dt);
    }
    for (std::size_t i = 0; i < n; ++i) {
      // The 1/n of the unnormalized inverse transform rides on the potential factor.
      potential_phase[i] = std::polar(inv_n, -potential(g.x(i), p) * dt / p.hbar);
    }
  }

  GridSpec grid;
  SystemParams params;
  double dt;
  Transform fft;
  std::vector<double> k;
  std::vector<Amplitude> kinetic_half;
  std::vector<Amplitude> kinetic_full;
  std::vector<Amplitude> potential_phase;
};

SplitOperator::SplitOperator(const GridSpec& grid, const SystemParams& params, double dt) {
  validate(grid);
  validate(params);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("split-operator dt must be > 0");
  impl_ = std::make_unique<Impl>(grid, params, dt);
}

SplitOperator::~SplitOperator() = default;
SplitOperator::SplitOperator(SplitOperator&&) noexcept = default;
SplitOperator& SplitOperator::operator=(SplitOperator&&) noexcept = default;

const GridSpec& SplitOperator::grid() const noexcept { return impl_->grid; }
double SplitOperator::dt() const noexcept { return impl_->dt; }

namespace {

// Plain complex product; std::complex operator* goes through the NaN-recovery
// slow path unless the whole TU is built with -fcx-limited-range.
inline void scale_by(Amplitude* a, const Amplitude* f, std::size_t n) noexcept {
  for (std::size_t i = 0; i < n; ++i) {
    const double re = a[i].real() * f[i].real() - a[i].imag() * f[i].imag();
    const double im = a[i].real() * f[i].imag() + a[i].imag() * f[i].real();
    a[i] = Amplitude(re, im);
  }
}

}  // namespace

void SplitOperator::advance(GridWavefunction& psi, std::size_t n_steps) {
  if (!(psi.grid == impl_->grid)) throw ParameterError("wavefunction grid differs from propagator grid");
  if (n_steps == 0) return;
  Impl& s = *impl_;
  const std::size_t n = s.grid.n_points;
  auto* work = s.fft.buffer.as_complex();

  std::copy(psi.amps.begin(), psi.amps.end(), work);
  s.fft.forward.execute();
  scale_by(work, s.kinetic_half.data(), n);
  for (std::size_t step = 0; step < n_steps; ++step) {
    s.fft.backward.execute();
    scale_by(work, s.potential_phase.data(), n);
    s.fft.forward.execute();
    const auto& kin = step + 1 == n_steps ? s.kinetic_half : s.kinetic_full;
    scale_by(work, kin.data(), n);
  }
  s.fft.backward.execute();
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) psi.amps[i] = work[i] * inv_n;
  psi.time += static_cast<double>(n_steps) * s.dt;

  const double edge = edge_density(psi);
  if (edge > kEdgeLimit) {
    throw EdgeLeakage("edge density " + format_double(edge) + " exceeds 1e-6 at t = " +
                      format_double(psi.time) + "; widen the grid");
  }
}

ObservableSample SplitOperator::measure(const GridWavefunction& psi) const {
  return observe(psi, impl_->params, impl_->fft, impl_->k);
}

double edge_density(const GridWavefunction& psi) noexcept {
  if (psi.amps.empty()) return 0.0;
  return std::max(std::norm(psi.amps.front()), std::norm(psi.amps.back()));
}

GridWavefunction evolve(GridWavefunction psi, const SystemParams& p, double dt, std::size_t n_steps) {
  SplitOperator op(psi.grid, p, dt);
  constexpr std::size_t chunk = 1000;
  for (std::size_t done = 0; done < n_steps;) {
    const std::size_t m = std::min(chunk, n_steps - done);
    op.advance(psi, m);
    done += m;
  }
  return psi;
}

ObservableSample measure(const GridWavefunction& psi, const SystemParams& p) {
  validate(psi.grid);
  Transform fft(psi.grid.n_points);
  return observe(psi, p, fft, wave_numbers(psi.grid));
}

ObservableSeries record_q_drive(GridWavefunction psi0, const SystemParams& p, double dt, std::size_t n_steps,
                                std::size_t sample_every) {
  if (sample_every == 0) throw ParameterError("sample_every must be >= 1");
  SplitOperator op(psi0.grid, p, dt);
  const double t0 = psi0.time;
  ObservableSeries series;
  series.push(op.measure(psi0));
  for (std::size_t done = 0; done + sample_every <= n_steps;) {
    op.advance(psi0, sample_every);
    done += sample_every;
    psi0.time = t0 + static_cast<double>(done) * dt;
    series.push(op.measure(psi0));
  }
  return series;
}

void write_csv(std::ostream& out, const ObservableSeries& s) {
  out << "t,mean_x,mean_p,mean_x3,q,energy,pop_diff\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    write_row(out, {s.times[i], s.mean_x[i], s.mean_p[i], s.mean_x3[i], s.q_drive[i], s.energy[i], s.pop_diff[i]});
  }
}

void write_csv(const std::filesystem::path& path, const ObservableSeries& series) {
  auto out = open_output(path);
  write_csv(out, series);
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace dwell
