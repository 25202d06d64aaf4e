// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance                 run all eight
//   acceptance --criterion N   run only criterion N
// Exit status is 0 when every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "ansatz_oracle.hpp"
#include "dwell/ansatz.hpp"
#include "dwell/chaos.hpp"
#include "dwell/eigen.hpp"
#include "dwell/errors.hpp"
#include "dwell/propagator.hpp"
#include "dwell/reduced.hpp"
#include "dwell/runner.hpp"
#include "random_states.hpp"

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

// Pinned tolerances.
constexpr double kEhrenfestTol = 1e-4;
constexpr double kLinearFreqTol = 1e-3;
constexpr double kQuantumFreqTol = 0.05;
constexpr double kExactSlopeTol = 0.20;
constexpr double kAnsatzSlopeTol = 0.10;
constexpr double kOmegaLogTol = 0.30;
constexpr double kPeriodTol = 0.02;
constexpr double kQFreqTol = 0.10;
constexpr double kQAmplitudeFactor = 2.0;
const double kChaosMargin = 0.05 * std::sqrt(2.0);
const double kRegularBand = 0.01 * std::sqrt(2.0);
constexpr double kNormDriftTol = 1e-10;
constexpr double kEnergyDriftTol = 1e-8;
constexpr double kDuffingDriftTol = 1e-8;
constexpr double kConvergenceFactor = 14.0;
constexpr double kHarmonicTol = 1e-6;
constexpr double kOracleTol = 1e-8;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double budget_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

dwell::GridSpec eigen_grid(const dwell::SystemParams& p, double b0) {
  const double half = 4.0 / std::sqrt(p.lambda);
  std::size_t n = 1024;
  while (!(2.0 * half / static_cast<double>(n) < b0 / 8.0)) n *= 2;
  return dwell::symmetric_grid(half, n);
}

double exact_gap(const dwell::SystemParams& p) {
  const auto shape = dwell::solve_ansatz_params(p);
  return dwell::tunneling_gap(p, eigen_grid(p, shape.b0)).extrapolated;
}

double lsq_slope(const std::vector<double>& u, const std::vector<double>& y) {
  const double n = static_cast<double>(u.size());
  const double mu = std::accumulate(u.begin(), u.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    sxy += (u[i] - mu) * (y[i] - my);
    sxx += (u[i] - mu) * (u[i] - mu);
  }
  return sxy / sxx;
}

// 1. Ehrenfest identity on a full quantum run.
Outcome ehrenfest() {
  const auto p = dwell::make_params(0.1, 0.2);
  const auto shape = dwell::solve_ansatz_params(p);
  const auto grid = dwell::symmetric_grid(4.0 / std::sqrt(p.lambda), 2048);
  const auto psi0 = dwell::synthesize_wavefunction(dwell::one_well_state(shape), grid);
  const double dt = 0.001;
  const std::size_t every = 10;
  const auto s = dwell::record_q_drive(psi0, p, dt, 50000, every);
  const double h = dt * static_cast<double>(every);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const double accel = (s.mean_x[i + 1] - 2.0 * s.mean_x[i] + s.mean_x[i - 1]) / (h * h);
    const double rhs = (s.mean_x[i] - p.lambda * s.mean_x3[i]) / p.mass;
    worst = std::max(worst, std::abs(accel - rhs));
  }
  return {worst < kEhrenfestTol, fmt("sup error %.3e (tol %.0e)", worst, kEhrenfestTol)};
}

// 2. Intra-well frequency, reduced and quantum.
Outcome intra_well() {
  const auto p = dwell::make_params(0.02, 0.05);
  const auto shape = dwell::solve_ansatz_params(p);
  const double eps0 = 1e-4 * shape.a0;
  const double linear = dwell::small_oscillation_frequency(p, shape.a0);
  const auto traj = dwell::epsilon_dynamics({eps0, 0.0, 0.0}, shape, 100.0, 0.001, 1);
  const double reduced = dwell::crossing_frequency(traj).value_or(0.0);
  const double reduced_err = std::abs(reduced - linear) / linear;

  const auto grid = dwell::symmetric_grid(4.0 * shape.a0, 4096);
  const auto psi0 = dwell::synthesize_wavefunction(dwell::one_well_state(shape, eps0), grid);
  const auto s = dwell::record_q_drive(psi0, p, 0.001, 200000, 50);
  const double quantum = dwell::power_spectrum(s.times, s.mean_x).dominant_omega();
  const double quantum_err = std::abs(quantum - kSqrt2) / kSqrt2;

  return {reduced_err < kLinearFreqTol && quantum_err < kQuantumFreqTol,
          fmt("reduced %.8f vs sqrt(2 a0^2 lambda) %.8f (rel %.1e, tol %.0e); quantum <x> %.5f vs sqrt2 "
              "(rel %.2e, tol %.2f)",
              reduced, linear, reduced_err, kLinearFreqTol, quantum, quantum_err, kQuantumFreqTol)};
}

// 3. Scaling of the tunneling splitting with 1/hbar.
Outcome splitting_scaling() {
  const double lambda = 0.2;
  std::vector<double> u;
  std::vector<double> exact;
  std::vector<double> ansatz;
  for (double hbar : {0.05, 0.08, 0.12, 0.16, 0.2}) {
    const auto p = dwell::make_params(lambda, hbar);
    const auto shape = dwell::solve_ansatz_params(p);
    u.push_back(1.0 / hbar);
    exact.push_back(std::log(dwell::tunneling_gap(p, eigen_grid(p, shape.b0)).extrapolated));
    ansatz.push_back(std::log(dwell::tunneling_splitting(shape).ansatz));
  }
  const double target = -kSqrt2 / lambda;
  const double s_exact = lsq_slope(u, exact);
  const double s_ansatz = lsq_slope(u, ansatz);
  const double exact_dev = std::abs(s_exact - target) / std::abs(target);
  const double ansatz_dev = std::abs(s_ansatz - s_exact) / std::abs(s_exact);
  return {exact_dev < kExactSlopeTol && ansatz_dev < kAnsatzSlopeTol,
          fmt("diagonalization slope %.4f vs -sqrt2/lambda %.4f (dev %.1f%%, tol %.0f%%); ansatz slope %.4f "
              "(dev %.1f%% from diagonalization, tol %.0f%%)",
              s_exact, target, 100.0 * exact_dev, 100.0 * kExactSlopeTol, s_ansatz, 100.0 * ansatz_dev,
              100.0 * kAnsatzSlopeTol)};
}

// 4. Slow population oscillation: ansatz frequency and full cat-state period.
Outcome population() {
  const auto p = dwell::make_params(0.2, 0.3);
  const auto shape = dwell::solve_ansatz_params(p);
  const double gap = exact_gap(p);
  const double omega_exact = gap / p.hbar;
  const double omega = dwell::population_frequency(shape);
  const double log_dev = std::abs(std::log(omega) - std::log(omega_exact)) / std::abs(std::log(omega_exact));

  // Cat state (psi0 + psi1)/sqrt2 on [-3 a0, 3 a0]; eigenvectors from a 4x finer grid, decimated.
  const double half = 3.0 * shape.a0;
  const auto fine = dwell::eigenpairs(p, dwell::symmetric_grid(half, 1024), 2);
  const auto grid = dwell::symmetric_grid(half, 256);
  dwell::GridWavefunction psi;
  psi.grid = grid;
  psi.amps.resize(grid.n_points);
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    psi.amps[i] = fine[0].state.amps[4 * i] + fine[1].state.amps[4 * i];
  }
  psi.normalize();

  const double period_expected = 2.0 * kPi * p.hbar / gap;
  const double dt = 0.1;
  const std::size_t chunk = 1000;
  dwell::SplitOperator op(grid, p, dt);
  double prev_t = 0.0;
  double prev = op.measure(psi).pop_diff;
  double t_down = -1.0;
  double t_up = -1.0;
  const double start = prev;
  while (t_up < 0.0 && psi.time < 1.2 * period_expected) {
    op.advance(psi, chunk);
    const double now = op.measure(psi).pop_diff;
    const double t = psi.time;
    if (t_down < 0.0 && prev > 0.0 && now <= 0.0) t_down = prev_t + (t - prev_t) * prev / (prev - now);
    if (t_down >= 0.0 && prev < 0.0 && now >= 0.0) t_up = prev_t + (t - prev_t) * (-prev) / (now - prev);
    prev = now;
    prev_t = t;
  }
  const double period = t_up > 0.0 ? 2.0 * (t_up - t_down) : 0.0;
  const double period_dev = std::abs(period - period_expected) / period_expected;
  return {log_dev < kOmegaLogTol && period_dev < kPeriodTol,
          fmt("Omega %.4e vs (E1-E0)/hbar %.4e (log dev %.1f%%, tol %.0f%%); pop_diff(0) %.4f, period %.5e vs "
              "2 pi hbar/dE %.5e (dev %.2f%%, tol %.0f%%)",
              omega, omega_exact, 100.0 * log_dev, 100.0 * kOmegaLogTol, start, period, period_expected,
              100.0 * period_dev, 100.0 * kPeriodTol)};
}

// 5. Character of the short-time drive.
Outcome short_time_drive() {
  const auto p = dwell::make_params(0.2, 0.3);
  const auto shape = dwell::solve_ansatz_params(p);
  const auto grid = dwell::symmetric_grid(4.0 / std::sqrt(p.lambda), 2048);
  const auto psi0 = dwell::synthesize_wavefunction(dwell::one_well_state(shape, shape.b0), grid);
  const double dt = 0.001;
  const auto steps = static_cast<std::size_t>(std::ceil(20.0 * 2.0 * kPi / kSqrt2 / dt));
  const auto s = dwell::record_q_drive(psi0, p, dt, steps, 10);
  const double w_x = dwell::power_spectrum(s.times, s.mean_x).dominant_omega();
  const double w_q = dwell::power_spectrum(s.times, s.q_drive).dominant_omega();
  const double freq_dev = std::abs(w_q - w_x) / w_x;

  const double scale = 1.5 * p.lambda * shape.a0 * shape.b0 * shape.b0;
  const double amplitude = dwell::mean_cycle_amplitude(s.times, s.q_drive, 2.0 * kPi / w_x);
  double mean_abs = 0.0;
  for (double q : s.q_drive) mean_abs += std::abs(q);
  mean_abs /= static_cast<double>(s.size());
  const double ratio = amplitude / scale;
  const bool amp_ok = ratio <= kQAmplitudeFactor && ratio >= 1.0 / kQAmplitudeFactor;
  return {freq_dev < kQFreqTol && amp_ok,
          fmt("Q peak %.4f vs <x> peak %.4f (dev %.1f%%, tol %.0f%%); per-cycle amplitude %.4f vs "
              "(3/2) lambda a0 b0^2 = %.4f (ratio %.3f, factor %.0f); time-mean |Q| %.4f (ratio %.3f)",
              w_q, w_x, 100.0 * freq_dev, 100.0 * kQFreqTol, amplitude, scale, ratio, kQAmplitudeFactor, mean_abs,
              mean_abs / scale)};
}

// 6. Fast versus slow drive.
Outcome crossover() {
  const auto p = dwell::make_params(0.2, 0.3);
  const auto shape = dwell::solve_ansatz_params(p);
  const double amplitude = 1.5 * p.lambda * shape.a0 * shape.b0 * shape.b0;
  const double slow_omega = exact_gap(p) / p.hbar;
  const double t_end = 20000.0 * 2.0 * kPi / kSqrt2;
  const dwell::PhasePoint start{0.1, 0.0, 0.0};
  auto exponent = [&](double a, double w) {
    return dwell::largest_lyapunov(start, p, dwell::DriveSpec::sinusoid(a, w), t_end, 0.01, 10, 1e-8).exponent;
  };
  const double fast = exponent(amplitude, kSqrt2);
  const double slow = exponent(amplitude, slow_omega);
  double best = 0.0;
  double best_factor = 0.0;
  for (double f : {0.5, 1.0, 1.5, 2.0, 3.0, 4.0}) {
    const double e = f == 1.0 ? fast : exponent(f * amplitude, kSqrt2);
    if (e > best) {
      best = e;
      best_factor = f;
    }
  }
  const bool pass = fast - slow >= kChaosMargin && std::abs(slow) <= kRegularBand && best > kChaosMargin;
  return {pass, fmt("fast %.4f, slow (omega %.3e) %.5f, difference %.4f (need >= %.4f); |slow| <= %.4f; sweep "
                    "max %.4f at %.1fx (need > %.4f)",
                    fast, slow_omega, slow, fast - slow, kChaosMargin, kRegularBand, best, best_factor,
                    kChaosMargin)};
}

// 7. Numerical hygiene.
Outcome hygiene() {
  const auto p = dwell::make_params(0.1, 0.2);
  const auto shape = dwell::solve_ansatz_params(p);
  const auto grid = dwell::symmetric_grid(4.0 / std::sqrt(p.lambda), 2048);
  auto psi = dwell::synthesize_wavefunction(dwell::one_well_state(shape), grid);
  dwell::SplitOperator op(grid, p, 0.001);
  double norm_drift = 0.0;
  double energy_drift = 0.0;
  for (int block = 0; block < 5; ++block) {
    const auto before = op.measure(psi);
    const double n0 = psi.norm();
    op.advance(psi, 10000);
    const auto after = op.measure(psi);
    norm_drift = std::max(norm_drift, std::abs(psi.norm() - n0));
    energy_drift = std::max(energy_drift, std::abs(after.energy - before.energy) / std::abs(before.energy));
  }

  const auto duffing_p = dwell::make_params(0.2);
  const auto traj = dwell::integrate({0.5, 0.3, 0.0}, duffing_p, dwell::DriveSpec::none(), 1000.0, 0.001, 100);
  double duffing_drift = 0.0;
  for (double e : traj.energy) {
    duffing_drift = std::max(duffing_drift, std::abs(e - traj.energy.front()) / std::abs(traj.energy.front()));
  }

  const auto drive = dwell::DriveSpec::sinusoid(0.3, 1.1);
  auto endpoint = [&](double dt) {
    return dwell::integrate({0.3, 0.0, 0.0}, duffing_p, drive, 10.0, dt).samples.back().x;
  };
  const double ref = endpoint(0.01 / 16.0);
  const double factor = std::abs(endpoint(0.01) - ref) / std::abs(endpoint(0.005) - ref);

  auto V = [](double x) { return 0.5 * x * x; };
  const auto pairs = dwell::eigenpairs(V, 1.0, 1.0, dwell::symmetric_grid(10.0, 1024), 5);
  double harmonic = 0.0;
  for (std::size_t n = 0; n < pairs.size(); ++n) {
    harmonic = std::max(harmonic, std::abs(pairs[n].energy - (static_cast<double>(n) + 0.5)));
  }

  const bool pass = norm_drift < kNormDriftTol && energy_drift < kEnergyDriftTol &&
                    duffing_drift < kDuffingDriftTol && factor >= kConvergenceFactor && harmonic < kHarmonicTol;
  return {pass, fmt("norm drift %.2e (tol %.0e), energy drift %.2e (tol %.0e) per 1e4 steps; Duffing drift "
                    "%.2e over 1e6 steps (tol %.0e); convergence factor %.2f (min %.0f); harmonic max error %.2e "
                    "(tol %.0e)",
                    norm_drift, kNormDriftTol, energy_drift, kEnergyDriftTol, duffing_drift, kDuffingDriftTol,
                    factor, kConvergenceFactor, harmonic, kHarmonicTol)};
}

// 8. Closed-form moments against adaptive quadrature.
Outcome quadrature_oracle() {
  double worst = 0.0;
  for (const auto& s : oracle::random_states(100, 2024)) {
    const oracle::Packet packet{s.n1, s.n2, s.shape.a0 + s.epsilon, s.shape.b0};
    const auto m = oracle::moments(packet, 1e-12);
    const double lambda = s.shape.params.lambda;
    const double q = lambda * (m.x * m.x * m.x - m.x3);
    worst = std::max({worst, std::abs(dwell::expect_x(s) - m.x), std::abs(dwell::expect_x3(s) - m.x3),
                      std::abs(dwell::quantum_fluctuation_Q(s) - q)});
  }
  return {worst < kOracleTol, fmt("100 states, max deviation %.2e (tol %.0e)", worst, kOracleTol)};
}

}  // namespace

int main(int argc, char** argv) {
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  const std::vector<Criterion> criteria = {
      {1, "Ehrenfest identity", 120.0, ehrenfest},
      {2, "intra-well frequency", 300.0, intra_well},
      {3, "tunneling splitting scaling", 180.0, splitting_scaling},
      {4, "slow population oscillation", 300.0, population},
      {5, "short-time drive character", 120.0, short_time_drive},
      {6, "crossover: fast vs slow drive", 900.0, crossover},
      {7, "numerical hygiene", 300.0, hygiene},
      {8, "ansatz vs quadrature oracle", 60.0, quadrature_oracle},
  };

  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::fprintf(stderr, "criterion must be 1..%zu\n", criteria.size());
    return 2;
  }

  int failures = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_budget = secs < c.budget_s;
    const bool pass = out.pass && in_budget;
    if (!pass) ++failures;
    std::printf("%s criterion %d (%s): %s; runtime %.1f s (budget %.0f s)\n", pass ? "PASS" : "FAIL", c.id,
                c.title, out.detail.c_str(), secs, c.budget_s);
  }
  return failures == 0 ? 0 : 1;
}
