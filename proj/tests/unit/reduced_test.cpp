#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "dwell/ansatz.hpp"
#include "dwell/eigen.hpp"
#include "dwell/errors.hpp"
#include "dwell/propagator.hpp"
#include "dwell/reduced.hpp"
#include "orbit_oracle.hpp"

namespace {

using dwell::DriveSpec;
using dwell::make_params;
using dwell::PhasePoint;

constexpr double kPi = std::numbers::pi;

TEST(Duffing, FixedPointStaysPut) {
  const auto p = make_params(0.2);
  PhasePoint s{1.0 / std::sqrt(p.lambda), 0.0, 0.0};
  const double x0 = s.x;
  for (int i = 0; i < 10000; ++i) {
    s = dwell::duffing_step(s, p, DriveSpec::none(), 0.01);
    ASSERT_LT(std::abs(s.x - x0), 1e-12);
  }
}

TEST(Duffing, ClosedOrbitReturnsAfterOnePeriod) {
  for (double lambda : {0.1, 0.2}) {
    const auto p = make_params(lambda);
    const double energy = -0.6 / (4.0 * lambda);
    const double period = oracle::well_period(lambda, energy);
    const double x0 = oracle::outer_turning_point(lambda, energy);
    const double dt = 0.001;
    const auto steps = static_cast<std::size_t>(std::floor(period / dt));
    PhasePoint s{x0, 0.0, 0.0};
    for (std::size_t i = 0; i < steps; ++i) s = dwell::duffing_step(s, p, DriveSpec::none(), dt);
    s = dwell::duffing_step(s, p, DriveSpec::none(), period - steps * dt);
    EXPECT_NEAR(s.x, x0, 1e-5);
    EXPECT_NEAR(s.v, 0.0, 1e-5);
  }
}

TEST(Duffing, EnergyConservedOverMillionSteps) {
  const auto p = make_params(0.2);
  const auto traj = dwell::integrate({0.5, 0.3, 0.0}, p, DriveSpec::none(), 1000.0, 0.001, 1000);
  ASSERT_EQ(traj.energy.size(), traj.samples.size());
  const double e0 = traj.energy.front();
  double drift = 0.0;
  for (double e : traj.energy) drift = std::max(drift, std::abs(e - e0) / std::abs(e0));
  EXPECT_LT(drift, 1e-8);
  EXPECT_NEAR(traj.samples.back().t, 1000.0, 1e-9);
}

TEST(Duffing, TimeReversal) {
  const auto p = make_params(0.2);
  const PhasePoint start{1.2, 0.4, 0.0};
  const double dt = 0.001;
  PhasePoint s = start;
  for (int i = 0; i < 20000; ++i) s = dwell::duffing_step(s, p, DriveSpec::none(), dt);
  s.v = -s.v;
  for (int i = 0; i < 20000; ++i) s = dwell::duffing_step(s, p, DriveSpec::none(), dt);
  EXPECT_NEAR(s.x, start.x, 1e-7);
  EXPECT_NEAR(-s.v, start.v, 1e-7);
}

TEST(Duffing, FourthOrderConvergence) {
  const auto p = make_params(0.2);
  const auto drive = DriveSpec::sinusoid(0.3, 1.1);
  auto endpoint = [&](double dt) {
    return dwell::integrate({0.3, 0.0, 0.0}, p, drive, 10.0, dt).samples.back().x;
  };
  const double ref = endpoint(0.0025 / 4.0);
  const double e1 = std::abs(endpoint(0.01) - ref);
  const double e2 = std::abs(endpoint(0.005) - ref);
  EXPECT_GE(e1 / e2, 14.0);
}

TEST(Duffing, NearBottomFrequency) {
  const auto p = make_params(0.05);
  const double xmin = 1.0 / std::sqrt(p.lambda);
  const auto traj = dwell::integrate({0.99 * xmin, 0.0, 0.0}, p, DriveSpec::none(), 200.0, 0.001, 1);
  const auto omega = dwell::crossing_frequency(traj, xmin);
  ASSERT_TRUE(omega.has_value());
  EXPECT_NEAR(*omega, std::sqrt(2.0), 0.01 * std::sqrt(2.0));
}

TEST(Duffing, ZeroSinusoidMatchesUndriven) {
  const auto p = make_params(0.2);
  const auto a = dwell::integrate({0.7, -0.2, 0.0}, p, DriveSpec::none(), 50.0, 0.01, 3);
  const auto b = dwell::integrate({0.7, -0.2, 0.0}, p, DriveSpec::sinusoid(0.0, 1.3, 0.0), 50.0, 0.01, 3);
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    EXPECT_EQ(a.samples[i].x, b.samples[i].x);
    EXPECT_EQ(a.samples[i].v, b.samples[i].v);
  }
}

TEST(Duffing, RejectsBadInput) {
  const auto p = make_params(0.2);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(dwell::make_phase_point(nan, 0.0), dwell::ParameterError);
  EXPECT_THROW(dwell::integrate({0.0, nan, 0.0}, p, DriveSpec::none(), 1.0, 0.01), dwell::ParameterError);
  EXPECT_THROW(dwell::integrate({0.0, 0.0, 0.0}, p, DriveSpec::none(), 1.0, 0.02), dwell::ParameterError);
  EXPECT_THROW(dwell::duffing_step({0.0, 0.0, 0.0}, p, DriveSpec::none(), 0.0), dwell::ParameterError);
  EXPECT_THROW(DriveSpec::sinusoid(nan, 1.0), dwell::ParameterError);
}

TEST(ReplayDrive, OutOfRangeIsAnError) {
  const auto drive = DriveSpec::replay({0.0, 1.0, 2.0, 3.0}, {0.0, 1.0, 4.0, 9.0});
  EXPECT_NEAR(drive(1.5), 2.25, 1e-14);  // cubic interpolation is exact on a parabola
  EXPECT_THROW(drive(3.5), dwell::DriveOutOfRange);
  EXPECT_THROW(drive(-0.1), dwell::DriveOutOfRange);
  const auto p = make_params(0.2);
  EXPECT_THROW(dwell::integrate({1.0, 0.0, 0.0}, p, drive, 4.0, 0.01), dwell::DriveOutOfRange);
  EXPECT_THROW(DriveSpec::replay({0.0, 1.0, 1.0, 2.0}, {0, 0, 0, 0}), dwell::ParameterError);
}

TEST(ReplayDrive, TracksQuantumCentroid) {
  const auto p = make_params(0.1, 0.2);
  const auto shape = dwell::solve_ansatz_params(p);
  const auto grid = dwell::symmetric_grid(4.0 / std::sqrt(p.lambda), 2048);
  const auto psi0 = dwell::synthesize_wavefunction(dwell::one_well_state(shape, 0.5), grid);
  const double period = 2.0 * kPi / std::sqrt(2.0);
  const double t_end = 5.0 * period;
  const double dt = 0.001;
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt / 10.0)) * 10;
  const auto series = dwell::record_q_drive(psi0, p, dt, steps, 10);

  const auto drive = DriveSpec::replay(series.times, series.q_drive);
  const PhasePoint start{series.mean_x.front(), series.mean_p.front() / p.mass, 0.0};
  const auto traj = dwell::integrate(start, p, drive, series.times.back(), 0.01, 1);

  double sup = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const double quantum = series.mean_x[i];
    ASSERT_NEAR(traj.samples[i].t, series.times[i], 1e-9);
    sup = std::max(sup, std::abs(traj.samples[i].x - quantum));
    scale = std::max(scale, std::abs(quantum));
  }
  EXPECT_LT(sup / scale, 0.05);
}

TEST(EpsilonDynamics, LinearFrequency) {
  const auto shape = dwell::solve_ansatz_params(make_params(0.2, 0.3));
  const auto traj = dwell::epsilon_dynamics({1e-4 * shape.a0, 0.0, 0.0}, shape, 100.0, 0.001, 1);
  const auto omega = dwell::crossing_frequency(traj);
  ASSERT_TRUE(omega.has_value());
  const double linear = dwell::small_oscillation_frequency(shape.params, shape.a0);
  EXPECT_NEAR(*omega, linear, 1e-3 * linear);
  EXPECT_FALSE(traj.regime_exit);
}

TEST(EpsilonDynamics, RestStaysAtRest) {
  const auto shape = dwell::solve_ansatz_params(make_params(0.2, 0.3));
  const auto traj = dwell::epsilon_dynamics({0.0, 0.0, 0.0}, shape, 10.0, 0.01, 1);
  for (const auto& s : traj.samples) EXPECT_EQ(s.x, 0.0);
}

TEST(EpsilonDynamics, LargeAmplitudeSoftensAndConverges) {
  const auto shape = dwell::solve_ansatz_params(make_params(0.2, 0.3));
  const double linear = dwell::small_oscillation_frequency(shape.params, shape.a0);
  const auto coarse = dwell::epsilon_dynamics({0.3 * shape.a0, 0.0, 0.0}, shape, 100.0, 0.001, 1);
  const auto fine = dwell::epsilon_dynamics({0.3 * shape.a0, 0.0, 0.0}, shape, 100.0, 0.0001, 10);
  const double w_coarse = *dwell::crossing_frequency(coarse);
  const double w_fine = *dwell::crossing_frequency(fine);
  EXPECT_LT(w_coarse, linear);
  EXPECT_NEAR(w_coarse, w_fine, 1e-6 * w_fine);
}

TEST(EpsilonDynamics, RegimeExitFlagged) {
  const auto shape = dwell::solve_ansatz_params(make_params(0.2, 0.3));
  const auto traj = dwell::epsilon_dynamics({-0.5 * shape.a0, -3.0, 0.0}, shape, 20.0, 0.001, 1);
  EXPECT_TRUE(traj.regime_exit);
  EXPECT_GT(traj.regime_exit_time, 0.0);
  EXPECT_THROW(dwell::epsilon_dynamics({1.1 * shape.a0, 0.0, 0.0}, shape, 1.0, 0.001), dwell::ParameterError);
}

TEST(PopulationOscillation, CosineSolution) {
  const auto shape = dwell::solve_ansatz_params(make_params(0.2, 0.3));
  const double omega = dwell::population_frequency(shape);
  const double t_end = 4.0 * kPi / omega;
  const auto traj = dwell::population_oscillation(1.0, 0.0, shape, t_end, t_end / 1000.0);
  for (const auto& s : traj.samples) EXPECT_NEAR(s.x, std::cos(omega * s.t), 1e-10);
  const auto zero = dwell::population_oscillation(0.0, 0.0, shape, t_end, t_end / 100.0);
  for (const auto& s : zero.samples) EXPECT_EQ(s.x, 0.0);
  EXPECT_THROW(dwell::population_oscillation(1.5, 0.0, shape, 1.0, 0.1), dwell::ParameterError);
}

TEST(PopulationOscillation, FrequencyTracksExactSplitting) {
  const auto p = make_params(0.2, 0.3);
  const auto shape = dwell::solve_ansatz_params(p);
  const auto gap = dwell::tunneling_gap(p, dwell::symmetric_grid(4.0 / std::sqrt(p.lambda), 1024));
  const double exact = gap.extrapolated / p.hbar;
  const double omega = dwell::population_frequency(shape);
  EXPECT_LT(std::abs(std::log(omega) - std::log(exact)) / std::abs(std::log(exact)), 0.30);
}

TEST(TrajectoryCsv, Headers) {
  const auto p = make_params(0.2);
  std::ostringstream undriven;
  dwell::write_csv(undriven, dwell::integrate({1.0, 0.0, 0.0}, p, DriveSpec::none(), 0.1, 0.01));
  EXPECT_EQ(undriven.str().substr(0, 15), "t,x,v,energy\n0,");
  std::ostringstream driven;
  dwell::write_csv(driven, dwell::integrate({1.0, 0.0, 0.0}, p, DriveSpec::sinusoid(0.1, 1.0), 0.1, 0.01));
  EXPECT_EQ(driven.str().substr(0, 8), "t,x,v\n0,");
}

}  // namespace
