#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <cstring>
#include <sstream>
#include <utility>
#include <vector>

#include "crank_nicolson.hpp"
#include "dwell/ansatz.hpp"
#include "dwell/eigen.hpp"
#include "dwell/errors.hpp"
#include "dwell/propagator.hpp"

namespace {

using dwell::make_params;

dwell::GridWavefunction displaced_packet(const dwell::SystemParams& p, const dwell::GridSpec& grid, double eps) {
  const auto shape = dwell::solve_ansatz_params(p);
  return dwell::synthesize_wavefunction(dwell::one_well_state(shape, eps), grid);
}

dwell::GridSpec standard_grid(const dwell::SystemParams& p, std::size_t n = 2048) {
  return dwell::symmetric_grid(4.0 / std::sqrt(p.lambda), n);
}

TEST(SplitOperator, NormAndEnergyConserved) {
  const auto p = make_params(0.1, 0.2);
  auto psi = displaced_packet(p, standard_grid(p), 0.0);
  dwell::SplitOperator op(psi.grid, p, 0.001);
  for (int block = 0; block < 3; ++block) {
    const auto start = op.measure(psi);
    const double n0 = psi.norm();
    op.advance(psi, 10000);
    const auto end = op.measure(psi);
    EXPECT_LT(std::abs(psi.norm() - n0), 1e-10);
    EXPECT_LT(std::abs(end.energy - start.energy) / std::abs(start.energy), 1e-8);
  }
  EXPECT_NEAR(psi.time, 30.0, 1e-12);
}

// <H> under Strang splitting carries a bounded O(dt^2) excursion, not a secular drift.
TEST(SplitOperator, EnergyErrorIsSecondOrderAndBounded) {
  const auto p = make_params(0.1, 0.2);
  auto excursion = [&](double dt) {
    auto psi = displaced_packet(p, standard_grid(p), 0.3);
    dwell::SplitOperator op(psi.grid, p, dt);
    const double e0 = op.measure(psi).energy;
    const auto block = static_cast<std::size_t>(std::llround(0.5 / dt));
    double worst = 0.0;
    double late = 0.0;
    for (int i = 0; i < 60; ++i) {
      op.advance(psi, block);
      const double dev = std::abs(op.measure(psi).energy - e0) / std::abs(e0);
      worst = std::max(worst, dev);
      if (i >= 30) late = std::max(late, dev);
    }
    return std::pair{worst, late};
  };
  const auto [coarse, coarse_late] = excursion(0.001);
  const auto [fine, fine_late] = excursion(0.0005);
  EXPECT_NEAR(coarse / fine, 4.0, 0.4);
  EXPECT_LE(coarse_late, coarse);
  EXPECT_LT(fine, 1e-8);
}

TEST(SplitOperator, EigenstateIsStationary) {
  const auto p = make_params(0.2, 0.3);
  const auto grid = standard_grid(p, 4096);
  const auto pairs = dwell::eigenpairs(p, grid, 1);
  const auto& psi0 = pairs.front().state;
  const auto psi = dwell::evolve(psi0, p, 0.001, 10000);
  EXPECT_NEAR(std::abs(dwell::inner_product(psi0, psi)), 1.0, 1e-8);
}

TEST(SplitOperator, EvenCatStateKeepsZeroQ) {
  const auto p = make_params(0.2, 0.3);
  const auto grid = standard_grid(p);
  const auto shape = dwell::solve_ansatz_params(p);
  const auto psi0 = dwell::synthesize_wavefunction(dwell::parity_state(shape, +1), grid);
  const auto series = dwell::record_q_drive(psi0, p, 0.002, 5000, 100);
  ASSERT_EQ(series.size(), 51u);
  for (std::size_t i = 0; i < series.size(); ++i) {
    EXPECT_LT(std::abs(series.q_drive[i]), 1e-9) << "t=" << series.times[i];
    EXPECT_LT(std::abs(series.mean_x[i]), 1e-10);
  }
}

TEST(SplitOperator, ParityPreserved) {
  const auto p = make_params(0.2, 0.3);
  const auto grid = standard_grid(p);
  const auto shape = dwell::solve_ansatz_params(p);
  auto psi = dwell::synthesize_wavefunction(dwell::parity_state(shape, -1), grid);
  psi = dwell::evolve(psi, p, 0.002, 3000);
  const std::size_t n = grid.n_points;
  double worst = 0.0;
  for (std::size_t i = 1; i < n; ++i) worst = std::max(worst, std::abs(psi.amps[i] + psi.amps[n - i]));
  EXPECT_LT(worst, 1e-10);
}

TEST(Measure, OneWellPacketMatchesClosedForm) {
  const auto p = make_params(0.2, 0.3);
  const auto shape = dwell::solve_ansatz_params(p);
  const auto psi = dwell::synthesize_wavefunction(dwell::one_well_state(shape), standard_grid(p));
  const auto m = dwell::measure(psi, p);
  EXPECT_NEAR(m.q, -1.5 * p.lambda * shape.a0 * shape.b0 * shape.b0, 1e-4);
  EXPECT_NEAR(m.mean_x, shape.a0, 1e-8);
  EXPECT_NEAR(m.pop_diff, 1.0, 1e-8);
  EXPECT_NEAR(m.mean_p, 0.0, 1e-12);
}

TEST(Measure, QIsLambdaTimesMomentDifference) {
  const auto p = make_params(0.15, 0.25);
  auto psi = displaced_packet(p, standard_grid(p), 0.2);
  psi = dwell::evolve(psi, p, 0.001, 2345);
  const auto m = dwell::measure(psi, p);
  EXPECT_NEAR(m.q, p.lambda * (m.mean_x * m.mean_x * m.mean_x - m.mean_x3), 1e-12);
  EXPECT_LE(std::abs(m.pop_diff), 1.0);
}

TEST(Measure, MomentumOfBoostedGaussian) {
  const auto p = make_params(0.1, 0.5);
  const auto grid = dwell::symmetric_grid(12.0, 2048);
  const double k0 = 3.0;
  const double w = 0.7;
  dwell::GridWavefunction psi;
  psi.grid = grid;
  psi.amps.resize(grid.n_points);
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    const double x = grid.x(i);
    psi.amps[i] = std::exp(-x * x / (2.0 * w * w)) * std::polar(1.0, k0 * x);
  }
  psi.normalize();
  const auto m = dwell::measure(psi, p);
  EXPECT_NEAR(m.mean_p, p.hbar * k0, 1e-10);
  EXPECT_NEAR(m.mean_x, 0.0, 1e-12);
  // <p^2>/2m = hbar^2 (k0^2 + 1/(2 w^2)) / 2 and <V> from Gaussian moments.
  const double kinetic = 0.5 * p.hbar * p.hbar * (k0 * k0 + 0.5 / (w * w));
  const double x2 = 0.5 * w * w;
  const double x4 = 3.0 * x2 * x2;
  EXPECT_NEAR(m.energy, kinetic - 0.5 * x2 + 0.25 * p.lambda * x4, 1e-10);
}

TEST(Measure, PopDiffCountsOriginNodeHalf) {
  const auto p = make_params(0.1, 0.5);
  const auto grid = dwell::symmetric_grid(8.0, 256);
  dwell::GridWavefunction psi;
  psi.grid = grid;
  psi.amps.assign(grid.n_points, 0.0);
  psi.amps[grid.n_points / 2] = 1.0;  // x = 0
  psi.amps[grid.n_points / 2 + 10] = 1.0;
  psi.normalize();
  EXPECT_NEAR(dwell::measure(psi, p).pop_diff, 0.5, 1e-14);
}

TEST(SplitOperator, AgreesWithCrankNicolson) {
  const auto p = make_params(0.1, 0.2);
  const auto grid = standard_grid(p, 4096);
  auto psi = displaced_packet(p, grid, 0.3);
  const double dt = 0.0005;
  const std::size_t steps = 6000;

  oracle::CrankNicolson cn(grid.x_min, grid.dx(), grid.n_points, p.hbar, p.mass, dt,
                           [&](double x) { return dwell::potential(x, p); });
  std::vector<std::complex<double>> phi(psi.amps.begin(), psi.amps.end());
  dwell::SplitOperator op(grid, p, dt);
  for (std::size_t block = 0; block < steps / 500; ++block) {
    op.advance(psi, 500);
    for (int i = 0; i < 500; ++i) cn.step(phi);
    double mx = 0.0;
    double norm = 0.0;
    for (std::size_t i = 0; i < grid.n_points; ++i) {
      mx += grid.x(i) * std::norm(phi[i]);
      norm += std::norm(phi[i]);
    }
    EXPECT_NEAR(dwell::measure(psi, p).mean_x, mx / norm, 2e-4) << "t=" << psi.time;
  }
}

TEST(SplitOperator, RefinementChangesObservablesLittle) {
  const auto p = make_params(0.1, 0.2);
  const auto coarse = dwell::record_q_drive(displaced_packet(p, standard_grid(p, 2048), 0.3), p, 0.001, 5000, 500);
  const auto fine = dwell::record_q_drive(displaced_packet(p, standard_grid(p, 4096), 0.3), p, 0.0005, 10000, 1000);
  ASSERT_EQ(coarse.size(), fine.size());
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    EXPECT_NEAR(coarse.mean_x[i], fine.mean_x[i], 1e-5);
    EXPECT_NEAR(coarse.q_drive[i], fine.q_drive[i], 1e-5);
  }
}

TEST(RecordQDrive, SamplingIncludesInitialTime) {
  const auto p = make_params(0.2, 0.3);
  const auto series = dwell::record_q_drive(displaced_packet(p, standard_grid(p), 0.0), p, 0.01, 1000, 10);
  ASSERT_EQ(series.size(), 101u);
  EXPECT_EQ(series.times.front(), 0.0);
  EXPECT_NEAR(series.times.back(), 10.0, 1e-12);
  EXPECT_THROW(dwell::record_q_drive(displaced_packet(p, standard_grid(p), 0.0), p, 0.01, 10, 0),
               dwell::ParameterError);
}

TEST(SplitOperator, EdgeLeakageDetected) {
  const auto p = make_params(0.2, 0.3);
  const auto grid = dwell::symmetric_grid(3.0, 512);
  dwell::GridWavefunction psi;
  psi.grid = grid;
  psi.amps.resize(grid.n_points);
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    const double x = grid.x(i) - 1.5;
    psi.amps[i] = std::exp(-x * x / 0.5) * std::polar(1.0, 20.0 * x);
  }
  psi.normalize();
  EXPECT_THROW(dwell::evolve(psi, p, 0.001, 5000), dwell::EdgeLeakage);
}

TEST(Snapshot, RoundTripIsBitExact) {
  const auto p = make_params(0.2, 0.3);
  auto psi = dwell::evolve(displaced_packet(p, standard_grid(p, 512), 0.1), p, 0.01, 100);
  std::stringstream buf;
  dwell::write_snapshot(buf, psi);
  const std::string bytes = buf.str();
  ASSERT_EQ(bytes.size(), 8u + 16u + 16u * 512u);
  std::uint64_t n = 0;
  std::memcpy(&n, bytes.data(), 8);
  EXPECT_EQ(n, 512u);
  const auto back = dwell::read_snapshot(buf);
  EXPECT_EQ(back.grid, psi.grid);
  ASSERT_EQ(back.amps.size(), psi.amps.size());
  EXPECT_EQ(std::memcmp(back.amps.data(), psi.amps.data(), 16 * 512), 0);
}

TEST(Snapshot, TruncatedInputRejected) {
  std::stringstream buf(std::string("\x00\x01\x00\x00\x00\x00\x00\x00", 8));
  EXPECT_THROW(dwell::read_snapshot(buf), dwell::Error);
}

TEST(ObservableCsv, Header) {
  dwell::ObservableSeries s;
  s.push({0.0, 1.0, 0.0, 1.0, -0.1, -1.0, 1.0});
  std::ostringstream out;
  dwell::write_csv(out, s);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "t,mean_x,mean_p,mean_x3,q,energy,pop_diff");
}

}  // namespace
