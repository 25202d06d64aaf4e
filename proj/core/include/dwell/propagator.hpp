#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <vector>

#include "dwell/grid.hpp"
#include "dwell/potential.hpp"

namespace dwell {

struct ObservableSample {
  double t = 0.0;
  double mean_x = 0.0;
  double mean_p = 0.0;
  double mean_x3 = 0.0;
  /// lambda (<x>^3 - <x^3>)
  double q = 0.0;
  double energy = 0.0;
  /// P(x > 0) - P(x < 0); a node at x = 0 counts half to each side.
  double pop_diff = 0.0;
};

struct ObservableSeries {
  std::vector<double> times;
  std::vector<double> mean_x;
  std::vector<double> mean_p;
  std::vector<double> mean_x3;
  std::vector<double> q_drive;
  std::vector<double> energy;
  std::vector<double> pop_diff;

  void push(const ObservableSample& s);
  std::size_t size() const noexcept { return times.size(); }
  ObservableSample at(std::size_t i) const;
};

/// Strang split-operator stepper: half kinetic (spectral), full potential,
/// half kinetic. Owns FFTW plans and aligned work buffers, so one instance
/// must not be shared between threads; independent instances are fine.
class SplitOperator {
 public:
  SplitOperator(const GridSpec& grid, const SystemParams& params, double dt);
  ~SplitOperator();
  SplitOperator(const SplitOperator&) = delete;
  SplitOperator& operator=(const SplitOperator&) = delete;
  SplitOperator(SplitOperator&&) noexcept;
  SplitOperator& operator=(SplitOperator&&) noexcept;

  /// Advances psi by n_steps in place and updates psi.time. Consecutive
  /// half-kinetic factors are fused, so only two transforms run per step.
  /// Throws EdgeLeakage when the edge density exceeds 1e-6.
  void advance(GridWavefunction& psi, std::size_t n_steps);

  ObservableSample measure(const GridWavefunction& psi) const;

  const GridSpec& grid() const noexcept;
  double dt() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Largest edge density max(|psi_0|^2, |psi_{n-1}|^2).
double edge_density(const GridWavefunction& psi) noexcept;

GridWavefunction evolve(GridWavefunction psi, const SystemParams& p, double dt, std::size_t n_steps);

/// <x>, <p> (spectral), <x^3>, Q, <H> and pop_diff of a normalized state.
ObservableSample measure(const GridWavefunction& psi, const SystemParams& p);

/// Evolves psi0 and samples `measure` every `sample_every` steps, including t = t0.
ObservableSeries record_q_drive(GridWavefunction psi0, const SystemParams& p, double dt,
                                std::size_t n_steps, std::size_t sample_every);

/// CSV `t,mean_x,mean_p,mean_x3,q,energy,pop_diff`, 17 significant digits.
void write_csv(std::ostream& out, const ObservableSeries& series);
void write_csv(const std::filesystem::path& path, const ObservableSeries& series);

}  // namespace dwell
