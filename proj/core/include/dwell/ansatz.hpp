#pragma once

#include <string>
#include <string_view>

#include "dwell/grid.hpp"
#include "dwell/potential.hpp"

namespace dwell {

/// Frozen shape of the two-Gaussian packet: centres at +-a0, common width b0.
struct AnsatzShape {
  double a0 = 0.0;
  double b0 = 0.0;
  SystemParams params;

  /// Left side minus right side of the parameter condition
  ///   a0^2 + 3/2 b0^2 = 1/lambda + hbar^2 / (4 m b0^6 lambda) exp(-a0^2/b0^2).
  double condition_residual() const noexcept;

  /// The expansion behind the closed forms assumes b0 << a0; false once b0/a0 > 0.5.
  bool narrow() const noexcept { return b0 <= 0.5 * a0; }

  friend bool operator==(const AnsatzShape&, const AnsatzShape&) = default;
};

/// a0 for a given width b0, by fixed-point iteration on the parameter
/// condition starting from a0^2 = 1/lambda - 3/2 b0^2. Throws NoSolution
/// after 200 iterations without convergence or when a0^2 would be <= 0.
double solve_center(const SystemParams& p, double b0);

/// Variational shape: b0 minimises <H> of the symmetric packet (golden
/// section, tolerance 1e-10, bracket centred on the harmonic width), with
/// a0 = solve_center(p, b0).
AnsatzShape solve_ansatz_params(const SystemParams& p);

/// Shape for an explicit width; a0 follows from solve_center.
AnsatzShape shape_for_width(const SystemParams& p, double b0);

/// psi(x) = n1 exp(-(x-a0-eps)^2/2b0^2) + n2 exp(-(x+a0+eps)^2/2b0^2), real amplitudes.
struct TwoGaussianState {
  double n1 = 0.0;
  double n2 = 0.0;
  double epsilon = 0.0;
  AnsatzShape shape;

  friend bool operator==(const TwoGaussianState&, const TwoGaussianState&) = default;
};

enum class Overlap {
  /// Keep the Gaussian overlap exp(-(a0+eps)^2/b0^2) in every denominator.
  full,
  /// Drop the overlap: the paper's leading-order moments.
  leading_order,
};

/// (n1^2 + n2^2 + 2 n1 n2 exp(-(a0+eps)^2/b0^2)) b0 sqrt(pi) - 1.
double normalization_residual(const TwoGaussianState& s) noexcept;

/// Joint rescaling of (n1, n2) to unit norm. Throws DegenerateState for n1 = n2 = 0.
TwoGaussianState normalize(const TwoGaussianState& s);

/// Normalized one-well packet (n2 = 0) displaced by epsilon.
TwoGaussianState one_well_state(const AnsatzShape& shape, double epsilon = 0.0);

/// Normalized symmetric (sign=+1) or antisymmetric (sign=-1) combination at epsilon = 0.
TwoGaussianState parity_state(const AnsatzShape& shape, int sign);

/// Population imbalance between the wells, in [-1, 1]. With Overlap::full
/// this is (n1^2 - n2^2) / (n1^2 + n2^2 + 2 n1 n2 e^{-(a0+eps)^2/b0^2});
/// with Overlap::leading_order the overlap term is dropped.
double pop_diff(const TwoGaussianState& s, Overlap mode = Overlap::full) noexcept;

double expect_x(const TwoGaussianState& s, Overlap mode = Overlap::full) noexcept;
double expect_x3(const TwoGaussianState& s, Overlap mode = Overlap::full) noexcept;

/// lambda{(a0+eps)^3 P (P^2 - 1)} - 3/2 lambda (a0+eps) b0^2 P with P = pop_diff(s, mode).
double quantum_fluctuation_Q(const TwoGaussianState& s, Overlap mode = Overlap::full) noexcept;

/// <H> of the (not necessarily normalized) packet from closed-form Gaussian integrals.
double energy_expectation(const TwoGaussianState& s);

struct TunnelingSplitting {
  /// a0^2 hbar^2 / (2 m b0^4) exp(-a0^2/b0^2)
  double ansatz = 0.0;
  /// exp(-sqrt(2m)/(lambda hbar)) / sqrt(lambda)
  double asymptotic = 0.0;
  /// <H>_odd - <H>_even of the two parity states, from energy_expectation.
  double variational = 0.0;
};

TunnelingSplitting tunneling_splitting(const AnsatzShape& shape);

/// Samples the packet on `grid` and renormalizes discretely. Throws
/// GridTooNarrow when more than 1e-8 of the probability lies outside the grid.
GridWavefunction synthesize_wavefunction(const TwoGaussianState& s, const GridSpec& grid);

/// Plain-text record, one header line and one value line:
///   n1,n2,epsilon,a0,b0,lambda,hbar,mass
std::string to_record(const TwoGaussianState& s);
TwoGaussianState from_record(std::string_view text);

}  // namespace dwell
