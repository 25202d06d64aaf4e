#pragma once

namespace dwell {

/// Physical constants of the double well H = p^2/2m - x^2/2 + lambda x^4/4.
struct SystemParams {
  double lambda = 0.1;
  double hbar = 1.0;
  double mass = 1.0;

  friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

/// Throws ParameterError unless lambda, hbar and mass are finite and positive.
void validate(const SystemParams& p);

/// Validated construction.
SystemParams make_params(double lambda, double hbar = 1.0, double mass = 1.0);

/// V(x) = -x^2/2 + (lambda/4) x^4. Even in x bit for bit.
double potential(double x, const SystemParams& p) noexcept;

/// -dV/dx = x - lambda x^3.
double force(double x, const SystemParams& p) noexcept;

struct WellMinima {
  double left;
  double right;
  double energy;
};

/// (-1/sqrt(lambda), +1/sqrt(lambda), -1/(4 lambda)).
WellMinima well_minima(const SystemParams& p) noexcept;

/// Angular frequency sqrt(2 a0^2 lambda / m) of small oscillations about a
/// well centre at distance a0; tends to sqrt(2/m) when a0^2 -> 1/lambda.
double small_oscillation_frequency(const SystemParams& p, double a0) noexcept;

}  // namespace dwell
