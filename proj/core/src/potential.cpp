#include "dwell/potential.hpp"

#include <cmath>
#include <string>

#include "dwell/errors.hpp"

namespace dwell {

namespace {

void require_positive(double value, const char* name) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw ParameterError(std::string(name) + " must be finite and > 0, got " + std::to_string(value));
  }
}

}  // namespace

void validate(const SystemParams& p) {
  require_positive(p.lambda, "lambda");
  require_positive(p.hbar, "hbar");
  require_positive(p.mass, "mass");
}

SystemParams make_params(double lambda, double hbar, double mass) {
  SystemParams p{lambda, hbar, mass};
  validate(p);
  return p;
}

double potential(double x, const SystemParams& p) noexcept {
  const double x2 = x * x;
  return -0.5 * x2 + 0.25 * p.lambda * x2 * x2;
}

double force(double x, const SystemParams& p) noexcept {
  return x - p.lambda * x * x * x;
}

WellMinima well_minima(const SystemParams& p) noexcept {
  const double x0 = 1.0 / std::sqrt(p.lambda);
  return {-x0, x0, -0.25 / p.lambda};
}

double small_oscillation_frequency(const SystemParams& p, double a0) noexcept {
  return std::sqrt(2.0 * a0 * a0 * p.lambda / p.mass);
}

}  // namespace dwell
