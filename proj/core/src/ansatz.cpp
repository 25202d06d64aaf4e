#include "dwell/ansatz.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "dwell/errors.hpp"
#include "dwell/numfmt.hpp"

namespace dwell {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

struct Geometry {
  double c;        // centre of the right Gaussian, a0 + eps
  double b;        // width
  double overlap;  // exp(-c^2/b^2)
};

Geometry geometry(const TwoGaussianState& s) noexcept {
  const double c = s.shape.a0 + s.epsilon;
  const double b = s.shape.b0;
  return {c, b, std::exp(-(c * c) / (b * b))};
}

void check_shape(const AnsatzShape& shape) {
  validate(shape.params);
  if (!(shape.a0 > 0.0) || !(shape.b0 > 0.0) || !std::isfinite(shape.a0) || !std::isfinite(shape.b0)) {
    throw ParameterError("ansatz shape requires a0 > 0 and b0 > 0");
  }
}

}  // namespace

double AnsatzShape::condition_residual() const noexcept {
  const double a2 = a0 * a0;
  const double b2 = b0 * b0;
  const double b6 = b2 * b2 * b2;
  const double rhs = 1.0 / params.lambda +
                     params.hbar * params.hbar / (4.0 * params.mass * b6 * params.lambda) * std::exp(-a2 / b2);
  return a2 + 1.5 * b2 - rhs;
}

double solve_center(const SystemParams& p, double b0) {
  validate(p);
  if (!(b0 > 0.0) || !std::isfinite(b0)) throw ParameterError("solve_center requires b0 > 0");
  const double b2 = b0 * b0;
  const double base = 1.0 / p.lambda - 1.5 * b2;
  const double coupling = p.hbar * p.hbar / (4.0 * p.mass * b2 * b2 * b2 * p.lambda);
  double s = base;
  if (!(s > 0.0)) throw NoSolution("no a0 > 0 satisfies the parameter condition for b0 = " + format_double(b0));
  for (int iter = 0; iter < 200; ++iter) {
    const double next = base + coupling * std::exp(-s / b2);
    if (!std::isfinite(next) || !(next > 0.0)) break;
    if (std::abs(next - s) <= 4.0 * std::numeric_limits<double>::epsilon() * next) {
      return std::sqrt(next);
    }
    s = next;
  }
  throw NoSolution("fixed-point iteration for a0 did not converge (b0 = " + format_double(b0) +
                   "); parameters are outside the deep-well regime");
}

AnsatzShape shape_for_width(const SystemParams& p, double b0) {
  return AnsatzShape{solve_center(p, b0), b0, p};
}

AnsatzShape solve_ansatz_params(const SystemParams& p) {
  validate(p);
  const double b_harmonic = std::sqrt(p.hbar / std::sqrt(2.0 * p.mass));
  double lo = b_harmonic / 3.0;
  double hi = 3.0 * b_harmonic;
  // a0^2 = 1/lambda - 3/2 b0^2 must stay positive.
  const double b_cap = 0.999 * std::sqrt(2.0 / (3.0 * p.lambda));
  hi = std::min(hi, b_cap);
  if (!(hi > lo)) throw NoSolution("harmonic width exceeds the well; no deep-well ansatz");

  auto energy = [&p](double b) {
    try {
      return energy_expectation(parity_state(shape_for_width(p, b), +1));
    } catch (const NoSolution&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  const double lo0 = lo;
  const double hi0 = hi;
  constexpr double inv_phi = 0.61803398874989484820;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = energy(x1);
  double f2 = energy(x2);
  while (hi - lo > 1e-10 * (1.0 + std::abs(lo))) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = energy(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = energy(x2);
    }
  }
  const double b0 = 0.5 * (lo + hi);
  const double margin = 1e-3 * (hi0 - lo0);
  if (b0 - lo0 < margin || hi0 - b0 < margin || !std::isfinite(energy(b0))) {
    throw NoSolution("variational minimum of <H> over b0 is not bracketed");
  }
  return shape_for_width(p, b0);
}

double normalization_residual(const TwoGaussianState& s) noexcept {
  const auto g = geometry(s);
  return (s.n1 * s.n1 + s.n2 * s.n2 + 2.0 * s.n1 * s.n2 * g.overlap) * g.b * kSqrtPi - 1.0;
}

TwoGaussianState normalize(const TwoGaussianState& s) {
  if (s.n1 == 0.0 && s.n2 == 0.0) throw DegenerateState("normalize: n1 = n2 = 0");
  const double norm = normalization_residual(s) + 1.0;
  if (!(norm > 0.0) || !std::isfinite(norm)) throw DegenerateState("normalize: packet has zero norm");
  const double scale = 1.0 / std::sqrt(norm);
  TwoGaussianState out = s;
  out.n1 *= scale;
  out.n2 *= scale;
  return out;
}

TwoGaussianState one_well_state(const AnsatzShape& shape, double epsilon) {
  check_shape(shape);
  return normalize(TwoGaussianState{1.0, 0.0, epsilon, shape});
}

TwoGaussianState parity_state(const AnsatzShape& shape, int sign) {
  check_shape(shape);
  return normalize(TwoGaussianState{1.0, sign >= 0 ? 1.0 : -1.0, 0.0, shape});
}

double pop_diff(const TwoGaussianState& s, Overlap mode) noexcept {
  const double n1sq = s.n1 * s.n1;
  const double n2sq = s.n2 * s.n2;
  double denom = n1sq + n2sq;
  if (mode == Overlap::full) denom += 2.0 * s.n1 * s.n2 * geometry(s).overlap;
  return (n1sq - n2sq) / denom;
}

double expect_x(const TwoGaussianState& s, Overlap mode) noexcept {
  return (s.shape.a0 + s.epsilon) * pop_diff(s, mode);
}

double expect_x3(const TwoGaussianState& s, Overlap mode) noexcept {
  const double c = s.shape.a0 + s.epsilon;
  const double b0 = s.shape.b0;
  return c * (c * c + 1.5 * b0 * b0) * pop_diff(s, mode);
}

double quantum_fluctuation_Q(const TwoGaussianState& s, Overlap mode) noexcept {
  const double lambda = s.shape.params.lambda;
  const double c = s.shape.a0 + s.epsilon;
  const double b0 = s.shape.b0;
  const double P = pop_diff(s, mode);
  return lambda * (c * c * c * P * (P * P - 1.0)) - 1.5 * lambda * c * b0 * b0 * P;
}

double energy_expectation(const TwoGaussianState& s) {
  check_shape(s.shape);
  const auto& p = s.shape.params;
  const auto g = geometry(s);
  const double b2 = g.b * g.b;
  const double var = 0.5 * b2;  // variance of each squared Gaussian
  const double c2 = g.c * g.c;
  const double S = g.b * kSqrtPi;
  const double hb2m = p.hbar * p.hbar / (2.0 * p.mass);

  // <g1|H|g1> = <g2|H|g2>
  const double kinetic_diag = hb2m / (2.0 * b2);
  const double potential_diag =
      -0.5 * (c2 + var) + 0.25 * p.lambda * (c2 * c2 + 6.0 * c2 * var + 3.0 * var * var);
  const double h_diag = S * (kinetic_diag + potential_diag);

  // <g2|H|g1>; the product g1 g2 is a Gaussian centred at 0 carrying the overlap factor.
  const double kinetic_cross = -hb2m * (c2 - 0.5 * b2) / (b2 * b2);
  const double potential_cross = -0.5 * var + 0.75 * p.lambda * var * var;
  const double h_cross = S * g.overlap * (kinetic_cross + potential_cross);

  const double n1sq = s.n1 * s.n1;
  const double n2sq = s.n2 * s.n2;
  const double cross = 2.0 * s.n1 * s.n2;
  const double norm = (n1sq + n2sq + cross * g.overlap) * S;
  if (!(norm > 0.0)) throw DegenerateState("energy_expectation: packet has zero norm");
  return ((n1sq + n2sq) * h_diag + cross * h_cross) / norm;
}

TunnelingSplitting tunneling_splitting(const AnsatzShape& shape) {
  check_shape(shape);
  const auto& p = shape.params;
  const double a2 = shape.a0 * shape.a0;
  const double b2 = shape.b0 * shape.b0;
  TunnelingSplitting out;
  out.ansatz = a2 * p.hbar * p.hbar / (2.0 * p.mass * b2 * b2) * std::exp(-a2 / b2);
  out.asymptotic = std::exp(-std::sqrt(2.0 * p.mass) / (p.lambda * p.hbar)) / std::sqrt(p.lambda);
  // E- - E+ of the parity states in closed form, 2 O (e_diag - e_cross) / (1 - O^2).
  {
    const double var = 0.5 * b2;
    const double hb2m = p.hbar * p.hbar / (2.0 * p.mass);
    const double overlap = std::exp(-a2 / b2);
    const double e_diag = hb2m / (2.0 * b2) - 0.5 * (a2 + var) + 0.25 * p.lambda * (a2 * a2 + 6.0 * a2 * var + 3.0 * var * var);
    const double e_cross = -hb2m * (a2 - 0.5 * b2) / (b2 * b2) - 0.5 * var + 0.75 * p.lambda * var * var;
    out.variational = 2.0 * overlap * (e_diag - e_cross) / (1.0 - overlap * overlap);
  }
  return out;
}

GridWavefunction synthesize_wavefunction(const TwoGaussianState& s, const GridSpec& grid) {
  validate(grid);
  check_shape(s.shape);
  const auto g = geometry(s);
  const double S = g.b * kSqrtPi;
  const double norm = (s.n1 * s.n1 + s.n2 * s.n2 + 2.0 * s.n1 * s.n2 * g.overlap) * S;
  if (!(norm > 0.0)) throw DegenerateState("synthesize_wavefunction: packet has zero norm");

  // Probability outside [x_min, x_max): tails of n1^2 g1^2, n2^2 g2^2 and the cross term.
  auto tails = [&](double centre) {
    return 0.5 * S * (std::erfc((grid.x_max - centre) / g.b) + std::erfc((centre - grid.x_min) / g.b));
  };
  const double outside = (s.n1 * s.n1 * tails(g.c) + s.n2 * s.n2 * tails(-g.c) +
                          2.0 * std::abs(s.n1 * s.n2) * g.overlap * tails(0.0)) /
                         norm;
  if (outside > 1e-8) {
    throw GridTooNarrow("packet has " + format_double(outside) + " of its probability outside [" +
                        format_double(grid.x_min) + ", " + format_double(grid.x_max) + ")");
  }

  GridWavefunction psi;
  psi.grid = grid;
  psi.amps.resize(grid.n_points);
  const double inv2b2 = 0.5 / (g.b * g.b);
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    const double x = grid.x(i);
    const double right = x - g.c;
    const double left = x + g.c;
    psi.amps[i] = s.n1 * std::exp(-right * right * inv2b2) + s.n2 * std::exp(-left * left * inv2b2);
  }
  psi.normalize();
  return psi;
}

std::string to_record(const TwoGaussianState& s) {
  const double fields[] = {s.n1,     s.n2,           s.epsilon,           s.shape.a0,
                           s.shape.b0, s.shape.params.lambda, s.shape.params.hbar, s.shape.params.mass};
  std::string out = "n1,n2,epsilon,a0,b0,lambda,hbar,mass\n";
  for (std::size_t i = 0; i < std::size(fields); ++i) {
    if (i) out += ',';
    out += format_double(fields[i]);
  }
  out += '\n';
  return out;
}

TwoGaussianState from_record(std::string_view text) {
  std::vector<std::string> lines;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (line.rfind("n1,", 0) == 0) continue;  // header
    lines.push_back(line);
  }
  if (lines.size() != 1) throw ParameterError("state record must contain exactly one value line");

  std::vector<double> values;
  std::string_view rest = lines.front();
  while (true) {
    const auto comma = rest.find(',');
    double v = 0.0;
    if (!parse_double(rest.substr(0, comma), v)) throw ParameterError("state record: malformed number");
    values.push_back(v);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (values.size() != 8) throw ParameterError("state record must have 8 fields");

  TwoGaussianState s{values[0], values[1], values[2],
                     AnsatzShape{values[3], values[4], SystemParams{values[5], values[6], values[7]}}};
  check_shape(s.shape);
  return s;
}

}  // namespace dwell
