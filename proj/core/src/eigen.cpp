#include "dwell/eigen.hpp"

#include <lapacke.h>

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <limits>
#include <numeric>

#include "dwell/ansatz.hpp"
#include "dwell/errors.hpp"
#include "dwell/numfmt.hpp"

namespace dwell {

namespace {

constexpr std::size_t kMaxPairs = 16;

/// Symmetric tridiagonal matrix: diag[i], off[i] couples i and i+1.
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;
  std::vector<double> x;  // node positions
};

struct SectorSolution {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;  // empty unless requested
};

SectorSolution lowest(Tridiagonal t, std::size_t k, bool want_vectors) {
  const auto n = static_cast<lapack_int>(t.diag.size());
  k = std::min<std::size_t>(k, t.diag.size());
  SectorSolution out;
  if (k == 0) return out;
  t.off.resize(t.diag.size(), 0.0);
  lapack_int found = 0;
  std::vector<double> w(t.diag.size());
  std::vector<double> z(want_vectors ? t.diag.size() * k : 1);
  std::vector<lapack_int> support(2 * k);
  const lapack_int info =
      LAPACKE_dstevr(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'I', n, t.diag.data(), t.off.data(), 0.0, 0.0,
                     1, static_cast<lapack_int>(k), 0.0, &found, w.data(), z.data(), want_vectors ? n : 1,
                     support.data());
  if (info != 0) throw ResolutionError("tridiagonal eigensolver failed (info " + std::to_string(info) + ")");
  out.values.assign(w.begin(), w.begin() + found);
  if (want_vectors) {
    for (lapack_int c = 0; c < found; ++c) {
      out.vectors.emplace_back(z.begin() + c * n, z.begin() + (c + 1) * n);
    }
  }
  return out;
}

struct Operator {
  const PotentialFn& V;
  double hbar;
  double mass;
};

double hopping(const Operator& op, double dx) { return op.hbar * op.hbar / (2.0 * op.mass * dx * dx); }

/// Interior nodes 1..n-1 of the periodic grid; walls at x_min and x_min + n dx.
Tridiagonal full_operator(const Operator& op, const GridSpec& g) {
  const double t = hopping(op, g.dx());
  Tridiagonal m;
  for (std::size_t i = 1; i < g.n_points; ++i) {
    const double x = g.x(i);
    m.x.push_back(x);
    m.diag.push_back(2.0 * t + op.V(x));
  }
  m.off.assign(m.diag.size() - 1, -t);
  return m;
}

/// Even sector: nodes x = j dx, j = 0..n/2-1, with psi_0 rescaled by 1/sqrt(2)
/// to keep the matrix symmetric. Odd sector: nodes j = 1..n/2-1.
Tridiagonal sector_operator(const Operator& op, const GridSpec& g, int parity) {
  const double dx = g.dx();
  const double t = hopping(op, dx);
  const std::size_t half = g.n_points / 2;
  Tridiagonal m;
  for (std::size_t j = parity > 0 ? 0 : 1; j < half; ++j) {
    const double x = static_cast<double>(j) * dx;
    m.x.push_back(x);
    m.diag.push_back(2.0 * t + op.V(x));
  }
  m.off.assign(m.diag.size() - 1, -t);
  if (parity > 0) m.off[0] = -std::sqrt(2.0) * t;
  return m;
}

struct Level {
  double value;
  int parity;
  std::size_t index;  // within its sector
};

std::vector<Level> merged_levels(const Operator& op, const GridSpec& g, std::size_t k, bool symmetric,
                                 std::vector<SectorSolution>* keep, bool want_vectors) {
  std::vector<Level> levels;
  if (symmetric) {
    for (int parity : {+1, -1}) {
      auto sol = lowest(sector_operator(op, g, parity), k, want_vectors);
      for (std::size_t i = 0; i < sol.values.size(); ++i) levels.push_back({sol.values[i], parity, i});
      if (keep) keep->push_back(std::move(sol));
    }
  } else {
    auto sol = lowest(full_operator(op, g), k, want_vectors);
    for (std::size_t i = 0; i < sol.values.size(); ++i) levels.push_back({sol.values[i], 0, i});
    if (keep) keep->push_back(std::move(sol));
  }
  std::stable_sort(levels.begin(), levels.end(), [](const Level& a, const Level& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.parity > b.parity;
  });
  // Doublet members can tie to rounding deep in the tunneling regime; keep the
  // even state first there, as it is in exact arithmetic.
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    auto& a = levels[i];
    auto& b = levels[i + 1];
    const double scale = std::max(std::abs(a.value), std::abs(b.value));
    if (a.parity < 0 && b.parity > 0 && b.value - a.value <= 64.0 * std::numeric_limits<double>::epsilon() * scale) {
      std::swap(a, b);
      ++i;
    }
  }
  if (levels.size() > k) levels.resize(k);
  return levels;
}

/// Raw eigenvalue of the same (parity, index) level, for Richardson pairing.
double matching_value(const std::vector<Level>& levels, const Level& ref) {
  for (const auto& l : levels) {
    if (l.parity == ref.parity && l.index == ref.index) return l.value;
  }
  throw ResolutionError("eigenvalue ordering changed under grid refinement");
}

GridWavefunction embed(const GridSpec& g, const std::vector<double>& u, int parity) {
  GridWavefunction psi;
  psi.grid = g;
  psi.amps.assign(g.n_points, Amplitude{0.0, 0.0});
  const std::size_t n = g.n_points;
  if (parity == 0) {
    for (std::size_t i = 1; i < n; ++i) psi.amps[i] = u[i - 1];
  } else {
    const std::size_t half = n / 2;
    const std::size_t first = parity > 0 ? 0 : 1;
    for (std::size_t r = 0; r < u.size(); ++r) {
      const std::size_t j = first + r;
      double value = u[r];
      if (parity > 0 && j == 0) value *= std::sqrt(2.0);
      psi.amps[half + j] = value;
      if (j > 0) psi.amps[half - j] = parity > 0 ? value : -value;
    }
  }
  psi.normalize();

  double right_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (g.x(i) > 0.0) right_sum += psi.amps[i].real();
  }
  if (right_sum < 0.0) {
    for (auto& a : psi.amps) a = -a;
  }
  return psi;
}

GridSpec refined(const GridSpec& g, std::size_t factor) { return GridSpec{g.x_min, g.x_max, g.n_points * factor}; }

std::vector<EigenPair> solve(const Operator& op, const GridSpec& grid, std::size_t k) {
  validate(grid);
  if (k == 0 || k > kMaxPairs) throw ParameterError("eigenpairs: k must be in [1, 16]");
  const bool symmetric = grid.symmetric();

  std::vector<SectorSolution> sectors;
  const auto base = merged_levels(op, grid, k, symmetric, &sectors, true);
  const auto fine = merged_levels(op, refined(grid, 2), k + 2, symmetric, nullptr, false);
  const auto finer = merged_levels(op, refined(grid, 4), k + 2, symmetric, nullptr, false);

  auto extrapolate = [](double coarse, double fine_value) { return (4.0 * fine_value - coarse) / 3.0; };

  std::vector<EigenPair> out;
  for (const auto& level : base) {
    const double e2 = matching_value(fine, level);
    const double e4 = matching_value(finer, level);
    EigenPair pair;
    pair.discrete_energy = level.value;
    pair.energy = extrapolate(e2, e4);
    pair.parity = level.parity;
    const auto& sector = sectors[symmetric && level.parity < 0 ? 1 : 0];
    pair.state = embed(grid, sector.vectors[level.index], level.parity);
    out.push_back(std::move(pair));
  }

  const double e0_coarse = extrapolate(base.front().value, matching_value(fine, base.front()));
  const double drift = std::abs(e0_coarse - out.front().energy);
  if (drift > 1e-8) {
    throw ResolutionError("ground energy not converged under grid doubling (change " + format_double(drift) +
                          " > 1e-8); increase n_points");
  }
  return out;
}

// ---- extended precision --------------------------------------------------

using Real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<100>,
                                           boost::multiprecision::et_off>;

struct SectorMp {
  std::vector<Real> diag;
  std::vector<Real> off_sq;  // squared couplings, off_sq[i] between i and i+1
};

SectorMp sector_mp(const SystemParams& p, const GridSpec& g, int parity) {
  const std::size_t half = g.n_points / 2;
  const Real dx = Real(g.length()) / Real(g.n_points);
  const Real t = Real(p.hbar) * Real(p.hbar) / (Real(2) * Real(p.mass) * dx * dx);
  const Real lambda(p.lambda);
  SectorMp m;
  for (std::size_t j = parity > 0 ? 0 : 1; j < half; ++j) {
    const Real x = Real(j) * dx;
    const Real x2 = x * x;
    m.diag.push_back(Real(2) * t - x2 / 2 + lambda * x2 * x2 / 4);
  }
  m.off_sq.assign(m.diag.size() - 1, t * t);
  if (parity > 0) m.off_sq[0] = Real(2) * t * t;
  return m;
}

/// Number of eigenvalues strictly below sigma (Sturm sequence / LDL^T inertia).
std::size_t count_below(const SectorMp& m, const Real& sigma) {
  static const Real tiny = Real(1e-200);
  std::size_t count = 0;
  Real q = m.diag[0] - sigma;
  for (std::size_t i = 0;; ++i) {
    if (q == 0) q = -tiny;
    if (q < 0) ++count;
    if (i + 1 == m.diag.size()) break;
    q = (m.diag[i + 1] - sigma) - m.off_sq[i] / q;
  }
  return count;
}

/// Lowest eigenvalue of the sector, starting from a double-precision estimate.
Real lowest_mp(const SectorMp& m, double estimate) {
  Real width = Real(1e-8) * (1 + std::abs(estimate));
  Real lo = Real(estimate) - width;
  Real hi = Real(estimate) + width;
  for (int grow = 0; count_below(m, lo) != 0 || count_below(m, hi) == 0; ++grow) {
    if (grow > 40) throw ResolutionError("extended-precision bracket for the ground level failed");
    width *= 10;
    lo = Real(estimate) - width;
    hi = Real(estimate) + width;
  }
  const Real target = Real(1e-80) * (1 + abs(lo));
  while (hi - lo > target) {
    const Real mid = (lo + hi) / 2;
    if (count_below(m, mid) == 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return (lo + hi) / 2;
}

double discrete_gap(const SystemParams& p, const GridSpec& g) {
  const PotentialFn V = [&p](double x) { return potential(x, p); };
  const Operator op{V, p.hbar, p.mass};
  const auto even = lowest(sector_operator(op, g, +1), 1, false);
  const auto odd = lowest(sector_operator(op, g, -1), 1, false);
  const Real e0 = lowest_mp(sector_mp(p, g, +1), even.values.at(0));
  const Real e1 = lowest_mp(sector_mp(p, g, -1), odd.values.at(0));
  return static_cast<double>(e1 - e0);
}

void check_resolution(const SystemParams& p, const GridSpec& grid) {
  double b0 = std::sqrt(p.hbar / std::sqrt(2.0 * p.mass));
  try {
    b0 = solve_ansatz_params(p).b0;
  } catch (const NoSolution&) {
  }
  if (!(grid.dx() < b0 / 8.0)) {
    throw ResolutionError("grid spacing " + format_double(grid.dx()) + " does not resolve the well (need dx < b0/8 = " +
                          format_double(b0 / 8.0) + ")");
  }
}

}  // namespace

std::vector<EigenPair> eigenpairs(const PotentialFn& V, double hbar, double mass, const GridSpec& grid,
                                  std::size_t k) {
  if (!(hbar > 0.0) || !(mass > 0.0)) throw ParameterError("eigenpairs: hbar and mass must be > 0");
  return solve(Operator{V, hbar, mass}, grid, k);
}

std::vector<EigenPair> eigenpairs(const SystemParams& p, const GridSpec& grid, std::size_t k) {
  validate(p);
  validate(grid);
  check_resolution(p, grid);
  const PotentialFn V = [p](double x) { return potential(x, p); };
  return solve(Operator{V, p.hbar, p.mass}, grid, k);
}

double eigen_residual(const EigenPair& pair, const PotentialFn& V, double hbar, double mass) {
  const auto& g = pair.state.grid;
  const auto& a = pair.state.amps;
  const double t = hbar * hbar / (2.0 * mass * g.dx() * g.dx());
  double sum = 0.0;
  for (std::size_t i = 1; i < g.n_points; ++i) {
    const double left = a[i - 1].real();
    const double right = i + 1 < g.n_points ? a[i + 1].real() : 0.0;
    const double h_psi = (2.0 * t + V(g.x(i))) * a[i].real() - t * (left + right);
    const double r = h_psi - pair.discrete_energy * a[i].real();
    sum += r * r;
  }
  return std::sqrt(sum * g.dx());
}

TunnelingGap tunneling_gap(const SystemParams& p, const GridSpec& grid) {
  validate(p);
  validate(grid);
  if (!grid.symmetric()) throw ParameterError("tunneling_gap requires a grid symmetric about x = 0");
  check_resolution(p, grid);
  TunnelingGap out;
  out.discrete = discrete_gap(p, grid);
  const double fine = discrete_gap(p, refined(grid, 2));
  if (!(out.discrete > 0.0) || !(fine > 0.0)) throw ResolutionError("ground doublet splitting is not resolved");
  out.extrapolated = std::exp((4.0 * std::log(fine) - std::log(out.discrete)) / 3.0);
  return out;
}

}  // namespace dwell
