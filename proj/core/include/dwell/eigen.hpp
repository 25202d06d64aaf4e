#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "dwell/grid.hpp"
#include "dwell/potential.hpp"

namespace dwell {

using PotentialFn = std::function<double(double)>;

struct EigenPair {
  /// Continuum estimate: Richardson extrapolation of the three-point
  /// eigenvalues on n, 2n and 4n points.
  double energy = 0.0;
  /// Eigenvalue of the three-point operator on the requested grid.
  double discrete_energy = 0.0;
  /// +1 even, -1 odd, 0 when the grid is not symmetric.
  int parity = 0;
  /// Eigenvector on the requested grid, sum |psi|^2 dx = 1, sum_{x>0} psi > 0.
  GridWavefunction state;
};

/// k lowest eigenpairs of -(hbar^2/2m) d^2/dx^2 + V with a three-point
/// Laplacian and Dirichlet walls at x_min and x_max, ascending.
/// Throws ResolutionError when dx >= b0/8 or when the extrapolated ground
/// energy moves by more than 1e-8 between (n,2n) and (2n,4n).
std::vector<EigenPair> eigenpairs(const SystemParams& p, const GridSpec& grid, std::size_t k);

/// Same for an arbitrary potential; used to check the solver on analytic spectra.
std::vector<EigenPair> eigenpairs(const PotentialFn& V, double hbar, double mass, const GridSpec& grid,
                                  std::size_t k);

/// sqrt(sum |H psi - E psi|^2 dx) with E = discrete_energy.
double eigen_residual(const EigenPair& pair, const PotentialFn& V, double hbar, double mass);

struct TunnelingGap {
  /// E1 - E0 of the three-point operator on the requested grid.
  double discrete = 0.0;
  /// Richardson extrapolation of log(E1 - E0) from n and 2n points.
  double extrapolated = 0.0;
};

/// Ground doublet splitting of the double well by Sturm-sequence bisection
/// in the even and odd parity sectors, carried out in 100-digit arithmetic
/// so that splittings far below double-precision resolution of E0 are
/// exact to many digits. Requires a symmetric grid.
TunnelingGap tunneling_gap(const SystemParams& p, const GridSpec& grid);

}  // namespace dwell
