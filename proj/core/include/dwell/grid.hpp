#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace dwell {

/// Uniform periodic grid x_i = x_min + i*dx, i in [0, n_points), with
/// dx = (x_max - x_min)/n_points. x_max itself is not a node.
struct GridSpec {
  double x_min = -1.0;
  double x_max = 1.0;
  std::size_t n_points = 256;

  double dx() const noexcept { return (x_max - x_min) / static_cast<double>(n_points); }
  double x(std::size_t i) const noexcept { return x_min + static_cast<double>(i) * dx(); }
  double length() const noexcept { return x_max - x_min; }
  /// x_min == -x_max; the reflection x -> -x then maps node i to node (n - i) mod n.
  bool symmetric() const noexcept { return x_min == -x_max; }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Throws ParameterError unless x_max > x_min and n_points is a power of two >= 256.
void validate(const GridSpec& grid);

GridSpec symmetric_grid(double half_width, std::size_t n_points);

using Amplitude = std::complex<double>;

struct GridWavefunction {
  GridSpec grid;
  std::vector<Amplitude> amps;
  double time = 0.0;

  /// Discrete norm sum |psi_i|^2 dx.
  double norm() const noexcept;
  void normalize();
};

/// <a|b> = sum conj(a_i) b_i dx. Both must live on the same grid.
Amplitude inner_product(const GridWavefunction& a, const GridWavefunction& b);

/// Binary snapshot: uint64 n_points, float64 x_min, float64 x_max, then
/// n_points (re, im) float64 pairs. All little-endian.
void write_snapshot(std::ostream& out, const GridWavefunction& psi);
GridWavefunction read_snapshot(std::istream& in);
void write_snapshot(const std::filesystem::path& path, const GridWavefunction& psi);
GridWavefunction read_snapshot(const std::filesystem::path& path);

}  // namespace dwell
