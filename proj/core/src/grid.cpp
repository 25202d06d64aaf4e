#include "dwell/grid.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "dwell/errors.hpp"

namespace dwell {

void validate(const GridSpec& grid) {
  if (!std::isfinite(grid.x_min) || !std::isfinite(grid.x_max) || !(grid.x_max > grid.x_min)) {
    throw ParameterError("grid requires finite x_max > x_min");
  }
  if (grid.n_points < 256 || !std::has_single_bit(grid.n_points)) {
    throw ParameterError("grid n_points must be a power of two >= 256, got " +
                         std::to_string(grid.n_points));
  }
}

GridSpec symmetric_grid(double half_width, std::size_t n_points) {
  GridSpec g{-half_width, half_width, n_points};
  validate(g);
  return g;
}

double GridWavefunction::norm() const noexcept {
  double sum = 0.0;
  for (const auto& a : amps) sum += std::norm(a);
  return sum * grid.dx();
}

void GridWavefunction::normalize() {
  const double n = norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw DegenerateState("cannot normalize a zero wavefunction");
  const double scale = 1.0 / std::sqrt(n);
  for (auto& a : amps) a *= scale;
}

Amplitude inner_product(const GridWavefunction& a, const GridWavefunction& b) {
  if (!(a.grid == b.grid) || a.amps.size() != b.amps.size()) {
    throw ParameterError("inner_product: wavefunctions live on different grids");
  }
  Amplitude sum{0.0, 0.0};
  for (std::size_t i = 0; i < a.amps.size(); ++i) sum += std::conj(a.amps[i]) * b.amps[i];
  return sum * a.grid.dx();
}

namespace {


void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw IoError("snapshot: truncated record");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return v;
}

void put_f64(std::ostream& out, double d) { put_u64(out, std::bit_cast<std::uint64_t>(d)); }
double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

}  // namespace

void write_snapshot(std::ostream& out, const GridWavefunction& psi) {
  put_u64(out, psi.grid.n_points);
  put_f64(out, psi.grid.x_min);
  put_f64(out, psi.grid.x_max);
  for (const auto& a : psi.amps) {
    put_f64(out, a.real());
    put_f64(out, a.imag());
  }
  if (!out) throw IoError("snapshot: write failed");
}

GridWavefunction read_snapshot(std::istream& in) {
  GridWavefunction psi;
  psi.grid.n_points = get_u64(in);
  psi.grid.x_min = get_f64(in);
  psi.grid.x_max = get_f64(in);
  validate(psi.grid);
  psi.amps.resize(psi.grid.n_points);
  for (auto& a : psi.amps) {
    const double re = get_f64(in);
    const double im = get_f64(in);
    a = {re, im};
  }
  return psi;
}

void write_snapshot(const std::filesystem::path& path, const GridWavefunction& psi) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_snapshot(out, psi);
}

GridWavefunction read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_snapshot(in);
}

}  // namespace dwell
