#include "dwell/csv.hpp"

#include "dwell/errors.hpp"
#include "dwell/numfmt.hpp"

namespace dwell {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void write_row(std::ostream& out, std::span<const double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out << ',';
    out << format_double(v);
    first = false;
  }
  out << '\n';
}

void write_row(std::ostream& out, std::initializer_list<double> values) {
  write_row(out, std::span<const double>(values.begin(), values.size()));
}

}  // namespace dwell
