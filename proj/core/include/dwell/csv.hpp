#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <span>
#include <string_view>

namespace dwell {

/// Opens `path` for writing in binary mode (no newline translation); throws IoError.
std::ofstream open_output(const std::filesystem::path& path);

void write_row(std::ostream& out, std::initializer_list<double> values);
void write_row(std::ostream& out, std::span<const double> values);

}  // namespace dwell
