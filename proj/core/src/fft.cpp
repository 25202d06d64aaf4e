#include "fft.hpp"

namespace dwell::detail {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace dwell::detail
