#pragma once

// Private helpers around FFTW: RAII buffers and a process-wide planner lock
// (the FFTW planner is not re-entrant).

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <mutex>

namespace dwell::detail {

std::mutex& fftw_planner_mutex();

struct FftwComplexBuffer {
  explicit FftwComplexBuffer(std::size_t n)
      : size(n), data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (!data) throw std::bad_alloc();
  }
  ~FftwComplexBuffer() { fftw_free(data); }
  FftwComplexBuffer(const FftwComplexBuffer&) = delete;
  FftwComplexBuffer& operator=(const FftwComplexBuffer&) = delete;

  std::complex<double>* as_complex() noexcept { return reinterpret_cast<std::complex<double>*>(data); }
  const std::complex<double>* as_complex() const noexcept {
    return reinterpret_cast<const std::complex<double>*>(data);
  }

  std::size_t size;
  fftw_complex* data;
};

class FftwPlan {
 public:
  FftwPlan() = default;
  explicit FftwPlan(fftw_plan plan) : plan_(plan) {}
  ~FftwPlan() { reset(); }
  FftwPlan(const FftwPlan&) = delete;
  FftwPlan& operator=(const FftwPlan&) = delete;
  FftwPlan(FftwPlan&& o) noexcept : plan_(o.plan_) { o.plan_ = nullptr; }
  FftwPlan& operator=(FftwPlan&& o) noexcept {
    if (this != &o) {
      reset();
      plan_ = o.plan_;
      o.plan_ = nullptr;
    }
    return *this;
  }

  void execute() const { fftw_execute(plan_); }
  fftw_plan get() const noexcept { return plan_; }

 private:
  void reset() {
    if (plan_) {
      std::lock_guard lock(fftw_planner_mutex());
      fftw_destroy_plan(plan_);
      plan_ = nullptr;
    }
  }
  fftw_plan plan_ = nullptr;
};

}  // namespace dwell::detail
