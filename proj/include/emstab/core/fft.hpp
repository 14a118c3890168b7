#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "emstab/core/grid.hpp"

namespace emstab::fft {

namespace detail {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

// One out-of-place plan pair per length. FFTW_ESTIMATE keeps the plan choice
// independent of timing, so repeated runs execute identical code paths.
inline const PlanPair& plans(int n) {
  static std::mutex mutex;
  static std::map<int, PlanPair> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<cplx> a(n), b(n);
  auto* in = reinterpret_cast<fftw_complex*>(a.data());
  auto* out = reinterpret_cast<fftw_complex*>(b.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p;
  p.forward = fftw_plan_dft_1d(n, in, out, FFTW_FORWARD, flags);
  p.backward = fftw_plan_dft_1d(n, in, out, FFTW_BACKWARD, flags);
  return cache.emplace(n, p).first->second;
}

}  // namespace detail

/// Unnormalized forward transform: X_j = Σ_m x_m e^{−2πi jm/n}.
inline void forward(const cplx* in, cplx* out, int n) {
  fftw_execute_dft(detail::plans(n).forward, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

/// Unnormalized backward transform: x_m = Σ_j X_j e^{+2πi jm/n}.
inline void backward(const cplx* in, cplx* out, int n) {
  fftw_execute_dft(detail::plans(n).backward, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

inline std::vector<cplx> forward(const std::vector<cplx>& x) {
  std::vector<cplx> y(x.size());
  forward(x.data(), y.data(), static_cast<int>(x.size()));
  return y;
}

/// Inverse of forward (includes the 1/n factor).
inline std::vector<cplx> inverse(const std::vector<cplx>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<cplx> y(n);
  backward(x.data(), y.data(), n);
  const double s = 1.0 / n;
  for (auto& z : y) z *= s;
  return y;
}

}  // namespace emstab::fft
