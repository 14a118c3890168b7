#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "emstab/core/fft.hpp"
#include "emstab/core/grid.hpp"

namespace emstab {

/// Fourier-space multiplication by (ik)^order. The Nyquist mode is zeroed for odd orders.
inline PeriodicField spectral_derivative(const PeriodicField& f, int order) {
  if (order != 1 && order != 2) throw InvalidArgument("spectral derivative order must be 1 or 2");
  const auto& g = f.grid;
  const int N = g.N();
  auto c = fft::forward(f.values);
  for (int j = 0; j < N; ++j) {
    const double k = g.k(j);
    if (order == 1)
      c[j] *= (j == N / 2) ? cplx(0.0, 0.0) : cplx(0.0, k);
    else
      c[j] *= -k * k;
  }
  return PeriodicField(g, fft::inverse(c));
}

/// Trapezoid (spectrally accurate) quadrature of periodic samples: (L/N)·Σ v_j.
inline double integrate(const PeriodicGrid& g, const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return g.h() * s;
}

inline cplx integrate(const PeriodicGrid& g, const std::vector<cplx>& v) {
  cplx s(0.0, 0.0);
  for (const auto& z : v) s += z;
  return g.h() * s;
}

/// Complex pairing ∫ u v̄ dx.
inline cplx l2_inner_complex(const PeriodicField& u, const PeriodicField& v) {
  u.check_same(v);
  cplx s(0.0, 0.0);
  for (int j = 0; j < u.size(); ++j) s += u[j] * std::conj(v[j]);
  return u.grid.h() * s;
}

/// Real pairing Re ∫ u v̄ dx.
inline double l2_inner(const PeriodicField& u, const PeriodicField& v) { return l2_inner_complex(u, v).real(); }

inline double l2_norm_sq(const PeriodicField& u) {
  double s = 0.0;
  for (const auto& z : u.values) s += std::norm(z);
  return u.grid.h() * s;
}

inline double l2_norm(const PeriodicField& u) { return std::sqrt(l2_norm_sq(u)); }

/// Complex H¹ pairing ∫ (u' v̄' + u v̄) from Fourier coefficients (FFT order, unnormalized).
/// Weight (1 + k²) on every mode including Nyquist, matching the second-order derivative.
inline cplx h1_inner_complex_fourier(const PeriodicGrid& g, const std::vector<cplx>& uh, const std::vector<cplx>& vh) {
  const int N = g.N();
  cplx s(0.0, 0.0);
  for (int j = 0; j < N; ++j) {
    const double k = g.k(j);
    s += (1.0 + k * k) * uh[j] * std::conj(vh[j]);
  }
  return s * (g.L() / (static_cast<double>(N) * N));
}

inline cplx h1_inner_complex(const PeriodicField& u, const PeriodicField& v) {
  u.check_same(v);
  return h1_inner_complex_fourier(u.grid, fft::forward(u.values), fft::forward(v.values));
}

/// Re ∫ (∂ₓu ∂ₓv̄ + u v̄) dx.
inline double h1_inner(const PeriodicField& u, const PeriodicField& v) { return h1_inner_complex(u, v).real(); }

inline double h1_norm(const PeriodicField& u) { return std::sqrt(std::max(0.0, h1_inner(u, u))); }

/// ∫ |∂ₓu|² dx = (L/N²) Σ k²|û|².
inline double gradient_energy(const PeriodicField& u) {
  const auto& g = u.grid;
  const auto c = fft::forward(u.values);
  double s = 0.0;
  for (int j = 0; j < g.N(); ++j) {
    const double k = g.k(j);
    s += k * k * std::norm(c[j]);
  }
  return s * (g.L() / (static_cast<double>(g.N()) * g.N()));
}

/// Translation x ↦ u(x − a) through Fourier phases e^{−ik a}.
inline PeriodicField translate(const PeriodicField& u, double a) {
  const auto& g = u.grid;
  auto c = fft::forward(u.values);
  for (int j = 0; j < g.N(); ++j) c[j] *= std::polar(1.0, -g.k(j) * a);
  return PeriodicField(g, fft::inverse(c));
}

/// Multiply by e^{iγ}.
inline PeriodicField gauge(const PeriodicField& u, double gamma) {
  PeriodicField r = u;
  r *= std::polar(1.0, gamma);
  return r;
}

inline double sup_norm(const PeriodicField& u) {
  double m = 0.0;
  for (const auto& z : u.values) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace emstab
