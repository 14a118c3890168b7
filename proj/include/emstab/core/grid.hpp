#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "emstab/core/error.hpp"

namespace emstab {

using cplx = std::complex<double>;

/// Uniform periodic grid x_j = jL/N with wavenumbers k_n = 2πn/L, n ∈ {−N/2, …, N/2−1}.
/// Fourier-side arrays are stored in FFT order: index j holds mode n = j for j < N/2 and n = j − N otherwise.
class PeriodicGrid {
 public:
  PeriodicGrid() = default;
  PeriodicGrid(int N, double L) : N_(N), L_(L) {
    if (N < 8 || N % 2 != 0)
      throw InvalidArgument("grid point count must be even and >= 8 (got " + std::to_string(N) + ")");
    if (!(L > 0.0) || !std::isfinite(L))
      throw InvalidArgument("grid length must be positive and finite");
  }

  int N() const { return N_; }
  double L() const { return L_; }
  double h() const { return L_ / N_; }
  double x(int j) const { return j * L_ / N_; }
  /// Smallest nonzero wavenumber 2π/L.
  double k1() const { return 2.0 * std::numbers::pi / L_; }
  /// Mode number of FFT index j.
  int mode(int j) const { return j < N_ / 2 ? j : j - N_; }
  /// Wavenumber of FFT index j.
  double k(int j) const { return k1() * mode(j); }

  std::vector<double> points() const {
    std::vector<double> xs(N_);
    for (int j = 0; j < N_; ++j) xs[j] = x(j);
    return xs;
  }

  /// Wavenumbers in FFT order.
  std::vector<double> wavenumbers() const {
    std::vector<double> ks(N_);
    for (int j = 0; j < N_; ++j) ks[j] = k(j);
    return ks;
  }

  /// Returns n if k = n·2π/L for an integer n (relative tolerance 1e-9), throws otherwise.
  long lattice_index(double kk, const std::string& what = "wavenumber") const {
    const double n = kk / k1();
    const double r = std::round(n);
    if (std::abs(n - r) > 1e-9 * std::max(1.0, std::abs(n)))
      throw InvalidArgument(what + " " + std::to_string(kk) + " is not on the lattice (2π/L)Z");
    return static_cast<long>(r);
  }

  bool operator==(const PeriodicGrid& o) const { return N_ == o.N_ && L_ == o.L_; }

 private:
  int N_ = 8;
  double L_ = 2.0 * std::numbers::pi;
};

inline PeriodicGrid make_grid(int N, double L) { return PeriodicGrid(N, L); }

/// Complex samples of a field on a periodic grid.
struct PeriodicField {
  PeriodicGrid grid;
  std::vector<cplx> values;

  PeriodicField() = default;
  explicit PeriodicField(const PeriodicGrid& g) : grid(g), values(g.N(), cplx(0.0, 0.0)) {}
  PeriodicField(const PeriodicGrid& g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
    if (static_cast<int>(values.size()) != grid.N())
      throw InvalidArgument("field length does not match grid size");
  }

  template <class Fn>
  static PeriodicField sample(const PeriodicGrid& g, Fn&& fn) {
    PeriodicField f(g);
    for (int j = 0; j < g.N(); ++j) f.values[j] = cplx(fn(g.x(j)));
    return f;
  }

  int size() const { return grid.N(); }
  cplx& operator[](int j) { return values[j]; }
  const cplx& operator[](int j) const { return values[j]; }

  bool finite() const {
    for (const auto& z : values)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  }

  PeriodicField& operator+=(const PeriodicField& o) {
    check_same(o);
    for (int j = 0; j < size(); ++j) values[j] += o.values[j];
    return *this;
  }
  PeriodicField& operator-=(const PeriodicField& o) {
    check_same(o);
    for (int j = 0; j < size(); ++j) values[j] -= o.values[j];
    return *this;
  }
  PeriodicField& operator*=(cplx s) {
    for (auto& z : values) z *= s;
    return *this;
  }

  void check_same(const PeriodicField& o) const {
    if (!(grid == o.grid)) throw InvalidArgument("fields live on different grids");
  }
};

inline PeriodicField operator+(PeriodicField a, const PeriodicField& b) { return a += b; }
inline PeriodicField operator-(PeriodicField a, const PeriodicField& b) { return a -= b; }
inline PeriodicField operator*(cplx s, PeriodicField a) { return a *= s; }

/// a + s·b
inline PeriodicField axpy(const PeriodicField& a, cplx s, const PeriodicField& b) {
  a.check_same(b);
  PeriodicField r = a;
  for (int j = 0; j < r.size(); ++j) r.values[j] += s * b.values[j];
  return r;
}

/// Two-component field (vector NLS).
struct PeriodicField2 {
  PeriodicField u1;
  PeriodicField u2;
  const PeriodicGrid& grid() const { return u1.grid; }
};

}  // namespace emstab
