#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "emstab/core/error.hpp"
#include "emstab/core/fft.hpp"
#include "emstab/core/spectral.hpp"
#include "emstab/torus/model.hpp"

namespace emstab::torus {

enum class OrbitMode { gauge_only, gauge_translation };

struct OrbitDistance {
  double distance = 0.0;
  double gamma = 0.0;  // optimal phase
  double shift = 0.0;  // optimal translation
};

/// H¹ distance from u to the gauge orbit {e^{iγ}w}: closed-form phase γ = arg⟨u, w⟩_c,
/// then the norm of the residual evaluated directly.
inline OrbitDistance gauge_distance(const PeriodicField& u, const PeriodicField& w) {
  u.check_same(w);
  const auto uh = fft::forward(u.values), wh = fft::forward(w.values);
  const cplx c = h1_inner_complex_fourier(u.grid, uh, wh);
  OrbitDistance r;
  r.gamma = std::arg(c);
  const cplx ph = std::polar(1.0, r.gamma);
  std::vector<cplx> d(uh.size());
  for (std::size_t j = 0; j < d.size(); ++j) d[j] = uh[j] - ph * wh[j];
  r.distance = std::sqrt(std::max(0.0, h1_inner_complex_fourier(u.grid, d, d).real()));
  return r;
}

namespace detail {

// Cross-pairing ⟨u, T_a w⟩_c = (L/N²) Σ X_j e^{ik_j a} with X_j = (1 + k_j²) û_j conj(ŵ_j).
inline std::vector<cplx> cross_spectrum(const PeriodicGrid& g, const std::vector<cplx>& uh, const std::vector<cplx>& wh) {
  std::vector<cplx> X(g.N());
  for (int j = 0; j < g.N(); ++j) {
    const double k = g.k(j);
    X[j] = (1.0 + k * k) * uh[j] * std::conj(wh[j]);
  }
  return X;
}

inline cplx pairing_at(const PeriodicGrid& g, const std::vector<cplx>& X, double a) {
  cplx s(0.0, 0.0);
  for (int j = 0; j < g.N(); ++j) s += X[j] * std::polar(1.0, g.k(j) * a);
  return s * (g.L() / (static_cast<double>(g.N()) * g.N()));
}

// d/da of pairing_at.
inline cplx pairing_slope_at(const PeriodicGrid& g, const std::vector<cplx>& X, double a) {
  cplx s(0.0, 0.0);
  for (int j = 0; j < g.N(); ++j) s += X[j] * cplx(0.0, g.k(j)) * std::polar(1.0, g.k(j) * a);
  return s * (g.L() / (static_cast<double>(g.N()) * g.N()));
}

// Pairings at all integer grid shifts a = m·h.
inline std::vector<cplx> pairing_all_shifts(const PeriodicGrid& g, const std::vector<cplx>& X) {
  std::vector<cplx> c(g.N());
  fft::backward(X.data(), c.data(), g.N());
  const double s = g.L() / (static_cast<double>(g.N()) * g.N());
  for (auto& z : c) z *= s;
  return c;
}

// Maximizes score(a) given its values on the integer shifts: best shift, parabolic
// vertex through the neighbours, golden-section search on [m−1, m+1]·h, then secant
// iterations on the exact slope to push the shift below the √ε floor of the search.
template <class Score, class Slope>
double maximize_shift(const PeriodicGrid& g, const std::vector<double>& on_grid, Score&& score, Slope&& slope) {
  const int N = g.N();
  int m = 0;
  for (int j = 1; j < N; ++j)
    if (on_grid[j] > on_grid[m]) m = j;
  const double h = g.h();
  const double s0 = on_grid[m], sm = on_grid[(m - 1 + N) % N], sp = on_grid[(m + 1) % N];
  double best_a = m * h, best = s0;
  const double den = sm - 2.0 * s0 + sp;
  if (den < 0.0) {
    const double off = std::clamp(0.5 * (sm - sp) / den, -1.0, 1.0);
    const double a = (m + off) * h, v = score(a);
    if (v > best) best = v, best_a = a;
  }
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = (m - 1) * h, hi = (m + 1) * h;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = score(x1), f2 = score(x2);
  for (int it = 0; it < 60 && hi - lo > 1e-13 * std::max(1.0, g.L()); ++it) {
    if (f1 < f2) {
      lo = x1, x1 = x2, f1 = f2;
      x2 = lo + phi * (hi - lo), f2 = score(x2);
    } else {
      hi = x2, x2 = x1, f2 = f1;
      x1 = hi - phi * (hi - lo), f1 = score(x1);
    }
  }
  if (f1 > best) best = f1, best_a = x1;
  if (f2 > best) best = f2, best_a = x2;
  double a0 = best_a - 1e-6 * h, a1 = best_a + 1e-6 * h;
  double g0 = slope(a0), g1 = slope(a1);
  bool converged = false;
  for (int it = 0; it < 20 && g1 != g0; ++it) {
    const double a2 = a1 - g1 * (a1 - a0) / (g1 - g0);
    if (!(a2 >= (m - 1) * h && a2 <= (m + 1) * h)) break;
    a0 = a1, g0 = g1, a1 = a2, g1 = slope(a2);
    if (std::abs(a1 - a0) < 1e-14 * std::max(1.0, g.L())) {
      converged = true;
      break;
    }
  }
  // near the maximum the score is flat to rounding, so only guard against a different peak
  if (converged && score(a1) >= best - 1e-12 * std::abs(best)) best_a = a1;
  return best_a;
}

}  // namespace detail

/// H¹ distance from u to the orbit of `reference` under gauge (and optionally translations).
inline OrbitDistance orbit_distance(const PeriodicField& u, const PeriodicField& reference, OrbitMode mode) {
  if (mode == OrbitMode::gauge_only) return gauge_distance(u, reference);
  u.check_same(reference);
  const auto& g = u.grid;
  const auto uh = fft::forward(u.values), wh = fft::forward(reference.values);
  const auto X = detail::cross_spectrum(g, uh, wh);
  const auto c = detail::pairing_all_shifts(g, X);
  std::vector<double> mag(g.N());
  for (int j = 0; j < g.N(); ++j) mag[j] = std::abs(c[j]);
  const double a = detail::maximize_shift(
      g, mag, [&](double s) { return std::abs(detail::pairing_at(g, X, s)); },
      [&](double s) {
        const cplx p = detail::pairing_at(g, X, s);
        return std::real(std::conj(p) * detail::pairing_slope_at(g, X, s));
      });
  OrbitDistance r;
  r.shift = a;
  r.gamma = std::arg(detail::pairing_at(g, X, a));
  const cplx ph = std::polar(1.0, r.gamma);
  std::vector<cplx> d(g.N());
  for (int j = 0; j < g.N(); ++j) d[j] = uh[j] - ph * std::polar(1.0, -g.k(j) * a) * wh[j];
  r.distance = std::sqrt(std::max(0.0, h1_inner_complex_fourier(g, d, d).real()));
  return r;
}

struct U2OrbitDistance {
  double distance = 0.0;
  double shift = 0.0;
  Eigen::Matrix2cd S = Eigen::Matrix2cd::Identity();
};

/// H¹ distance from u to {S·w(· − a) : S ∈ U(2), a ∈ ℝ}. For fixed a the optimal S is the
/// polar factor of the 2×2 pairing matrix, so the score is its nuclear norm.
inline U2OrbitDistance u2_translation_distance(const PeriodicField2& u, const PeriodicField2& w) {
  const auto& g = u.grid();
  const std::array<std::vector<cplx>, 2> uh{fft::forward(u.u1.values), fft::forward(u.u2.values)};
  const std::array<std::vector<cplx>, 2> wh{fft::forward(w.u1.values), fft::forward(w.u2.values)};
  std::array<std::array<std::vector<cplx>, 2>, 2> X;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) X[i][j] = detail::cross_spectrum(g, uh[i], wh[j]);
  auto pairing = [&](double a) {
    Eigen::Matrix2cd C;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) C(i, j) = detail::pairing_at(g, X[i][j], a);
    return C;
  };
  auto nuclear = [](const Eigen::Matrix2cd& C) {
    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(C);
    return svd.singularValues().sum();
  };
  // d/da of the nuclear norm: Re tr(Q^H C'(a)) with Q the polar factor of C(a).
  auto nuclear_slope = [&](double a) {
    Eigen::Matrix2cd dC;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) dC(i, j) = detail::pairing_slope_at(g, X[i][j], a);
    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(pairing(a), Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::Matrix2cd Q = svd.matrixU() * svd.matrixV().adjoint();
    return (Q.adjoint() * dC).trace().real();
  };
  std::array<std::array<std::vector<cplx>, 2>, 2> all;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) all[i][j] = detail::pairing_all_shifts(g, X[i][j]);
  std::vector<double> score(g.N());
  for (int m = 0; m < g.N(); ++m) {
    Eigen::Matrix2cd C;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) C(i, j) = all[i][j][m];
    score[m] = nuclear(C);
  }
  U2OrbitDistance r;
  r.shift = detail::maximize_shift(g, score, [&](double a) { return nuclear(pairing(a)); }, nuclear_slope);
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(pairing(r.shift), Eigen::ComputeFullU | Eigen::ComputeFullV);
  r.S = svd.matrixU() * svd.matrixV().adjoint();
  double d2 = 0.0;
  for (int i = 0; i < 2; ++i) {
    std::vector<cplx> d(g.N());
    for (int j = 0; j < g.N(); ++j) {
      const cplx t = std::polar(1.0, -g.k(j) * r.shift);
      d[j] = uh[i][j] - (r.S(i, 0) * wh[0][j] + r.S(i, 1) * wh[1][j]) * t;
    }
    d2 += h1_inner_complex_fourier(g, d, d).real();
  }
  r.distance = std::sqrt(std::max(0.0, d2));
  return r;
}

/// H¹ distance of u from the orbit of the plane wave αe^{−ikx}, measured in the carrier-free
/// frame U = e^{ikx}u where the plane wave becomes the constant α.
inline OrbitDistance planewave_distance(const PeriodicField& u, double alpha, double k) {
  const PeriodicField A = PeriodicField::sample(u.grid, [&](double) { return cplx(alpha, 0.0); });
  return gauge_distance(k == 0.0 ? u : remove_carrier(u, k), A);
}

/// Radial rescale onto Σ_α = {W : F2(W) = −α²L/2}.
inline PeriodicField project_to_sigma(const PeriodicField& W, double alpha) {
  const double n2 = l2_norm_sq(W);
  if (!(n2 > 0.0)) throw InvalidArgument("cannot rescale the zero field onto the charge level set");
  PeriodicField r = W;
  r *= std::sqrt(alpha * alpha * W.grid.L() / n2);
  return r;
}

struct Modulation {
  double gamma = 0.0;
  PeriodicField V;
  double orthogonality = 0.0;  // ⟨i, V⟩ = Im ∫ V
};

/// e^{iγ}W = α + V with ⟨i, V⟩ = 0. For a constant reference the orthogonality condition
/// Im(e^{iγ}∫W) = 0 is solved in closed form, γ = −arg ∫W, the root with Re(e^{iγ}∫W) > 0.
/// `radius` is the admissible H¹ distance of W from the orbit of α.
inline Modulation modulation_decompose(const PeriodicField& W, double alpha, double radius) {
  const PeriodicField A = PeriodicField::sample(W.grid, [&](double) { return cplx(alpha, 0.0); });
  const double d = gauge_distance(W, A).distance;
  if (!(d <= radius))
    throw ConvergenceError("modulation: distance to the orbit " + std::to_string(d) + " exceeds the neighbourhood radius " +
                           std::to_string(radius));
  const cplx S = integrate(W.grid, W.values);
  if (!(std::abs(S) > 0.0)) throw ConvergenceError("modulation: mean of W vanishes, phase undefined");
  Modulation m;
  m.gamma = -std::arg(S);
  m.V = gauge(W, m.gamma);
  for (auto& z : m.V.values) z -= alpha;
  m.orthogonality = integrate(W.grid, m.V.values).imag();
  return m;
}

/// (ℒ(W) − ℒ(α)) / d(W, 𝒪)² for W on Σ_α.
inline double coercivity_gap_check(const TorusNlsModel& m, double alpha, const PeriodicField& W) {
  const double target = -0.5 * alpha * alpha * m.grid.L();
  if (std::abs(charge(W) - target) > 1e-10 * std::max(1.0, std::abs(target)))
    throw InvalidArgument("W is not on the charge level set; project first");
  const PeriodicField A = PeriodicField::sample(m.grid, [&](double) { return cplx(alpha, 0.0); });
  const double d = gauge_distance(W, A).distance;
  if (!(d * d > 1e-24)) throw InvalidArgument("W lies on the orbit (zero distance)");
  return (lyapunov(m, alpha, W) - lyapunov(m, alpha, A)) / (d * d);
}

}  // namespace emstab::torus
