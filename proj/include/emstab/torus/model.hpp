#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "emstab/core/error.hpp"
#include "emstab/core/grid.hpp"
#include "emstab/core/spectral.hpp"

namespace emstab::torus {

/// i∂ₜu + β∂²ₓₓu + λ|u|²u = 0 on the torus of length L.
struct TorusNlsModel {
  double beta = 1.0;
  double lambda = 0.0;
  PeriodicGrid grid;

  TorusNlsModel() = default;
  TorusNlsModel(double b, double l, const PeriodicGrid& g) : beta(b), lambda(l), grid(g) {
    if (!(beta > 0.0)) throw InvalidArgument("dispersion coefficient beta must be > 0");
    if (!std::isfinite(lambda)) throw InvalidArgument("nonlinearity coefficient lambda must be finite");
  }
};

/// Plane wave αe^{i(ξt − kx)} with ξ + βk² = λα².
struct PlaneWaveSpec {
  double alpha = 1.0;
  double k = 0.0;
  double xi = 0.0;
};

inline PlaneWaveSpec plane_wave_spec(const TorusNlsModel& m, double alpha, double k = 0.0) {
  const long n = m.grid.lattice_index(k, "plane-wave wavenumber");
  if (n < -m.grid.N() / 2 || n >= m.grid.N() / 2) throw InvalidArgument("plane-wave wavenumber not resolved by the grid");
  return {alpha, k, m.lambda * alpha * alpha - m.beta * k * k};
}

inline PeriodicField plane_wave(const TorusNlsModel& m, double alpha, double k, double t) {
  const auto s = plane_wave_spec(m, alpha, k);
  return PeriodicField::sample(m.grid, [&](double x) { return alpha * std::polar(1.0, s.xi * t - k * x); });
}

struct ConservedTriple {
  double H = 0.0;
  double F1 = 0.0;
  double F2 = 0.0;
};

/// F2(u) = −½∫|u|².
inline double charge(const PeriodicField& u) { return -0.5 * l2_norm_sq(u); }

/// F1(u) = Re −(i/2)∫ ū ∂ₓu = (L/2N²) Σ k|û|² (Nyquist excluded).
inline double momentum(const PeriodicField& u) {
  const auto& g = u.grid;
  const auto c = fft::forward(u.values);
  double s = 0.0;
  for (int j = 0; j < g.N(); ++j)
    if (j != g.N() / 2) s += g.k(j) * std::norm(c[j]);
  return 0.5 * s * g.L() / (static_cast<double>(g.N()) * g.N());
}

/// H(u) = ½(β∫|∂ₓu|² − (λ/2)∫|u|⁴).
inline double energy(const TorusNlsModel& m, const PeriodicField& u) {
  double q = 0.0;
  for (const auto& z : u.values) {
    const double a = std::norm(z);
    q += a * a;
  }
  q *= u.grid.h();
  return 0.5 * (m.beta * gradient_energy(u) - 0.5 * m.lambda * q);
}

inline ConservedTriple conserved(const TorusNlsModel& m, const PeriodicField& u) {
  return {energy(m, u), momentum(u), charge(u)};
}

/// ℒ(U) = H(U) − (ξ + βk²)F2(U) for the plane wave of amplitude α (ξ + βk² = λα²).
inline double lyapunov(const TorusNlsModel& m, double alpha, const PeriodicField& U) {
  return energy(m, U) - m.lambda * alpha * alpha * charge(U);
}

enum class Verdict { stable, unstable, marginal };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::stable: return "stable";
    case Verdict::unstable: return "unstable";
    case Verdict::marginal: return "marginal";
  }
  return "unknown";
}

/// β(2π/L)² − 2λα²
inline double stability_margin(const TorusNlsModel& m, double alpha) {
  const double k1 = m.grid.k1();
  return m.beta * k1 * k1 - 2.0 * m.lambda * alpha * alpha;
}

inline Verdict stability_verdict(const TorusNlsModel& m, double alpha) {
  if (alpha == 0.0) throw InvalidArgument("plane-wave amplitude must be nonzero");
  const double k1 = m.grid.k1();
  const double lhs = stability_margin(m, alpha);
  const double scale = m.beta * k1 * k1 + 2.0 * std::abs(m.lambda) * alpha * alpha;
  if (std::abs(lhs) <= 1e-12 * scale) return Verdict::marginal;
  return lhs > 0.0 ? Verdict::stable : Verdict::unstable;
}

/// Coercivity constant c_λ of the constrained Hessian.
inline double coercivity_constant(const TorusNlsModel& m, double alpha) {
  if (stability_verdict(m, alpha) != Verdict::stable)
    throw InvalidArgument("coercivity constant is defined only in the stable regime");
  const double k1sq = m.grid.k1() * m.grid.k1();
  if (m.lambda < 0.0) return std::min(m.beta * k1sq / (1.0 + k1sq), -2.0 * m.lambda * alpha * alpha);
  return (m.beta * k1sq - 2.0 * m.lambda * alpha * alpha) / (1.0 + k1sq);
}

struct ModeEntry {
  int n = 0;
  double k = 0.0;
  double hess_v1 = 0.0;  // βk² − 2λα²
  double hess_v2 = 0.0;  // βk²
  cplx lin_plus;         // +√(Ω(2λα² − Ω)), real or imaginary
  cplx lin_minus;
};

struct ModeSpectrum {
  std::vector<ModeEntry> modes;
  /// Max deviation between assembled-operator and closed-form spectra (NaN when not computed).
  double assembly_deviation = NAN;

  double max_growth_rate() const {
    double r = 0.0;
    for (const auto& e : modes)
      if (e.n >= 1) r = std::max(r, e.lin_plus.real());
    return r;
  }
  bool has_negative_constrained_entry(double tol = 0.0) const {
    for (const auto& e : modes)
      if (e.n >= 1 && (e.hess_v1 < -tol || e.hess_v2 < -tol)) return true;
    return false;
  }
};

/// Dense spectral second-derivative matrix (columns are D² applied to unit vectors).
inline Eigen::MatrixXd second_derivative_matrix(const PeriodicGrid& g) {
  const int N = g.N();
  Eigen::MatrixXd D(N, N);
  for (int c = 0; c < N; ++c) {
    PeriodicField e(g);
    e[c] = 1.0;
    const auto d = spectral_derivative(e, 2);
    for (int r = 0; r < N; ++r) D(r, c) = d[r].real();
  }
  return D;
}

/// Real 2N×2N matrix of ∇²ℒ(U)V = −βV'' − λ|U|²V − λ(|U|²V + V̄U²) + cV acting on (Re V, Im V).
inline Eigen::MatrixXd assemble_hessian(const TorusNlsModel& m, const PeriodicField& U, double c) {
  const int N = m.grid.N();
  const Eigen::MatrixXd D2 = second_derivative_matrix(m.grid);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * N, 2 * N);
  A.topLeftCorner(N, N) = -m.beta * D2;
  A.bottomRightCorner(N, N) = -m.beta * D2;
  for (int j = 0; j < N; ++j) {
    const double a = U[j].real(), b = U[j].imag();
    A(j, j) += -m.lambda * (3.0 * a * a + b * b) + c;
    A(N + j, N + j) += -m.lambda * (a * a + 3.0 * b * b) + c;
    A(j, N + j) += -2.0 * m.lambda * a * b;
    A(N + j, j) += -2.0 * m.lambda * a * b;
  }
  return A;
}

/// Real 2N×2N linearized flow v̇ = J ∇²ℒ v with J = [[0, I], [−I, 0]].
inline Eigen::MatrixXd assemble_linearization(const TorusNlsModel& m, const PeriodicField& U, double c) {
  const int N = m.grid.N();
  const Eigen::MatrixXd A = assemble_hessian(m, U, c);
  Eigen::MatrixXd M(2 * N, 2 * N);
  M.topRows(N) = A.bottomRows(N);
  M.bottomRows(N) = -A.topRows(N);
  return M;
}

/// Closed-form per-mode data for the k = 0 plane wave of amplitude α.
inline ModeSpectrum mode_spectrum_closed_form(const TorusNlsModel& m, double alpha, int n_max) {
  if (alpha == 0.0) throw InvalidArgument("plane-wave amplitude must be nonzero");
  if (n_max < 0) throw InvalidArgument("n_max must be >= 0");
  ModeSpectrum s;
  const double g = 2.0 * m.lambda * alpha * alpha;
  for (int n = 0; n <= n_max; ++n) {
    ModeEntry e;
    e.n = n;
    e.k = m.grid.k1() * n;
    const double omega = m.beta * e.k * e.k;
    e.hess_v1 = omega - g;
    e.hess_v2 = omega;
    if (n == 0) {
      e.lin_plus = e.lin_minus = cplx(0.0, 0.0);
    } else {
      const double disc = omega * (g - omega);
      e.lin_plus = disc >= 0.0 ? cplx(std::sqrt(disc), 0.0) : cplx(0.0, std::sqrt(-disc));
      e.lin_minus = -e.lin_plus;
    }
    s.modes.push_back(e);
  }
  return s;
}

/// Hessian Fourier blocks; with `cross_check` the assembled 2N×2N operator is eigensolved
/// and its spectrum compared with the closed form over all grid modes.
inline ModeSpectrum hessian_mode_spectrum(const TorusNlsModel& m, double alpha, int n_max, bool cross_check = true) {
  ModeSpectrum s = mode_spectrum_closed_form(m, alpha, n_max);
  if (cross_check) {
    const int N = m.grid.N();
    const PeriodicField U = PeriodicField::sample(m.grid, [&](double) { return cplx(alpha, 0.0); });
    const Eigen::MatrixXd A = assemble_hessian(m, U, m.lambda * alpha * alpha);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
    std::vector<double> closed;
    for (int j = 0; j < N; ++j) {
      const double k = m.grid.k(j);
      closed.push_back(m.beta * k * k - 2.0 * m.lambda * alpha * alpha);
      closed.push_back(m.beta * k * k);
    }
    std::sort(closed.begin(), closed.end());
    double dev = 0.0;
    for (int i = 0; i < 2 * N; ++i) dev = std::max(dev, std::abs(es.eigenvalues()[i] - closed[i]));
    s.assembly_deviation = dev;
  }
  return s;
}

struct LinearizationCheck {
  double closed_form_rate = 0.0;  // largest real part from the 2×2 blocks
  double assembled_rate = 0.0;    // largest real part of the assembled 2N×2N linearization
  double deviation = 0.0;
};

inline ModeSpectrum linearization_growth_rates(const TorusNlsModel& m, double alpha, int n_max) {
  return mode_spectrum_closed_form(m, alpha, n_max);
}

/// Validates the block growth-rate formula against a dense eigensolve of the assembled linearization.
inline LinearizationCheck validate_growth_rates(const TorusNlsModel& m, double alpha) {
  LinearizationCheck c;
  c.closed_form_rate = mode_spectrum_closed_form(m, alpha, m.grid.N() / 2).max_growth_rate();
  const PeriodicField U = PeriodicField::sample(m.grid, [&](double) { return cplx(alpha, 0.0); });
  Eigen::EigenSolver<Eigen::MatrixXd> es(assemble_linearization(m, U, m.lambda * alpha * alpha), false);
  double r = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) r = std::max(r, es.eigenvalues()[i].real());
  c.assembled_rate = r;
  c.deviation = std::abs(c.assembled_rate - c.closed_form_rate);
  return c;
}

/// L² norm of −βw'' − λ|w|²w + ξw.
inline double stationary_residual(const TorusNlsModel& m, const PeriodicField& w, double xi) {
  const auto d2 = spectral_derivative(w, 2);
  PeriodicField r(m.grid);
  for (int j = 0; j < m.grid.N(); ++j) r[j] = -m.beta * d2[j] - m.lambda * std::norm(w[j]) * w[j] + xi * w[j];
  return l2_norm(r);
}

/// u = e^{−ikx}U  ⇒  U = e^{ikx}u.
inline PeriodicField remove_carrier(const PeriodicField& u, double k) {
  PeriodicField U = u;
  for (int j = 0; j < u.size(); ++j) U[j] *= std::polar(1.0, k * u.grid.x(j));
  return U;
}

}  // namespace emstab::torus
