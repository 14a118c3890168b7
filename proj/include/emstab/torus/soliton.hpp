#pragma once

#include <cmath>
#include <complex>

#include "emstab/core/error.hpp"
#include "emstab/core/spectral.hpp"
#include "emstab/torus/evolve.hpp"
#include "emstab/torus/model.hpp"

namespace emstab::torus {

/// Periodic representative of y in [−L/2, L/2).
inline double wrap_centered(double y, double L) {
  double r = std::fmod(y + 0.5 * L, L);
  if (r < 0.0) r += L;
  return r - 0.5 * L;
}

/// α√(2/λ) sech(α(x − ct)) e^{i(cx/2 + (α² − c²/4)t)} for β = 1, sampled around the soliton
/// centre x = ct (the coordinate is unwrapped within half a period of the centre).
inline PeriodicField bright_soliton(const PeriodicGrid& g, double alpha, double c, double lambda, double t) {
  if (!(lambda > 0.0)) throw InvalidArgument("bright solitons need lambda > 0");
  if (!(alpha > 0.0)) throw InvalidArgument("soliton amplitude must be positive");
  if (alpha * g.L() < 20.0) throw InvalidArgument("domain too short for the soliton (need alpha*L >= 20)");
  const double amp = alpha * std::sqrt(2.0 / lambda);
  const double center = c * t;
  return PeriodicField::sample(g, [&](double x) {
    const double y = wrap_centered(x - center, g.L());
    const double X = center + y;
    return amp / std::cosh(alpha * y) * std::polar(1.0, 0.5 * c * X + (alpha * alpha - 0.25 * c * c) * t);
  });
}

/// (cos θ e^{iγ₁}, sin θ e^{iγ₂}) times the scalar soliton.
inline PeriodicField2 manakov_soliton(const PeriodicGrid& g, double alpha, double c, double theta, double gamma1,
                                      double gamma2, double lambda, double t) {
  const PeriodicField s = bright_soliton(g, alpha, c, lambda, t);
  PeriodicField2 u{s, s};
  u.u1 *= std::cos(theta) * std::polar(1.0, gamma1);
  u.u2 *= std::sin(theta) * std::polar(1.0, gamma2);
  return u;
}

/// Ψ̂_v u = e^{−ivx/2} u, requiring v/2 ∈ (2π/L)ℤ.
inline PeriodicField boost(const PeriodicField& u, double v) {
  u.grid.lattice_index(0.5 * v, "boost half-velocity");
  PeriodicField r = u;
  for (int j = 0; j < u.size(); ++j) r[j] *= std::polar(1.0, -0.5 * v * u.grid.x(j));
  return r;
}

/// Φ_{I,a,γ} u = e^{iγ} u(x − a).
inline PeriodicField translate_gauge(const PeriodicField& u, double a, double gamma) {
  return gauge(translate(u, a), gamma);
}

/// H¹ norm of Ψ̂_v Φ_t Ψ̂_{−v} u − Φ_{I, vt, −v²t/4} Φ_t u with Φ_t the split-step flow.
/// The Galilean identity in this form holds for β = 1.
inline double boost_commutation_residual(const TorusNlsModel& m, const PeriodicField& u, double v, double t,
                                         double dt) {
  if (m.beta != 1.0) throw InvalidArgument("boost identity requires beta = 1");
  const PeriodicField lhs = boost(evolve_to(m, boost(u, -v), t, dt), v);
  const PeriodicField rhs = translate_gauge(evolve_to(m, u, t, dt), v * t, -0.25 * v * v * t);
  return h1_norm(lhs - rhs);
}

}  // namespace emstab::torus
