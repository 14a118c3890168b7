#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "emstab/core/error.hpp"
#include "emstab/standing/nonlinearity.hpp"
#include "emstab/standing/operators.hpp"
#include "emstab/standing/profile.hpp"

namespace emstab::standing {

struct WaveProfileCurve {
  std::vector<Profile> points;  // ξ strictly increasing
  bool terminated = false;      // a shooting failure or the ξ∞ cap ended the curve early
  std::string failure;
  double last_good_xi = NAN;
  double xi_infinity = NAN;     // AL only

  std::size_t size() const { return points.size(); }
  const Profile& operator[](std::size_t i) const { return points[i]; }
};

/// n points from lo to hi (inclusive), equally spaced in log ξ.
inline std::vector<double> geometric_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw InvalidArgument("geometric grid needs 0 < lo < hi and n >= 2");
  std::vector<double> x(n);
  const double r = std::log(hi / lo);
  for (int i = 0; i < n; ++i) x[i] = lo * std::exp(r * i / (n - 1));
  x.back() = hi;
  return x;
}

/// Natural-parameter continuation over the given ξ values; each shot is warm-started from
/// an extrapolation of the previous w(0). For AL the curve stops at 0.95·ξ∞.
inline WaveProfileCurve continue_curve(const InhomogeneousNonlinearity& nl, const std::vector<double>& xis,
                                       const LineGrid& grid, const ShootOptions& opt = {}) {
  for (std::size_t i = 0; i < xis.size(); ++i) {
    if (!(xis[i] > 0.0)) throw InvalidArgument("continuation needs xi > 0");
    if (i > 0 && !(xis[i] > xis[i - 1])) throw InvalidArgument("continuation xi values must increase strictly");
  }
  WaveProfileCurve c;
  double cap = std::numeric_limits<double>::infinity();
  if (nl.kind() == NonlinearityKind::AL) {
    c.xi_infinity = xi_infinity(nl, grid);
    cap = 0.95 * c.xi_infinity;
  }
  for (double xi : xis) {
    if (xi > cap) {
      c.terminated = true;
      c.failure = "reached 0.95*xi_infinity = " + std::to_string(cap);
      break;
    }
    ShootOptions o = opt;
    const auto& P = c.points;
    if (P.size() >= 2) {
      const double r = std::log(xi / P.back().xi) / std::log(P.back().xi / P[P.size() - 2].xi);
      o.guess = P.back().w0() * std::pow(P.back().w0() / P[P.size() - 2].w0(), r);
    } else if (P.size() == 1) {
      o.guess = P.back().w0();
    }
    try {
      c.points.push_back(shoot_profile(nl, xi, grid, o));
      c.last_good_xi = xi;
    } catch (const Error& e) {
      c.terminated = true;
      c.failure = std::string("shooting failed at xi = ") + std::to_string(xi) + ": " + e.what();
      break;
    }
  }
  return c;
}

inline WaveProfileCurve continue_curve(const InhomogeneousNonlinearity& nl, double xi_lo, double xi_hi, int steps,
                                       const LineGrid& grid, const ShootOptions& opt = {}) {
  if (!(xi_lo > 0.0)) throw InvalidArgument("continuation needs xi_lo > 0");
  return continue_curve(nl, geometric_grid(xi_lo, xi_hi, steps), grid, opt);
}

namespace detail {

// Weights of the three-point derivative at the middle of a nonuniform stencil.
struct Stencil3 {
  double m, c, p;
};

inline Stencil3 centered_weights(double xm, double x0, double xp) {
  const double hm = x0 - xm, hp = xp - x0;
  return {-hp / (hm * (hm + hp)), (hp - hm) / (hm * hp), hm / (hp * (hm + hp))};
}

inline void require_interior(const WaveProfileCurve& c, std::size_t i) {
  if (i == 0 || i + 1 >= c.size()) throw InvalidArgument("derivative along the curve needs an interior xi");
}

}  // namespace detail

/// dQ/dξ at curve node i by the centred (nonuniform) difference.
inline double charge_slope(const WaveProfileCurve& c, std::size_t i) {
  detail::require_interior(c, i);
  const auto s = detail::centered_weights(c[i - 1].xi, c[i].xi, c[i + 1].xi);
  return s.m * c[i - 1].Q + s.c * c[i].Q + s.p * c[i + 1].Q;
}

/// Index of the node at ξ (relative tolerance 1e-12).
inline std::size_t curve_index(const WaveProfileCurve& c, double xi) {
  for (std::size_t i = 0; i < c.size(); ++i)
    if (std::abs(c[i].xi - xi) <= 1e-12 * xi) return i;
  throw InvalidArgument("xi " + std::to_string(xi) + " is not a node of the curve");
}

/// |LHS − RHS| / (|RHS| + 1e−12) for ∫₀^∞ (2f + x∂₁f − ∂₂f w²) w χ = 2ξ ∫₀^∞ w χ with χ = dw/dξ
/// from centred differences on the curve.
inline double intid_residual(const InhomogeneousNonlinearity& nl, const WaveProfileCurve& c, std::size_t i) {
  detail::require_interior(c, i);
  const Profile &A = c[i - 1], &P = c[i], &B = c[i + 1];
  if (A.w.size() != P.w.size() || B.w.size() != P.w.size() || A.h != P.h || B.h != P.h)
    throw InvalidArgument("curve profiles must share the line grid");
  const auto s = detail::centered_weights(A.xi, P.xi, B.xi);
  const std::size_t n = P.w.size() - 1;
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    const double q = (j == 0 || j == n) ? 0.5 : 1.0;
    const double chi = s.m * A.w[j] + s.c * P.w[j] + s.p * B.w[j];
    const double x = j * P.h;
    lhs += q * nl.intid_weight(x, P.w[j]) * P.w[j] * chi;
    rhs += q * P.w[j] * chi;
  }
  lhs *= P.h;
  rhs *= 2.0 * P.xi * P.h;
  if (std::abs(lhs) + std::abs(rhs) == 0.0) return 0.0;
  return std::abs(lhs - rhs) / (std::abs(rhs) + 1e-12);
}

}  // namespace emstab::standing
