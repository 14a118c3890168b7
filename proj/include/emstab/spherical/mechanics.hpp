#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <string>

#include "emstab/core/error.hpp"
#include "emstab/spherical/potential.hpp"

namespace emstab::spherical {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

struct PhasePoint {
  Vec3 q = Vec3::Zero();
  Vec3 p = Vec3::Zero();

  Vec6 packed() const {
    Vec6 v;
    v << q, p;
    return v;
  }
  static PhasePoint unpack(const Eigen::Ref<const Eigen::VectorXd>& v) {
    if (v.size() != 6) throw InvalidArgument("phase point needs 6 components");
    return {v.head<3>(), v.tail<3>()};
  }
  bool finite() const { return q.allFinite() && p.allFinite(); }
};

inline Vec3 angular_momentum(const PhasePoint& u) { return u.q.cross(u.p); }

inline double hamiltonian(const RadialPotential& V, const PhasePoint& u) {
  return 0.5 * u.p.squaredNorm() + V.V(u.q.norm());
}

/// Skew matrix with hat(ξ)·x = ξ ∧ x.
inline Mat3 hat(const Vec3& xi) {
  Mat3 m;
  m << 0.0, -xi.z(), xi.y(), xi.z(), 0.0, -xi.x(), -xi.y(), xi.x(), 0.0;
  return m;
}

/// Relative equilibrium on a circular orbit of radius ρ about axis μ̂.
struct CircularEquilibrium {
  double rho = 1.0;
  double sigma = 1.0;
  Vec3 axis = Vec3::UnitZ();
  PhasePoint base;

  /// μ = ρσ·μ̂
  Vec3 mu() const { return rho * sigma * axis; }
  /// Lagrange multiplier η = ρ⁻² of ℒ = H − η μ·L.
  double eta() const { return 1.0 / (rho * rho); }
};

/// Circular orbit with σ² = ρV'(ρ), q ⊥ p and q∧p ∥ μ̂.
inline CircularEquilibrium circular_equilibrium(const RadialPotential& V, double rho, const Vec3& axis) {
  if (!(rho > 0.0)) throw InvalidArgument("orbit radius must be positive");
  const double an = axis.norm();
  if (!(an > 1e-12)) throw InvalidArgument("orbit axis must be nonzero");
  const double dv = V.dV(rho);
  if (!(dv > 0.0))
    throw InvalidArgument("no circular orbit at radius " + std::to_string(rho) + ": V'(rho) = " + std::to_string(dv) +
                          " <= 0");
  CircularEquilibrium eq;
  eq.rho = rho;
  eq.sigma = std::sqrt(rho * dv);
  eq.axis = axis / an;
  if (eq.rho * eq.sigma < 1e-8) throw InvalidArgument("angular momentum below 1e-8: singular level set");
  // e_a ⊥ μ̂ chosen from the coordinate axis least aligned with μ̂.
  Eigen::Index imin = 0;
  eq.axis.cwiseAbs().minCoeff(&imin);
  const Vec3 ea = eq.axis.cross(Vec3::Unit(imin)).normalized();
  eq.base.q = rho * ea;
  eq.base.p = eq.sigma * eq.axis.cross(ea);
  return eq;
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

/// V''(ρ)ρ² + 3σ², the sign that decides stability of the circular orbit.
inline double circular_stability_margin(const RadialPotential& V, double rho) {
  const double dv = V.dV(rho);
  if (!(dv > 0.0)) throw InvalidArgument("no circular orbit at this radius: V'(rho) <= 0");
  return V.d2V(rho) * rho * rho + 3.0 * rho * dv;
}

inline Verdict circular_stability_verdict(const RadialPotential& V, double rho, double rel_tol = 1e-9) {
  const double lhs = circular_stability_margin(V, rho);
  const double scale = std::abs(V.d2V(rho)) * rho * rho + 3.0 * rho * V.dV(rho);
  if (std::abs(lhs) <= rel_tol * scale) return Verdict::marginal;
  return lhs > 0.0 ? Verdict::stable : Verdict::unstable;
}

/// Checks that `at` lies on the SO(2) orbit of the equilibrium.
inline void require_on_orbit(const CircularEquilibrium& eq, const PhasePoint& at, double tol = 1e-8) {
  const double s = std::max(1.0, eq.rho * eq.sigma);
  if (std::abs(at.q.norm() - eq.rho) > tol * std::max(1.0, eq.rho) ||
      std::abs(at.p.norm() - eq.sigma) > tol * std::max(1.0, eq.sigma) || std::abs(at.q.dot(at.p)) > tol * s ||
      (angular_momentum(at) - eq.mu()).norm() > tol * s)
    throw InvalidArgument("point is not on the circular orbit (invariant violation beyond 1e-8)");
}

/// Frame e1..e6 at a point of the orbit. e1..e3 are orthogonal but not unit;
/// e1 spans the orbit tangent.
inline std::array<Vec6, 6> orbit_frame(const CircularEquilibrium& eq, const PhasePoint& at) {
  const double r = eq.rho, s = eq.sigma;
  const Vec3 q = at.q, p = at.p;
  const Vec3 n = q.normalized().cross(p.normalized());
  std::array<Vec6, 6> e;
  e[0] << p, -(s / r) * (s / r) * q;
  e[1] << q, -p;
  e[2] << p, q;
  e[3] << n, Vec3::Zero();
  e[4] << Vec3::Zero(), n;
  e[5] << s * q.normalized(), r * p.normalized();
  e[5] /= std::sqrt(r * r + s * s);
  return e;
}

struct HessianBlocks {
  Mat3 d2H;    // D²H(e_i, e_j), i,j ∈ {1,2,3}
  Mat3 d2muL;  // D²(μ·L)(e_i, e_j)
  /// D²ℒ = D²H − ρ⁻² D²(μ·L) on the same frame.
  Mat3 d2lyapunov(double rho) const { return d2H - d2muL / (rho * rho); }
};

/// Closed-form Hessian blocks on the frame e1, e2, e3. The (1,1) entry of D²H
/// carries the momentum contribution σ⁴ρ⁻² of e1, which makes e1 a null
/// direction of D²ℒ as the orbit tangent must be.
inline HessianBlocks hessian_blocks(const RadialPotential& V, const CircularEquilibrium& eq, const PhasePoint& at) {
  require_on_orbit(eq, at);
  const double r = eq.rho, s = eq.sigma, s2 = s * s, r2 = r * r;
  const double dv = V.dV(r), d2v = V.d2V(r);
  const double mu2 = r2 * s2;
  HessianBlocks b;
  b.d2H << dv / r * s2 + s2 * s2 / r2, 0.0, (dv / r - 1.0) * s2,  //
      0.0, d2v * r2 + s2, 0.0,                                   //
      (dv / r - 1.0) * s2, 0.0, dv / r * s2 + r2;
  b.d2muL << 2.0 * s2 * s2, 0.0, mu2 * (s2 / r2 - 1.0),  //
      0.0, -2.0 * mu2, 0.0,                             //
      mu2 * (s2 / r2 - 1.0), 0.0, -2.0 * mu2;
  return b;
}

/// ℒ_K(u) = H(u) − ρ⁻² μ·L(u) + K‖L(u) − μ‖².
inline double augmented_lyapunov(const RadialPotential& V, const CircularEquilibrium& eq, double K,
                                 const PhasePoint& u) {
  if (!(K >= 0.0)) throw InvalidArgument("augmentation constant K must be >= 0");
  const Vec3 L = angular_momentum(u);
  return hamiltonian(V, u) - eq.eta() * eq.mu().dot(L) + K * (L - eq.mu()).squaredNorm();
}

inline double lyapunov(const RadialPotential& V, const CircularEquilibrium& eq, const PhasePoint& u) {
  return augmented_lyapunov(V, eq, 0.0, u);
}

/// Analytic 6×6 Hessian of ℒ_K at u.
inline Mat6 augmented_lyapunov_hessian(const RadialPotential& V, const CircularEquilibrium& eq, double K,
                                       const PhasePoint& u) {
  const double r = u.q.norm();
  const Vec3 qh = u.q / r;
  const Mat3 P = qh * qh.transpose();
  Mat6 H = Mat6::Zero();
  H.topLeftCorner<3, 3>() = V.d2V(r) * P + V.dV(r) / r * (Mat3::Identity() - P);
  H.bottomRightCorner<3, 3>() = Mat3::Identity();
  // Hessian of ν·L(q,p) = −qᵀ hat(ν) p.
  auto bracket = [](const Vec3& nu) {
    Mat6 M = Mat6::Zero();
    M.topRightCorner<3, 3>() = -hat(nu);
    M.bottomLeftCorner<3, 3>() = hat(nu);
    return M;
  };
  const Vec3 L = angular_momentum(u);
  H -= eq.eta() * bracket(eq.mu());
  if (K > 0.0) {
    Eigen::Matrix<double, 3, 6> J;
    J.leftCols<3>() = -hat(u.p);
    J.rightCols<3>() = hat(u.q);
    H += 2.0 * K * (J.transpose() * J + bracket(L - eq.mu()));
  }
  return H;
}

/// Orthonormal basis (columns) of span{e2..e6}.
inline Eigen::Matrix<double, 6, 5> transverse_basis(const CircularEquilibrium& eq, const PhasePoint& at) {
  const auto e = orbit_frame(eq, at);
  Eigen::Matrix<double, 6, 5> B;
  for (int c = 0; c < 5; ++c) {
    Vec6 v = e[c + 1];
    for (int k = 0; k < c; ++k) v -= B.col(k).dot(v) * B.col(k);
    B.col(c) = v.normalized();
  }
  return B;
}

/// Smallest eigenvalue of the Hessian of ℒ_K at the base point restricted to span{e2..e6}.
inline double min_eig_restricted(const RadialPotential& V, const CircularEquilibrium& eq, double K) {
  if (!(K >= 0.0)) throw InvalidArgument("augmentation constant K must be >= 0");
  const auto B = transverse_basis(eq, eq.base);
  const Eigen::Matrix<double, 5, 5> R = B.transpose() * augmented_lyapunov_hessian(V, eq, K, eq.base) * B;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 5, 5>> es(R);
  return es.eigenvalues().minCoeff();
}

}  // namespace emstab::spherical
