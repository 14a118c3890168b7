#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

#include "emstab/core/error.hpp"
#include "emstab/core/finite_diff.hpp"
#include "emstab/spherical/mechanics.hpp"

namespace emstab::spherical {

struct Trajectory {
  std::vector<double> t;
  std::vector<PhasePoint> u;
  double dt = 0.0;
};

/// Called on stored samples: (step index, time, state).
using FlowObserver = std::function<void(long, double, const PhasePoint&)>;

inline long step_count(double T, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  if (!(T >= 0.0)) throw InvalidArgument("horizon must be non-negative");
  return static_cast<long>(std::ceil(T / dt - 1e-9));
}

/// Störmer–Verlet (kick-drift-kick) for q̇ = p, ṗ = −V'(‖q‖)q̂ with uniform steps T/n ≤ dt.
/// The observer sees the initial state and every `stride`-th step (and the final one).
inline void integrate_flow(const RadialPotential& V, const PhasePoint& u0, double T, double dt, long stride,
                           const FlowObserver& observe, double min_radius = 1e-8) {
  if (stride < 1) throw InvalidArgument("sampling stride must be >= 1");
  const long n = step_count(T, dt);
  const double h = n > 0 ? T / n : dt;
  auto force = [&](const Vec3& q, long step) -> Vec3 {
    const double r = q.norm();
    if (!(r >= min_radius)) {
      std::ostringstream os;
      os << "close approach: |q| = " << r << " < " << min_radius << " at t = " << step * h;
      throw EvolutionAbort(os.str(), step, step * h);
    }
    return -V.dV(r) / r * q;
  };
  PhasePoint u = u0;
  observe(0, 0.0, u);
  Vec3 f = force(u.q, 0);
  for (long s = 1; s <= n; ++s) {
    u.p += 0.5 * h * f;
    u.q += h * u.p;
    f = force(u.q, s);
    u.p += 0.5 * h * f;
    if (!u.finite()) throw EvolutionAbort("non-finite state", s, s * h);
    if (s % stride == 0 || s == n) observe(s, s * h, u);
  }
}

inline Trajectory integrate_flow(const RadialPotential& V, const PhasePoint& u0, double T, double dt,
                                 long stride = 1) {
  Trajectory tr;
  const long n = step_count(T, dt);
  tr.dt = n > 0 ? T / n : dt;
  integrate_flow(V, u0, T, dt, stride, [&](long, double t, const PhasePoint& u) {
    tr.t.push_back(t);
    tr.u.push_back(u);
  });
  return tr;
}

/// Rotation about a unit axis by angle θ applied to x.
inline Vec3 rotate_about(const Vec3& axis, double theta, const Vec3& x) {
  return Eigen::AngleAxisd(theta, axis) * x;
}

inline PhasePoint rotate_about(const Vec3& axis, double theta, const PhasePoint& u) {
  return {rotate_about(axis, theta, u.q), rotate_about(axis, theta, u.p)};
}

/// Closed-form maximizer θ* of ⟨u, R_θ v⟩ = A + B cos θ + C sin θ for rotations about `axis`.
inline double so2_optimal_angle(const PhasePoint& u, const PhasePoint& v, const Vec3& axis) {
  double B = 0.0, C = 0.0;
  for (int c = 0; c < 2; ++c) {
    const Vec3& a = c == 0 ? u.q : u.p;
    const Vec3& b = c == 0 ? v.q : v.p;
    const Vec3 bperp = b - b.dot(axis) * axis;
    B += a.dot(bperp);
    C += a.dot(axis.cross(bperp));
  }
  return std::atan2(C, B);
}

/// min over θ of ‖u − R_θ(base)‖ (Euclidean on ℝ⁶).
inline double distance_to_so2_orbit(const PhasePoint& u, const CircularEquilibrium& eq) {
  const double th = so2_optimal_angle(u, eq.base, eq.axis);
  const PhasePoint r = rotate_about(eq.axis, th, eq.base);
  return std::sqrt((u.q - r.q).squaredNorm() + (u.p - r.p).squaredNorm());
}

/// min over R ∈ SO(3) of ‖u − R v‖ (Kabsch).
inline double distance_to_so3_orbit(const PhasePoint& u, const PhasePoint& v) {
  const Mat3 M = u.q * v.q.transpose() + u.p * v.p.transpose();
  Eigen::JacobiSVD<Mat3> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 D = Mat3::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0) D(2, 2) = -1.0;
  const Mat3 R = svd.matrixU() * D * svd.matrixV().transpose();
  return std::sqrt((u.q - R * v.q).squaredNorm() + (u.p - R * v.p).squaredNorm());
}

using PhaseFn = std::function<double(const PhasePoint&)>;

/// {F, G} = ∂_q F·∂_p G − ∂_p F·∂_q G with centered-difference gradients.
inline double poisson_bracket_fd(const PhaseFn& F, const PhaseFn& G, const PhasePoint& u, double h = 1e-5) {
  auto lift = [](const PhaseFn& f) { return [f](const Eigen::VectorXd& x) { return f(PhasePoint::unpack(x)); }; };
  const Eigen::VectorXd x = u.packed();
  const Eigen::VectorXd gF = finite_diff_gradient(lift(F), x, h);
  const Eigen::VectorXd gG = finite_diff_gradient(lift(G), x, h);
  return gF.head(3).dot(gG.tail(3)) - gF.tail(3).dot(gG.head(3));
}

}  // namespace emstab::spherical
