#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "emstab/core/spectral.hpp"
#include "emstab/harness/probe.hpp"
#include "emstab/harness/projection.hpp"
#include "emstab/spherical/flow.hpp"
#include "emstab/spherical/mechanics.hpp"
#include "emstab/torus/model.hpp"
#include "emstab/torus/orbit.hpp"

namespace emstab::harness {

/// Moves u onto {L(u) = μ} by Newton with the exact Jacobian ∂L = [−p̂, q̂].
inline spherical::PhasePoint project_angular_momentum(const spherical::PhasePoint& u, const spherical::Vec3& mu,
                                                      const ProjectionOptions& opt = {}) {
  using spherical::PhasePoint;
  auto F = [](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const auto v = PhasePoint::unpack(x);
    return spherical::angular_momentum(v);
  };
  auto J = [](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
    const auto v = PhasePoint::unpack(x);
    Eigen::MatrixXd M(3, 6);
    M << -spherical::hat(v.p), spherical::hat(v.q);
    return M;
  };
  return PhasePoint::unpack(project_to_level_set(u.packed(), F, mu, J, opt));
}

/// Orthonormal basis of the tangent space of {L = μ} at the base point, orthogonal to the orbit direction.
inline Eigen::MatrixXd spherical_transverse_tangent(const spherical::CircularEquilibrium& eq) {
  const auto& u = eq.base;
  Eigen::MatrixXd J(3, 6);
  J << -spherical::hat(u.p), spherical::hat(u.q);
  const Eigen::MatrixXd K = Eigen::FullPivLU<Eigen::MatrixXd>(J).kernel();
  const spherical::Vec6 e1 = spherical::orbit_frame(eq, u)[0].normalized();
  Eigen::MatrixXd P = K - e1 * (e1.transpose() * K);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(P, Eigen::ComputeThinU);
  const int rank = static_cast<int>((svd.singularValues().array() > 1e-10).count());
  return svd.matrixU().leftCols(rank);
}

/// Eigenpairs of the Hessian of ℒ restricted to that transverse tangent space.
inline Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> spherical_constrained_hessian(
    const spherical::RadialPotential& V, const spherical::CircularEquilibrium& eq) {
  const Eigen::MatrixXd N = spherical_transverse_tangent(eq);
  const Eigen::MatrixXd H = spherical::augmented_lyapunov_hessian(V, eq, 0.0, eq.base);
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(N.transpose() * H * N);
}

/// Probe for a circular orbit: Euclidean displacements in ℝ⁶, projection onto L = μ, distance
/// to the SO(2) orbit. When the constrained Hessian has a negative eigenvalue its eigenvector
/// (both signs) is added as a seeded direction.
inline CoercivityProbe<spherical::PhasePoint> spherical_probe(const spherical::RadialPotential& V,
                                                              const spherical::CircularEquilibrium& eq, double eta,
                                                              long samples, std::uint64_t seed) {
  using spherical::PhasePoint;
  CoercivityProbe<PhasePoint> p;
  p.equilibrium = eq.base;
  p.eta = eta;
  p.samples = samples;
  p.seed = seed;
  p.lyapunov = [V, eq](const PhasePoint& u) { return spherical::lyapunov(V, eq, u); };
  const spherical::Vec3 mu = eq.mu();
  p.project = [mu](const PhasePoint& u) { return project_angular_momentum(u, mu); };
  p.distance = [eq](const PhasePoint& u) { return spherical::distance_to_so2_orbit(u, eq); };
  p.displace = [](const PhasePoint& u, double r, Rng& rng) {
    spherical::Vec6 d;
    for (int i = 0; i < 6; ++i) d[i] = gaussian(rng);
    return PhasePoint::unpack(u.packed() + (r / d.norm()) * d);
  };
  const auto es = spherical_constrained_hessian(V, eq);
  if (es.eigenvalues()[0] < 0.0) {
    const Eigen::VectorXd dir = spherical_transverse_tangent(eq) * es.eigenvectors().col(0);
    for (double s : {1.0, -1.0})
      p.seeded.push_back([dir, s](const PhasePoint& u, double r) {
        return PhasePoint::unpack(u.packed() + s * r * dir.normalized());
      });
  }
  return p;
}

inline PeriodicField constant_field(const PeriodicGrid& g, double alpha) {
  return PeriodicField::sample(g, [&](double) { return cplx(alpha, 0.0); });
}

/// Probe for the plane wave U = α (k = 0): isotropic complex Gaussian displacements of the grid
/// values scaled to H¹ norm r, radial rescale onto Σ_α, H¹ distance to the gauge orbit. In the
/// unstable regime the first-mode amplitude direction cos(k₁x) is added as a seeded direction.
inline CoercivityProbe<PeriodicField> planewave_probe(const torus::TorusNlsModel& m, double alpha, double eta,
                                                      long samples, std::uint64_t seed) {
  CoercivityProbe<PeriodicField> p;
  const PeriodicField A = constant_field(m.grid, alpha);
  p.equilibrium = A;
  p.eta = eta;
  p.samples = samples;
  p.seed = seed;
  p.lyapunov = [m, alpha](const PeriodicField& U) { return torus::lyapunov(m, alpha, U); };
  p.project = [alpha](const PeriodicField& U) { return torus::project_to_sigma(U, alpha); };
  p.distance = [A](const PeriodicField& U) { return torus::gauge_distance(U, A).distance; };
  p.displace = [](const PeriodicField& U, double r, Rng& rng) {
    PeriodicField d = U;
    for (auto& z : d.values) {
      const double re = gaussian(rng);
      z = cplx(re, gaussian(rng));
    }
    const double n = h1_norm(d);
    return axpy(U, cplx(r / n, 0.0), d);
  };
  if (torus::stability_verdict(m, alpha) == torus::Verdict::unstable) {
    const double k1 = m.grid.k1();
    const PeriodicField c = PeriodicField::sample(m.grid, [&](double x) { return cplx(std::cos(k1 * x), 0.0); });
    const double n = h1_norm(c);
    p.seeded.push_back([c, n](const PeriodicField& U, double r) { return axpy(U, cplx(r / n, 0.0), c); });
  }
  return p;
}

}  // namespace emstab::harness
