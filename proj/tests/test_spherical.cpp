#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "emstab/core/finite_diff.hpp"
#include "emstab/spherical/flow.hpp"
#include "emstab/spherical/mechanics.hpp"
#include "emstab/spherical/potential.hpp"

using namespace emstab;
using namespace emstab::spherical;
constexpr double pi = std::numbers::pi;

namespace {

PhasePoint random_point(std::mt19937& rng, double scale = 1.0) {
  std::normal_distribution<double> n;
  PhasePoint u;
  for (int i = 0; i < 3; ++i) u.q[i] = scale * n(rng), u.p[i] = scale * n(rng);
  return u;
}

Mat3 random_rotation(std::mt19937& rng) {
  std::normal_distribution<double> n;
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  return q.normalized().toRotationMatrix();
}

RadialPotential inverse_cube() { return RadialPotential::power(-1.0, -3.0); }

Eigen::VectorXd packed(const PhasePoint& u) { return u.packed(); }

// Frame-projected finite-difference Hessian of a phase-space function.
Mat3 fd_block(const std::function<double(const PhasePoint&)>& f, const CircularEquilibrium& eq) {
  const Eigen::MatrixXd H =
      finite_diff_hessian([&](const Eigen::VectorXd& x) { return f(PhasePoint::unpack(x)); }, packed(eq.base), 1e-4);
  const auto e = orbit_frame(eq, eq.base);
  Mat3 B;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) B(i, j) = e[i].dot(H * e[j]);
  return B;
}

void expect_rel_close(const Mat3& a, const Mat3& b, double tol) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(a(i, j), b(i, j), tol * std::max(1.0, std::abs(b(i, j)))) << i << "," << j;
}

}  // namespace

TEST(AngularMomentum, Examples) {
  PhasePoint u{Vec3(1, 0, 0), Vec3(0, 1, 0)};
  EXPECT_EQ(angular_momentum(u), Vec3(0, 0, 1));
  PhasePoint v{Vec3(1, 2, 3), Vec3(2, 4, 6)};
  EXPECT_EQ(angular_momentum(v).norm(), 0.0);
}

TEST(AngularMomentum, ConservedAlongFlow) {
  std::mt19937 rng(1);
  const auto V = RadialPotential::kepler();
  PhasePoint u0{Vec3(1.0, 0.2, -0.1), Vec3(0.1, 0.9, 0.3)};
  const Vec3 L0 = angular_momentum(u0);
  const auto tr = integrate_flow(V, u0, 10.0, 1e-3, 100);
  for (const auto& u : tr.u) EXPECT_LT((angular_momentum(u) - L0).norm(), 1e-9);
}

TEST(Potential, EvaluatorsConsistentWithFiniteDifferences) {
  std::vector<double> r, v;
  for (int i = 0; i <= 400; ++i) {
    r.push_back(0.5 + 0.01 * i);
    v.push_back(-1.0 / r.back());
  }
  for (const auto& V : {RadialPotential::kepler(), RadialPotential::harmonic(), RadialPotential::power(2.0, 1.5),
                        inverse_cube(), RadialPotential::table(r, v)}) {
    for (double x : {0.8, 1.0, 1.7, 3.2}) {
      const double h = 1e-6;
      EXPECT_NEAR(V.dV(x), (V.V(x + h) - V.V(x - h)) / (2 * h), 1e-6 * std::max(1.0, std::abs(V.dV(x)))) << V.name();
      EXPECT_NEAR(V.d2V(x), (V.dV(x + h) - V.dV(x - h)) / (2 * h), 1e-6 * std::max(1.0, std::abs(V.d2V(x))))
          << V.name();
    }
  }
  const auto T = RadialPotential::table(r, v);
  EXPECT_NEAR(T.V(1.234), -1.0 / 1.234, 1e-6);
  EXPECT_THROW(T.V(10.0), InvalidArgument);
  EXPECT_THROW(RadialPotential::table({1.0, 0.5, 2.0, 3.0}, {1, 2, 3, 4}), InvalidArgument);
}

TEST(CircularEquilibrium, Examples) {
  EXPECT_NEAR(circular_equilibrium(RadialPotential::kepler(), 1.0, Vec3::UnitZ()).sigma, 1.0, 1e-15);
  EXPECT_NEAR(circular_equilibrium(RadialPotential::harmonic(), 2.0, Vec3::UnitZ()).sigma, 2.0, 1e-15);
  EXPECT_THROW(circular_equilibrium(RadialPotential::power(-1.0, 2.0), 1.0, Vec3::UnitZ()), InvalidArgument);
}

TEST(CircularEquilibrium, InvariantsForArbitraryAxes) {
  std::mt19937 rng(2);
  std::normal_distribution<double> n;
  for (int t = 0; t < 10; ++t) {
    const Vec3 axis(n(rng), n(rng), n(rng));
    const auto eq = circular_equilibrium(RadialPotential::harmonic(), 1.5, axis);
    EXPECT_NEAR(eq.base.q.norm(), 1.5, 1e-14);
    EXPECT_NEAR(eq.base.p.norm(), eq.sigma, 1e-14);
    EXPECT_NEAR(eq.base.q.dot(eq.base.p), 0.0, 1e-14);
    EXPECT_LT((angular_momentum(eq.base) - eq.mu()).norm(), 1e-13);
    EXPECT_NEAR(eq.axis.dot(axis.normalized()), 1.0, 1e-14);
  }
}

TEST(CircularEquilibrium, RejectsVanishingAngularMomentum) {
  EXPECT_THROW(circular_equilibrium(RadialPotential::harmonic(), 1e-5, Vec3::UnitZ()), InvalidArgument);
}

TEST(Verdict, Examples) {
  EXPECT_EQ(circular_stability_verdict(RadialPotential::kepler(), 1.0), Verdict::stable);
  EXPECT_NEAR(circular_stability_margin(RadialPotential::kepler(), 1.0), 1.0, 1e-15);
  EXPECT_EQ(circular_stability_verdict(inverse_cube(), 1.0), Verdict::unstable);
  EXPECT_NEAR(circular_stability_margin(inverse_cube(), 1.0), -3.0, 1e-14);
  for (double rho : {0.1, 1.0, 7.0}) EXPECT_EQ(circular_stability_verdict(RadialPotential::harmonic(), rho), Verdict::stable);
  // V = −r⁻² sits exactly on the boundary V''ρ² + 3σ² = 0.
  EXPECT_EQ(circular_stability_verdict(RadialPotential::power(-1.0, -2.0), 1.3), Verdict::marginal);
}

TEST(HessianBlocks, KeplerValues) {
  const auto V = RadialPotential::kepler();
  const auto eq = circular_equilibrium(V, 1.0, Vec3::UnitZ());
  const auto b = hessian_blocks(V, eq, eq.base);
  // (1,1) includes the momentum part σ⁴/ρ² of e1 (=1 here), so D²H = diag(2, −1, 2).
  Mat3 expected;
  expected << 2, 0, 0, 0, -1, 0, 0, 0, 2;
  expect_rel_close(b.d2H, expected, 1e-15);
}

TEST(HessianBlocks, MatchFiniteDifferences) {
  std::vector<std::pair<RadialPotential, double>> cases = {{RadialPotential::kepler(), 1.0},
                                                           {RadialPotential::kepler(), 2.5},
                                                           {RadialPotential::harmonic(), 1.0},
                                                           {RadialPotential::harmonic(), 0.7},
                                                           {inverse_cube(), 1.0},
                                                           {RadialPotential::power(0.5, 3.0), 1.2}};
  for (const auto& [V, rho] : cases) {
    const auto eq = circular_equilibrium(V, rho, Vec3(1, 2, 2));
    const auto b = hessian_blocks(V, eq, eq.base);
    expect_rel_close(fd_block([&](const PhasePoint& u) { return hamiltonian(V, u); }, eq), b.d2H, 1e-6);
    expect_rel_close(fd_block([&](const PhasePoint& u) { return eq.mu().dot(angular_momentum(u)); }, eq), b.d2muL, 1e-6);
  }
}

TEST(HessianBlocks, LyapunovRestriction) {
  for (const auto& [V, rho] : {std::pair{RadialPotential::kepler(), 1.0}, std::pair{RadialPotential::harmonic(), 2.0},
                               std::pair{inverse_cube(), 1.0}}) {
    const auto eq = circular_equilibrium(V, rho, Vec3::UnitZ());
    const Mat3 D = hessian_blocks(V, eq, eq.base).d2lyapunov(rho);
    const double r = eq.rho, s = eq.sigma;
    EXPECT_NEAR(D(1, 1), V.d2V(r) * r * r + 3.0 * s * s, 1e-12);
    EXPECT_NEAR(D(2, 2), std::pow(s * s / r + r, 2), 1e-12);
    EXPECT_NEAR(D(1, 2), 0.0, 1e-12);
    // the orbit tangent e1 is a null direction
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(D(0, j), 0.0, 1e-12);
    const Eigen::Matrix2d sub = D.bottomRightCorner<2, 2>();
    const bool positive = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(sub).eigenvalues().minCoeff() > 0.0;
    EXPECT_EQ(positive, circular_stability_verdict(V, rho) == Verdict::stable);
  }
}

TEST(HessianBlocks, RejectsPointOffOrbit) {
  const auto V = RadialPotential::kepler();
  const auto eq = circular_equilibrium(V, 1.0, Vec3::UnitZ());
  PhasePoint off = eq.base;
  off.q *= 1.001;
  EXPECT_THROW(hessian_blocks(V, eq, off), InvalidArgument);
  EXPECT_NO_THROW(hessian_blocks(V, eq, rotate_about(eq.axis, 0.7, eq.base)));
}

TEST(AugmentedLyapunov, Properties) {
  const auto V = RadialPotential::kepler();
  const auto eq = circular_equilibrium(V, 1.0, Vec3(0, 1, 1));
  const double l0 = augmented_lyapunov(V, eq, 2.0, eq.base);
  for (double th : {0.3, 1.9, 4.0}) EXPECT_NEAR(augmented_lyapunov(V, eq, 2.0, rotate_about(eq.axis, th, eq.base)), l0, 1e-14);
  std::mt19937 rng(3);
  const PhasePoint u = random_point(rng);
  EXPECT_EQ(augmented_lyapunov(V, eq, 0.0, u), lyapunov(V, eq, u));
  EXPECT_THROW(augmented_lyapunov(V, eq, -1.0, u), InvalidArgument);
  for (double K : {0.0, 5.0}) {
    const auto g = finite_diff_gradient(
        [&](const Eigen::VectorXd& x) { return augmented_lyapunov(V, eq, K, PhasePoint::unpack(x)); }, packed(eq.base),
        1e-5);
    EXPECT_LT(g.norm(), 1e-8);
  }
}

TEST(AugmentedLyapunov, AnalyticHessianMatchesFiniteDifferences) {
  std::mt19937 rng(4);
  const auto V = RadialPotential::kepler();
  const auto eq = circular_equilibrium(V, 1.3, Vec3::UnitX());
  for (double K : {0.0, 3.0}) {
    for (const PhasePoint& u : {eq.base, random_point(rng)}) {
      const Eigen::MatrixXd fd = finite_diff_hessian(
          [&](const Eigen::VectorXd& x) { return augmented_lyapunov(V, eq, K, PhasePoint::unpack(x)); }, packed(u), 1e-4);
      EXPECT_LT((fd - augmented_lyapunov_hessian(V, eq, K, u)).norm(), 1e-5 * std::max(1.0, fd.norm()));
    }
  }
}

TEST(MinEigRestricted, Examples) {
  const auto K = RadialPotential::kepler();
  const auto eq = circular_equilibrium(K, 1.0, Vec3::UnitZ());
  EXPECT_GT(min_eig_restricted(K, eq, 10.0), 0.0);
  EXPECT_LE(min_eig_restricted(K, eq, 0.0), 0.0);
  const auto U = inverse_cube();
  const auto equ = circular_equilibrium(U, 1.0, Vec3::UnitZ());
  for (double k : {0.0, 1.0, 10.0, 100.0}) EXPECT_LT(min_eig_restricted(U, equ, k), 0.0);
}

TEST(MinEigRestricted, AgainstProjectedFiniteDifferenceHessian) {
  const auto V = RadialPotential::kepler();
  const auto eq = circular_equilibrium(V, 1.0, Vec3::UnitZ());
  const double K = 10.0;
  const Eigen::MatrixXd fd = finite_diff_hessian(
      [&](const Eigen::VectorXd& x) { return augmented_lyapunov(V, eq, K, PhasePoint::unpack(x)); }, packed(eq.base), 1e-4);
  // independent orthonormalization of e2..e6 via QR
  const auto e = orbit_frame(eq, eq.base);
  Eigen::Matrix<double, 6, 5> E;
  for (int c = 0; c < 5; ++c) E.col(c) = e[c + 1];
  const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(E).householderQ() * Eigen::MatrixXd::Identity(6, 5);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q.transpose() * fd * Q);
  EXPECT_NEAR(min_eig_restricted(V, eq, K), es.eigenvalues().minCoeff(), 1e-6);
}

TEST(Flow, KeplerCircularOrbit) {
  const auto V = RadialPotential::kepler();
  const auto eq = circular_equilibrium(V, 1.0, Vec3::UnitZ());
  const double H0 = hamiltonian(V, eq.base);
  const Vec3 L0 = angular_momentum(eq.base);
  double rerr = 0.0, herr = 0.0, lerr = 0.0;
  integrate_flow(V, eq.base, 100.0, 1e-3, 10, [&](long, double, const PhasePoint& u) {
    rerr = std::max(rerr, std::abs(u.q.norm() - 1.0));
    herr = std::max(herr, std::abs(hamiltonian(V, u) - H0));
    lerr = std::max(lerr, (angular_momentum(u) - L0).norm());
  });
  EXPECT_LE(rerr, 1e-6);
  EXPECT_LE(herr, 1e-8);
  EXPECT_LE(lerr, 1e-12);
}

TEST(Flow, EnergyErrorIsSecondOrder) {
  const auto V = RadialPotential::kepler();
  const PhasePoint u0{Vec3(1, 0, 0), Vec3(0, 1.2, 0.1)};
  auto drift = [&](double dt) {
    const double H0 = hamiltonian(V, u0);
    double m = 0.0;
    integrate_flow(V, u0, 10.0, dt, 1, [&](long, double, const PhasePoint& u) { m = std::max(m, std::abs(hamiltonian(V, u) - H0)); });
    return m;
  };
  const double ratio = drift(2e-3) / drift(1e-3);
  EXPECT_GT(ratio, 3.5);
  EXPECT_LT(ratio, 4.5);
}

TEST(Flow, CloseApproachAborts) {
  const PhasePoint u0{Vec3(1e-9, 0, 0), Vec3(0, 0, 0)};
  try {
    integrate_flow(RadialPotential::kepler(), u0, 1.0, 1e-3);
    FAIL() << "expected abort";
  } catch (const EvolutionAbort& e) {
    EXPECT_EQ(e.step, 0);
    EXPECT_EQ(e.t, 0.0);
  }
  EXPECT_THROW(integrate_flow(RadialPotential::kepler(), u0, 1.0, 0.0), InvalidArgument);
}

TEST(Flow, FixedPointOfRadialWellIsStable) {
  const auto V = RadialPotential::custom([](double r) { return 0.5 * (r - 1) * (r - 1); }, [](double r) { return r - 1; },
                                         [](double) { return 1.0; });
  std::mt19937 rng(5);
  const double delta = 1e-3;
  for (int t = 0; t < 5; ++t) {
    PhasePoint u0 = random_point(rng);
    Eigen::VectorXd d = u0.packed();
    d *= delta / d.norm();
    PhasePoint start = PhasePoint::unpack(PhasePoint{Vec3(1, 0, 0), Vec3::Zero()}.packed() + d);
    double m = 0.0;
    integrate_flow(V, start, 50.0, 1e-3, 10, [&](long, double, const PhasePoint& u) {
      m = std::max(m, std::hypot(u.q.norm() - 1.0, u.p.norm()));
    });
    EXPECT_LE(m, 10.0 * delta);
  }
}

TEST(OrbitDistance, Membership) {
  const auto eq = circular_equilibrium(RadialPotential::kepler(), 1.0, Vec3(1, 1, 0));
  EXPECT_NEAR(distance_to_so2_orbit(eq.base, eq), 0.0, 1e-15);
  EXPECT_LT(distance_to_so2_orbit(rotate_about(eq.axis, pi / 3.0, eq.base), eq), 1e-12);
}

TEST(OrbitDistance, MatchesGridSearch) {
  std::mt19937 rng(6);
  const auto eq = circular_equilibrium(RadialPotential::harmonic(), 1.4, Vec3(0.3, -0.2, 1.0));
  for (int t = 0; t < 5; ++t) {
    const PhasePoint u = random_point(rng);
    double best = INFINITY;
    const int M = 100000;
    for (int i = 0; i < M; ++i) {
      const PhasePoint r = rotate_about(eq.axis, 2.0 * pi * i / M, eq.base);
      best = std::min(best, std::sqrt((u.q - r.q).squaredNorm() + (u.p - r.p).squaredNorm()));
    }
    EXPECT_NEAR(distance_to_so2_orbit(u, eq), best, 1e-8);
  }
}

TEST(PoissonBracket, AngularMomentumAlgebra) {
  std::mt19937 rng(7);
  const auto V = RadialPotential::kepler();
  const Vec3 mu(0.3, -1.0, 2.0);
  auto Lc = [](int i) { return [i](const PhasePoint& u) { return angular_momentum(u)[i]; }; };
  for (int t = 0; t < 5; ++t) {
    PhasePoint u = random_point(rng);
    u.q *= 2.0 / u.q.norm();
    EXPECT_NEAR(poisson_bracket_fd(Lc(0), Lc(1), u), angular_momentum(u)[2], 1e-6);
    EXPECT_NEAR(poisson_bracket_fd([&](const PhasePoint& v) { return hamiltonian(V, v); },
                                   [&](const PhasePoint& v) { return mu.dot(angular_momentum(v)); }, u),
                0.0, 1e-6);
    EXPECT_NEAR(poisson_bracket_fd(Lc(2), Lc(2), u), 0.0, 1e-12);
  }
}

TEST(Symmetry, AdjointActionOnHatMatrices) {
  std::mt19937 rng(8);
  std::normal_distribution<double> n;
  for (int t = 0; t < 20; ++t) {
    const Mat3 R = random_rotation(rng);
    const Vec3 xi(n(rng), n(rng), n(rng));
    EXPECT_LT((R * hat(xi) * R.transpose() - hat(R * xi)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Symmetry, DistanceBetweenOrbitsIsConstant) {
  std::mt19937 rng(9);
  const PhasePoint a = random_point(rng), b = random_point(rng);
  const double d0 = distance_to_so3_orbit(a, b);
  for (int t = 0; t < 10; ++t) {
    const Mat3 R = random_rotation(rng);
    const PhasePoint Ra{R * a.q, R * a.p};
    EXPECT_NEAR(distance_to_so3_orbit(Ra, b), d0, 1e-10);
  }
  EXPECT_LE(d0, std::sqrt((a.q - b.q).squaredNorm() + (a.p - b.p).squaredNorm()) + 1e-12);
}
