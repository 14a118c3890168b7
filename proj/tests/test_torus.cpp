#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "emstab/torus/evolve.hpp"
#include "emstab/torus/model.hpp"
#include "emstab/torus/orbit.hpp"
#include "emstab/torus/soliton.hpp"

using namespace emstab;
using namespace emstab::torus;
constexpr double pi = std::numbers::pi;

namespace {

TorusNlsModel model(double lambda, int N = 64, double L = 2 * pi, double beta = 1.0) {
  return TorusNlsModel(beta, lambda, PeriodicGrid(N, L));
}

PeriodicField constant(const PeriodicGrid& g, cplx a) {
  return PeriodicField::sample(g, [&](double) { return a; });
}

// Random trigonometric polynomial with |mode| ≤ nmax.
PeriodicField random_smooth(const PeriodicGrid& g, std::mt19937& rng, int nmax, double scale = 1.0) {
  std::normal_distribution<double> n;
  std::vector<cplx> c(2 * nmax + 1);
  for (auto& z : c) z = cplx(n(rng), n(rng)) * scale / (1.0 + nmax);
  return PeriodicField::sample(g, [&](double x) {
    cplx s(0.0, 0.0);
    for (int m = -nmax; m <= nmax; ++m) s += c[m + nmax] * std::polar(1.0, m * g.k1() * x);
    return s;
  });
}

double sup_diff(const PeriodicField& a, const PeriodicField& b) { return sup_norm(a - b); }

}  // namespace

TEST(PlaneWave, DispersionRelation) {
  const auto m = model(-1.0);
  EXPECT_DOUBLE_EQ(plane_wave_spec(m, 1.0, 0.0).xi, -1.0);
  EXPECT_DOUBLE_EQ(plane_wave_spec(m, 1.0, 2.0).xi, -5.0);
  EXPECT_THROW(plane_wave_spec(m, 1.0, 0.5), InvalidArgument);
}

TEST(PlaneWave, ConservedQuantities) {
  const auto m = model(-1.0);
  const auto c = conserved(m, plane_wave(m, 1.0, 1.0, 0.0));
  EXPECT_NEAR(c.F2, -pi, 1e-12);
  EXPECT_NEAR(c.F1, -pi, 1e-12);
  EXPECT_NEAR(c.H, 1.5 * pi, 1e-12);
}

TEST(Conserved, ZeroAndRealFields) {
  const auto m = model(1.0);
  const auto z = conserved(m, PeriodicField(m.grid));
  EXPECT_EQ(z.H, 0.0);
  EXPECT_EQ(z.F1, 0.0);
  EXPECT_EQ(z.F2, 0.0);
  const auto r = PeriodicField::sample(m.grid, [](double x) { return cplx(std::cos(x) + 0.3 * std::sin(3 * x), 0.0); });
  EXPECT_NEAR(momentum(r), 0.0, 1e-13);
}

TEST(Conserved, EnergyMatchesQuadrature) {
  const auto m = model(0.7);
  const auto u = PeriodicField::sample(m.grid, [](double x) { return cplx(std::cos(x), 0.5 * std::sin(2 * x)); });
  // ∫|u'|² = π(1 + 1), ∫|u|⁴ by direct trapezoid sum of the sampled integrand.
  double q = 0.0;
  for (int j = 0; j < m.grid.N(); ++j) q += std::pow(std::norm(u[j]), 2);
  q *= m.grid.h();
  EXPECT_NEAR(energy(m, u), 0.5 * (2 * pi - 0.35 * q), 1e-12);
}

TEST(Verdict, Examples) {
  EXPECT_EQ(stability_verdict(model(-1.0), 1.0), Verdict::stable);
  EXPECT_NEAR(stability_margin(model(-1.0), 1.0), 3.0, 1e-14);
  EXPECT_EQ(stability_verdict(model(1.0), 0.6), Verdict::stable);
  EXPECT_NEAR(stability_margin(model(1.0), 0.6), 0.28, 1e-14);
  EXPECT_EQ(stability_verdict(model(1.0), 1.2), Verdict::unstable);
  EXPECT_NEAR(stability_margin(model(1.0), 1.2), -1.88, 1e-14);
  EXPECT_EQ(stability_verdict(model(1.0), std::sqrt(0.5)), Verdict::marginal);
  EXPECT_THROW(stability_verdict(model(1.0), 0.0), InvalidArgument);
}

TEST(Coercivity, Examples) {
  EXPECT_NEAR(coercivity_constant(model(-1.0), 1.0), 0.5, 1e-12);
  EXPECT_NEAR(coercivity_constant(model(1.0), 0.6), 0.14, 1e-12);
  EXPECT_LT(coercivity_constant(model(-1e-9), 1.0), 1e-8);
  EXPECT_THROW(coercivity_constant(model(1.0), 1.2), InvalidArgument);
}

TEST(Coercivity, MatchesConstrainedHessianMinimum) {
  // Independent oracle: smallest Rayleigh quotient ⟨Av,v⟩/‖v‖²_{H¹} over the Fourier blocks of the
  // assembled operator. Modes n ≥ 1 always count; in the defocusing case the real n = 0 mode does too.
  for (auto [lambda, alpha] : {std::pair{-1.0, 1.0}, std::pair{1.0, 0.6}, std::pair{-0.3, 0.5}}) {
    const auto m = model(lambda, 32);
    const Eigen::MatrixXd A = assemble_hessian(m, constant(m.grid, alpha), lambda * alpha * alpha);
    const int N = m.grid.N();
    double best = INFINITY;
    for (int n = lambda < 0.0 ? 0 : 1; n < N / 2; ++n)
      for (int part = 0; part < (n == 0 ? 1 : 2); ++part) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(2 * N);
        for (int j = 0; j < N; ++j) v[part * N + j] = std::cos(n * m.grid.x(j));
        const double k2 = std::pow(n * m.grid.k1(), 2);
        best = std::min(best, v.dot(A * v) / (v.squaredNorm() * (1.0 + k2)));
      }
    EXPECT_NEAR(coercivity_constant(m, alpha), best, 1e-10) << lambda << " " << alpha;
  }
}

TEST(ModeSpectrum, Examples) {
  const auto s = hessian_mode_spectrum(model(-1.0), 1.0, 4);
  EXPECT_NEAR(s.modes[0].hess_v1, 2.0, 1e-14);  // −2λα²
  EXPECT_NEAR(s.modes[0].hess_v2, 0.0, 1e-14);
  EXPECT_NEAR(s.modes[1].hess_v1, 3.0, 1e-14);
  EXPECT_NEAR(s.modes[1].hess_v2, 1.0, 1e-14);
  EXPECT_LE(s.assembly_deviation, 1e-8);
  const auto f = hessian_mode_spectrum(model(1.0, 48), 1.2, 4);
  EXPECT_LE(f.assembly_deviation, 1e-8);
  EXPECT_TRUE(f.has_negative_constrained_entry());
  EXPECT_FALSE(s.has_negative_constrained_entry());
}

TEST(GrowthRates, Examples) {
  const auto u = linearization_growth_rates(model(1.0), 1.2, 6);
  EXPECT_NEAR(u.modes[1].lin_plus.real(), std::sqrt(1.88), 1e-12);
  EXPECT_NEAR(u.max_growth_rate(), std::sqrt(1.88), 1e-12);
  EXPECT_NEAR(u.modes[2].lin_plus.real(), 0.0, 0.0);  // Ω₂ = 4 > 2.88

  const auto edge = linearization_growth_rates(model(1.0), std::sqrt(0.5), 3);
  EXPECT_NEAR(std::abs(edge.modes[1].lin_plus), 0.0, 1e-7);  // √ of a rounding-level discriminant

  for (auto [lambda, alpha] : {std::pair{-1.0, 1.0}, std::pair{1.0, 0.6}})
    for (const auto& e : linearization_growth_rates(model(lambda), alpha, 8).modes) EXPECT_EQ(e.lin_plus.real(), 0.0);
}

TEST(GrowthRates, AssembledLinearizationAgrees) {
  const auto c = validate_growth_rates(model(1.0, 48), 1.2);
  EXPECT_NEAR(c.closed_form_rate, std::sqrt(1.88), 1e-12);
  EXPECT_LE(c.deviation, 1e-8);
  const auto s = validate_growth_rates(model(-1.0, 32), 1.0);
  EXPECT_LE(s.assembled_rate, 1e-6);  // the n = 0 Jordan block perturbs at √ε
}

TEST(GrowthRates, TwoByTwoBlockOracle) {
  // Direct eigenvalues of the per-mode block [[0, Ω], [−(Ω − 2λα²), 0]].
  const auto m = model(1.0);
  const double alpha = 1.2, g = 2.0 * alpha * alpha;
  const auto s = linearization_growth_rates(m, alpha, 5);
  for (int n = 1; n <= 5; ++n) {
    Eigen::Matrix2d B;
    const double om = n * n;
    B << 0.0, om, -(om - g), 0.0;
    Eigen::EigenSolver<Eigen::Matrix2d> es(B);
    const double r = std::max(es.eigenvalues()[0].real(), es.eigenvalues()[1].real());
    EXPECT_NEAR(s.modes[n].lin_plus.real(), r, 1e-12) << n;
  }
}

TEST(Verdict, ConsistentWithSpectrum) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> lam(-2.0, 2.0), amp(0.1, 1.5);
  for (int i = 0; i < 200; ++i) {
    const auto m = model(lam(rng), 32);
    const double a = amp(rng);
    const auto v = stability_verdict(m, a);
    if (v == Verdict::marginal) continue;
    const auto s = mode_spectrum_closed_form(m, a, 16);
    EXPECT_EQ(v == Verdict::unstable, s.has_negative_constrained_entry());
    EXPECT_EQ(v == Verdict::unstable, s.max_growth_rate() > 0.0);
  }
}

TEST(Hessian, FiniteDifferenceConsistency) {
  std::mt19937 rng(5);
  const auto m = model(1.3, 64);
  const double alpha = 0.8, c = m.lambda * alpha * alpha;
  const PeriodicField U = random_smooth(m.grid, rng, 4);
  const Eigen::MatrixXd A = assemble_hessian(m, U, c);
  const int N = m.grid.N();
  const double eps = 1e-4;
  for (int trial = 0; trial < 50; ++trial) {
    const PeriodicField V = random_smooth(m.grid, rng, 6);
    Eigen::VectorXd v(2 * N);
    for (int j = 0; j < N; ++j) v[j] = V[j].real(), v[N + j] = V[j].imag();
    const double exact = m.grid.h() * v.dot(A * v);
    const double fd = (lyapunov(m, alpha, axpy(U, eps, V)) - 2.0 * lyapunov(m, alpha, U) +
                       lyapunov(m, alpha, axpy(U, -eps, V))) /
                      (eps * eps);
    EXPECT_NEAR(fd, exact, 1e-6 * std::max(1.0, std::abs(exact))) << trial;
  }
}

TEST(SplitStep, LinearExact) {
  const auto m = model(0.0, 64);
  const PeriodicField u0 = plane_wave(m, 0.7, 3.0, 0.0);
  const auto u = evolve_to(m, u0, 1.0, 1e-2);
  const auto exact = PeriodicField::sample(m.grid, [](double x) { return 0.7 * std::polar(1.0, -9.0 - 3.0 * x); });
  EXPECT_LE(sup_diff(u, exact), 1e-10);
}

TEST(SplitStep, PlaneWaveRemainsPlaneWave) {
  for (double lambda : {-1.0, 1.0}) {
    const auto m = model(lambda, 64);
    const auto u = evolve_to(m, plane_wave(m, 0.9, 2.0, 0.0), 1.0, 1e-3);
    EXPECT_LE(sup_diff(u, plane_wave(m, 0.9, 2.0, 1.0)) / 0.9, 1e-8);
  }
}

TEST(SplitStep, ConservationOverT10) {
  std::mt19937 rng(3);
  const auto m = model(-1.0, 256);
  PeriodicField u0 = constant(m.grid, 1.0) + random_smooth(m.grid, rng, 3, 0.05);
  const auto c0 = conserved(m, u0);
  double dH = 0, dF1 = 0, dF2 = 0;
  EvolveOptions opt;
  opt.stride = 100;
  split_step_evolve(m, u0, 10.0, 1e-3, opt, [&](long, double, const PeriodicField& u) {
    const auto c = conserved(m, u);
    dH = std::max(dH, std::abs(c.H - c0.H) / std::abs(c0.H));
    dF1 = std::max(dF1, std::abs(c.F1 - c0.F1) / std::max(std::abs(c0.F1), 1e-300));
    dF2 = std::max(dF2, std::abs(c.F2 - c0.F2));
  });
  EXPECT_LE(dH, 1e-6);
  EXPECT_LE(dF1, 1e-6);
  EXPECT_LE(dF2, 1e-10);
}

TEST(SplitStep, RejectsBadSteps) {
  const auto m = model(1.0);
  const auto u = constant(m.grid, 1.0);
  EXPECT_THROW(evolve_to(m, u, 1.0, -1.0), InvalidArgument);
  EXPECT_THROW(evolve_to(m, u, 1.0, 0.1), InvalidArgument);
  EXPECT_THROW(evolve_to(m, PeriodicField(PeriodicGrid(32, 2 * pi)), 1.0, 1e-3), InvalidArgument);
}

TEST(SplitStep, BlowUpGuardAborts) {
  const auto m = model(1.0, 64);
  EvolveOptions opt;
  opt.blowup_bound = 2.0;
  const auto u = constant(m.grid, 3.0);
  try {
    split_step_evolve(m, u, 1.0, 1e-3, opt, [](long, double, const PeriodicField&) {});
    FAIL() << "expected abort";
  } catch (const EvolutionAbort& e) {
    EXPECT_EQ(e.step, 1);
  }
}

TEST(Orbit, IdentityAndGauge) {
  std::mt19937 rng(2);
  const PeriodicGrid g(64, 2 * pi);
  const auto w = random_smooth(g, rng, 5);
  EXPECT_NEAR(gauge_distance(w, w).distance, 0.0, 1e-12);
  EXPECT_NEAR(gauge_distance(gauge(w, pi / 7), w).distance, 0.0, 1e-12);
  EXPECT_NEAR(orbit_distance(translate_gauge(w, 0.37, 1.1), w, OrbitMode::gauge_translation).distance, 0.0, 1e-11);
}

TEST(Orbit, AgainstBruteForce) {
  std::mt19937 rng(9);
  const PeriodicGrid g(32, 2 * pi);
  const auto w = random_smooth(g, rng, 4);
  const auto u = random_smooth(g, rng, 4);
  const auto fast = orbit_distance(u, w, OrbitMode::gauge_translation);
  // Brute force on 360 phases × N grid shifts, then a local refinement of the best cell.
  auto dist = [&](double a, double gm) { return h1_norm(u - translate_gauge(w, a, gm)); };
  double best = INFINITY, ba = 0, bg = 0;
  for (int s = 0; s < g.N(); ++s)
    for (int p = 0; p < 360; ++p) {
      const double d = dist(s * g.h(), p * pi / 180.0);
      if (d < best) best = d, ba = s * g.h(), bg = p * pi / 180.0;
    }
  EXPECT_LE(fast.distance, best + 1e-12);
  // nested golden-section refinement around the best cell
  auto golden = [](auto&& f, double lo, double hi) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 80; ++it) {
      const double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
      if (f(x1) < f(x2)) hi = x2; else lo = x1;
    }
    return 0.5 * (lo + hi);
  };
  auto over_gamma = [&](double a) {
    return dist(a, golden([&](double gm) { return dist(a, gm); }, bg - pi / 2, bg + pi / 2));
  };
  const double a_star = golden(over_gamma, ba - g.h(), ba + g.h());
  EXPECT_NEAR(fast.distance, over_gamma(a_star), 1e-6);
}

TEST(Orbit, GaugeInvariance) {
  std::mt19937 rng(4);
  const auto m = model(0.8, 64);
  const auto u = random_smooth(m.grid, rng, 5), w = random_smooth(m.grid, rng, 5);
  const auto a = conserved(m, u), b = conserved(m, gauge(u, 2.3));
  EXPECT_NEAR(a.H, b.H, 1e-12);
  EXPECT_NEAR(a.F1, b.F1, 1e-12);
  EXPECT_NEAR(a.F2, b.F2, 1e-12);
  EXPECT_NEAR(orbit_distance(u, w, OrbitMode::gauge_only).distance,
              orbit_distance(gauge(u, 2.3), w, OrbitMode::gauge_only).distance, 1e-12);
  EXPECT_NEAR(orbit_distance(u, w, OrbitMode::gauge_translation).distance,
              orbit_distance(gauge(u, -0.4), w, OrbitMode::gauge_translation).distance, 1e-12);
}

TEST(Orbit, PlaneWaveDistanceUsesCarrierFreeFrame) {
  const auto m = model(1.0, 64);
  const auto pw = plane_wave(m, 0.6, 2.0, 0.0);
  EXPECT_NEAR(planewave_distance(gauge(pw, 1.0), 0.6, 2.0).distance, 0.0, 1e-12);
  const auto bump = PeriodicField::sample(m.grid, [](double x) { return cplx(1e-3 * std::cos(x), 0.0); });
  EXPECT_NEAR(planewave_distance(pw + remove_carrier(bump, -2.0), 0.6, 2.0).distance, h1_norm(bump), 1e-12);
}

TEST(Modulation, Examples) {
  const PeriodicGrid g(64, 2 * pi);
  const double alpha = 0.8;
  const auto a = modulation_decompose(constant(g, alpha), alpha, 1.0);
  EXPECT_NEAR(a.gamma, 0.0, 1e-14);
  EXPECT_LE(h1_norm(a.V), 1e-13);

  const auto b = modulation_decompose(constant(g, alpha * std::polar(1.0, -0.9)), alpha, 1.0);
  EXPECT_NEAR(std::remainder(b.gamma - 0.9, 2 * pi), 0.0, 1e-13);
  EXPECT_LE(h1_norm(b.V), 1e-13);

  // φ with ⟨i, φ⟩ = Im∫φ = 0: real part has nonzero mean, imaginary part zero mean.
  const auto phi = PeriodicField::sample(g, [](double x) { return cplx(0.3 + std::cos(x), std::sin(2 * x)); });
  const double eps = 1e-3;
  const auto c = modulation_decompose(constant(g, alpha) + cplx(eps) * phi, alpha, 1.0);
  EXPECT_LE(std::abs(c.gamma), eps * eps);
  EXPECT_LE(h1_norm(c.V - cplx(eps) * phi), 1e-12);
  EXPECT_NEAR(c.orthogonality, 0.0, 1e-13);

  // Newton oracle on g(γ) = Im(e^{iγ}∫W) for a generic W.
  std::mt19937 rng(8);
  const auto W = constant(g, alpha) + random_smooth(g, rng, 3, 0.05);
  const cplx S = integrate(g, W.values);
  double gm = 0.0;
  for (int it = 0; it < 30; ++it) {
    const cplx e = std::polar(1.0, gm) * S;
    gm -= e.imag() / e.real();
  }
  EXPECT_NEAR(modulation_decompose(W, alpha, 1.0).gamma, gm, 1e-12);

  const auto far = PeriodicField::sample(g, [&](double x) { return cplx(alpha * (1.0 + 0.5 * std::cos(x)), 0.0); });
  EXPECT_THROW(modulation_decompose(far, alpha, 0.1), ConvergenceError);
}

TEST(CoercivityGap, StableRegimes) {
  std::mt19937 rng(21);
  for (auto [lambda, alpha, frac] : {std::tuple{-1.0, 1.0, 0.25}, std::tuple{1.0, 0.6, 1.0 / 16}}) {
    const auto m = model(lambda, 64);
    const double c = coercivity_constant(m, alpha), target = alpha * alpha * m.grid.L();
    double worst = INFINITY;
    for (int i = 0; i < 1000; ++i) {
      PeriodicField W = constant(m.grid, alpha) + random_smooth(m.grid, rng, 8, 1.0);
      // rescale the perturbation to H¹ size 1e−3, then project to the charge level set
      PeriodicField d = W - constant(m.grid, alpha);
      d *= 1e-3 / h1_norm(d);
      W = project_to_sigma(constant(m.grid, alpha) + d, alpha);
      EXPECT_NEAR(l2_norm_sq(W), target, 1e-10 * target);
      worst = std::min(worst, coercivity_gap_check(m, alpha, W));
    }
    EXPECT_GE(worst, frac * c) << lambda;
  }
}

TEST(CoercivityGap, UnstableRegimeNegative) {
  const auto m = model(1.0, 64);
  const double alpha = 1.2;
  const auto W = project_to_sigma(
      PeriodicField::sample(m.grid, [&](double x) { return cplx(alpha + 1e-3 * std::cos(x), 0.0); }), alpha);
  EXPECT_LT(coercivity_gap_check(m, alpha, W), 0.0);
  EXPECT_THROW(coercivity_gap_check(m, alpha, constant(m.grid, alpha)), InvalidArgument);
  EXPECT_THROW(coercivity_gap_check(m, alpha, constant(m.grid, 2 * alpha)), InvalidArgument);
}

TEST(Soliton, ShapeExamples) {
  const PeriodicGrid g(512, 40.0);
  const auto s = bright_soliton(g, 1.0, 0.0, 2.0, 0.0);
  EXPECT_NEAR(s[0].real(), 1.0, 1e-15);
  EXPECT_NEAR(sup_norm(s), 1.0, 1e-15);
  for (int j = 1; j < g.N(); ++j) {
    EXPECT_EQ(s[j].imag(), 0.0);
    EXPECT_NEAR(s[j].real(), s[g.N() - j].real(), 1e-15);
  }
  const auto moving = bright_soliton(g, 1.5, 2.0, 1.0, 1.25);  // centre at x = 2.5 = 32h
  EXPECT_NEAR(std::abs(moving[32]), 1.5 * std::sqrt(2.0), 1e-14);
  EXPECT_THROW(bright_soliton(g, 1.0, 0.0, -1.0, 0.0), InvalidArgument);
  EXPECT_THROW(bright_soliton(PeriodicGrid(64, 10.0), 1.0, 0.0, 1.0, 0.0), InvalidArgument);
}

TEST(Soliton, PropagatesUnderSplitStep) {
  const TorusNlsModel m(1.0, 1.0, PeriodicGrid(2048, 80.0));
  const auto u = evolve_to(m, bright_soliton(m.grid, 1.0, 1.0, 1.0, 0.0), 2.0, 1e-3);
  const auto exact = bright_soliton(m.grid, 1.0, 1.0, 1.0, 2.0);
  EXPECT_LE(orbit_distance(u, exact, OrbitMode::gauge_translation).distance, 1e-5);
}

TEST(Soliton, StationaryResidual) {
  const TorusNlsModel m(1.0, 1.0, PeriodicGrid(1024, 60.0));
  const auto w = PeriodicField::sample(m.grid, [](double x) {
    return cplx(std::sqrt(2.0) / std::cosh(wrap_centered(x, 60.0)), 0.0);
  });
  EXPECT_LE(stationary_residual(m, w, 1.0), 1e-7);

  const auto p = model(-1.0, 64);
  const auto pw = plane_wave(p, 1.0, 1.0, 0.0);
  const double xi = plane_wave_spec(p, 1.0, 1.0).xi;
  EXPECT_NEAR(stationary_residual(p, pw, xi), 0.0, 1e-10);
  EXPECT_NEAR(stationary_residual(p, pw, xi + 0.1), 0.1 * l2_norm(pw), 1e-10);
}

TEST(Boost, TrivialCases) {
  const TorusNlsModel m(1.0, 1.0, PeriodicGrid(512, 16 * pi));
  const auto u = bright_soliton(m.grid, 1.0, 0.0, 1.0, 0.0);
  EXPECT_LE(boost_commutation_residual(m, u, 0.0, 0.5, 1e-3), 1e-13);
  EXPECT_LE(boost_commutation_residual(m, u, 2.0, 0.0, 1e-3), 1e-13);
  EXPECT_THROW(boost(u, 0.1), InvalidArgument);
  EXPECT_THROW(boost_commutation_residual(TorusNlsModel(2.0, 1.0, m.grid), u, 1.0, 0.5, 1e-3), InvalidArgument);
}

TEST(Boost, SolitonResidualSmall) {
  const TorusNlsModel m(1.0, 1.0, PeriodicGrid(512, 16 * pi));
  const auto u = bright_soliton(m.grid, 1.0, 0.0, 1.0, 0.0);
  EXPECT_LE(boost_commutation_residual(m, u, 2.0, 0.5, 1e-4), 1e-6);
}

TEST(Boost, MapsSolitonVelocity) {
  // Ψ̂_{−v} applied to a resting soliton gives the soliton of speed v (L a multiple of 4π/v).
  const PeriodicGrid g(512, 16 * pi);
  const auto moving = boost(bright_soliton(g, 1.0, 0.0, 1.0, 0.0), -1.0);
  EXPECT_LE(sup_diff(moving, bright_soliton(g, 1.0, 1.0, 1.0, 0.0)), 1e-14);
}

TEST(Manakov, ThetaZeroReducesToScalar) {
  const TorusNlsModel m(1.0, 1.0, PeriodicGrid(512, 40.0));
  const auto u0 = manakov_soliton(m.grid, 1.0, 0.5, 0.0, 0.3, 0.0, 1.0, 0.0);
  EXPECT_EQ(sup_norm(u0.u2), 0.0);
  EXPECT_LE(sup_diff(u0.u1, gauge(bright_soliton(m.grid, 1.0, 0.5, 1.0, 0.0), 0.3)), 1e-15);
  const auto v = manakov_evolve_to(m, u0, 1.0, 1e-3);
  EXPECT_LE(sup_diff(v.u1, evolve_to(m, u0.u1, 1.0, 1e-3)), 1e-12);
  EXPECT_EQ(sup_norm(v.u2), 0.0);
}

TEST(Manakov, ComponentNormsConserved) {
  const TorusNlsModel m(1.0, 1.0, PeriodicGrid(512, 40.0));
  const auto u0 = manakov_soliton(m.grid, 1.0, 0.5, 0.6, 0.0, 1.0, 1.0, 0.0);
  const double n1 = l2_norm_sq(u0.u1), n2 = l2_norm_sq(u0.u2);
  double d = 0.0;
  EvolveOptions opt;
  opt.stride = 100;
  manakov_evolve(m, u0, 5.0, 1e-3, opt, [&](long, double, const PeriodicField2& u) {
    d = std::max({d, std::abs(l2_norm_sq(u.u1) - n1), std::abs(l2_norm_sq(u.u2) - n2)});
  });
  EXPECT_LE(d, 1e-10);
}

TEST(Manakov, SolitonPropagates) {
  const TorusNlsModel m(1.0, 1.0, PeriodicGrid(1024, 40.0));
  const auto u0 = manakov_soliton(m.grid, 1.0, 1.0, pi / 4, 0.0, 0.5, 1.0, 0.0);
  const auto u = manakov_evolve_to(m, u0, 2.0, 1e-3);
  const auto exact = manakov_soliton(m.grid, 1.0, 1.0, pi / 4, 0.0, 0.5, 1.0, 2.0);
  EXPECT_LE(u2_translation_distance(u, exact).distance, 1e-4);
  // a U(2) rotation and shift of the exact state lies on the orbit
  Eigen::Matrix2cd S;
  S << std::cos(0.4), -std::sin(0.4) * std::polar(1.0, 0.2), std::sin(0.4), std::cos(0.4) * std::polar(1.0, 0.2);
  PeriodicField2 r{translate(exact.u1, 1.3), translate(exact.u2, 1.3)};
  PeriodicField2 rot{axpy(S(0, 0) * r.u1, S(0, 1), r.u2), axpy(S(1, 0) * r.u1, S(1, 1), r.u2)};
  EXPECT_LE(u2_translation_distance(rot, exact).distance, 1e-10);
}
