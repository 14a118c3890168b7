#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "emstab/cli/config.hpp"
#include "emstab/cli/output.hpp"
#include "emstab/core/finite_diff.hpp"
#include "emstab/harness/experiment.hpp"
#include "emstab/harness/probe.hpp"
#include "emstab/harness/systems.hpp"
#include "emstab/spherical/flow.hpp"
#include "emstab/spherical/mechanics.hpp"
#include "emstab/standing/curve.hpp"
#include "emstab/standing/operators.hpp"
#include "emstab/standing/profile.hpp"
#include "emstab/torus/evolve.hpp"
#include "emstab/torus/model.hpp"
#include "emstab/torus/orbit.hpp"
#include "emstab/torus/soliton.hpp"

namespace emstab::cli {

struct Outcome {
  ResultTable table;
  PlotData plot;
  json summary = json::object();
  bool unstable = false;  // drives exit code 2 under --expect-stable
};

namespace detail {

inline json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(); }

inline spherical::RadialPotential potential(const RunConfig& c) {
  const auto kind = c.str("spherical.potential");
  if (kind == "kepler") return spherical::RadialPotential::kepler();
  if (kind == "harmonic") return spherical::RadialPotential::harmonic();
  if (kind == "power") return spherical::RadialPotential::power(c.num("spherical.s"), c.num("spherical.p"));
  return spherical::RadialPotential::table(c.nums("spherical.table_r"), c.nums("spherical.table_V"));
}

inline spherical::CircularEquilibrium equilibrium(const RunConfig& c, const spherical::RadialPotential& V) {
  const auto a = c.nums("spherical.axis");
  return spherical::circular_equilibrium(V, c.num("spherical.rho"), spherical::Vec3(a[0], a[1], a[2]));
}

inline PeriodicGrid grid(const RunConfig& c, double L) { return make_grid(static_cast<int>(c.integer("numerics.N")), L); }

inline torus::TorusNlsModel planewave_model(const RunConfig& c, double lambda) {
  return torus::TorusNlsModel(c.num("planewave.beta"), lambda, grid(c, c.num("planewave.L")));
}

inline torus::TorusNlsModel soliton_model(const RunConfig& c) {
  return torus::TorusNlsModel(1.0, c.num("soliton.lambda"), grid(c, c.num("soliton.L")));
}

inline harness::TorusSystem perturbation_modes(const RunConfig& c, const torus::TorusNlsModel& m) {
  harness::TorusSystem s;
  s.model = m;
  s.mode_min = static_cast<int>(c.integer("numerics.mode_min"));
  s.mode_max = static_cast<int>(c.integer("numerics.mode_max"));
  return s;
}

/// Seeded perturbation of size δ, drawn in the frame without the carrier e^{−ikx}.
inline PeriodicField perturb(const RunConfig& c, const torus::TorusNlsModel& m, const PeriodicField& u,
                             std::uint64_t stream, double k = 0.0) {
  const double delta = c.num("numerics.delta");
  if (delta == 0.0) return u;
  harness::Rng rng = harness::sample_rng(c.seed, stream);
  const PeriodicField d = harness::detail::torus_perturbation(perturbation_modes(c, m), delta, rng);
  return u + (k == 0.0 ? d : torus::remove_carrier(d, -k));
}

inline Outcome probe_outcome(const harness::ProbeResult& r) {
  Outcome o;
  o.table.columns = {"index", "radius", "distance", "ratio"};
  for (const auto& s : r.evaluated) o.table.add({static_cast<long long>(s.index), s.radius, s.distance, s.ratio});
  o.plot.columns = {"radius", "ratio"};
  o.plot.blocks.emplace_back();
  for (const auto& s : r.evaluated) o.plot.blocks.back().push_back({s.radius, s.ratio});
  o.summary["c_min"] = finite_or_null(r.c_min);
  o.summary["worst_index"] = r.worst.index;
  o.summary["worst_radius"] = r.worst.radius;
  o.summary["evaluated"] = r.evaluated.size();
  o.summary["skipped_degenerate"] = r.skipped_degenerate;
  o.summary["skipped_radius"] = r.skipped_radius;
  o.unstable = r.c_min < 0.0;
  return o;
}

// Torus runs: t, d_orbit and absolute drifts of the conserved triple.
struct TorusSeries {
  Outcome o;
  torus::ConservedTriple c0;
  double max_d = 0.0, max_h = 0.0, max_f1 = 0.0, max_f2 = 0.0;

  TorusSeries() {
    o.table.columns = {"t", "d_orbit", "H_drift", "F1_drift", "F2_drift"};
    o.plot.columns = o.table.columns;
    o.plot.blocks.emplace_back();
  }
  void observe(double t, double d, const torus::ConservedTriple& c) {
    if (o.table.rows.empty()) c0 = c;
    const double dh = std::abs(c.H - c0.H), d1 = std::abs(c.F1 - c0.F1), d2 = std::abs(c.F2 - c0.F2);
    max_d = std::max(max_d, d);
    max_h = std::max(max_h, dh);
    max_f1 = std::max(max_f1, d1);
    max_f2 = std::max(max_f2, d2);
    o.table.add({t, d, dh, d1, d2});
    o.plot.blocks.back().push_back({t, d, dh, d1, d2});
  }
  Outcome finish(double delta, const EvolutionAbort* abort) {
    o.summary["max_distance"] = max_d;
    o.summary["ratio"] = delta > 0.0 ? json(max_d / delta) : json();
    o.summary["max_H_drift"] = max_h;
    o.summary["max_F1_drift"] = max_f1;
    o.summary["max_F2_drift"] = max_f2;
    o.summary["initial"] = {{"H", c0.H}, {"F1", c0.F1}, {"F2", c0.F2}};
    o.summary["aborted"] = abort != nullptr;
    if (abort) o.summary["abort"] = {{"reason", abort->what()}, {"t", abort->t}, {"step", abort->step}};
    o.unstable = abort != nullptr;
    return o;
  }
};

inline standing::InhomogeneousNonlinearity nonlinearity(const RunConfig& c) {
  const auto kind = c.str("standing.kind") == "PT" ? standing::NonlinearityKind::PT : standing::NonlinearityKind::AL;
  return standing::InhomogeneousNonlinearity(kind, c.num("standing.sigma"), c.num("standing.b"));
}

inline standing::LineGrid line_grid(const RunConfig& c) {
  standing::LineGrid g;
  g.R = c.num("standing.R");
  g.h = c.num("standing.h");
  return g;
}

inline standing::ShootOptions shoot_options(const RunConfig& c) {
  standing::ShootOptions o;
  o.tol = c.num("standing.tol");
  o.residual_tol = c.num("standing.residual_tol");
  o.w_max = c.num("standing.w_max");
  return o;
}

inline standing::WaveProfileCurve curve(const RunConfig& c, const standing::InhomogeneousNonlinearity& nl) {
  const auto g = line_grid(c);
  double hi = c.num("standing.xi_hi");
  if (hi == 0.0) {
    if (nl.kind() != standing::NonlinearityKind::AL) throw InvalidArgument("standing.xi_hi must be > 0 for PT");
    hi = 0.95 * standing::xi_infinity(nl, g);
  }
  return standing::continue_curve(nl, c.num("standing.xi_lo"), hi, static_cast<int>(c.integer("standing.steps")), g,
                                  shoot_options(c));
}

inline void curve_summary(Outcome& o, const standing::WaveProfileCurve& cv) {
  o.summary["points"] = cv.size();
  o.summary["terminated"] = cv.terminated;
  if (cv.terminated) o.summary["failure"] = cv.failure;
  o.summary["last_good_xi"] = finite_or_null(cv.last_good_xi);
  o.summary["xi_infinity"] = finite_or_null(cv.xi_infinity);
}

// ---- planewave --------------------------------------------------------------------------

inline Outcome planewave_verdict(const RunConfig& c) {
  Outcome o;
  o.table.columns = {"beta", "L", "lambda", "alpha", "margin", "verdict", "c_lambda"};
  json cases = c.at("planewave.cases");
  if (cases.empty()) cases.push_back({{"lambda", c.num("planewave.lambda")}, {"alpha", c.num("planewave.alpha")}});
  o.summary["verdicts"] = json::array();
  for (const auto& e : cases) {
    const double lambda = e["lambda"].get<double>(), alpha = e["alpha"].get<double>();
    const auto m = planewave_model(c, lambda);
    const auto v = torus::stability_verdict(m, alpha);
    const double cl = v == torus::Verdict::stable ? torus::coercivity_constant(m, alpha) : NAN;
    o.table.add({m.beta, m.grid.L(), lambda, alpha, torus::stability_margin(m, alpha), torus::to_string(v), cl});
    o.summary["verdicts"].push_back(torus::to_string(v));
    if (v == torus::Verdict::unstable) o.unstable = true;
  }
  return o;
}

inline Outcome planewave_spectrum(const RunConfig& c) {
  const auto m = planewave_model(c, c.num("planewave.lambda"));
  const double alpha = c.num("planewave.alpha");
  const bool check = m.grid.N() <= 512;
  const auto s = torus::hessian_mode_spectrum(m, alpha, static_cast<int>(c.integer("numerics.n_max")), check);
  Outcome o;
  o.table.columns = {"n", "k", "hess_v1", "hess_v2"};
  o.plot.columns = o.table.columns;
  o.plot.blocks.emplace_back();
  for (const auto& e : s.modes) {
    o.table.add({static_cast<long long>(e.n), e.k, e.hess_v1, e.hess_v2});
    o.plot.blocks.back().push_back({double(e.n), e.k, e.hess_v1, e.hess_v2});
  }
  o.summary["negative_constrained_entry"] = s.has_negative_constrained_entry();
  o.summary["assembly_deviation"] = finite_or_null(s.assembly_deviation);
  o.unstable = s.has_negative_constrained_entry();
  return o;
}

inline Outcome planewave_rates(const RunConfig& c) {
  const auto m = planewave_model(c, c.num("planewave.lambda"));
  const double alpha = c.num("planewave.alpha");
  const auto s = torus::linearization_growth_rates(m, alpha, static_cast<int>(c.integer("numerics.n_max")));
  Outcome o;
  o.table.columns = {"n", "k", "growth_rate", "frequency"};
  o.plot.columns = o.table.columns;
  o.plot.blocks.emplace_back();
  for (const auto& e : s.modes) {
    o.table.add({static_cast<long long>(e.n), e.k, e.lin_plus.real(), e.lin_plus.imag()});
    o.plot.blocks.back().push_back({double(e.n), e.k, e.lin_plus.real(), e.lin_plus.imag()});
  }
  o.summary["max_growth_rate"] = s.max_growth_rate();
  if (m.grid.N() <= 512) {
    const auto v = torus::validate_growth_rates(m, alpha);
    o.summary["assembled_rate"] = v.assembled_rate;
    o.summary["assembly_deviation"] = v.deviation;
  }
  o.unstable = s.max_growth_rate() > 0.0;
  return o;
}

inline Outcome planewave_simulate(const RunConfig& c) {
  const auto m = planewave_model(c, c.num("planewave.lambda"));
  const double alpha = c.num("planewave.alpha"), k = c.num("planewave.k");
  const PeriodicField ref = torus::plane_wave(m, alpha, k, 0.0);
  const PeriodicField u0 = perturb(c, m, ref, 0, k);
  TorusSeries s;
  torus::EvolveOptions opt;
  opt.stride = c.integer("numerics.stride");
  try {
    torus::split_step_evolve(m, u0, c.num("numerics.T"), c.num("numerics.dt"), opt,
                             [&](long, double t, const PeriodicField& u) {
                               s.observe(t, torus::planewave_distance(u, alpha, k).distance, torus::conserved(m, u));
                             });
  } catch (const EvolutionAbort& a) {
    return s.finish(c.num("numerics.delta"), &a);
  }
  return s.finish(c.num("numerics.delta"), nullptr);
}

inline Outcome planewave_probe(const RunConfig& c) {
  if (c.num("planewave.k") != 0.0) throw InvalidArgument("planewave.k must be 0 for the coercivity probe");
  const auto m = planewave_model(c, c.num("planewave.lambda"));
  const double alpha = c.num("planewave.alpha");
  const auto p = harness::planewave_probe(m, alpha, c.num("numerics.eta"), c.integer("numerics.samples"), c.seed);
  Outcome o = probe_outcome(harness::coercivity_probe(p));
  if (torus::stability_verdict(m, alpha) == torus::Verdict::stable)
    o.summary["c_lambda"] = torus::coercivity_constant(m, alpha);
  return o;
}

// ---- spherical --------------------------------------------------------------------------

inline Outcome spherical_verdict(const RunConfig& c) {
  const auto V = potential(c);
  const double rho = c.num("spherical.rho");
  const auto eq = equilibrium(c, V);
  const auto v = spherical::circular_stability_verdict(V, rho);
  Outcome o;
  o.table.columns = {"potential", "rho", "sigma", "margin", "verdict"};
  o.table.add({V.name(), rho, eq.sigma, spherical::circular_stability_margin(V, rho), spherical::to_string(v)});
  o.summary["verdict"] = spherical::to_string(v);
  o.unstable = v == spherical::Verdict::unstable;
  return o;
}

inline Outcome spherical_hessian(const RunConfig& c) {
  const auto V = potential(c);
  const auto eq = equilibrium(c, V);
  const auto b = spherical::hessian_blocks(V, eq, eq.base);
  const auto frame = spherical::orbit_frame(eq, eq.base);
  const Eigen::MatrixXd fdH = finite_diff_hessian(
      [&](const Eigen::VectorXd& x) { return spherical::hamiltonian(V, spherical::PhasePoint::unpack(x)); },
      eq.base.packed(), 1e-4);
  const Eigen::MatrixXd fdL = finite_diff_hessian(
      [&](const Eigen::VectorXd& x) { return eq.mu().dot(spherical::angular_momentum(spherical::PhasePoint::unpack(x))); },
      eq.base.packed(), 1e-4);
  double dev = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double h = frame[i].dot(fdH * frame[j]), l = frame[i].dot(fdL * frame[j]);
      dev = std::max({dev, std::abs(h - b.d2H(i, j)) / std::max(1.0, std::abs(b.d2H(i, j))),
                      std::abs(l - b.d2muL(i, j)) / std::max(1.0, std::abs(b.d2muL(i, j)))});
    }
  Outcome o;
  o.table.columns = {"matrix", "row", "c1", "c2", "c3"};
  const spherical::Mat3 lyap = b.d2lyapunov(eq.rho);
  for (const auto& [name, M] : {std::pair<std::string, spherical::Mat3>{"d2H", b.d2H}, {"d2muL", b.d2muL}, {"d2lyapunov", lyap}})
    for (int i = 0; i < 3; ++i) o.table.add({name, static_cast<long long>(i + 1), M(i, 0), M(i, 1), M(i, 2)});
  const double K = c.num("spherical.K");
  o.summary["min_eig_restricted"] = spherical::min_eig_restricted(V, eq, K);
  o.summary["K"] = K;
  o.summary["fd_max_rel_deviation"] = dev;
  o.unstable = spherical::circular_stability_verdict(V, eq.rho) == spherical::Verdict::unstable;
  return o;
}

inline Outcome spherical_simulate(const RunConfig& c) {
  using spherical::PhasePoint;
  const auto V = potential(c);
  const auto eq = equilibrium(c, V);
  const double delta = c.num("numerics.delta");
  harness::Rng rng = harness::sample_rng(c.seed, 0);
  spherical::Vec6 dir;
  for (int i = 0; i < 6; ++i) dir[i] = harness::gaussian(rng);
  const PhasePoint u0 = PhasePoint::unpack(eq.base.packed() + (delta / dir.norm()) * dir);
  const double H0 = spherical::hamiltonian(V, u0);
  const spherical::Vec3 L0 = spherical::angular_momentum(u0);
  Outcome o;
  o.table.columns = {"t", "d_orbit", "H_drift", "L_drift"};
  o.plot.columns = o.table.columns;
  o.plot.blocks.emplace_back();
  double md = 0.0, mh = 0.0, ml = 0.0;
  const EvolutionAbort* abort = nullptr;
  std::optional<EvolutionAbort> caught;
  try {
    spherical::integrate_flow(V, u0, c.num("numerics.T"), c.num("numerics.dt"), c.integer("numerics.stride"),
                              [&](long, double t, const PhasePoint& u) {
                                const double d = spherical::distance_to_so2_orbit(u, eq);
                                const double dh = std::abs(spherical::hamiltonian(V, u) - H0);
                                const double dl = (spherical::angular_momentum(u) - L0).norm();
                                md = std::max(md, d), mh = std::max(mh, dh), ml = std::max(ml, dl);
                                o.table.add({t, d, dh, dl});
                                o.plot.blocks.back().push_back({t, d, dh, dl});
                              });
  } catch (const EvolutionAbort& a) {
    caught = a;
    abort = &*caught;
  }
  o.summary["max_distance"] = md;
  o.summary["ratio"] = delta > 0.0 ? json(md / delta) : json();
  o.summary["max_H_drift"] = mh;
  o.summary["max_L_drift"] = ml;
  o.summary["aborted"] = abort != nullptr;
  if (abort) o.summary["abort"] = {{"reason", abort->what()}, {"t", abort->t}, {"step", abort->step}};
  o.unstable = abort != nullptr;
  return o;
}

inline Outcome spherical_probe(const RunConfig& c) {
  const auto V = potential(c);
  const auto eq = equilibrium(c, V);
  const auto p = harness::spherical_probe(V, eq, c.num("numerics.eta"), c.integer("numerics.samples"), c.seed);
  return probe_outcome(harness::coercivity_probe(p));
}

// ---- soliton / manakov ------------------------------------------------------------------

inline Outcome soliton_simulate(const RunConfig& c) {
  const auto m = soliton_model(c);
  const PeriodicField ref = torus::bright_soliton(m.grid, c.num("soliton.alpha"), c.num("soliton.c"), m.lambda, 0.0);
  const PeriodicField u0 = perturb(c, m, ref, 0);
  TorusSeries s;
  torus::EvolveOptions opt;
  opt.stride = c.integer("numerics.stride");
  try {
    torus::split_step_evolve(m, u0, c.num("numerics.T"), c.num("numerics.dt"), opt,
                             [&](long, double t, const PeriodicField& u) {
                               const double d = torus::orbit_distance(u, ref, torus::OrbitMode::gauge_translation).distance;
                               s.observe(t, d, torus::conserved(m, u));
                             });
  } catch (const EvolutionAbort& a) {
    return s.finish(c.num("numerics.delta"), &a);
  }
  return s.finish(c.num("numerics.delta"), nullptr);
}

inline Outcome soliton_boost_check(const RunConfig& c) {
  const auto m = soliton_model(c);
  const PeriodicField u = torus::bright_soliton(m.grid, c.num("soliton.alpha"), c.num("soliton.c"), m.lambda, 0.0);
  const double v = c.num("soliton.v"), t = c.num("numerics.t"), dt = c.num("numerics.dt");
  const double r = torus::boost_commutation_residual(m, u, v, t, dt);
  Outcome o;
  o.table.columns = {"v", "t", "dt", "residual"};
  o.table.add({v, t, dt, r});
  o.summary["residual"] = r;
  return o;
}

inline Outcome manakov_simulate(const RunConfig& c) {
  const auto m = soliton_model(c);
  const PeriodicField2 ref =
      torus::manakov_soliton(m.grid, c.num("soliton.alpha"), c.num("soliton.c"), c.num("soliton.theta"),
                             c.num("soliton.gamma1"), c.num("soliton.gamma2"), m.lambda, 0.0);
  const PeriodicField2 u0{perturb(c, m, ref.u1, 0), perturb(c, m, ref.u2, 1)};
  Outcome o;
  o.table.columns = {"t", "d_orbit", "N1", "N2"};
  o.plot.columns = o.table.columns;
  o.plot.blocks.emplace_back();
  double md = 0.0;
  torus::EvolveOptions opt;
  opt.stride = c.integer("numerics.stride");
  std::optional<EvolutionAbort> caught;
  try {
    torus::manakov_evolve(m, u0, c.num("numerics.T"), c.num("numerics.dt"), opt,
                          [&](long, double t, const PeriodicField2& u) {
                            const double d = torus::u2_translation_distance(u, ref).distance;
                            const double n1 = l2_norm_sq(u.u1), n2 = l2_norm_sq(u.u2);
                            md = std::max(md, d);
                            o.table.add({t, d, n1, n2});
                            o.plot.blocks.back().push_back({t, d, n1, n2});
                          });
  } catch (const EvolutionAbort& a) {
    caught = a;
  }
  o.summary["max_distance"] = md;
  o.summary["aborted"] = caught.has_value();
  if (caught) o.summary["abort"] = {{"reason", caught->what()}, {"t", caught->t}, {"step", caught->step}};
  o.unstable = caught.has_value();
  return o;
}

// ---- standing ---------------------------------------------------------------------------

inline Outcome standing_shoot(const RunConfig& c) {
  const auto nl = nonlinearity(c);
  const auto P = standing::shoot_profile(nl, c.num("standing.xi"), line_grid(c), shoot_options(c));
  Outcome o;
  o.table.columns = {"x", "w", "dw"};
  o.plot.columns = o.table.columns;
  o.plot.blocks.emplace_back();
  for (std::size_t i = 0; i < P.w.size(); ++i) {
    const double x = static_cast<double>(i) * P.h;
    o.table.add({x, P.w[i], P.dw[i]});
    o.plot.blocks.back().push_back({x, P.w[i], P.dw[i]});
  }
  o.summary["xi"] = P.xi;
  o.summary["w0"] = P.w0();
  o.summary["Q"] = P.Q;
  o.summary["residual"] = P.residual;
  o.summary["splice"] = P.splice;
  return o;
}

inline Outcome standing_continue(const RunConfig& c) {
  const auto nl = nonlinearity(c);
  const auto cv = curve(c, nl);
  Outcome o;
  o.table.columns = {"xi", "w0", "Q", "residual"};
  o.plot.columns = o.table.columns;
  o.plot.blocks.emplace_back();
  for (const auto& P : cv.points) {
    o.table.add({P.xi, P.w0(), P.Q, P.residual});
    o.plot.blocks.back().push_back({P.xi, P.w0(), P.Q, P.residual});
  }
  curve_summary(o, cv);
  return o;
}

inline Outcome standing_slope(const RunConfig& c) {
  const auto nl = nonlinearity(c);
  const auto cv = curve(c, nl);
  Outcome o;
  o.table.columns = {"xi", "Q", "dQ_dxi", "intid_residual"};
  o.plot.columns = o.table.columns;
  o.plot.blocks.emplace_back();
  double min_slope = INFINITY, max_res = 0.0;
  for (std::size_t i = 0; i < cv.size(); ++i) {
    double s = NAN, r = NAN;
    if (i > 0 && i + 1 < cv.size()) {
      s = standing::charge_slope(cv, i);
      r = standing::intid_residual(nl, cv, i);
      min_slope = std::min(min_slope, s);
      max_res = std::max(max_res, r);
    }
    o.table.add({cv[i].xi, cv[i].Q, s, r});
    o.plot.blocks.back().push_back({cv[i].xi, cv[i].Q, s, r});
  }
  curve_summary(o, cv);
  o.summary["min_slope"] = finite_or_null(min_slope);
  o.summary["max_intid_residual"] = max_res;
  o.summary["vk_small_xi_sign"] = standing::vk_small_xi_sign(nl.sigma(), nl.b());
  o.unstable = min_slope <= 0.0;
  return o;
}

inline Outcome standing_spectral(const RunConfig& c) {
  const auto nl = nonlinearity(c);
  const auto cv = curve(c, nl);
  Outcome o;
  o.table.columns = {"xi", "morse_index", "gap", "lambda0_minus", "cosine", "simple", "C1", "C2"};
  bool all1 = true, all2 = true;
  for (const auto& P : cv.points) {
    const auto s = standing::spectral_conditions(nl, P);
    all1 = all1 && s.c1;
    all2 = all2 && s.c2;
    o.table.add({P.xi, static_cast<long long>(s.morse_index), s.gap, s.lambda0_minus, s.cosine,
                 static_cast<long long>(s.simple), static_cast<long long>(s.c1), static_cast<long long>(s.c2)});
  }
  curve_summary(o, cv);
  o.summary["all_C1"] = all1;
  o.summary["all_C2"] = all2;
  o.unstable = !(all1 && all2);
  return o;
}

inline Outcome standing_limit(const RunConfig& c) {
  const double b = c.num("standing.b"), sigma = c.num("standing.sigma");
  const auto yg = line_grid(c);
  const auto opt = shoot_options(c);
  const auto v0 = standing::limit_ground_state(b, sigma, yg, opt);
  Outcome o;
  o.table.columns = {"y", "v0"};
  o.plot.columns = o.table.columns;
  o.plot.blocks.emplace_back();
  for (std::size_t i = 0; i < v0.w.size(); ++i) {
    o.table.add({static_cast<double>(i) * v0.h, v0.w[i]});
    o.plot.blocks.back().push_back({static_cast<double>(i) * v0.h, v0.w[i]});
  }
  o.summary["v0_0"] = v0.w0();
  o.summary["convergence"] = json::array();
  const auto nl = standing::InhomogeneousNonlinearity(standing::NonlinearityKind::PT, sigma, b);
  for (double xi : c.nums("standing.xi_list")) {
    const standing::LineGrid xg(std::round(yg.R / std::sqrt(xi) / yg.h) * yg.h, yg.h);
    const auto w = standing::shoot_profile(nl, xi, xg, opt);
    const auto v = standing::to_limit_variables(xi, b, sigma, w, yg);
    double sup = 0.0;
    for (std::size_t i = 0; i < v.w.size(); ++i) sup = std::max(sup, std::abs(v.w[i] - v0.w[i]));
    o.summary["convergence"].push_back({{"xi", xi}, {"sup_distance", sup}});
  }
  return o;
}

// ---- harness ----------------------------------------------------------------------------

inline Outcome harness_stability(const RunConfig& c) {
  harness::StabilityExperiment e;
  if (c.str("harness.system") == "spherical") {
    const auto V = potential(c);
    e.system = harness::SphericalSystem{V, equilibrium(c, V)};
  } else {
    auto s = perturbation_modes(c, planewave_model(c, c.num("planewave.lambda")));
    s.alpha = c.num("planewave.alpha");
    s.k = c.num("planewave.k");
    e.system = s;
  }
  e.deltas = c.nums("numerics.deltas");
  e.T = c.num("numerics.T");
  e.dt = c.num("numerics.dt");
  e.stride = c.integer("numerics.stride");
  e.seed = c.seed;
  e.exceed_factor = c.num("numerics.exceed_factor");
  const auto rec = harness::run_stability_experiment(e, c.canonical());
  Outcome o;
  o.table.columns = {"delta", "initial_distance", "max_distance", "ratio", "exceed_time", "aborted"};
  o.plot.columns = {"t", "d_orbit"};
  for (const auto& r : rec.results) {
    o.table.add({r.delta, r.initial_distance, r.max_distance, r.ratio, r.exceed_time, static_cast<long long>(r.aborted)});
    o.plot.blocks.emplace_back();
    o.plot.block_labels.push_back("delta = " + format_double(r.delta));
    for (std::size_t i = 0; i < r.t.size(); ++i) o.plot.blocks.back().push_back({r.t[i], r.d[i]});
    if (r.aborted || std::isfinite(r.exceed_time)) o.unstable = true;
  }
  o.summary["results"] = rec.summary();
  return o;
}

inline Outcome harness_coercivity(const RunConfig& c) {
  return c.str("harness.system") == "spherical" ? spherical_probe(c) : planewave_probe(c);
}

}  // namespace detail

/// Runs the addressed module operation.
inline Outcome dispatch(const RunConfig& c) {
  using F = Outcome (*)(const RunConfig&);
  static const std::vector<std::pair<std::string, F>> table = {
      {"planewave verdict", detail::planewave_verdict},   {"planewave spectrum", detail::planewave_spectrum},
      {"planewave rates", detail::planewave_rates},       {"planewave simulate", detail::planewave_simulate},
      {"planewave probe", detail::planewave_probe},       {"spherical verdict", detail::spherical_verdict},
      {"spherical hessian", detail::spherical_hessian},   {"spherical simulate", detail::spherical_simulate},
      {"spherical probe", detail::spherical_probe},       {"soliton simulate", detail::soliton_simulate},
      {"soliton boost-check", detail::soliton_boost_check}, {"manakov simulate", detail::manakov_simulate},
      {"standing shoot", detail::standing_shoot},         {"standing continue", detail::standing_continue},
      {"standing slope", detail::standing_slope},         {"standing spectral", detail::standing_spectral},
      {"standing limit", detail::standing_limit},         {"harness stability", detail::harness_stability},
      {"harness coercivity", detail::harness_coercivity},
  };
  for (const auto& [name, fn] : table)
    if (name == c.command()) return fn(c);
  throw InvalidArgument("unknown command " + c.command());
}

}  // namespace emstab::cli
