#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "emstab/core/spectral.hpp"
#include "emstab/harness/monitor.hpp"
#include "emstab/harness/random.hpp"
#include "emstab/spherical/flow.hpp"
#include "emstab/spherical/mechanics.hpp"
#include "emstab/torus/evolve.hpp"
#include "emstab/torus/model.hpp"
#include "emstab/torus/orbit.hpp"

namespace emstab::harness {

struct SphericalSystem {
  spherical::RadialPotential V;
  spherical::CircularEquilibrium eq;
};

/// Plane wave αe^{−ikx}; perturbations use Fourier modes with mode_min ≤ |n| ≤ mode_max.
struct TorusSystem {
  torus::TorusNlsModel model;
  double alpha = 1.0;
  double k = 0.0;
  int mode_min = 0;
  int mode_max = 8;
};

struct StabilityExperiment {
  std::variant<SphericalSystem, TorusSystem> system;
  std::vector<double> deltas;
  double T = 10.0;
  double dt = 1e-3;
  long stride = 100;
  std::uint64_t seed = 0;
  double exceed_factor = 100.0;  // records the first time d > exceed_factor·δ
};

struct DeltaResult {
  double delta = 0.0;
  double initial_distance = 0.0;
  double max_distance = 0.0;
  double ratio = NAN;            // max_distance / δ
  double exceed_time = NAN;      // first sampled t with d > exceed_factor·δ
  bool aborted = false;
  std::string abort_reason;
  double abort_time = NAN;
  std::vector<double> t, d;      // sampled orbit distance
  std::vector<Drift> drifts;
};

struct RunRecord {
  nlohmann::json config;
  std::uint64_t seed = 0;
  std::vector<DeltaResult> results;
  std::string started_utc, finished_utc;
  double wall_seconds = 0.0;

  /// Deterministic part of the record (no timestamps).
  nlohmann::json summary() const {
    nlohmann::json s = nlohmann::json::array();
    for (const auto& r : results) {
      nlohmann::json e{{"delta", r.delta},
                       {"initial_distance", r.initial_distance},
                       {"max_distance", r.max_distance},
                       {"aborted", r.aborted},
                       {"samples", r.t.size()}};
      e["ratio"] = std::isfinite(r.ratio) ? nlohmann::json(r.ratio) : nlohmann::json();
      e["exceed_time"] = std::isfinite(r.exceed_time) ? nlohmann::json(r.exceed_time) : nlohmann::json();
      if (r.aborted) e["abort"] = {{"reason", r.abort_reason}, {"t", r.abort_time}};
      for (const auto& d : r.drifts) e["drift"][d.name] = d.max_rel;
      s.push_back(e);
    }
    return s;
  }

  nlohmann::json to_json() const {
    return {{"config", config},     {"seed", seed},           {"summary", summary()},
            {"started", started_utc}, {"finished", finished_utc}, {"wall_seconds", wall_seconds}};
  }
};

inline std::string utc_timestamp(std::chrono::system_clock::time_point tp) {
  const std::time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace detail {

inline void observe_distance(DeltaResult& r, double t, double d, double factor) {
  if (r.t.empty()) r.initial_distance = d;
  r.t.push_back(t);
  r.d.push_back(d);
  r.max_distance = std::max(r.max_distance, d);
  if (std::isnan(r.exceed_time) && r.delta > 0.0 && d > factor * r.delta) r.exceed_time = t;
}

inline DeltaResult run_delta(const SphericalSystem& s, const StabilityExperiment& e, double delta, Rng& rng) {
  using spherical::PhasePoint;
  DeltaResult r;
  r.delta = delta;
  spherical::Vec6 dir;
  for (int i = 0; i < 6; ++i) dir[i] = gaussian(rng);
  const PhasePoint u0 = PhasePoint::unpack(s.eq.base.packed() + (delta / dir.norm()) * dir);
  ConservationMonitor mon({"H", "L1", "L2", "L3"});
  try {
    spherical::integrate_flow(s.V, u0, e.T, e.dt, e.stride, [&](long, double t, const PhasePoint& u) {
      observe_distance(r, t, spherical::distance_to_so2_orbit(u, s.eq), e.exceed_factor);
      const auto L = spherical::angular_momentum(u);
      mon.observe({spherical::hamiltonian(s.V, u), L[0], L[1], L[2]});
    });
  } catch (const EvolutionAbort& a) {
    r.aborted = true;
    r.abort_reason = a.what();
    r.abort_time = a.t;
  }
  r.drifts = mon.drifts();
  return r;
}

inline PeriodicField torus_perturbation(const TorusSystem& s, double delta, Rng& rng) {
  const auto& g = s.model.grid;
  if (s.mode_min < 0 || s.mode_max < s.mode_min || s.mode_max >= g.N() / 2)
    throw InvalidArgument("perturbation modes need 0 <= mode_min <= mode_max < N/2");
  PeriodicField d(g);
  const double k1 = g.k1();
  for (int n = s.mode_min; n <= s.mode_max; ++n)
    for (int sign : {1, -1}) {
      if (n == 0 && sign < 0) continue;
      const double re = gaussian(rng);
      const cplx c(re, gaussian(rng));
      for (int j = 0; j < g.N(); ++j) d.values[j] += c * std::polar(1.0, sign * n * k1 * g.x(j));
    }
  const double norm = h1_norm(d);
  if (!(norm > 0.0)) throw InvalidArgument("degenerate perturbation");
  d *= delta / norm;
  return d;
}

inline DeltaResult run_delta(const TorusSystem& s, const StabilityExperiment& e, double delta, Rng& rng) {
  DeltaResult r;
  r.delta = delta;
  const PeriodicField ref = torus::plane_wave(s.model, s.alpha, s.k, 0.0);
  // the perturbation is drawn in the carrier-free frame, so d(u0) ≤ δ there
  const PeriodicField u0 = ref + torus::remove_carrier(torus_perturbation(s, delta, rng), -s.k);
  ConservationMonitor mon({"H", "F1", "F2"});
  torus::EvolveOptions opt;
  opt.stride = e.stride;
  try {
    torus::split_step_evolve(s.model, u0, e.T, e.dt, opt, [&](long, double t, const PeriodicField& u) {
      observe_distance(r, t, torus::planewave_distance(u, s.alpha, s.k).distance, e.exceed_factor);
      const auto c = torus::conserved(s.model, u);
      mon.observe({c.H, c.F1, c.F2});
    });
  } catch (const EvolutionAbort& a) {
    r.aborted = true;
    r.abort_reason = a.what();
    r.abort_time = a.t;
  }
  r.drifts = mon.drifts();
  return r;
}

}  // namespace detail

/// For each δ: perturb the equilibrium by a seeded random direction of size δ, evolve to T and
/// record the orbit distance every `stride` steps. The reference is a relative equilibrium, so
/// its orbit is time independent and the distance is taken to that single orbit.
inline RunRecord run_stability_experiment(const StabilityExperiment& e, nlohmann::json config = {}) {
  if (e.deltas.empty()) throw InvalidArgument("numerics.deltas must not be empty");
  for (double d : e.deltas)
    if (!(d >= 0.0) || !std::isfinite(d)) throw InvalidArgument("numerics.deltas entries must be >= 0");
  if (!(e.T > 0.0)) throw InvalidArgument("numerics.T must be > 0");
  RunRecord rec;
  rec.config = std::move(config);
  rec.seed = e.seed;
  const auto start = std::chrono::system_clock::now();
  const auto t0 = std::chrono::steady_clock::now();
  rec.started_utc = utc_timestamp(start);
  for (std::size_t i = 0; i < e.deltas.size(); ++i) {
    Rng rng = sample_rng(e.seed, i);
    DeltaResult r = std::visit([&](const auto& s) { return detail::run_delta(s, e, e.deltas[i], rng); }, e.system);
    if (r.delta > 0.0) r.ratio = r.max_distance / r.delta;
    rec.results.push_back(std::move(r));
  }
  rec.finished_utc = utc_timestamp(std::chrono::system_clock::now());
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

}  // namespace emstab::harness
