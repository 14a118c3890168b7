#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "emstab/core/error.hpp"
#include "emstab/harness/random.hpp"

namespace emstab::harness {

/// Sampled check of ℒ(u′) − ℒ(u) ≥ c·d²(u′, 𝒪) on the constraint set near an equilibrium u.
///
/// Sample i draws its own generator from (seed, i), a radius r = radius_scale·U(0, 1] and a
/// displacement of size r. Samples with r > eta are skipped, so for a fixed radius_scale the
/// sample set only grows with eta and the reported minimum is non-increasing in eta.
template <class State>
struct CoercivityProbe {
  State equilibrium;
  std::function<double(const State&)> lyapunov;
  std::function<State(const State&)> project;   // onto the constraint set
  std::function<double(const State&)> distance;  // to the equilibrium orbit
  std::function<State(const State&, double, Rng&)> displace;  // random displacement of the given size

  /// Deterministic displacements (e.g. along a negative Hessian direction) tried at radii
  /// radius_scale·4^{−j}, j = 0..seeded_levels−1, subject to the same r ≤ eta rule.
  std::vector<std::function<State(const State&, double)>> seeded;
  int seeded_levels = 4;

  double eta = 1e-2;
  double radius_scale = NAN;  // defaults to eta
  long samples = 1000;
  std::uint64_t seed = 0;
  double min_distance_sq = 1e-12;  // samples with d² below this are discarded
};

struct ProbeSample {
  long index = 0;  // random samples 0..n−1, seeded ones after
  double radius = 0.0;
  double distance = 0.0;
  double ratio = NAN;
};

struct ProbeResult {
  double c_min = std::numeric_limits<double>::infinity();
  ProbeSample worst;
  std::vector<ProbeSample> evaluated;
  long skipped_degenerate = 0;
  long skipped_radius = 0;
};

template <class State>
ProbeResult coercivity_probe(const CoercivityProbe<State>& p) {
  if (!(p.eta > 0.0)) throw InvalidArgument("probe neighbourhood eta must be > 0");
  if (p.samples < 0) throw InvalidArgument("probe sample count must be >= 0");
  if (!p.lyapunov || !p.project || !p.distance || !p.displace)
    throw InvalidArgument("coercivity probe needs lyapunov, project, distance and displace evaluators");
  const double scale = std::isnan(p.radius_scale) ? p.eta : p.radius_scale;
  if (!(scale > 0.0)) throw InvalidArgument("probe radius scale must be > 0");
  const double L0 = p.lyapunov(p.equilibrium);

  ProbeResult res;
  auto evaluate = [&](long index, double r, const State& displaced) {
    const State u = p.project(displaced);
    const double d = p.distance(u);
    if (!(d * d >= p.min_distance_sq)) {
      ++res.skipped_degenerate;
      return;
    }
    ProbeSample s{index, r, d, (p.lyapunov(u) - L0) / (d * d)};
    res.evaluated.push_back(s);
    if (s.ratio < res.c_min || res.evaluated.size() == 1) {
      res.c_min = s.ratio;
      res.worst = s;
    }
  };

  for (long i = 0; i < p.samples; ++i) {
    Rng rng = sample_rng(p.seed, static_cast<std::uint64_t>(i));
    const double r = scale * uniform_open_closed(rng);
    if (r > p.eta) {
      ++res.skipped_radius;
      continue;
    }
    evaluate(i, r, p.displace(p.equilibrium, r, rng));
  }
  long index = p.samples;
  for (const auto& dir : p.seeded) {
    double r = scale;
    for (int j = 0; j < p.seeded_levels; ++j, r *= 0.25, ++index) {
      if (r > p.eta) {
        ++res.skipped_radius;
        continue;
      }
      evaluate(index, r, dir(p.equilibrium, r));
    }
  }
  return res;
}

}  // namespace emstab::harness
