#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "emstab/core/error.hpp"

namespace emstab::harness {

struct Drift {
  std::string name;
  double initial = 0.0;
  double max_abs = 0.0;
  double max_rel = 0.0;  // max |F(t) − F(0)| / (|F(0)| + 1e−15)
};

/// Streaming drift tracker for a fixed set of scalar quantities.
class ConservationMonitor {
 public:
  explicit ConservationMonitor(std::vector<std::string> names) {
    for (auto& n : names) drifts_.push_back({std::move(n)});
  }

  void observe(const std::vector<double>& values) {
    if (values.size() != drifts_.size()) throw InvalidArgument("conservation monitor: wrong number of quantities");
    for (std::size_t i = 0; i < values.size(); ++i) {
      auto& d = drifts_[i];
      if (!started_) {
        d.initial = values[i];
        continue;
      }
      const double a = std::abs(values[i] - d.initial);
      d.max_abs = std::max(d.max_abs, a);
      d.max_rel = std::max(d.max_rel, a / (std::abs(d.initial) + 1e-15));
    }
    started_ = true;
  }

  const std::vector<Drift>& drifts() const { return drifts_; }

  double max_rel() const {
    double m = 0.0;
    for (const auto& d : drifts_) m = std::max(m, d.max_rel);
    return m;
  }

 private:
  std::vector<Drift> drifts_;
  bool started_ = false;
};

template <class State>
struct Quantity {
  std::string name;
  std::function<double(const State&)> eval;
};

/// Max drift of each quantity along stored samples; an empty trajectory gives zeros.
template <class State>
std::vector<Drift> conservation_monitor(const std::vector<State>& trajectory, const std::vector<Quantity<State>>& qs) {
  std::vector<std::string> names;
  for (const auto& q : qs) names.push_back(q.name);
  ConservationMonitor m(names);
  std::vector<double> v(qs.size());
  for (const auto& u : trajectory) {
    for (std::size_t i = 0; i < qs.size(); ++i) v[i] = qs[i].eval(u);
    m.observe(v);
  }
  return m.drifts();
}

/// inf over stored reference samples u(t′) of d(v, 𝒪_{u(t′)}).
template <class State, class Dist>
double inf_over_reference(const State& v, const std::vector<State>& reference, Dist&& orbit_distance) {
  if (reference.empty()) throw InvalidArgument("reference trajectory is empty");
  double best = INFINITY;
  for (const auto& u : reference) best = std::min(best, orbit_distance(v, u));
  return best;
}

}  // namespace emstab::harness
