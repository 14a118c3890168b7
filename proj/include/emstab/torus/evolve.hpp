#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <sstream>
#include <vector>

#include "emstab/core/error.hpp"
#include "emstab/core/fft.hpp"
#include "emstab/torus/model.hpp"

namespace emstab::torus {

struct EvolveOptions {
  long stride = 1;            // observe every stride-th step
  double blowup_bound = 1e3;  // abort when ‖u‖_∞ exceeds this
};

using FieldObserver = std::function<void(long, double, const PeriodicField&)>;
using Field2Observer = std::function<void(long, double, const PeriodicField2&)>;

namespace detail {

inline long checked_steps(double T, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("numerics.dt must be > 0");
  if (dt > 1e-2) throw InvalidArgument("numerics.dt must be <= 1e-2 for split-step accuracy");
  if (!(T >= 0.0)) throw InvalidArgument("horizon T must be >= 0");
  return static_cast<long>(std::ceil(T / dt - 1e-9));
}

// Fourier multipliers e^{−iβk²τ}/N (normalization folded in).
inline std::vector<cplx> linear_propagator(const PeriodicGrid& g, double beta, double tau) {
  std::vector<cplx> m(g.N());
  for (int j = 0; j < g.N(); ++j) {
    const double k = g.k(j);
    m[j] = std::polar(1.0 / g.N(), -beta * k * k * tau);
  }
  return m;
}

// Applies one linear substep to each component in place.
template <std::size_t C>
void apply_linear(std::array<std::vector<cplx>*, C> comps, std::vector<cplx>& work, const std::vector<cplx>& mult) {
  const int N = static_cast<int>(mult.size());
  for (auto* u : comps) {
    fft::forward(u->data(), work.data(), N);
    for (int j = 0; j < N; ++j) work[j] *= mult[j];
    fft::backward(work.data(), u->data(), N);
  }
}

// Strang splitting with fused linear half steps between unobserved steps.
// `nonlinear(step)` applies the pointwise phase rotation and guards the state.
template <std::size_t C, class Nonlinear, class Observe>
void strang_loop(const PeriodicGrid& g, double beta, double h, long n, long stride,
                 std::array<std::vector<cplx>*, C> comps, Nonlinear&& nonlinear, Observe&& observe) {
  const auto half = linear_propagator(g, beta, 0.5 * h);
  const auto full = linear_propagator(g, beta, h);
  std::vector<cplx> work(g.N());
  observe(0L, 0.0);
  bool open = false;  // a leading half step has been applied
  for (long s = 1; s <= n; ++s) {
    if (!open) apply_linear(comps, work, half);
    nonlinear(s);
    if (s % stride == 0 || s == n) {
      apply_linear(comps, work, half);
      open = false;
      observe(s, s * h);
    } else {
      apply_linear(comps, work, full);
      open = true;
    }
  }
}

}  // namespace detail

/// Strang split-step: exact Fourier propagation of iβ∂²ₓₓ over dt/2, exact phase rotation
/// e^{iλ|u|²dt}, exact propagation over dt/2. Uniform steps T/n ≤ dt.
inline void split_step_evolve(const TorusNlsModel& m, const PeriodicField& u0, double T, double dt,
                              const EvolveOptions& opt, const FieldObserver& observe) {
  if (!(u0.grid == m.grid)) throw InvalidArgument("initial field is not on the model grid");
  if (opt.stride < 1) throw InvalidArgument("sampling stride must be >= 1");
  const long n = detail::checked_steps(T, dt);
  const double h = n > 0 ? T / n : dt;
  PeriodicField u = u0;
  const double bound2 = opt.blowup_bound * opt.blowup_bound;
  auto nonlinear = [&](long s) {
    for (auto& z : u.values) {
      const double a = std::norm(z);
      if (!(a <= bound2)) {
        std::ostringstream os;
        if (std::isnan(a))
          os << "NaN detected at step " << s;
        else
          os << "blow-up guard: |u| > " << opt.blowup_bound << " at step " << s;
        throw EvolutionAbort(os.str(), s, s * h);
      }
      z *= std::polar(1.0, m.lambda * a * h);
    }
  };
  detail::strang_loop<1>(m.grid, m.beta, h, n, opt.stride, {&u.values}, nonlinear,
                         [&](long s, double t) { observe(s, t, u); });
}

struct FieldTrajectory {
  std::vector<double> t;
  std::vector<PeriodicField> u;
};

inline FieldTrajectory split_step_evolve(const TorusNlsModel& m, const PeriodicField& u0, double T, double dt,
                                         long stride = 1) {
  FieldTrajectory tr;
  EvolveOptions opt;
  opt.stride = stride;
  split_step_evolve(m, u0, T, dt, opt, [&](long, double t, const PeriodicField& u) {
    tr.t.push_back(t);
    tr.u.push_back(u);
  });
  return tr;
}

/// Final state only.
inline PeriodicField evolve_to(const TorusNlsModel& m, const PeriodicField& u0, double T, double dt) {
  PeriodicField out = u0;
  EvolveOptions opt;
  opt.stride = std::max<long>(1, detail::checked_steps(T, dt));
  split_step_evolve(m, u0, T, dt, opt, [&](long, double, const PeriodicField& u) { out = u; });
  return out;
}

/// Vector NLS: component-wise linear substeps and the coupled rotation e^{iλ(|u₁|²+|u₂|²)dt}.
inline void manakov_evolve(const TorusNlsModel& m, const PeriodicField2& u0, double T, double dt,
                           const EvolveOptions& opt, const Field2Observer& observe) {
  if (!(u0.u1.grid == m.grid) || !(u0.u2.grid == m.grid)) throw InvalidArgument("initial field is not on the model grid");
  if (opt.stride < 1) throw InvalidArgument("sampling stride must be >= 1");
  const long n = detail::checked_steps(T, dt);
  const double h = n > 0 ? T / n : dt;
  PeriodicField2 u = u0;
  const double bound2 = opt.blowup_bound * opt.blowup_bound;
  auto nonlinear = [&](long s) {
    for (int j = 0; j < m.grid.N(); ++j) {
      const double a = std::norm(u.u1[j]) + std::norm(u.u2[j]);
      if (!(a <= bound2)) {
        std::ostringstream os;
        os << (std::isnan(a) ? "NaN detected" : "blow-up guard triggered") << " at step " << s;
        throw EvolutionAbort(os.str(), s, s * h);
      }
      const cplx r = std::polar(1.0, m.lambda * a * h);
      u.u1[j] *= r;
      u.u2[j] *= r;
    }
  };
  detail::strang_loop<2>(m.grid, m.beta, h, n, opt.stride, {&u.u1.values, &u.u2.values}, nonlinear,
                         [&](long s, double t) { observe(s, t, u); });
}

inline PeriodicField2 manakov_evolve_to(const TorusNlsModel& m, const PeriodicField2& u0, double T, double dt) {
  PeriodicField2 out = u0;
  EvolveOptions opt;
  opt.stride = std::max<long>(1, detail::checked_steps(T, dt));
  manakov_evolve(m, u0, T, dt, opt, [&](long, double, const PeriodicField2& u) { out = u; });
  return out;
}

}  // namespace emstab::torus
