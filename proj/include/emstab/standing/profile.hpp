#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "emstab/core/error.hpp"
#include "emstab/standing/nonlinearity.hpp"

namespace emstab::standing {

/// Half line [0, R] with nodes x_i = i·h; profiles are extended evenly.
struct LineGrid {
  double R = 40.0;
  double h = 5e-3;

  LineGrid() = default;
  LineGrid(double radius, double step) : R(radius), h(step) {
    if (!(R > 0.0) || !(h > 0.0) || h >= R) throw InvalidArgument("line grid needs 0 < h < R");
    const double n = R / h;
    if (std::abs(n - std::round(n)) > 1e-9 * n) throw InvalidArgument("line grid radius must be a multiple of the step");
  }
  long n() const { return std::lround(R / h); }
};

/// Even profile sampled on the half line: w_i = w(ih), dw_i = w'(ih).
struct Profile {
  double xi = 0.0;
  double h = 0.0;
  std::vector<double> w;
  std::vector<double> dw;
  double Q = 0.0;         // ½∫_ℝ w²
  double residual = 0.0;  // max |w'' + f w − ξ w| (fourth-order stencil, interior nodes)
  long splice = -1;       // first node of the exponential tail, −1 if none

  double w0() const { return w.front(); }
  double R() const { return h * static_cast<double>(w.size() - 1); }
  double tail() const { return w.back(); }

  /// Cubic Hermite interpolation of the even extension; zero beyond R.
  double at(double x) const { return hermite(std::abs(x), false); }
  double derivative_at(double x) const {
    const double s = x < 0.0 ? -1.0 : 1.0;
    return s * hermite(std::abs(x), true);
  }

 private:
  double hermite(double x, bool deriv) const {
    const long n = static_cast<long>(w.size()) - 1;
    if (x >= R()) return x == R() ? (deriv ? dw.back() : w.back()) : 0.0;
    long i = std::min(static_cast<long>(x / h), n - 1);
    const double t = (x - i * h) / h;
    const double y0 = w[i], y1 = w[i + 1], m0 = dw[i] * h, m1 = dw[i + 1] * h;
    if (!deriv) {
      const double t2 = t * t, t3 = t2 * t;
      return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * m1;
    }
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * m0 + (-6 * t2 + 6 * t) * y1 + (3 * t2 - 2 * t) * m1) / h;
  }
};

struct ShootOptions {
  double tol = 1e-8;             // acceptance bound on the tail w(R)
  double w_max = 1e6;            // bracket search ceiling for w(0)
  double splice_ratio = 1e-6;    // tail is continued exponentially below splice_ratio·w(0)
  double residual_tol = 1e-8;    // acceptance bound on the stationary residual (relative to max(1, w(0)))
  std::optional<double> guess;   // initial w(0) for the bracket search
};

namespace detail {

// Weights of f/g at the three RK4 stage positions of each step.
struct StageWeights {
  std::vector<double> start, mid, end;
};

inline StageWeights profile_weights(const InhomogeneousNonlinearity& nl, double h, long n) {
  StageWeights s;
  s.start.resize(n);
  s.mid.resize(n);
  s.end.resize(n);
  for (long i = 0; i < n; ++i) {
    s.start[i] = nl.V(i * h);
    s.mid[i] = nl.V((i + 0.5) * h);
    s.end[i] = nl.V((i + 1) * h);
  }
  return s;
}

// |y|^{−b} with the first cell replaced by its average h^{−b}/(1 − b).
inline StageWeights singular_weights(double b, double h, long n) {
  StageWeights s;
  s.start.resize(n);
  s.mid.resize(n);
  s.end.resize(n);
  const double cell = std::pow(h, -b) / (1.0 - b);
  for (long i = 0; i < n; ++i) {
    if (i == 0) {
      s.start[i] = s.mid[i] = s.end[i] = cell;
    } else {
      s.start[i] = std::pow(i * h, -b);
      s.mid[i] = std::pow((i + 0.5) * h, -b);
      s.end[i] = std::pow((i + 1) * h, -b);
    }
  }
  return s;
}

enum class Outcome { overshoot, undershoot, reached };

struct Trial {
  Outcome outcome = Outcome::reached;
  long index = 0;  // node at which the event was detected
};

// RK4 for w'' = (ξ − weight·g(w)) w from w(0) = a, w'(0) = 0.
template <class G>
Trial integrate(const G& g, const StageWeights& wt, double xi, double h, long n, double a, std::vector<double>* w,
                std::vector<double>* dw) {
  double y = a, z = 0.0;
  if (w) {
    w->assign(1, y);
    dw->assign(1, z);
  }
  auto acc = [&](double weight, double yy) { return (xi - weight * g(yy)) * yy; };
  for (long i = 0; i < n; ++i) {
    const double k1y = z, k1z = acc(wt.start[i], y);
    const double k2y = z + 0.5 * h * k1z, k2z = acc(wt.mid[i], y + 0.5 * h * k1y);
    const double k3y = z + 0.5 * h * k2z, k3z = acc(wt.mid[i], y + 0.5 * h * k2y);
    const double k4y = z + h * k3z, k4z = acc(wt.end[i], y + h * k3y);
    y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    z += h / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
    if (w) {
      w->push_back(y);
      dw->push_back(z);
    }
    if (!(y > 0.0)) return {Outcome::overshoot, i + 1};
    if (z > 0.0) return {Outcome::undershoot, i + 1};
  }
  return {Outcome::reached, n};
}

template <class G>
Profile shoot(const G& g, const StageWeights& wt, double xi, double h, long n, const ShootOptions& opt,
              double default_guess, const std::function<double(long, double)>& f_at_node) {
  auto run = [&](double a) { return integrate(g, wt, xi, h, n, a, nullptr, nullptr); };
  double lo = 0.0, hi = 0.0;
  const double guess = opt.guess.value_or(default_guess);
  if (!(guess > 0.0)) throw InvalidArgument("initial guess for w(0) must be positive");
  double a = std::min(guess, opt.w_max);
  if (run(a).outcome == Outcome::overshoot) {
    hi = a;
    for (int it = 0; it < 200; ++it) {
      a *= 0.5;
      if (run(a).outcome != Outcome::overshoot) {
        lo = a;
        break;
      }
    }
    if (lo == 0.0) throw ConvergenceError("shooting: no undershooting w(0) found below the initial guess");
  } else {
    lo = a;
    while (true) {
      a = std::min(2.0 * a, opt.w_max);
      if (run(a).outcome == Outcome::overshoot) {
        hi = a;
        break;
      }
      lo = a;
      if (a >= opt.w_max) {
        std::ostringstream os;
        os << "shooting: bracket not found in w(0) in (0, " << opt.w_max << "] at xi = " << xi
           << " (for AL this indicates xi at or beyond the linear threshold)";
        throw ConvergenceError(os.str());
      }
    }
  }
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (run(mid).outcome == Outcome::overshoot)
      hi = mid;
    else
      lo = mid;
  }

  Profile P;
  P.xi = xi;
  P.h = h;
  const Trial tr = integrate(g, wt, xi, h, n, lo, &P.w, &P.dw);
  // Last trustworthy node: one before the event (or the end).
  long last = tr.outcome == Outcome::reached ? n : tr.index - 1;
  long s = -1;
  for (long i = 1; i <= last; ++i)
    if (P.w[i] <= opt.splice_ratio * P.w[0]) {
      s = i;
      break;
    }
  if (s < 0 && tr.outcome != Outcome::reached) s = last;
  P.w.resize(n + 1, 0.0);
  P.dw.resize(n + 1, 0.0);
  if (s >= 0) {
    const double kappa = -P.dw[s] / P.w[s];
    if (!(kappa > 0.0)) throw ConvergenceError("shooting: profile is not decaying at the splice point");
    for (long i = s + 1; i <= n; ++i) {
      P.w[i] = P.w[s] * std::exp(-kappa * (i - s) * h);
      P.dw[i] = -kappa * P.w[i];
    }
    P.splice = s;
  }

  // Shape checks: positive and decreasing.
  long sign_changes = 0;
  for (long i = 1; i <= n; ++i) {
    if ((P.w[i] <= 0.0) != (P.w[i - 1] <= 0.0)) ++sign_changes;
  }
  for (long i = 1; i <= n; ++i) {
    if (P.w[i] > P.w[i - 1] || (P.w[i] == P.w[i - 1] && P.w[i] > 0.0)) {
      std::ostringstream os;
      os << "shooting: profile not monotone at x = " << i * h << " (" << sign_changes << " node(s))";
      throw ConvergenceError(os.str());
    }
  }
  if (!(P.w.back() <= opt.tol)) {
    std::ostringstream os;
    os << "shooting: tail w(R) = " << P.w.back() << " exceeds " << opt.tol << "; enlarge R";
    throw ConvergenceError(os.str());
  }

  // Fourth-order residual of w'' + f w − ξ w on interior nodes (even reflection at 0).
  auto W = [&](long i) { return P.w[std::abs(i)]; };
  double res = 0.0;
  for (long i = 0; i + 2 <= n; ++i) {
    const double d2 = (-W(i - 2) + 16.0 * W(i - 1) - 30.0 * W(i) + 16.0 * W(i + 1) - W(i + 2)) / (12.0 * h * h);
    res = std::max(res, std::abs(d2 + (f_at_node(i, P.w[i]) - xi) * P.w[i]));
  }
  P.residual = res;
  if (!(res <= opt.residual_tol * std::max(1.0, P.w[0]))) {
    std::ostringstream os;
    os << "shooting: stationary residual " << res << " exceeds tolerance at xi = " << xi;
    throw ConvergenceError(os.str());
  }

  double q = 0.5 * (P.w[0] * P.w[0] + P.w[n] * P.w[n]);
  for (long i = 1; i < n; ++i) q += P.w[i] * P.w[i];
  P.Q = q * h;
  return P;
}

}  // namespace detail

/// Even, positive, decreasing solution of w'' + f(x, w²)w = ξw by bisection on w(0).
inline Profile shoot_profile(const InhomogeneousNonlinearity& nl, double xi, const LineGrid& grid,
                             const ShootOptions& opt = {}) {
  if (!(xi > 0.0)) throw InvalidArgument("xi must be > 0 for a decaying profile");
  if (grid.R * std::sqrt(xi) < 10.0)
    throw InvalidArgument("line grid too short: need R >= 10/sqrt(xi)");
  const long n = grid.n();
  const auto wt = detail::profile_weights(nl, grid.h, n);
  const auto g = [&](double w) { return nl.g(w); };
  double guess = 1.0;
  if (nl.kind() == NonlinearityKind::PT) guess = std::pow(0.5 * (nl.sigma() + 1.0) * xi, 1.0 / (nl.sigma() - 1.0));
  return detail::shoot(g, wt, xi, grid.h, n, opt, guess,
                       [&](long i, double w) { return nl.f(i * grid.h, w); });
}

/// Positive even solution of v'' − v + |y|^{−b}|v|^{σ−1}v = 0 (first cell uses the cell average of |y|^{−b}).
inline Profile limit_ground_state(double b, double sigma, const LineGrid& grid, const ShootOptions& opt = {}) {
  if (!(b >= 0.0 && b < 1.0)) throw InvalidArgument("b must lie in [0, 1)");
  if (!(sigma > 1.0)) throw InvalidArgument("sigma must be > 1");
  const long n = grid.n();
  const auto wt = detail::singular_weights(b, grid.h, n);
  const InhomogeneousNonlinearity pt(NonlinearityKind::PT, sigma, 0.0, false);
  const auto g = [&](double w) { return pt.g(w); };
  const double cell = std::pow(grid.h, -b) / (1.0 - b);
  const double guess = std::pow(0.5 * (sigma + 1.0), 1.0 / (sigma - 1.0));
  ShootOptions o = opt;
  // The singular weight limits the residual near y = 0, so only the tail criteria apply there.
  if (b > 0.0) o.residual_tol = std::numeric_limits<double>::infinity();
  return detail::shoot(g, wt, 1.0, grid.h, n, o, guess, [&](long i, double w) {
    return (i == 0 ? cell : std::pow(i * grid.h, -b)) * pt.g(w);
  });
}

/// u(x) = k^{(2−b)/(σ−1)} v(kx) with ξ = k², resampled on `xgrid`.
inline Profile scaling_transform(double xi, double b, double sigma, const Profile& v, const LineGrid& xgrid) {
  if (!(xi > 0.0)) throw InvalidArgument("xi must be > 0");
  const double k = std::sqrt(xi), amp = std::pow(k, (2.0 - b) / (sigma - 1.0));
  Profile u;
  u.xi = xi;
  u.h = xgrid.h;
  const long n = xgrid.n();
  for (long i = 0; i <= n; ++i) {
    const double y = k * i * xgrid.h;
    u.w.push_back(amp * v.at(y));
    u.dw.push_back(amp * k * v.derivative_at(y));
  }
  double q = 0.5 * (u.w[0] * u.w[0] + u.w[n] * u.w[n]);
  for (long i = 1; i < n; ++i) q += u.w[i] * u.w[i];
  u.Q = q * u.h;
  return u;
}

/// Inverse of scaling_transform: v(y) = k^{−(2−b)/(σ−1)} w(y/k), resampled on `ygrid`.
inline Profile to_limit_variables(double xi, double b, double sigma, const Profile& w, const LineGrid& ygrid) {
  if (!(xi > 0.0)) throw InvalidArgument("xi must be > 0");
  const double k = std::sqrt(xi), amp = std::pow(k, -(2.0 - b) / (sigma - 1.0));
  Profile v;
  v.xi = 1.0;
  v.h = ygrid.h;
  const long n = ygrid.n();
  for (long i = 0; i <= n; ++i) {
    const double x = i * ygrid.h / k;
    v.w.push_back(amp * w.at(x));
    v.dw.push_back(amp / k * w.derivative_at(x));
  }
  double q = 0.5 * (v.w[0] * v.w[0] + v.w[n] * v.w[n]);
  for (long i = 1; i < n; ++i) q += v.w[i] * v.w[i];
  v.Q = q * v.h;
  return v;
}

}  // namespace emstab::standing
