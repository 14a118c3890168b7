#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "emstab/core/error.hpp"

namespace emstab::spherical {

/// Natural cubic spline through (r_i, V_i); C² on [r_0, r_{n-1}].
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> r, std::vector<double> v) : r_(std::move(r)), v_(std::move(v)) {
    const std::size_t n = r_.size();
    if (n < 4 || v_.size() != n) throw InvalidArgument("potential table needs >= 4 matching (r, V) samples");
    for (std::size_t i = 1; i < n; ++i)
      if (!(r_[i] > r_[i - 1])) throw InvalidArgument("potential table radii must be strictly increasing");
    if (!(r_[0] > 0.0)) throw InvalidArgument("potential table radii must be positive");
    // Second derivatives m_i with m_0 = m_{n-1} = 0 (Thomas algorithm).
    m_.assign(n, 0.0);
    std::vector<double> c(n, 0.0), d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = r_[i] - r_[i - 1], h1 = r_[i + 1] - r_[i];
      const double a = h0 / 6.0, b = (h0 + h1) / 3.0, cc = h1 / 6.0;
      const double rhs = (v_[i + 1] - v_[i]) / h1 - (v_[i] - v_[i - 1]) / h0;
      const double den = b - a * c[i - 1];
      c[i] = cc / den;
      d[i] = (rhs - a * d[i - 1]) / den;
    }
    for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(n) - 2; i >= 1; --i) m_[i] = d[i] - c[i] * m_[i + 1];
  }

  double value(double r, int deriv) const {
    if (r < r_.front() || r > r_.back())
      throw InvalidArgument("radius " + std::to_string(r) + " outside the potential table range");
    auto it = std::upper_bound(r_.begin(), r_.end(), r);
    std::size_t i = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - r_.begin(), 1), r_.size() - 1);
    const double h = r_[i] - r_[i - 1];
    const double A = (r_[i] - r) / h, B = (r - r_[i - 1]) / h;
    if (deriv == 0)
      return A * v_[i - 1] + B * v_[i] + ((A * A * A - A) * m_[i - 1] + (B * B * B - B) * m_[i]) * h * h / 6.0;
    if (deriv == 1)
      return (v_[i] - v_[i - 1]) / h - (3.0 * A * A - 1.0) / 6.0 * h * m_[i - 1] + (3.0 * B * B - 1.0) / 6.0 * h * m_[i];
    return A * m_[i - 1] + B * m_[i];
  }

  const std::vector<double>& radii() const { return r_; }
  const std::vector<double>& values() const { return v_; }

 private:
  std::vector<double> r_, v_, m_;
};

enum class PotentialFamily { power, kepler, harmonic, table, custom };

/// Radial potential V(r) with first and second derivatives.
class RadialPotential {
 public:
  /// V(r) = s·r^p
  static RadialPotential power(double s, double p) {
    RadialPotential V;
    V.family_ = PotentialFamily::power;
    V.s_ = s;
    V.p_ = p;
    return V;
  }
  /// V(r) = −1/r
  static RadialPotential kepler() {
    RadialPotential V;
    V.family_ = PotentialFamily::kepler;
    return V;
  }
  /// V(r) = r²/2
  static RadialPotential harmonic() {
    RadialPotential V;
    V.family_ = PotentialFamily::harmonic;
    return V;
  }
  static RadialPotential table(std::vector<double> r, std::vector<double> v) {
    RadialPotential V;
    V.family_ = PotentialFamily::table;
    V.spline_ = std::make_shared<CubicSpline>(std::move(r), std::move(v));
    return V;
  }
  using Fn = std::function<double(double)>;
  static RadialPotential custom(Fn v, Fn dv, Fn d2v) {
    RadialPotential V;
    V.family_ = PotentialFamily::custom;
    V.custom_ = std::make_shared<std::array<Fn, 3>>(std::array<Fn, 3>{std::move(v), std::move(dv), std::move(d2v)});
    return V;
  }

  PotentialFamily family() const { return family_; }
  std::string name() const {
    switch (family_) {
      case PotentialFamily::power: return "power";
      case PotentialFamily::kepler: return "kepler";
      case PotentialFamily::harmonic: return "harmonic";
      case PotentialFamily::table: return "table";
      case PotentialFamily::custom: return "custom";
    }
    return "unknown";
  }

  double V(double r) const { return eval(r, 0); }
  double dV(double r) const { return eval(r, 1); }
  double d2V(double r) const { return eval(r, 2); }

 private:
  double eval(double r, int d) const {
    switch (family_) {
      case PotentialFamily::power:
        if (d == 0) return s_ * std::pow(r, p_);
        if (d == 1) return s_ * p_ * std::pow(r, p_ - 1.0);
        return s_ * p_ * (p_ - 1.0) * std::pow(r, p_ - 2.0);
      case PotentialFamily::kepler:
        if (d == 0) return -1.0 / r;
        if (d == 1) return 1.0 / (r * r);
        return -2.0 / (r * r * r);
      case PotentialFamily::harmonic:
        if (d == 0) return 0.5 * r * r;
        if (d == 1) return r;
        return 1.0;
      case PotentialFamily::table: return spline_->value(r, d);
      case PotentialFamily::custom: return (*custom_)[d](r);
    }
    return 0.0;
  }

  PotentialFamily family_ = PotentialFamily::harmonic;
  double s_ = 1.0, p_ = 2.0;
  std::shared_ptr<const CubicSpline> spline_;
  std::shared_ptr<const std::array<Fn, 3>> custom_;
};

}  // namespace emstab::spherical
