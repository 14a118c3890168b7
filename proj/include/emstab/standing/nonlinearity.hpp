#pragma once

#include <cmath>
#include <string>

#include "emstab/core/error.hpp"

namespace emstab::standing {

enum class NonlinearityKind { PT, AL };

inline std::string to_string(NonlinearityKind k) { return k == NonlinearityKind::PT ? "PT" : "AL"; }

/// f(x, w²) = V(x)|w|^{σ−1} (PT) or V(x)|w|^{σ−1}/(1 + |w|^{σ−1}) (AL), V(x) = (1 + x²)^{−b/2}.
class InhomogeneousNonlinearity {
 public:
  /// `check_range` enforces the admissible range 1 < σ < 5 − 2b; it can be lifted for
  /// supercritical sign experiments.
  InhomogeneousNonlinearity(NonlinearityKind kind, double sigma, double b, bool check_range = true)
      : kind_(kind), sigma_(sigma), b_(b), p_(sigma - 1.0) {
    if (!(sigma > 1.0)) throw InvalidArgument("sigma must be > 1");
    if (!(b >= 0.0 && b < 1.0)) throw InvalidArgument("b must lie in [0, 1)");
    if (check_range && !(sigma < 5.0 - 2.0 * b))
      throw InvalidArgument("sigma must satisfy 1 < sigma < 5 - 2b (got sigma = " + std::to_string(sigma) +
                            ", b = " + std::to_string(b) + ")");
    ip_ = (p_ == std::round(p_) && p_ <= 4.0) ? static_cast<int>(p_) : 0;
  }

  NonlinearityKind kind() const { return kind_; }
  double sigma() const { return sigma_; }
  double b() const { return b_; }

  double V(double x) const { return b_ == 0.0 ? 1.0 : std::pow(1.0 + x * x, -0.5 * b_); }
  /// x V'(x) / V(x)
  double x_log_dV(double x) const { return -b_ * x * x / (1.0 + x * x); }

  /// |w|^{σ−1}
  double power(double w) const {
    const double a = std::abs(w);
    switch (ip_) {
      case 1: return a;
      case 2: return a * a;
      case 3: return a * a * a;
      case 4: return (a * a) * (a * a);
      default: return std::pow(a, p_);
    }
  }

  /// f / V as a function of w.
  double g(double w) const {
    const double s = power(w);
    return kind_ == NonlinearityKind::PT ? s : s / (1.0 + s);
  }

  /// ∂₂f · w² / V.
  double g_prime_w2(double w) const {
    const double s = power(w);
    if (kind_ == NonlinearityKind::PT) return 0.5 * p_ * s;
    return 0.5 * p_ * s / ((1.0 + s) * (1.0 + s));
  }

  double f(double x, double w) const { return V(x) * g(w); }
  /// Potential of L⁺: f + 2∂₂f w².
  double lplus_potential(double x, double w) const { return V(x) * (g(w) + 2.0 * g_prime_w2(w)); }
  /// Integrand weight of the integral identity: 2f + x∂₁f − ∂₂f w².
  double intid_weight(double x, double w) const {
    return V(x) * ((2.0 + x_log_dV(x)) * g(w) - g_prime_w2(w));
  }

 private:
  NonlinearityKind kind_;
  double sigma_, b_, p_;
  int ip_ = 0;
};

/// Sign of d/dξ ‖w_ξ‖² for small ξ: +1 iff σ < 5 − 2b, −1 iff σ > 5 − 2b, 0 at equality.
inline int vk_small_xi_sign(double sigma, double b) {
  if (!(sigma > 1.0)) throw InvalidArgument("sigma must be > 1");
  if (!(b >= 0.0 && b < 1.0)) throw InvalidArgument("b must lie in [0, 1)");
  const double s = 4.0 - 2.0 * b - (sigma - 1.0);
  if (std::abs(s) <= 1e-14) return 0;
  return s > 0.0 ? 1 : -1;
}

}  // namespace emstab::standing
