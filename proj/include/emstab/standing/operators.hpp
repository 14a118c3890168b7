#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "emstab/core/banded.hpp"
#include "emstab/standing/nonlinearity.hpp"
#include "emstab/standing/profile.hpp"

namespace emstab::standing {

/// Second-order centred-difference discretizations on [−R, R] with Dirichlet ends.
/// Unknowns sit at x_m = m·h, m = −(n−1), …, n−1.
struct LOperators {
  BandedSymmetricMatrix plus;
  BandedSymmetricMatrix minus;
  std::vector<double> w;   // profile on the unknowns
  std::vector<double> dw;  // w' on the unknowns (odd)
  double h = 0.0;
};

namespace detail {

template <class Potential>
BandedSymmetricMatrix schrodinger(long n, double h, double shift, Potential&& pot) {
  const int dim = static_cast<int>(2 * n - 1);
  BandedSymmetricMatrix M(dim, 1);
  const double inv = 1.0 / (h * h);
  for (int i = 0; i < dim; ++i) {
    const long m = i - (n - 1);
    M.set(i, i, 2.0 * inv + shift - pot(m));
    if (i + 1 < dim) M.set(i + 1, i, -inv);
  }
  return M;
}

}  // namespace detail

/// L⁺ = −∂² + ξ − [f + 2∂₂f w²],  L⁻ = −∂² + ξ − f, evaluated at the profile.
inline LOperators assemble_L_operators(const InhomogeneousNonlinearity& nl, double xi, const Profile& P) {
  const long n = static_cast<long>(P.w.size()) - 1;
  const double h = P.h;
  LOperators L{detail::schrodinger(n, h, xi, [&](long m) { return nl.lplus_potential(m * h, P.w[std::abs(m)]); }),
               detail::schrodinger(n, h, xi, [&](long m) { return nl.f(m * h, P.w[std::abs(m)]); }),
               {},
               {},
               h};
  for (long m = -(n - 1); m <= n - 1; ++m) {
    L.w.push_back(P.w[std::abs(m)]);
    L.dw.push_back(m < 0 ? -P.dw[-m] : P.dw[m]);
  }
  return L;
}

/// Upper end ξ∞ of the AL curve: minus the smallest Dirichlet eigenvalue of −∂² − V on [−R, R].
inline double xi_infinity(const InhomogeneousNonlinearity& nl, const LineGrid& grid) {
  const long n = grid.n();
  const auto M = detail::schrodinger(n, grid.h, 0.0, [&](long m) { return nl.V(m * grid.h); });
  return -eig_banded(M, 1).eigenvalues.front();
}

struct SpectralConditionOptions {
  int count = 8;               // eigenpairs computed per operator
  double continuum_gap = 1e-2; // eigenvalues above ξ − gap count as discretized continuum
  double morse_tol = 1e-8;
  double kernel_tol = 1e-4;    // |λ₀(L⁻)| bound
  double cosine_min = 0.999;
  double simple_gap = 1e-8;
};

struct SpectralConditions {
  std::vector<double> lplus;   // discrete eigenvalues of L⁺ below the continuum cut
  std::vector<double> lminus;  // same for L⁻
  int morse_index = 0;         // Morse(L⁺)
  double gap = 0.0;            // min |λ| over the discrete spectrum of L⁺
  double lambda0_minus = 0.0;  // ground eigenvalue of L⁻
  double cosine = 0.0;         // |cos| between the L⁻ ground state and w
  bool simple = true;          // all discrete eigenvalues separated by more than simple_gap
  double translation_residual = 0.0;  // ‖L⁺ w'‖/‖w'‖ (vanishes up to O(h²) when b = 0)
  bool c1 = false;             // Morse(L⁺) = 1 and L⁺ has no kernel
  bool c2 = false;             // λ₀(L⁻) ≈ 0 with ground state ∥ w
};

inline SpectralConditions spectral_conditions(const InhomogeneousNonlinearity& nl, const Profile& P,
                                              const SpectralConditionOptions& opt = {}) {
  const double xi = P.xi;
  const LOperators L = assemble_L_operators(nl, xi, P);
  const int count = std::min(opt.count, L.plus.n());
  const auto rp = eig_banded(L.plus, count);
  const auto rm = eig_banded(L.minus, count);
  const double cut = xi - opt.continuum_gap;
  SpectralConditions s;
  for (double l : rp.eigenvalues)
    if (l < cut) s.lplus.push_back(l);
  for (double l : rm.eigenvalues)
    if (l < cut) s.lminus.push_back(l);
  s.morse_index = static_cast<int>(std::count_if(s.lplus.begin(), s.lplus.end(), [&](double l) { return l < -opt.morse_tol; }));
  s.gap = INFINITY;
  for (double l : s.lplus) s.gap = std::min(s.gap, std::abs(l));
  auto simple = [&](const std::vector<double>& e) {
    for (std::size_t i = 1; i < e.size(); ++i)
      if (e[i] - e[i - 1] <= opt.simple_gap) return false;
    return true;
  };
  s.simple = simple(s.lplus) && simple(s.lminus);
  s.lambda0_minus = rm.eigenvalues.front();
  const auto& v = rm.eigenvectors.front();
  double vw = 0.0, ww = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    vw += v[i] * L.w[i];
    ww += L.w[i] * L.w[i];
    vv += v[i] * v[i];
  }
  s.cosine = (ww > 0.0 && vv > 0.0) ? std::abs(vw) / std::sqrt(ww * vv) : 0.0;
  const auto Ld = L.plus.apply(L.dw);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < Ld.size(); ++i) {
    num += Ld[i] * Ld[i];
    den += L.dw[i] * L.dw[i];
  }
  s.translation_residual = den > 0.0 ? std::sqrt(num / den) : 0.0;
  s.c1 = s.morse_index == 1 && s.gap > opt.simple_gap && s.simple;
  s.c2 = std::abs(s.lambda0_minus) <= opt.kernel_tol && s.cosine >= opt.cosine_min;
  return s;
}

}  // namespace emstab::standing
