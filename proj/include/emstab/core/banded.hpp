#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "emstab/core/error.hpp"

extern "C" {
double dlamch_(const char* cmach, std::size_t);
void dstebz_(const char* range, const char* order, const int* n, const double* vl, const double* vu, const int* il,
             const int* iu, const double* abstol, const double* d, const double* e, int* m, int* nsplit, double* w,
             int* iblock, int* isplit, double* work, int* iwork, int* info, std::size_t, std::size_t);
void dstein_(const int* n, const double* d, const double* e, const int* m, const double* w, const int* iblock,
             const int* isplit, double* z, const int* ldz, double* work, int* iwork, int* ifail, int* info);
void dsbevx_(const char* jobz, const char* range, const char* uplo, const int* n, const int* kd, double* ab,
             const int* ldab, double* q, const int* ldq, const double* vl, const double* vu, const int* il,
             const int* iu, const double* abstol, int* m, double* w, double* z, const int* ldz, double* work,
             int* iwork, int* ifail, int* info, std::size_t, std::size_t, std::size_t);
}

namespace emstab {

/// Symmetric matrix with half-bandwidth w, stored by diagonals: diag(d)[i] = M(i+d, i).
class BandedSymmetricMatrix {
 public:
  BandedSymmetricMatrix(int n, int w) : n_(n), w_(w), band_(static_cast<std::size_t>(w + 1) * n, 0.0) {
    if (n < 1) throw InvalidArgument("banded matrix dimension must be positive");
    if (w < 0 || w > n - 1) throw InvalidArgument("invalid bandwidth");
  }

  int n() const { return n_; }
  int bandwidth() const { return w_; }

  double get(int i, int j) const {
    if (i < j) std::swap(i, j);
    const int d = i - j;
    if (d > w_) return 0.0;
    return band_[static_cast<std::size_t>(d) * n_ + j];
  }

  void set(int i, int j, double v) {
    if (i < j) std::swap(i, j);
    const int d = i - j;
    if (d > w_) throw InvalidArgument("entry outside the band");
    band_[static_cast<std::size_t>(d) * n_ + j] = v;
  }

  /// Sub-diagonal d (length n − d).
  const double* diagonal(int d) const { return band_.data() + static_cast<std::size_t>(d) * n_; }

  std::vector<double> apply(const std::vector<double>& x) const {
    std::vector<double> y(n_, 0.0);
    for (int i = 0; i < n_; ++i) y[i] = get(i, i) * x[i];
    for (int d = 1; d <= w_; ++d) {
      const double* b = diagonal(d);
      for (int j = 0; j + d < n_; ++j) {
        y[j + d] += b[j] * x[j];
        y[j] += b[j] * x[j + d];
      }
    }
    return y;
  }

  /// Max absolute row sum (bounds the spectral norm).
  double norm() const {
    std::vector<double> r(n_, 0.0);
    for (int i = 0; i < n_; ++i) r[i] = std::abs(get(i, i));
    for (int d = 1; d <= w_; ++d) {
      const double* b = diagonal(d);
      for (int j = 0; j + d < n_; ++j) {
        r[j + d] += std::abs(b[j]);
        r[j] += std::abs(b[j]);
      }
    }
    return *std::max_element(r.begin(), r.end());
  }

  bool finite() const {
    return std::all_of(band_.begin(), band_.end(), [](double v) { return std::isfinite(v); });
  }

 private:
  int n_;
  int w_;
  std::vector<double> band_;
};

/// Eigenpairs of a discretized self-adjoint operator, ascending.
struct SpectralReport {
  std::vector<double> eigenvalues;
  std::vector<std::vector<double>> eigenvectors;
  std::vector<double> residuals;  // ‖Mv − λv‖ per pair
  double matrix_norm = 0.0;

  /// Count of eigenvalues below −tol.
  int morse_index(double tol = 1e-8) const {
    return static_cast<int>(std::count_if(eigenvalues.begin(), eigenvalues.end(), [&](double l) { return l < -tol; }));
  }

  /// Smallest |λ| among the computed eigenvalues.
  double min_abs() const {
    double m = INFINITY;
    for (double l : eigenvalues) m = std::min(m, std::abs(l));
    return m;
  }

  /// Smallest spacing between consecutive computed eigenvalues.
  double min_spacing() const {
    double m = INFINITY;
    for (std::size_t i = 1; i < eigenvalues.size(); ++i) m = std::min(m, eigenvalues[i] - eigenvalues[i - 1]);
    return m;
  }
};

namespace detail {

inline void finish_report(const BandedSymmetricMatrix& M, SpectralReport& rep) {
  // Sort ascending (bisection output is grouped by split blocks).
  std::vector<std::size_t> idx(rep.eigenvalues.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return rep.eigenvalues[a] < rep.eigenvalues[b]; });
  SpectralReport sorted;
  sorted.matrix_norm = M.norm();
  for (auto i : idx) {
    sorted.eigenvalues.push_back(rep.eigenvalues[i]);
    sorted.eigenvectors.push_back(std::move(rep.eigenvectors[i]));
  }
  const double tol = 1e-10 * std::max(sorted.matrix_norm, 1e-300);
  for (std::size_t p = 0; p < sorted.eigenvalues.size(); ++p) {
    auto& v = sorted.eigenvectors[p];
    double nv = 0.0;
    for (double x : v) nv += x * x;
    nv = std::sqrt(nv);
    for (double& x : v) x /= nv;
    const auto Mv = M.apply(v);
    double r = 0.0;
    for (int i = 0; i < M.n(); ++i) {
      const double e = Mv[i] - sorted.eigenvalues[p] * v[i];
      r += e * e;
    }
    r = std::sqrt(r);
    sorted.residuals.push_back(r);
    if (!(r <= tol)) {
      std::ostringstream os;
      os << "eigenpair " << p << " residual " << r << " exceeds " << tol << " (lambda = " << sorted.eigenvalues[p]
         << ", n = " << M.n() << ")";
      throw ConvergenceError(os.str());
    }
  }
  rep = std::move(sorted);
}

}  // namespace detail

/// The `count` smallest eigenvalues with orthonormal eigenvectors.
/// Tridiagonal input: LAPACK bisection (dstebz) + inverse iteration (dstein).
/// Wider bands: LAPACK dsbevx, limited to n ≤ 4000 because it needs an n×n reduction matrix.
inline SpectralReport eig_banded(const BandedSymmetricMatrix& M, int count) {
  const int n = M.n();
  if (count < 1 || count > n) throw InvalidArgument("eigenpair count must be in [1, n]");
  if (!M.finite()) throw InvalidArgument("banded matrix has non-finite entries");
  const double abstol = 2.0 * dlamch_("S", 1);
  const double vl = 0.0, vu = 0.0;
  const int il = 1, iu = count;
  SpectralReport rep;
  int m = 0, info = 0;

  if (M.bandwidth() <= 1) {
    std::vector<double> d(M.diagonal(0), M.diagonal(0) + n);
    std::vector<double> e(std::max(n - 1, 1), 0.0);
    if (M.bandwidth() == 1) std::copy(M.diagonal(1), M.diagonal(1) + n - 1, e.begin());
    int nsplit = 0;
    std::vector<double> w(n), work(4 * n);
    std::vector<int> iblock(n), isplit(n), iwork(3 * n);
    dstebz_("I", "B", &n, &vl, &vu, &il, &iu, &abstol, d.data(), e.data(), &m, &nsplit, w.data(), iblock.data(),
            isplit.data(), work.data(), iwork.data(), &info, 1, 1);
    if (info != 0) throw ConvergenceError("bisection (dstebz) failed, info = " + std::to_string(info));
    std::vector<double> z(static_cast<std::size_t>(n) * m), work2(5 * n);
    std::vector<int> iwork2(n), ifail(m);
    dstein_(&n, d.data(), e.data(), &m, w.data(), iblock.data(), isplit.data(), z.data(), &n, work2.data(),
            iwork2.data(), ifail.data(), &info);
    if (info != 0) {
      std::ostringstream os;
      os << "inverse iteration (dstein) did not converge for " << info << " eigenvector(s); first failing index "
         << ifail[0];
      throw ConvergenceError(os.str());
    }
    for (int p = 0; p < m; ++p) {
      rep.eigenvalues.push_back(w[p]);
      rep.eigenvectors.emplace_back(z.begin() + static_cast<std::ptrdiff_t>(p) * n,
                                    z.begin() + static_cast<std::ptrdiff_t>(p + 1) * n);
    }
  } else {
    if (n > 4000) throw InvalidArgument("banded eigensolver with bandwidth > 1 is limited to n <= 4000");
    const int kd = M.bandwidth(), ldab = kd + 1;
    std::vector<double> ab(static_cast<std::size_t>(ldab) * n, 0.0);
    for (int j = 0; j < n; ++j)
      for (int dd = 0; dd <= kd && j + dd < n; ++dd) ab[dd + static_cast<std::size_t>(j) * ldab] = M.get(j + dd, j);
    std::vector<double> q(static_cast<std::size_t>(n) * n), w(n), z(static_cast<std::size_t>(n) * count),
        work(7 * n);
    std::vector<int> iwork(5 * n), ifail(n);
    dsbevx_("V", "I", "L", &n, &kd, ab.data(), &ldab, q.data(), &n, &vl, &vu, &il, &iu, &abstol, &m, w.data(),
            z.data(), &n, work.data(), iwork.data(), ifail.data(), &info, 1, 1, 1);
    if (info != 0) {
      std::ostringstream os;
      os << "banded eigensolver (dsbevx) failed, info = " << info;
      throw ConvergenceError(os.str());
    }
    for (int p = 0; p < m; ++p) {
      rep.eigenvalues.push_back(w[p]);
      rep.eigenvectors.emplace_back(z.begin() + static_cast<std::ptrdiff_t>(p) * n,
                                    z.begin() + static_cast<std::ptrdiff_t>(p + 1) * n);
    }
  }
  if (m != count) throw ConvergenceError("eigensolver returned " + std::to_string(m) + " of " + std::to_string(count) + " eigenvalues");
  detail::finish_report(M, rep);
  return rep;
}

}  // namespace emstab
