#pragma once

#include <Eigen/Dense>

#include <functional>

#include "emstab/core/error.hpp"

namespace emstab {

using ScalarFn = std::function<double(const Eigen::VectorXd&)>;

/// Centered-difference gradient, component-wise.
inline Eigen::VectorXd finite_diff_gradient(const ScalarFn& f, const Eigen::VectorXd& u, double h) {
  if (!(h > 0.0)) throw InvalidArgument("finite-difference step must be positive");
  Eigen::VectorXd g(u.size());
  Eigen::VectorXd x = u;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    x[i] = u[i] + h;
    const double fp = f(x);
    x[i] = u[i] - h;
    const double fm = f(x);
    x[i] = u[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

/// Centered-difference Hessian (symmetric by construction).
inline Eigen::MatrixXd finite_diff_hessian(const ScalarFn& f, const Eigen::VectorXd& u, double h) {
  if (!(h > 0.0)) throw InvalidArgument("finite-difference step must be positive");
  const Eigen::Index m = u.size();
  Eigen::MatrixXd H(m, m);
  Eigen::VectorXd x = u;
  const double f0 = f(u);
  for (Eigen::Index i = 0; i < m; ++i) {
    x[i] = u[i] + h;
    const double fp = f(x);
    x[i] = u[i] - h;
    const double fm = f(x);
    x[i] = u[i];
    H(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
    for (Eigen::Index j = 0; j < i; ++j) {
      x[i] = u[i] + h;
      x[j] = u[j] + h;
      const double fpp = f(x);
      x[j] = u[j] - h;
      const double fpm = f(x);
      x[i] = u[i] - h;
      const double fmm = f(x);
      x[j] = u[j] + h;
      const double fmp = f(x);
      x[i] = u[i];
      x[j] = u[j];
      H(i, j) = H(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
    }
  }
  return H;
}

}  // namespace emstab
