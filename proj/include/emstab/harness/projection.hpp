#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>

#include "emstab/core/error.hpp"
#include "emstab/core/finite_diff.hpp"

namespace emstab::harness {

using ConstraintFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using JacobianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

struct ProjectionOptions {
  double tol = 1e-10;
  int max_iter = 50;
  double fd_step = 1e-7;  // used when no Jacobian is supplied
};

namespace detail {

inline Eigen::MatrixXd fd_jacobian(const ConstraintFn& F, const Eigen::VectorXd& u, double h) {
  const Eigen::VectorXd f0 = F(u);
  Eigen::MatrixXd J(f0.size(), u.size());
  Eigen::VectorXd x = u;
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    const double s = h * std::max(1.0, std::abs(u[j]));
    x[j] = u[j] + s;
    const Eigen::VectorXd fp = F(x);
    x[j] = u[j] - s;
    const Eigen::VectorXd fm = F(x);
    x[j] = u[j];
    J.col(j) = (fp - fm) / (2.0 * s);
  }
  return J;
}

}  // namespace detail

/// Newton iteration u ← u + Jᵀ(JJᵀ)⁻¹(μ − F(u)) (minimum-norm step along the constraint
/// gradients) until ‖F(u) − μ‖ ≤ tol.
inline Eigen::VectorXd project_to_level_set(const Eigen::VectorXd& u, const ConstraintFn& F, const Eigen::VectorXd& mu,
                                            const JacobianFn& jacobian = {}, const ProjectionOptions& opt = {}) {
  Eigen::VectorXd x = u;
  for (int it = 0; it <= opt.max_iter; ++it) {
    const Eigen::VectorXd r = mu - F(x);
    if (r.size() != mu.size()) throw InvalidArgument("constraint map and target have different dimensions");
    if (!r.allFinite()) throw ConvergenceError("level-set projection produced a non-finite constraint value");
    if (r.norm() <= opt.tol) return x;
    if (it == opt.max_iter) break;
    const Eigen::MatrixXd J = jacobian ? jacobian(x) : detail::fd_jacobian(F, x, opt.fd_step);
    x += J.completeOrthogonalDecomposition().solve(r);
  }
  throw ConvergenceError("level-set projection: Newton did not reach " + std::to_string(opt.tol) + " in " +
                         std::to_string(opt.max_iter) + " iterations");
}

}  // namespace emstab::harness
