#pragma once

#include <Eigen/Dense>

#include <cmath>

namespace vsap {

struct CgOptions {
  double rel_tol = 1e-10;
  int max_iter = 0;  // 0: ten times the system size
};

struct CgReport {
  int iterations = 0;
  double rel_residual = 0.0;
  bool converged = false;
};

/// Norm used by the stopping test of `weighted_cg`.
enum class CgStop { WeightedTwo, Max };

/// Conjugate gradients for an operator that is symmetric positive
/// (semi)definite in the inner product <a, b> = sum_i a_i b_i w_i.
/// `project` is applied to the residual and search direction each
/// iteration; pass an identity for nonsingular systems, or a projection
/// onto the complement of the kernel for singular ones.
template <typename Scalar, typename Apply, typename Project>
CgReport weighted_cg(Apply&& apply, Project&& project,
                     const Eigen::Array<Scalar, Eigen::Dynamic, 1>& rhs,
                     const Eigen::Array<Scalar, Eigen::Dynamic, 1>& weight,
                     Eigen::Array<Scalar, Eigen::Dynamic, 1>& x, const CgOptions& options,
                     CgStop stop = CgStop::WeightedTwo) {
  using Vec = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
  auto dot = [&](const Vec& a, const Vec& b) { return (a * b * weight).sum(); };
  auto norm = [&](const Vec& a) {
    return stop == CgStop::Max ? a.abs().maxCoeff() : std::sqrt(dot(a, a));
  };

  const int max_iter = options.max_iter > 0 ? options.max_iter : 10 * static_cast<int>(rhs.size());
  CgReport report;
  const Scalar rhs_norm = norm(rhs);
  if (rhs_norm == Scalar(0)) {
    x.setZero();
    report.converged = true;
    return report;
  }

  Vec r = project(Vec(rhs - apply(x)));
  Vec p = r;
  Scalar rr = dot(r, r);
  report.rel_residual = norm(r) / rhs_norm;
  while (report.rel_residual > options.rel_tol) {
    if (report.iterations >= max_iter) return report;
    const Vec ap = project(apply(p));
    const Scalar curvature = dot(p, ap);
    if (!(curvature > Scalar(0))) return report;
    const Scalar alpha = rr / curvature;
    x += alpha * p;
    r -= alpha * ap;
    const Scalar rr_next = dot(r, r);
    p = r + (rr_next / rr) * p;
    rr = rr_next;
    ++report.iterations;
    report.rel_residual = norm(r) / rhs_norm;
  }
  report.converged = true;
  return report;
}

}  // namespace vsap
