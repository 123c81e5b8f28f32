#include "galbrun/quadrature.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace galbrun {

namespace {

int points_for_order(int order) { return (order + 2) / 2; }

void check_order(int order) {
  if (order < 0 || order > kMaxQuadratureOrder) {
    throw UnsupportedOrderError("quadrature order " + std::to_string(order) +
                                " outside [0, " +
                                std::to_string(kMaxQuadratureOrder) + "]");
  }
}

// One Newton step on the Jacobi polynomial removes the O(eps * n) drift of
// the eigenvalue solver.
double jacobi_polish(int n, double a, double b, double x) {
  for (int it = 0; it < 3; ++it) {
    double p0 = 1.0;
    double p1 = 0.5 * (a - b + (a + b + 2.0) * x);
    double dp0 = 0.0;
    double dp1 = 0.5 * (a + b + 2.0);
    if (n == 1) {
      p0 = p1;
      dp0 = dp1;
    } else {
      for (int k = 2; k <= n; ++k) {
        const double kk = k;
        const double c1 = 2.0 * kk * (kk + a + b) * (2.0 * kk + a + b - 2.0);
        const double c2 = (2.0 * kk + a + b - 1.0) * (a * a - b * b);
        const double c3 = (2.0 * kk + a + b - 2.0) * (2.0 * kk + a + b - 1.0) *
                          (2.0 * kk + a + b);
        const double c4 = 2.0 * (kk + a - 1.0) * (kk + b - 1.0) * (2.0 * kk + a + b);
        const double p2 = ((c2 + c3 * x) * p1 - c4 * p0) / c1;
        const double dp2 = ((c2 + c3 * x) * dp1 + c3 * p1 - c4 * dp0) / c1;
        p0 = p1;
        p1 = p2;
        dp0 = dp1;
        dp1 = dp2;
      }
      p0 = p1;
      dp0 = dp1;
    }
    if (dp0 == 0.0) break;
    const double dx = p0 / dp0;
    x -= dx;
    if (std::abs(dx) < 1e-17) break;
  }
  return x;
}

}  // namespace

void gauss_jacobi(int n, double alpha, double beta, std::vector<double>& nodes,
                  std::vector<double>& weights) {
  // Golub-Welsch on the Jacobi matrix of the monic recurrence.
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  const double ab = alpha + beta;
  for (int k = 0; k < n; ++k) {
    const double denom = (2.0 * k + ab) * (2.0 * k + ab + 2.0);
    jac(k, k) = denom == 0.0 ? 0.0 : (beta * beta - alpha * alpha) / denom;
    if (k + 1 < n) {
      const double j = k + 1;
      const double s = 2.0 * j + ab;
      const double off = std::sqrt(4.0 * j * (j + alpha) * (j + beta) * (j + ab) /
                                   (s * s * (s + 1.0) * (s - 1.0)));
      jac(k, k + 1) = off;
      jac(k + 1, k) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jac);
  const double mu0 = std::pow(2.0, ab + 1.0) * std::tgamma(alpha + 1.0) *
                     std::tgamma(beta + 1.0) / std::tgamma(ab + 2.0);
  nodes.resize(n);
  weights.resize(n);
  for (int k = 0; k < n; ++k) {
    nodes[k] = jacobi_polish(n, alpha, beta, eig.eigenvalues()(k));
    const double v = eig.eigenvectors()(0, k);
    weights[k] = mu0 * v * v;
  }
}

SegmentRule segment_rule(int order) {
  check_order(order);
  const int n = points_for_order(order);
  std::vector<double> z, w;
  gauss_jacobi(n, 0.0, 0.0, z, w);
  SegmentRule rule;
  rule.exactness_order = 2 * n - 1;
  for (int i = 0; i < n; ++i) {
    rule.points.push_back(0.5 * (z[i] + 1.0));
    rule.weights.push_back(0.5 * w[i]);
  }
  return rule;
}

TriangleRule triangle_rule(int order) {
  check_order(order);
  const int n = points_for_order(order);
  std::vector<double> zs, ws, zt, wt;
  gauss_jacobi(n, 0.0, 0.0, zs, ws);
  gauss_jacobi(n, 1.0, 0.0, zt, wt);
  TriangleRule rule;
  rule.exactness_order = 2 * n - 1;
  for (int j = 0; j < n; ++j) {
    const double t = 0.5 * (zt[j] + 1.0);
    for (int i = 0; i < n; ++i) {
      const double s = 0.5 * (zs[i] + 1.0);
      rule.points.emplace_back(s * (1.0 - t), t);
      // ds = dz/2, dt = dz/2 and (1 - t) = (1 - z)/2 is carried by the weight.
      rule.weights.push_back(0.5 * ws[i] * 0.25 * wt[j]);
    }
  }
  return rule;
}

}  // namespace galbrun
