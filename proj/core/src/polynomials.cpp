#include "galbrun/polynomials.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <mutex>
#include <string>

#include <Eigen/LU>

#include "galbrun/quadrature.hpp"

namespace galbrun {

namespace {

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

}  // namespace

MonomialSet::MonomialSet(int degree) : degree_(degree) {
  for (int total = 0; total <= degree; ++total) {
    for (int b = 0; b <= total; ++b) exponents_.emplace_back(total - b, b);
  }
}

void MonomialSet::values(const Vec2& x, Eigen::Ref<Eigen::VectorXd> out) const {
  for (int i = 0; i < size(); ++i) {
    const auto [a, b] = exponents_[i];
    out(i) = ipow(x.x(), a) * ipow(x.y(), b);
  }
}

void MonomialSet::gradients(const Vec2& x, Eigen::Ref<Eigen::MatrixX2d> out) const {
  for (int i = 0; i < size(); ++i) {
    const auto [a, b] = exponents_[i];
    out(i, 0) = a == 0 ? 0.0 : a * ipow(x.x(), a - 1) * ipow(x.y(), b);
    out(i, 1) = b == 0 ? 0.0 : b * ipow(x.x(), a) * ipow(x.y(), b - 1);
  }
}

void MonomialSet::hessians(const Vec2& x, Eigen::Ref<Eigen::MatrixX3d> out) const {
  for (int i = 0; i < size(); ++i) {
    const auto [a, b] = exponents_[i];
    out(i, 0) = a < 2 ? 0.0 : a * (a - 1) * ipow(x.x(), a - 2) * ipow(x.y(), b);
    out(i, 1) = (a < 1 || b < 1) ? 0.0 : a * b * ipow(x.x(), a - 1) * ipow(x.y(), b - 1);
    out(i, 2) = b < 2 ? 0.0 : b * (b - 1) * ipow(x.x(), a) * ipow(x.y(), b - 2);
  }
}

double shifted_legendre(int k, double t) {
  const double x = 2.0 * t - 1.0;
  if (k == 0) return 1.0;
  double p0 = 1.0;
  double p1 = x;
  for (int n = 2; n <= k; ++n) {
    const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

Vec2 reference_vertex(int v) {
  switch (v) {
    case 0: return {0.0, 0.0};
    case 1: return {1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

Vec2 reference_edge_point(int edge, double t) {
  const Vec2 a = reference_vertex(kEdgeVertices[edge][0]);
  const Vec2 b = reference_vertex(kEdgeVertices[edge][1]);
  return (1.0 - t) * a + t * b;
}

Vec2 reference_edge_tangent(int edge) {
  return reference_vertex(kEdgeVertices[edge][1]) - reference_vertex(kEdgeVertices[edge][0]);
}

ReferenceLagrange::ReferenceLagrange(int degree) : degree_(degree), monomials_(degree) {
  if (degree < 1) throw PreconditionError("Lagrange degree must be >= 1");
  const double k = degree;
  for (int v = 0; v < 3; ++v) nodes_.push_back(reference_vertex(v));
  for (int e = 0; e < 3; ++e) {
    for (int j = 1; j < degree; ++j) nodes_.push_back(reference_edge_point(e, j / k));
  }
  for (int b = 1; b < degree; ++b) {
    for (int a = 1; a + b < degree; ++a) nodes_.emplace_back(a / k, b / k);
  }
  const int n = monomials_.size();
  Eigen::MatrixXd vandermonde(n, n);
  Eigen::VectorXd row(n);
  for (int i = 0; i < n; ++i) {
    monomials_.values(nodes_[i], row);
    vandermonde.row(i) = row.transpose();
  }
  coeffs_ = vandermonde.inverse();
}

void ReferenceLagrange::values(const Vec2& x, Eigen::Ref<Eigen::VectorXd> out) const {
  Eigen::VectorXd m(monomials_.size());
  monomials_.values(x, m);
  out.noalias() = coeffs_.transpose() * m;
}

void ReferenceLagrange::gradients(const Vec2& x, Eigen::Ref<Eigen::MatrixX2d> out) const {
  Eigen::MatrixX2d m(monomials_.size(), 2);
  monomials_.gradients(x, m);
  out.noalias() = coeffs_.transpose() * m;
}

void ReferenceLagrange::hessians(const Vec2& x, Eigen::Ref<Eigen::MatrixX3d> out) const {
  Eigen::MatrixX3d m(monomials_.size(), 3);
  monomials_.hessians(x, m);
  out.noalias() = coeffs_.transpose() * m;
}

const ReferenceLagrange& reference_lagrange(int degree) {
  static const auto table = [] {
    std::array<std::unique_ptr<ReferenceLagrange>, 9> t;
    for (int k = 1; k <= 8; ++k) t[k] = std::make_unique<ReferenceLagrange>(k);
    return t;
  }();
  if (degree < 1 || degree > 8) {
    throw PreconditionError("Lagrange degree " + std::to_string(degree) + " not in [1, 8]");
  }
  return *table[degree];
}

ReferenceBdm::ReferenceBdm(int degree) : degree_(degree), monomials_(degree) {
  if (degree < 1) throw PreconditionError("BDM degree must be >= 1");
  const int nm = monomials_.size();
  const int n = 2 * nm;
  Eigen::MatrixXd dofs = Eigen::MatrixXd::Zero(n, n);  // dofs(i, a) = l_i(m_a)
  Eigen::VectorXd mv(nm);

  const SegmentRule seg = segment_rule(2 * degree + 2);
  for (int e = 0; e < 3; ++e) {
    const Vec2 tau = reference_edge_tangent(e);
    const Vec2 nu(tau.y(), -tau.x());
    for (std::size_t q = 0; q < seg.size(); ++q) {
      const double t = seg.points[q];
      monomials_.values(reference_edge_point(e, t), mv);
      for (int k = 0; k <= degree; ++k) {
        const double w = seg.weights[q] * shifted_legendre(k, t);
        const int row = e * (degree + 1) + k;
        for (int a = 0; a < nm; ++a) {
          dofs(row, a) += w * mv(a) * nu.x();
          dofs(row, nm + a) += w * mv(a) * nu.y();
        }
      }
    }
  }

  if (degree >= 2) {
    const TriangleRule tri = triangle_rule(2 * degree + 2);
    const int ni = interior_dofs();
    Eigen::MatrixX2d psi(ni, 2);
    for (std::size_t q = 0; q < tri.size(); ++q) {
      monomials_.values(tri.points[q], mv);
      interior_test_functions(tri.points[q], psi);
      for (int j = 0; j < ni; ++j) {
        const int row = 3 * (degree + 1) + j;
        for (int a = 0; a < nm; ++a) {
          dofs(row, a) += tri.weights[q] * mv(a) * psi(j, 0);
          dofs(row, nm + a) += tri.weights[q] * mv(a) * psi(j, 1);
        }
      }
    }
  }

  Eigen::FullPivLU<Eigen::MatrixXd> lu(dofs);
  if (!lu.isInvertible()) throw SolverError("BDM moment matrix is singular");
  coeffs_ = lu.inverse();
}

void ReferenceBdm::interior_test_functions(const Vec2& x,
                                           Eigen::Ref<Eigen::MatrixX2d> out) const {
  if (degree_ < 2) return;
  const int k = degree_ - 2;
  int row = 0;
  for (int c = 0; c < 2; ++c) {
    for (int total = 0; total <= k; ++total) {
      for (int b = 0; b <= total; ++b) {
        const double m = ipow(x.x(), total - b) * ipow(x.y(), b);
        out(row, c) = m;
        out(row, 1 - c) = 0.0;
        ++row;
      }
    }
  }
  for (int b = 0; b <= k; ++b) {
    const double m = ipow(x.x(), k - b) * ipow(x.y(), b);
    out(row, 0) = -x.y() * m;
    out(row, 1) = x.x() * m;
    ++row;
  }
}

void ReferenceBdm::values(const Vec2& x, Eigen::Ref<Eigen::MatrixX2d> out) const {
  const int nm = monomials_.size();
  Eigen::VectorXd m(nm);
  monomials_.values(x, m);
  out.col(0).noalias() = coeffs_.topRows(nm).transpose() * m;
  out.col(1).noalias() = coeffs_.bottomRows(nm).transpose() * m;
}

void ReferenceBdm::gradients(const Vec2& x, std::vector<Mat2>& out) const {
  const int nm = monomials_.size();
  Eigen::MatrixX2d g(nm, 2);
  monomials_.gradients(x, g);
  const Eigen::MatrixX2d gx = coeffs_.topRows(nm).transpose() * g;
  const Eigen::MatrixX2d gy = coeffs_.bottomRows(nm).transpose() * g;
  out.resize(size());
  for (int i = 0; i < size(); ++i) {
    out[i](0, 0) = gx(i, 0);
    out[i](0, 1) = gx(i, 1);
    out[i](1, 0) = gy(i, 0);
    out[i](1, 1) = gy(i, 1);
  }
}

const ReferenceBdm& reference_bdm(int degree) {
  static const auto table = [] {
    std::array<std::unique_ptr<ReferenceBdm>, 7> t;
    for (int k = 1; k <= 6; ++k) t[k] = std::make_unique<ReferenceBdm>(k);
    return t;
  }();
  if (degree < 1 || degree > 6) {
    throw PreconditionError("BDM degree " + std::to_string(degree) + " not in [1, 6]");
  }
  return *table[degree];
}

}  // namespace galbrun
