#include "galbrun/geometry.hpp"

#include <Eigen/Core>

#include "galbrun/polynomials.hpp"

namespace galbrun {

ElementGeometry::ElementGeometry(const std::array<Vec2, 3>& vertices, int order,
                                 std::vector<std::pair<int, Vec2>> node_displacements)
    : vertices_(vertices), order_(order), displacements_(std::move(node_displacements)) {
  affine_jacobian_.col(0) = vertices_[1] - vertices_[0];
  affine_jacobian_.col(1) = vertices_[2] - vertices_[0];
}

Vec2 ElementGeometry::map(const Vec2& xi) const {
  Vec2 x = vertices_[0] + affine_jacobian_ * xi;
  if (!affine()) {
    const ReferenceLagrange& basis = reference_lagrange(order_);
    Eigen::VectorXd phi(basis.size());
    basis.values(xi, phi);
    for (const auto& [node, d] : displacements_) x += phi(node) * d;
  }
  return x;
}

GeometryPoint ElementGeometry::eval(const Vec2& xi) const {
  GeometryPoint g;
  g.x = vertices_[0] + affine_jacobian_ * xi;
  g.jacobian = affine_jacobian_;
  g.djacobian[0].setZero();
  g.djacobian[1].setZero();
  if (!affine()) {
    const ReferenceLagrange& basis = reference_lagrange(order_);
    const int n = basis.size();
    Eigen::VectorXd phi(n);
    Eigen::MatrixX2d dphi(n, 2);
    Eigen::MatrixX3d ddphi(n, 3);
    basis.values(xi, phi);
    basis.gradients(xi, dphi);
    basis.hessians(xi, ddphi);
    for (const auto& [node, d] : displacements_) {
      g.x += phi(node) * d;
      g.jacobian.col(0) += dphi(node, 0) * d;
      g.jacobian.col(1) += dphi(node, 1) * d;
      // d/dxi_0 of column 0 and 1, then d/dxi_1.
      g.djacobian[0].col(0) += ddphi(node, 0) * d;
      g.djacobian[0].col(1) += ddphi(node, 1) * d;
      g.djacobian[1].col(0) += ddphi(node, 1) * d;
      g.djacobian[1].col(1) += ddphi(node, 2) * d;
    }
  }
  g.det = g.jacobian.determinant();
  return g;
}

Vec2 ElementGeometry::scaled_normal(int edge, const GeometryPoint& g) {
  const Vec2 tangent = g.jacobian * reference_edge_tangent(edge);
  return {tangent.y(), -tangent.x()};
}

}  // namespace galbrun
