#pragma once

#include <array>
#include <utility>
#include <vector>

#include "galbrun/types.hpp"

namespace galbrun {

/// Map data at one reference point.
struct GeometryPoint {
  Vec2 x;
  Mat2 jacobian;                    // J(i, m) = d x_i / d xi_m
  double det = 0.0;
  std::array<Mat2, 2> djacobian{};  // djacobian[k] = d J / d xi_k
};

/// Polynomial map of degree g from the reference triangle to one element.
///
/// The map is the affine vertex interpolant plus a correction built from the
/// degree-g Lagrange functions of the curved edge nodes, so it stays affine
/// along every straight edge.
class ElementGeometry {
 public:
  ElementGeometry(const std::array<Vec2, 3>& vertices, int order,
                  std::vector<std::pair<int, Vec2>> node_displacements);

  [[nodiscard]] bool affine() const { return displacements_.empty(); }
  [[nodiscard]] int order() const { return affine() ? 1 : order_; }
  [[nodiscard]] const std::array<Vec2, 3>& vertices() const { return vertices_; }

  [[nodiscard]] GeometryPoint eval(const Vec2& xi) const;
  [[nodiscard]] Vec2 map(const Vec2& xi) const;

  /// Outward normal of local edge `edge` scaled by ds/dt, where t in [0, 1]
  /// parametrizes the edge in local direction.
  [[nodiscard]] static Vec2 scaled_normal(int edge, const GeometryPoint& g);

 private:
  std::array<Vec2, 3> vertices_;
  int order_;
  Mat2 affine_jacobian_;
  std::vector<std::pair<int, Vec2>> displacements_;  // (Lagrange node, offset)
};

}  // namespace galbrun
