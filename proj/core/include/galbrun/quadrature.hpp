#pragma once

#include <vector>

#include "galbrun/types.hpp"

namespace galbrun {

/// Positive-weight quadrature rule on a reference cell.
///
/// Triangle rules live on {(x, y) : x, y >= 0, x + y <= 1} (measure 1/2),
/// segment rules on [0, 1].
template <class Point>
struct QuadratureRule {
  std::vector<Point> points;
  std::vector<double> weights;
  int exactness_order = 0;

  [[nodiscard]] std::size_t size() const { return points.size(); }
};

using TriangleRule = QuadratureRule<Vec2>;
using SegmentRule = QuadratureRule<double>;

inline constexpr int kMaxQuadratureOrder = 40;

/// Collapsed (Duffy) tensor rule: Gauss-Legendre in x, Gauss-Jacobi(1,0) in y.
TriangleRule triangle_rule(int order);

/// Gauss-Legendre rule on [0, 1].
SegmentRule segment_rule(int order);

/// Gauss-Jacobi nodes/weights on [-1, 1] for the weight (1-x)^alpha (1+x)^beta.
void gauss_jacobi(int n, double alpha, double beta, std::vector<double>& nodes,
                  std::vector<double>& weights);

}  // namespace galbrun
