#pragma once

#include <memory>
#include <random>

#include "galbrun/fespace.hpp"
#include "galbrun/geometry.hpp"
#include "galbrun/linalg.hpp"
#include "galbrun/mesh.hpp"
#include "galbrun/quadrature.hpp"

namespace galbrun::test {

inline std::shared_ptr<const Mesh> disc(int level, int g) {
  return std::make_shared<const Mesh>(make_unit_disc_mesh(level, g));
}

inline std::shared_ptr<const Mesh> square(int n) {
  return std::make_shared<const Mesh>(make_unit_square_mesh(n));
}

inline Eigen::MatrixXd dense(const SparseMatrix& a) { return Eigen::MatrixXd(a); }

inline Eigen::VectorXd random_vector(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

/// int_Omega f dx through the element maps, without the assembly code.
template <class F>
double integrate(const Mesh& mesh, F&& f, int order) {
  const TriangleRule rule = triangle_rule(order);
  double s = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry geo = mesh.geometry(t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const GeometryPoint g = geo.eval(rule.points[q]);
      s += rule.weights[q] * g.det * f(g.x);
    }
  }
  return s;
}

}  // namespace galbrun::test
