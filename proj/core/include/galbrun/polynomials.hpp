#pragma once

#include <array>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "galbrun/types.hpp"

namespace galbrun {

/// Values and derivatives of all monomials x^a y^b with a + b <= degree.
class MonomialSet {
 public:
  explicit MonomialSet(int degree);

  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] int size() const { return static_cast<int>(exponents_.size()); }
  [[nodiscard]] const std::vector<std::pair<int, int>>& exponents() const {
    return exponents_;
  }

  void values(const Vec2& x, Eigen::Ref<Eigen::VectorXd> out) const;
  /// out.col(0) = d/dx, out.col(1) = d/dy
  void gradients(const Vec2& x, Eigen::Ref<Eigen::MatrixX2d> out) const;
  /// out.col(0) = d2/dx2, col(1) = d2/dxdy, col(2) = d2/dy2
  void hessians(const Vec2& x, Eigen::Ref<Eigen::MatrixX3d> out) const;

 private:
  int degree_;
  std::vector<std::pair<int, int>> exponents_;
};

/// Shifted Legendre polynomial of degree k on [0, 1].
double shifted_legendre(int k, double t);

/// Local edge e of the reference triangle runs from vertex kEdgeVertices[e][0]
/// to kEdgeVertices[e][1]; it is opposite vertex e.
inline constexpr std::array<std::array<int, 2>, 3> kEdgeVertices{{{1, 2}, {2, 0}, {0, 1}}};

Vec2 reference_vertex(int v);
/// Point at parameter t in [0, 1] along local edge e.
Vec2 reference_edge_point(int edge, double t);
/// Tangent (end - start) of local edge e.
Vec2 reference_edge_tangent(int edge);

/// Nodal Lagrange basis of total degree k on the reference triangle.
///
/// Node order: the three vertices, then k-1 nodes per edge in local edge
/// direction (edge 0, 1, 2), then the interior nodes.
class ReferenceLagrange {
 public:
  explicit ReferenceLagrange(int degree);

  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] int size() const { return static_cast<int>(nodes_.size()); }
  [[nodiscard]] const std::vector<Vec2>& nodes() const { return nodes_; }

  /// Index of the j-th interior node of local edge e (in local direction).
  [[nodiscard]] int edge_node(int edge, int j) const { return 3 + edge * (degree_ - 1) + j; }
  [[nodiscard]] int first_interior_node() const { return 3 + 3 * (degree_ - 1); }

  void values(const Vec2& x, Eigen::Ref<Eigen::VectorXd> out) const;
  void gradients(const Vec2& x, Eigen::Ref<Eigen::MatrixX2d> out) const;
  void hessians(const Vec2& x, Eigen::Ref<Eigen::MatrixX3d> out) const;

 private:
  int degree_;
  std::vector<Vec2> nodes_;
  MonomialSet monomials_;
  Eigen::MatrixXd coeffs_;  // basis_i = sum_j coeffs_(j, i) * monomial_j
};

/// Shared immutable Lagrange bases for degrees 1..8.
const ReferenceLagrange& reference_lagrange(int degree);

/// Brezzi-Douglas-Marini basis of degree p on the reference triangle, dual to
///   - edge flux moments  int_0^1 u(x_e(t)) . nu_e  L_k(t) dt, k = 0..p,
///     with nu_e the outward rotated edge tangent and L_k shifted Legendre;
///   - interior moments   int_T u . psi, psi in the first-kind Nedelec
///     space [P^{p-2}]^2 + P~^{p-2} (-y, x).
/// Basis function index: 3 (p+1) edge functions (edge-major) then interior.
class ReferenceBdm {
 public:
  explicit ReferenceBdm(int degree);

  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] int size() const { return 2 * monomials_.size(); }
  [[nodiscard]] int edge_dofs() const { return degree_ + 1; }
  [[nodiscard]] int interior_dofs() const { return (degree_ - 1) * (degree_ + 1); }

  /// values: n x 2, row i = basis_i(x)
  void values(const Vec2& x, Eigen::Ref<Eigen::MatrixX2d> out) const;
  /// grads[i] = d basis_i / d xhat (row = component, col = direction)
  void gradients(const Vec2& x, std::vector<Mat2>& out) const;

  /// Evaluates the interior moment test functions at x (rows = functions).
  void interior_test_functions(const Vec2& x, Eigen::Ref<Eigen::MatrixX2d> out) const;

 private:
  int degree_;
  MonomialSet monomials_;  // scalar monomials; vector basis is e_c * m
  Eigen::MatrixXd coeffs_;  // size() x size()
};

const ReferenceBdm& reference_bdm(int degree);

}  // namespace galbrun
