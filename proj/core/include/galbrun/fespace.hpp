#pragma once

#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "galbrun/geometry.hpp"
#include "galbrun/mesh.hpp"
#include "galbrun/types.hpp"

namespace galbrun {

enum class Family {
  VectorLagrange,  // continuous [P^p]^2
  ScalarLagrange,  // continuous P^p
  VectorDG,        // discontinuous [P^p]^2, Piola mapped on curved elements
  HdivBDM,         // normal-continuous BDM_p, Piola mapped
};

std::string_view family_name(Family family);

/// Reference basis data at a fixed set of reference points.
struct ReferenceTable {
  std::vector<Vec2> points;
  std::vector<Eigen::VectorXd> lagrange_values;    // Lagrange families
  std::vector<Eigen::MatrixX2d> lagrange_grads;
  std::vector<Eigen::MatrixX2d> bdm_values;        // HdivBDM
  std::vector<std::vector<Mat2>> bdm_grads;
};

/// Physical (global-orientation) basis values on one element.
struct ElementBasis {
  int element = -1;
  int n_points = 0;
  int n_basis = 0;
  std::vector<GeometryPoint> geometry;
  std::vector<Vec2> value;      // vector families, [q * n_basis + i]
  std::vector<Mat2> grad;       // grad(r, c) = d u_r / d x_c
  std::vector<double> div;
  std::vector<double> scalar;   // ScalarLagrange
  std::vector<Vec2> scalar_grad;

  [[nodiscard]] int at(int q, int i) const { return q * n_basis + i; }
};

/// Finite element space with a global dof map.
///
/// For HdivBDM the element basis is multiplied by a +-1 sign per local dof so
/// that facet dofs refer to the global facet normal and edge direction; the
/// dofs of boundary facets are listed in constrained_dofs() (u.n = 0).
class FeSpace {
 public:
  FeSpace(Family family, std::shared_ptr<const Mesh> mesh, int degree);

  [[nodiscard]] Family family() const { return family_; }
  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] const Mesh& mesh() const { return *mesh_; }
  [[nodiscard]] const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
  [[nodiscard]] int ndof() const { return ndof_; }
  [[nodiscard]] int local_dim() const { return local_dim_; }
  [[nodiscard]] bool is_vector() const { return family_ != Family::ScalarLagrange; }

  [[nodiscard]] std::span<const int> element_dofs(int t) const {
    return {dofs_.data() + static_cast<std::size_t>(t) * local_dim_,
            static_cast<std::size_t>(local_dim_)};
  }
  /// +-1 orientation factors of the element basis (all +1 outside HdivBDM).
  [[nodiscard]] std::span<const double> element_signs(int t) const {
    return {signs_.data() + static_cast<std::size_t>(t) * local_dim_,
            static_cast<std::size_t>(local_dim_)};
  }
  [[nodiscard]] const std::vector<int>& constrained_dofs() const { return constrained_; }

  [[nodiscard]] ReferenceTable tabulate(std::span<const Vec2> points) const;
  void evaluate(int t, const ElementGeometry& geo, const ReferenceTable& table,
                ElementBasis& out) const;
  [[nodiscard]] ElementBasis evaluate(int t, std::span<const Vec2> points) const;

 private:
  void build_lagrange_dofs(int components);
  void build_dg_dofs();
  void build_bdm_dofs();

  Family family_;
  std::shared_ptr<const Mesh> mesh_;
  int degree_;
  int local_dim_ = 0;
  int ndof_ = 0;
  std::vector<int> dofs_;
  std::vector<double> signs_;
  std::vector<int> constrained_;
};

std::shared_ptr<const FeSpace> build_space(Family family, std::shared_ptr<const Mesh> mesh,
                                           int degree);

/// Continuous P^{p-1} pseudo-pressure space paired with [P^p]^2 velocities.
std::shared_ptr<const FeSpace> build_pseudo_pressure_space(std::shared_ptr<const Mesh> mesh,
                                                           int velocity_degree);

/// Closed-form dimension of a family on a mesh.
int expected_ndof(Family family, const Mesh& mesh, int degree);

}  // namespace galbrun
