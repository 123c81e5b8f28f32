#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "galbrun/fespace.hpp"
#include "galbrun/quadrature.hpp"
#include "galbrun/types.hpp"

namespace galbrun {

/// Closed-form vector field with its derivatives.
struct ExactSolution {
  VectorField value;
  TensorField gradient;  // (r, c) = d u_r / d x_c
  ScalarField divergence;
};

/// Coefficient vector over a finite element space.
struct DiscreteField {
  std::shared_ptr<const FeSpace> space;
  Eigen::VectorXd coefficients;
};

/// Field values at the points of an ElementBasis.
struct FieldValues {
  std::vector<Vec2> value;
  std::vector<Mat2> grad;
  std::vector<double> div;
  std::vector<double> scalar;
  std::vector<Vec2> scalar_grad;
};

void evaluate_field(const ElementBasis& basis, std::span<const int> dofs,
                    const Eigen::VectorXd& coefficients, FieldValues& out);

/// Values of `field` on element t at reference points.
FieldValues field_values(const DiscreteField& field, int t, std::span<const Vec2> ref_points);

/// Averages and jumps of a vector field on one facet.
///
/// Interior facets: avg = (u+ + u-)/2, jump_b = (b.n+)(u+ - u-),
/// jump_n = (u+ - u-).n+ with + the owner of lower index. Boundary facets use
/// the one-sided trace: avg = u, jump_n = u.n, jump_b = (b.n) u.
struct FacetTrace {
  int facet = -1;
  bool boundary = false;
  std::vector<Vec2> x;
  std::vector<Vec2> normal;
  std::vector<double> weight;
  std::array<std::vector<Vec2>, 2> side_value;
  std::vector<Vec2> avg;
  std::vector<Vec2> avg_flow_derivative;  // {d_b u}
  std::vector<double> avg_div;
  std::vector<Vec2> jump_b;
  std::vector<double> jump_n;
};

FacetTrace facet_trace(const DiscreteField& field, int facet, const SegmentRule& rule,
                       const VectorField& flow);

/// Element-wise canonical BDM interpolant: facet flux moments against P^p and
/// interior moments against the reduced Nedelec space, through the Piola map.
/// The result is globally normal-continuous.
DiscreteField bdm_interpolate(std::shared_ptr<const FeSpace> space, const VectorField& v);

/// Nodal interpolant for the Lagrange and DG families.
DiscreteField nodal_interpolate(std::shared_ptr<const FeSpace> space, const VectorField& v);
DiscreteField nodal_interpolate(std::shared_ptr<const FeSpace> space, const ScalarField& v);

/// Weighted L2 projection: (w u_h, q_h) = (w f, q_h) for all q_h.
DiscreteField l2_project(std::shared_ptr<const FeSpace> space, const ScalarField& f,
                         const ScalarField& weight);
DiscreteField l2_project(std::shared_ptr<const FeSpace> space, const VectorField& f,
                         const ScalarField& weight);

/// Weighted L2 projection of an element-wise scalar quantity given through a
/// callback evaluated at volume quadrature points of each element.
using ElementScalarSampler =
    std::function<void(int element, std::span<const Vec2> ref_points, const ElementBasis& basis,
                       std::vector<double>& out)>;
DiscreteField l2_project_samples(std::shared_ptr<const FeSpace> space,
                                 const ElementScalarSampler& sampler, const ScalarField& weight,
                                 int extra_order);

/// ||u_h||_{L2}
double l2_norm(const DiscreteField& field);

}  // namespace galbrun
