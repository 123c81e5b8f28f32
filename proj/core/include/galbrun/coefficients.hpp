#pragma once

#include "galbrun/mesh.hpp"
#include "galbrun/types.hpp"

namespace galbrun {

/// Material data of the model operator
///   -grad(rho c_s^2 div u) + d_b(rho d_b u) - |b|_inf^2 rho u.
struct CoefficientSet {
  ScalarField rho;
  ScalarField sound_speed;
  VectorField flow;        // background flow b, b.n = 0 on the boundary
  double flow_sup = 0.0;   // |b|_inf, a global constant in the zeroth order term
  double lambda_b = 0.0;   // streamline jump penalty
  double lambda_n = 0.0;   // normal jump / Nitsche penalty

  [[nodiscard]] double cs2(const Vec2& x) const {
    const double c = sound_speed(x);
    return c * c;
  }
};

/// rho and c_s^2 constant, b = flow_scale * (-y, x), |b|_inf = |flow_scale|
/// (its supremum on the unit disc).
CoefficientSet rotating_flow_coefficients(double rho, double cs2, double flow_scale,
                                          double lambda_b, double lambda_n);

/// Throws PreconditionError unless rho, c_s > 0 at every vertex, |b|_inf > 0
/// and both penalties are non-negative.
void validate_coefficients(const CoefficientSet& coeffs, const Mesh& mesh);

/// max |b.n| over boundary facet quadrature points.
double max_boundary_normal_flow(const CoefficientSet& coeffs, const Mesh& mesh, int order);

}  // namespace galbrun
