#pragma once

#include <memory>

#include "galbrun/coefficients.hpp"
#include "galbrun/field.hpp"
#include "galbrun/integration.hpp"
#include "galbrun/methods.hpp"

namespace galbrun {

struct ErrorNorms {
  double l2_error = 0.0;  // ||u_h - u||_L2
  double xh_error = 0.0;  // |||u_h - u|||_{X_h} of the method
  double l2_norm = 0.0;   // ||u_h||_L2
};

/// ||u_h - u||_L2 by element quadrature with a smooth-data margin.
double l2_error(const DiscreteField& uh, const VectorField& exact, int extra_order = kSmoothDataMargin);

/// Square of the method's triple norm a_h(e, e) + b_h(e, e), e = u_h - u, with
/// all facet terms evaluated on e. M2 needs the pseudo-pressure space (its
/// b_h uses the weighted projection of div e).
double xh_error_squared(Method method, const DiscreteField& uh, const ExactSolution& exact,
                        const CoefficientSet& coeffs,
                        const std::shared_ptr<const FeSpace>& pressure = nullptr);

/// xh_error is sqrt(max(0, xh_error_squared)).
ErrorNorms error_norms(Method method, const DiscreteField& uh, const ExactSolution& exact,
                       const CoefficientSet& coeffs,
                       const std::shared_ptr<const FeSpace>& pressure = nullptr);

}  // namespace galbrun
