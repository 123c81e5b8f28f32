#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "galbrun/coefficients.hpp"
#include "galbrun/field.hpp"
#include "galbrun/mesh.hpp"

namespace galbrun {

/// Forcing, coefficients and (when known) the exact solution of one experiment.
struct ManufacturedProblem {
  std::string name;
  Domain domain = Domain::UnitDisc;
  int degree = 1;
  CoefficientSet coefficients;
  VectorField forcing;
  std::optional<ExactSolution> exact;
};

inline constexpr double kFlowScale = 0.1;

/// u = sin(pi x) cos(pi y) (-y, x), rho = c_s = 1, b = 0.1 (-y, x),
/// lambda_b = 10 p^2, lambda_n = 100 p^2.
ManufacturedProblem convergence_problem(int p);

/// Divergence-free u = cos(pi (x^2 + y^2)) (-y, x); lambda_b = lambda_n = 10 p^2.
/// The forcing does not depend on cs2.
ManufacturedProblem locking_problem(int p, double cs2);

/// f = grad(x^6 + y^6), no exact solution; coefficients as locking_problem.
ManufacturedProblem gradrob_problem(int p, double cs2);

/// Maximal relative finite-difference discrepancies over random disc points.
struct ManufacturedCheck {
  double gradient = 0.0;
  double divergence = 0.0;
  double forcing = 0.0;
};

/// Compares the closed forms with central differences at `samples` random
/// points of the disc of radius 0.9. Errors are relative to the largest
/// sampled magnitude of the respective quantity. The forcing check
/// differentiates the closed-form divergence (itself checked against u) in the
/// c_s^2 term, so large c_s^2 does not amplify the inner difference error.
ManufacturedCheck check_manufactured(const ManufacturedProblem& problem, int samples = 20,
                                     std::uint64_t seed = 20240607);

/// Throws PreconditionError when check_manufactured exceeds 1e-6 (derivatives)
/// or 1e-4 (forcing). Problems without exact solution pass trivially.
void gate_manufactured(const ManufacturedProblem& problem);

/// -grad(rho c_s^2 div u) + d_b(rho d_b u) - |b|_inf^2 rho u by nested central
/// differences of u. When `div` is given it replaces the inner difference
/// quotient for div u.
Vec2 apply_operator_fd(const VectorField& u, const CoefficientSet& coeffs, const Vec2& x,
                       double step = 1e-4, const ScalarField& div = {});

/// apply_operator_fd at steps h, 2h, 4h with two Richardson levels, error
/// O(h^6).
Vec2 apply_operator_fd_extrapolated(const VectorField& u, const CoefficientSet& coeffs,
                                    const Vec2& x, double step = 2e-3,
                                    const ScalarField& div = {});

}  // namespace galbrun
