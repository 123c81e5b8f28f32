#pragma once

#include <Eigen/Core>

#include "galbrun/coefficients.hpp"
#include "galbrun/fespace.hpp"
#include "galbrun/integration.hpp"
#include "galbrun/linalg.hpp"

namespace galbrun {

enum class FacetSelection { All, Interior, Boundary };

/// sum_T (rho d_b u . d_b u' + |b|_inf^2 rho u . u')
SparseMatrix assemble_a_volume(const FeSpace& space, const CoefficientSet& coeffs);

/// Interior-facet SIP terms of the streamline part:
/// rho lambda_b / h_F [u]_b.[u']_b - rho {d_b u}.[u']_b - rho {d_b u'}.[u]_b.
SparseMatrix assemble_a_facets(const FeSpace& space, const CoefficientSet& coeffs);

/// assemble_a_volume + assemble_a_facets.
SparseMatrix assemble_a_dg(const FeSpace& space, const CoefficientSet& coeffs);

/// sum_T rho c_s^2 div u div u'
SparseMatrix assemble_b_volume(const FeSpace& space, const CoefficientSet& coeffs);

/// rho c_s^2 (lambda_n / h_F [u]_n [u']_n - {div u}[u']_n - {div u'}[u]_n) over
/// the selected facets; boundary facets use the one-sided trace.
SparseMatrix assemble_b_facets(const FeSpace& space, const CoefficientSet& coeffs,
                               FacetSelection selection);

/// assemble_b_volume + assemble_b_facets(All).
SparseMatrix assemble_b_dg(const FeSpace& space, const CoefficientSet& coeffs);

/// (w u, u') for scalar or vector spaces.
SparseMatrix assemble_mass(const FeSpace& space, const ScalarField& weight);

/// <f, v> for every basis function v of a vector space.
Eigen::VectorXd assemble_rhs(const FeSpace& space, const VectorField& f,
                             int extra_order = kSmoothDataMargin);

/// Building blocks of the pseudo-pressure system, all weighted by rho c_s^2.
struct PseudoPressureBlocks {
  SparseMatrix a;                  // a(u, u'), velocity x velocity
  SparseMatrix penalty;            // lambda_n/h_F <u.n, u'.n>_boundary
  SparseMatrix divergence;         // (div u, q), pressure x velocity
  SparseMatrix boundary_coupling;  // <u.n, q>_boundary, pressure x velocity
  SparseMatrix mass;               // (p, q)
  Eigen::VectorXd load;            // <f, u'>
};

/// Throws PreconditionError unless velocity is VectorLagrange of degree p >= 2
/// and pressure is ScalarLagrange of degree p - 1 on the same mesh.
PseudoPressureBlocks assemble_m2_blocks(const FeSpace& velocity, const FeSpace& pressure,
                                        const CoefficientSet& coeffs, const VectorField& f);

/// Unknowns ordered (u, p):
///   [ -A + N        (D - C)^T ] [u]   [F]
///   [ D - C         -M        ] [p] = [0]
LinearSystem assemble_m2_system(const PseudoPressureBlocks& blocks);
LinearSystem assemble_m2_system(const FeSpace& velocity, const FeSpace& pressure,
                                const CoefficientSet& coeffs, const VectorField& f);

/// Dense Gram matrix of the projected form
///   b_pp(u,u') = (rho c_s^2 Pi div u, Pi div u') + N(u,u')
///                - <rho c_s^2 Pi div u, u'.n> - <rho c_s^2 Pi div u', u.n>.
Eigen::MatrixXd pseudo_pressure_gram(const PseudoPressureBlocks& blocks);

}  // namespace galbrun
