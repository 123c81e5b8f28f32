#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "galbrun/types.hpp"

namespace galbrun {

/// Full-pattern symmetric storage; both triangles are kept.
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Discrete operator with load vector and strongly constrained dofs.
struct LinearSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  std::vector<int> constrained;
};

/// max_ij |A_ij - A_ji|
double symmetry_defect(const SparseMatrix& a);
double symmetry_defect(const Eigen::MatrixXd& a);
double max_abs_entry(const SparseMatrix& a);

/// Zeroes the constrained rows and columns and puts 1 on their diagonal.
LinearSystem eliminate_constraints(const LinearSystem& system);

/// Sparse LU with partial pivoting (the operators are symmetric indefinite).
/// Guarantees ||Ax - r||_inf <= 1e-9 (||A||_max ||x||_inf + ||r||_inf) after at
/// most two refinement steps, or throws SolverError. Constrained entries of the
/// result are exactly 0.
Eigen::VectorXd solve(const LinearSystem& system);

/// Coordinate dump, one "i j value" line per stored entry, 0-based.
void write_matrix(const SparseMatrix& a, std::ostream& os);

inline constexpr int kDenseDiagnosticLimit = 2000;

/// Dense copy of `a` with the rows/columns in `drop` removed.
Eigen::MatrixXd restrict_dense(const SparseMatrix& a, const std::vector<int>& drop);

/// Orthonormal basis of {x : |M x| <= tol |M|} for symmetric M, tol relative to
/// the spectral norm.
Eigen::MatrixXd dense_nullspace(const Eigen::MatrixXd& m, double rel_tol = 1e-8);

struct ControlConstant {
  double c_bh = 0.0;             // min over W_h of (w'Bw)/(w'Aw)
  std::optional<double> c_hat;   // (c_bh - 1)/(c_bh + 1) when c_bh > 1
  int kernel_dim = 0;            // dim V_h = dim ker B
  int complement_dim = 0;        // dim W_h
};

/// Splits R^n = ker B (+)_A W with W the A-orthogonal complement and returns
/// the smallest Rayleigh quotient of B against A on W.
ControlConstant estimate_control_constant(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                          double rel_tol = 1e-8);

}  // namespace galbrun
