#include "galbrun/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SparseLU>

namespace galbrun {

double symmetry_defect(const SparseMatrix& a) {
  const SparseMatrix at = a.transpose();
  const SparseMatrix diff = a - at;
  return max_abs_entry(diff);
}

double symmetry_defect(const Eigen::MatrixXd& a) {
  return (a - a.transpose()).cwiseAbs().maxCoeff();
}

double max_abs_entry(const SparseMatrix& a) {
  double m = 0.0;
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) m = std::max(m, std::abs(it.value()));
  }
  return m;
}

LinearSystem eliminate_constraints(const LinearSystem& system) {
  const int n = static_cast<int>(system.matrix.rows());
  std::vector<char> fixed(n, 0);
  for (int i : system.constrained) fixed.at(i) = 1;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(system.matrix.nonZeros() + system.constrained.size());
  for (int k = 0; k < system.matrix.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(system.matrix, k); it; ++it) {
      if (fixed[it.row()] || fixed[it.col()]) continue;
      triplets.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    }
  }
  for (int i : system.constrained) triplets.emplace_back(i, i, 1.0);
  LinearSystem out;
  out.matrix.resize(n, n);
  out.matrix.setFromTriplets(triplets.begin(), triplets.end());
  out.rhs = system.rhs;
  for (int i : system.constrained) out.rhs(i) = 0.0;
  out.constrained = system.constrained;
  return out;
}

Eigen::VectorXd solve(const LinearSystem& system) {
  const auto n = system.matrix.rows();
  if (system.matrix.cols() != n || system.rhs.size() != n) {
    throw PreconditionError("solve: dimension mismatch");
  }
  const LinearSystem reduced = eliminate_constraints(system);
  SparseMatrix a = reduced.matrix;
  a.makeCompressed();
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() != Eigen::Success) {
    throw SolverError("sparse LU failed: " + lu.lastErrorMessage());
  }
  Eigen::VectorXd x = lu.solve(reduced.rhs);
  if (lu.info() != Eigen::Success || !x.allFinite()) {
    throw SolverError("sparse LU solve failed (singular operator?)");
  }
  const double amax = max_abs_entry(a);
  const auto acceptable = [&](const Eigen::VectorXd& r) {
    const double bound =
        1e-9 * (amax * x.lpNorm<Eigen::Infinity>() + reduced.rhs.lpNorm<Eigen::Infinity>());
    return r.lpNorm<Eigen::Infinity>() <= bound;
  };
  Eigen::VectorXd residual = reduced.rhs - a * x;
  for (int step = 0; step < 2 && !acceptable(residual); ++step) {
    x += lu.solve(residual);
    residual = reduced.rhs - a * x;
  }
  if (!acceptable(residual)) {
    throw SolverError("residual check failed; the operator is numerically singular");
  }
  for (int i : reduced.constrained) x(i) = 0.0;
  return x;
}

void write_matrix(const SparseMatrix& a, std::ostream& os) {
  const auto old = os.precision(17);
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    }
  }
  os.precision(old);
}

Eigen::MatrixXd restrict_dense(const SparseMatrix& a, const std::vector<int>& drop) {
  const int n = static_cast<int>(a.rows());
  std::vector<int> position(n, -1);
  std::vector<char> dropped(n, 0);
  for (int i : drop) dropped.at(i) = 1;
  int kept = 0;
  for (int i = 0; i < n; ++i) {
    if (!dropped[i]) position[i] = kept++;
  }
  if (kept > kDenseDiagnosticLimit) {
    throw PreconditionError("dense diagnostics limited to n <= " +
                            std::to_string(kDenseDiagnosticLimit) + ", got " +
                            std::to_string(kept));
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(kept, kept);
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      const int r = position[it.row()];
      const int c = position[it.col()];
      if (r >= 0 && c >= 0) out(r, c) += it.value();
    }
  }
  return out;
}

namespace {

void check_dense(const Eigen::MatrixXd& m, const char* what) {
  if (m.rows() != m.cols()) throw PreconditionError(std::string(what) + " must be square");
  if (m.rows() > kDenseDiagnosticLimit) {
    throw PreconditionError(std::string(what) + " exceeds the dense diagnostic size limit");
  }
}

}  // namespace

Eigen::MatrixXd dense_nullspace(const Eigen::MatrixXd& m, double rel_tol) {
  check_dense(m, "dense_nullspace matrix");
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double norm = lambda.size() ? lambda.cwiseAbs().maxCoeff() : 0.0;
  std::vector<int> kernel;
  for (int i = 0; i < lambda.size(); ++i) {
    if (std::abs(lambda(i)) <= rel_tol * norm) kernel.push_back(i);
  }
  Eigen::MatrixXd basis(m.rows(), static_cast<Eigen::Index>(kernel.size()));
  for (std::size_t k = 0; k < kernel.size(); ++k) basis.col(k) = eig.eigenvectors().col(kernel[k]);
  return basis;
}

ControlConstant estimate_control_constant(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                          double rel_tol) {
  check_dense(a, "A");
  check_dense(b, "B");
  if (a.rows() != b.rows()) throw PreconditionError("A and B differ in size");
  const Eigen::MatrixXd asym = 0.5 * (a + a.transpose());
  const Eigen::MatrixXd bsym = 0.5 * (b + b.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(asym);
  if (llt.info() != Eigen::Success) throw PreconditionError("A is not positive definite");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(bsym);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double norm = lambda.size() ? lambda.cwiseAbs().maxCoeff() : 0.0;
  std::vector<int> range;
  for (int i = 0; i < lambda.size(); ++i) {
    if (std::abs(lambda(i)) > rel_tol * norm) range.push_back(i);
  }
  ControlConstant result;
  result.kernel_dim = static_cast<int>(a.rows()) - static_cast<int>(range.size());
  result.complement_dim = static_cast<int>(range.size());
  if (range.empty()) {
    result.c_bh = std::numeric_limits<double>::infinity();
    return result;
  }
  // W = {w : Z' A w = 0} = A^{-1} range(B), with Z spanning ker B.
  Eigen::MatrixXd q(a.rows(), static_cast<Eigen::Index>(range.size()));
  for (std::size_t k = 0; k < range.size(); ++k) q.col(k) = eig.eigenvectors().col(range[k]);
  const Eigen::MatrixXd w = Eigen::HouseholderQR<Eigen::MatrixXd>(llt.solve(q))
                                .householderQ() *
                            Eigen::MatrixXd::Identity(a.rows(), q.cols());
  const Eigen::MatrixXd bw = w.transpose() * bsym * w;
  const Eigen::MatrixXd aw = w.transpose() * asym * w;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> gen(
      0.5 * (bw + bw.transpose()), 0.5 * (aw + aw.transpose()), Eigen::EigenvaluesOnly);
  if (gen.info() != Eigen::Success) throw SolverError("generalized eigensolve failed");
  result.c_bh = gen.eigenvalues().minCoeff();
  if (result.c_bh > 1.0) result.c_hat = (result.c_bh - 1.0) / (result.c_bh + 1.0);
  return result;
}

}  // namespace galbrun
