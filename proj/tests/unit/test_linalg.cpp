#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>
#include <sstream>

#include "galbrun/coefficients.hpp"
#include "galbrun/linalg.hpp"
#include "galbrun/methods.hpp"
#include "support.hpp"

namespace galbrun {
namespace {

SparseMatrix sparse(const Eigen::MatrixXd& d) { return d.sparseView(); }

TEST(Solve, IdentityAndPermutation) {
  LinearSystem id{sparse(Eigen::MatrixXd::Identity(4, 4)), Eigen::Vector4d(1, -2, 3, 0.5), {}};
  EXPECT_EQ(solve(id), id.rhs);
  Eigen::Matrix2d swap;
  swap << 0, 1, 1, 0;
  LinearSystem s{sparse(swap), Eigen::Vector2d(1, 1), {}};
  const Eigen::VectorXd x = solve(s);
  EXPECT_NEAR(x[0], 1.0, 1e-15);
  EXPECT_NEAR(x[1], 1.0, 1e-15);
}

TEST(Solve, RandomSymmetricIndefiniteMatchesDenseOracle) {
  const int n = 50;
  Eigen::MatrixXd m(n, n);
  for (int j = 0; j < n; ++j) m.col(j) = test::random_vector(n, 1000 + j);
  m = 0.5 * (m + m.transpose()).eval();
  const Eigen::VectorXd eig =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues();
  ASSERT_LT(eig.minCoeff(), 0.0);
  ASSERT_GT(eig.maxCoeff(), 0.0);
  const Eigen::VectorXd r = test::random_vector(n, 7);
  const Eigen::VectorXd x = solve({sparse(m), r, {}});
  const Eigen::VectorXd oracle = m.fullPivLu().solve(r);
  EXPECT_LE((m * x - r).cwiseAbs().maxCoeff(), 1e-9 * (m.cwiseAbs().maxCoeff() * x.cwiseAbs().maxCoeff() + 1));
  EXPECT_LE((x - oracle).norm(), 1e-9 * oracle.norm() * eig.cwiseAbs().maxCoeff() / eig.cwiseAbs().minCoeff());
}

TEST(Solve, ConstrainedEntriesAreZero) {
  Eigen::MatrixXd m(3, 3);
  m << 4, 1, 0, 1, 3, 1, 0, 1, 2;
  const LinearSystem s{sparse(m), Eigen::Vector3d(1, 2, 3), {1}};
  const Eigen::VectorXd x = solve(s);
  EXPECT_EQ(x[1], 0.0);
  // Reduced 2x2 system [[4, 0], [0, 2]] x = (1, 3).
  EXPECT_NEAR(x[0], 0.25, 1e-15);
  EXPECT_NEAR(x[2], 1.5, 1e-15);
  const LinearSystem e = eliminate_constraints(s);
  EXPECT_EQ(e.matrix.coeff(1, 1), 1.0);
  EXPECT_EQ(e.matrix.coeff(0, 1), 0.0);
  EXPECT_EQ(e.rhs[1], 0.0);
}

TEST(Solve, SingularAndMismatchedSystems) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  EXPECT_THROW(solve({sparse(m), Eigen::Vector3d(1, 1, 1), {}}), SolverError);
  EXPECT_THROW(solve({sparse(m), Eigen::Vector2d(1, 1), {}}), PreconditionError);
}

TEST(Linalg, SymmetryDefectAndDump) {
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 2.5, 3;
  EXPECT_DOUBLE_EQ(symmetry_defect(sparse(m)), 0.5);
  EXPECT_DOUBLE_EQ(symmetry_defect(m), 0.5);
  EXPECT_DOUBLE_EQ(max_abs_entry(sparse(m)), 3.0);
  std::ostringstream os;
  write_matrix(sparse(m), os);
  EXPECT_EQ(os.str(), "0 0 1\n1 0 2.5\n0 1 2\n1 1 3\n");
}

TEST(Linalg, RestrictDense) {
  Eigen::MatrixXd m(3, 3);
  m << 1, 2, 3, 4, 5, 6, 7, 8, 9;
  const Eigen::MatrixXd r = restrict_dense(sparse(m), {1});
  Eigen::Matrix2d expected;
  expected << 1, 3, 7, 9;
  EXPECT_EQ(r, Eigen::MatrixXd(expected));
  SparseMatrix big(kDenseDiagnosticLimit + 1, kDenseDiagnosticLimit + 1);
  EXPECT_THROW(restrict_dense(big, {}), PreconditionError);
  EXPECT_NO_THROW(restrict_dense(big, {0}));
}

TEST(DenseNullspace, SmallExamples) {
  EXPECT_EQ(dense_nullspace(Eigen::MatrixXd::Zero(3, 3)).cols(), 3);
  const Eigen::MatrixXd k = dense_nullspace(Eigen::Vector3d(1, 0, 2).asDiagonal().toDenseMatrix());
  ASSERT_EQ(k.cols(), 1);
  EXPECT_NEAR(std::abs(k(1, 0)), 1.0, 1e-15);
  EXPECT_NEAR(k(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(k(2, 0), 0.0, 1e-15);
  EXPECT_THROW(dense_nullspace(Eigen::MatrixXd::Zero(2, 3)), PreconditionError);
}

TEST(DenseNullspace, BdmGramKernelMatchesEigenvalueCount) {
  const auto mesh = test::square(1);
  const DenseGrams g =
      dense_method_grams(Method::M3, mesh, 1, rotating_flow_coefficients(1, 1, 0.1, 10, 100));
  const Eigen::VectorXd lambda =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g.b, Eigen::EigenvaluesOnly).eigenvalues();
  const double scale = lambda.cwiseAbs().maxCoeff();
  int zeros = 0;
  for (double l : lambda) zeros += std::abs(l) <= 1e-8 * scale;
  const Eigen::MatrixXd k = dense_nullspace(g.b);
  EXPECT_EQ(k.cols(), zeros);
  // One free interior facet, two triangles: only the flux through the diagonal
  // remains, and a single divergence-free field survives.
  EXPECT_EQ(g.b.rows(), 2);
  EXPECT_LE((g.b * k).norm(), 1e-10 * scale);
  EXPECT_LE((k.transpose() * k - Eigen::MatrixXd::Identity(k.cols(), k.cols())).norm(), 1e-12);
}

TEST(ControlConstant, HandExamples) {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2, 2);
  const ControlConstant c1 =
      estimate_control_constant(id, Eigen::Vector2d(0, 4).asDiagonal().toDenseMatrix());
  EXPECT_NEAR(c1.c_bh, 4.0, 1e-14);
  ASSERT_TRUE(c1.c_hat.has_value());
  EXPECT_NEAR(*c1.c_hat, 0.6, 1e-14);
  EXPECT_EQ(c1.kernel_dim, 1);
  EXPECT_EQ(c1.complement_dim, 1);
  const ControlConstant c2 = estimate_control_constant(id, 2.0 * id);
  EXPECT_NEAR(c2.c_bh, 2.0, 1e-14);
  EXPECT_EQ(c2.kernel_dim, 0);
  const ControlConstant c3 = estimate_control_constant(id, 0.5 * id);
  EXPECT_NEAR(c3.c_bh, 0.5, 1e-14);
  EXPECT_FALSE(c3.c_hat.has_value());
  EXPECT_TRUE(std::isinf(estimate_control_constant(id, Eigen::MatrixXd::Zero(2, 2)).c_bh));
}

// W is taken as the kernel of Z'A (Z spanning ker B) through an LU
// factorization, independently of the library's A^{-1} range(B) construction.
TEST(ControlConstant, RandomPairAgainstDirectOracle) {
  const int n = 12, rank = 7;
  Eigen::MatrixXd g(n, n), h(n, rank);
  for (int j = 0; j < n; ++j) g.col(j) = test::random_vector(n, 2000 + j);
  for (int j = 0; j < rank; ++j) h.col(j) = test::random_vector(n, 3000 + j);
  const Eigen::MatrixXd a = g * g.transpose() + Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd b = h * h.transpose();
  const ControlConstant c = estimate_control_constant(a, b);
  EXPECT_EQ(c.kernel_dim, n - rank);
  const Eigen::MatrixXd z = Eigen::FullPivLU<Eigen::MatrixXd>(b).kernel();
  const Eigen::MatrixXd w = Eigen::FullPivLU<Eigen::MatrixXd>(z.transpose() * a).kernel();
  ASSERT_EQ(w.cols(), rank);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> gen(
      w.transpose() * b * w, w.transpose() * a * w, Eigen::EigenvaluesOnly);
  EXPECT_NEAR(c.c_bh, gen.eigenvalues().minCoeff(), 1e-9 * c.c_bh);
}

TEST(ControlConstant, RejectsIndefiniteA) {
  const Eigen::MatrixXd a = Eigen::Vector2d(1, -1).asDiagonal().toDenseMatrix();
  EXPECT_THROW(estimate_control_constant(a, a), PreconditionError);
  EXPECT_THROW(estimate_control_constant(Eigen::MatrixXd::Identity(2, 2),
                                         Eigen::MatrixXd::Identity(3, 3)),
               PreconditionError);
}

}  // namespace
}  // namespace galbrun
