#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "galbrun/coefficients.hpp"
#include "galbrun/field.hpp"
#include "galbrun/forms.hpp"
#include "galbrun/linalg.hpp"
#include "galbrun/methods.hpp"
#include "galbrun/polynomials.hpp"
#include "support.hpp"

namespace galbrun {
namespace {

using test::dense;
using test::disc;
using test::square;

CoefficientSet default_coefficients(int p) {
  return rotating_flow_coefficients(1.0, 1.0, 0.1, 10.0 * p * p, 100.0 * p * p);
}

double quad_form(const SparseMatrix& a, const Eigen::VectorXd& u) { return u.dot(a * u); }

double min_eigenvalue(const Eigen::MatrixXd& a) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .minCoeff();
}

TEST(AssembleA, ConstantFieldGivesZerothOrderTerm) {
  const double beta = 0.3;
  CoefficientSet c;
  c.rho = [](const Vec2&) { return 1.0; };
  c.sound_speed = [](const Vec2&) { return 1.0; };
  c.flow = [](const Vec2&) { return Vec2::Zero(); };
  c.flow_sup = beta;
  const auto mesh = disc(1, 2);
  const Vec2 cst(0.7, -1.3);
  for (int p = 1; p <= 3; ++p) {
    const auto s = build_space(Family::VectorLagrange, mesh, p);
    const DiscreteField u = nodal_interpolate(s, [&](const Vec2&) { return cst; });
    const double expected = beta * beta * mesh_area(*mesh) * cst.squaredNorm();
    EXPECT_NEAR(quad_form(assemble_a_volume(*s, c), u.coefficients), expected, 1e-12);
  }
}

// a(u, u) = int rho |d_b u|^2 + |b|^2 rho |u|^2 by pointwise quadrature of the field.
double a_by_points(const DiscreteField& u, const CoefficientSet& c, int order) {
  const Mesh& mesh = u.space->mesh();
  const TriangleRule rule = triangle_rule(order);
  double sum = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const FieldValues fv = field_values(u, t, rule.points);
    const ElementGeometry geo = mesh.geometry(t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const GeometryPoint g = geo.eval(rule.points[q]);
      const Vec2 db = fv.grad[q] * c.flow(g.x);
      sum += rule.weights[q] * g.det *
             (db.squaredNorm() + c.flow_sup * c.flow_sup * fv.value[q].squaredNorm());
    }
  }
  return sum;
}

TEST(AssembleA, MatchesPointwiseQuadrature) {
  const CoefficientSet c = default_coefficients(2);
  for (Family fam : {Family::VectorLagrange, Family::VectorDG, Family::HdivBDM}) {
    // Affine elements: polynomial integrands, both sides exact.
    const auto s = build_space(fam, square(3), 2);
    const DiscreteField u{s, test::random_vector(s->ndof(), 3)};
    const double oracle = a_by_points(u, c, 16);
    EXPECT_NEAR(quad_form(assemble_a_volume(*s, c), u.coefficients), oracle,
                1e-11 * std::abs(oracle))
        << family_name(fam);
    // Curved elements: Piola fields are rational, so only quadrature accuracy is expected.
    const auto sc = build_space(fam, disc(1, 3), 2);
    const DiscreteField uc{sc, test::random_vector(sc->ndof(), 4)};
    const double oracle_c = a_by_points(uc, c, 30);
    EXPECT_NEAR(quad_form(assemble_a_volume(*sc, c), uc.coefficients), oracle_c,
                1e-8 * std::abs(oracle_c))
        << family_name(fam) << " curved";
  }
}

TEST(AssembleA, SymmetricAndPositiveDefinite) {
  const auto mesh = disc(1, 2);
  for (Family fam : {Family::VectorLagrange, Family::VectorDG, Family::HdivBDM}) {
    const auto s = build_space(fam, mesh, 2);
    const SparseMatrix a = assemble_a_volume(*s, default_coefficients(2));
    EXPECT_LE(symmetry_defect(a), 1e-12);
    for (unsigned k = 0; k < 20; ++k) {
      EXPECT_GT(quad_form(a, test::random_vector(s->ndof(), 100 + k)), 0.0);
    }
  }
}

TEST(AssembleADg, ContinuousFieldsHaveNoFacetContribution) {
  const auto mesh = square(3);
  const CoefficientSet c = default_coefficients(2);
  for (int p = 1; p <= 3; ++p) {
    const auto s = build_space(Family::VectorDG, mesh, p);
    const DiscreteField u = nodal_interpolate(s, [p](const Vec2& x) {
      return Vec2(std::pow(x.x(), p) + x.y(), 1.0 - std::pow(x.y(), p) * 0.5 + x.x());
    });
    const double vol = quad_form(assemble_a_volume(*s, c), u.coefficients);
    const double dg = quad_form(assemble_a_dg(*s, c), u.coefficients);
    EXPECT_NEAR(dg, vol, 1e-10) << "p = " << p;
  }
}

TEST(AssembleADg, SymmetricAndCoerciveOnDisc) {
  const auto mesh = disc(1, 2);
  const CoefficientSet c = default_coefficients(2);
  for (Family fam : {Family::VectorDG, Family::HdivBDM}) {
    const auto s = build_space(fam, mesh, 2);
    const SparseMatrix a = assemble_a_dg(*s, c);
    EXPECT_LE(symmetry_defect(a), 1e-12);
    EXPECT_GE(min_eigenvalue(dense(a)), -1e-10) << family_name(fam);
  }
}

TEST(AssembleB, RotationIsInKernel) {
  const CoefficientSet c = default_coefficients(1);
  const VectorField rot = [](const Vec2& x) { return Vec2(-x.y(), x.x()); };
  for (int p = 1; p <= 3; ++p) {
    // Isoparametric interpolation reproduces the rotation once p >= g.
    const auto sl = build_space(Family::VectorLagrange, p == 1 ? square(2) : disc(1, 2), p);
    const DiscreteField ul = nodal_interpolate(sl, rot);
    EXPECT_LE(std::abs(quad_form(assemble_b_volume(*sl, c), ul.coefficients)), 1e-12);
    const auto sb = build_space(Family::HdivBDM, square(2), p);
    const DiscreteField ub = bdm_interpolate(sb, rot);
    EXPECT_LE(std::abs(quad_form(assemble_b_volume(*sb, c), ub.coefficients)), 1e-12);
  }
}

TEST(AssembleB, RadialFieldHasDivergenceTwo) {
  const CoefficientSet c = default_coefficients(1);
  const VectorField radial = [](const Vec2& x) { return x; };
  const auto mesh = disc(2, 2);
  for (int p = 2; p <= 3; ++p) {
    const auto s = build_space(Family::VectorLagrange, mesh, p);
    const DiscreteField u = nodal_interpolate(s, radial);
    EXPECT_NEAR(quad_form(assemble_b_volume(*s, c), u.coefficients), 4.0 * mesh_area(*mesh),
                1e-11);
  }
  const auto sq = square(2);
  const auto sb = build_space(Family::HdivBDM, sq, 1);
  EXPECT_NEAR(quad_form(assemble_b_volume(*sb, c), bdm_interpolate(sb, radial).coefficients), 4.0,
              1e-12);
}

TEST(AssembleB, VolumePartIsPositiveSemidefinite) {
  const auto mesh = disc(1, 2);
  for (Family fam : {Family::VectorLagrange, Family::VectorDG, Family::HdivBDM}) {
    const auto s = build_space(fam, mesh, 2);
    const SparseMatrix b = assemble_b_volume(*s, default_coefficients(2));
    EXPECT_LE(symmetry_defect(b), 1e-12);
    for (unsigned k = 0; k < 20; ++k) {
      EXPECT_GE(quad_form(b, test::random_vector(s->ndof(), 200 + k)), -1e-12);
    }
  }
}

TEST(AssembleBDg, InteriorFacetsVanishForContinuousSpaces) {
  const auto s = build_space(Family::VectorLagrange, disc(1, 3), 3);
  const SparseMatrix b = assemble_b_facets(*s, default_coefficients(3), FacetSelection::Interior);
  EXPECT_LE(max_abs_entry(b), 1e-11);
  const SparseMatrix all = assemble_b_facets(*s, default_coefficients(3), FacetSelection::All);
  const SparseMatrix bnd = assemble_b_facets(*s, default_coefficients(3), FacetSelection::Boundary);
  EXPECT_LE(max_abs_entry(SparseMatrix(all - bnd)), 1e-11);
  EXPECT_GT(max_abs_entry(bnd), 1.0);
}

TEST(AssembleBDg, SymmetricPositiveSemidefiniteForDg) {
  const auto s = build_space(Family::VectorDG, disc(1, 2), 2);
  const SparseMatrix b = assemble_b_dg(*s, default_coefficients(2));
  EXPECT_LE(symmetry_defect(b), 1e-12);
  EXPECT_GE(min_eigenvalue(dense(b)), -1e-10);
}

TEST(AssembleRhs, ZeroAndConstantLoads) {
  const auto s = build_space(Family::VectorLagrange, square(1), 1);
  const Eigen::VectorXd z = assemble_rhs(*s, [](const Vec2&) { return Vec2::Zero(); });
  EXPECT_EQ(z.cwiseAbs().maxCoeff(), 0.0);
  const Eigen::VectorXd r = assemble_rhs(*s, [](const Vec2&) { return Vec2(1.0, 0.0); });
  double sx = 0.0, sy = 0.0;
  for (int i = 0; i < s->ndof(); ++i) (i % 2 == 0 ? sx : sy) += r[i];
  EXPECT_NEAR(sx, 1.0, 1e-15);
  EXPECT_NEAR(sy, 0.0, 1e-15);
}

// Gradient loads are invisible to discretely divergence-free BDM fields.
TEST(AssembleRhs, GradientLoadOrthogonalToDivergenceFreeBdm) {
  const auto mesh = square(2);
  const DenseGrams g = dense_method_grams(Method::M3, mesh, 1, default_coefficients(1));
  const auto s = build_space(Family::HdivBDM, mesh, 1);
  const Eigen::VectorXd f = assemble_rhs(*s, [](const Vec2& x) {
    return Vec2(6.0 * std::pow(x.x(), 5), 6.0 * std::pow(x.y(), 5));
  });
  std::vector<int> drop = s->constrained_dofs();
  Eigen::VectorXd free(s->ndof() - static_cast<int>(drop.size()));
  for (int i = 0, k = 0; i < s->ndof(); ++i) {
    if (std::find(drop.begin(), drop.end(), i) == drop.end()) free[k++] = f[i];
  }
  const Eigen::MatrixXd kernel = dense_nullspace(g.b);
  ASSERT_GT(kernel.cols(), 0);
  for (int j = 0; j < kernel.cols(); ++j) {
    EXPECT_LE(std::abs(free.dot(kernel.col(j))), 1e-9 * free.norm() * kernel.col(j).norm());
  }
}

TEST(AssembleMass, IntegratesWeight) {
  const auto mesh = disc(1, 2);
  const auto s = build_space(Family::ScalarLagrange, mesh, 2);
  const ScalarField w = [](const Vec2& x) { return 2.0 + x.x(); };
  const DiscreteField one = nodal_interpolate(s, ScalarField([](const Vec2&) { return 1.0; }));
  const double oracle = test::integrate(*mesh, w, 10);
  EXPECT_NEAR(quad_form(assemble_mass(*s, w), one.coefficients), oracle, 1e-12);
}

TEST(AssembleForms, RejectScalarSpaces) {
  const auto s = build_space(Family::ScalarLagrange, square(1), 1);
  EXPECT_THROW(assemble_a_volume(*s, default_coefficients(1)), PreconditionError);
  EXPECT_THROW(assemble_b_dg(*s, default_coefficients(1)), PreconditionError);
}

// ---- pseudo-pressure system ----

struct M2Setup {
  std::shared_ptr<const FeSpace> u;
  std::shared_ptr<const FeSpace> q;
  CoefficientSet c;
  PseudoPressureBlocks blocks;
  LinearSystem system;
};

M2Setup m2_setup(const VectorField& f) {
  M2Setup s;
  const auto mesh = square(1);
  s.u = build_space(Family::VectorLagrange, mesh, 2);
  s.q = build_pseudo_pressure_space(mesh, 2);
  s.c = rotating_flow_coefficients(1.3, 2.0, 0.1, 40.0, 40.0);
  s.blocks = assemble_m2_blocks(*s.u, *s.q, s.c, f);
  s.system = assemble_m2_system(s.blocks);
  return s;
}

const VectorField kZeroLoad = [](const Vec2&) { return Vec2::Zero(); };

TEST(M2System, BlockSymmetricAndHomogeneous) {
  const M2Setup s = m2_setup(kZeroLoad);
  EXPECT_LE(symmetry_defect(s.system.matrix), 1e-12);
  EXPECT_EQ(s.system.rhs.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(s.system.matrix.rows(), s.u->ndof() + s.q->ndof());
  const Eigen::VectorXd x = solve(s.system);
  EXPECT_EQ(x.cwiseAbs().maxCoeff(), 0.0);
}

Eigen::MatrixXd schur_complement(const M2Setup& s) {
  const int nu = s.u->ndof();
  const Eigen::MatrixXd k = dense(s.system.matrix);
  const Eigen::MatrixXd m = -k.bottomRightCorner(k.rows() - nu, k.cols() - nu);
  const Eigen::MatrixXd g = k.bottomLeftCorner(k.rows() - nu, nu);
  return k.topLeftCorner(nu, nu) + g.transpose() * m.ldlt().solve(g);
}

// (rho c^2 Pi div u, Pi div u) with Pi the rho c^2-weighted projection onto
// the pseudo-pressure space, computed from the velocity field directly.
double projected_divergence_energy(const M2Setup& s, const Eigen::VectorXd& coeffs) {
  const DiscreteField u{s.u, coeffs};
  const ScalarField w = [&](const Vec2& x) { return s.c.rho(x) * s.c.cs2(x); };
  const DiscreteField pd = l2_project_samples(
      s.q,
      [&](int t, std::span<const Vec2> pts, const ElementBasis&, std::vector<double>& out) {
        out = field_values(u, t, pts).div;
      },
      w, 4);
  const Mesh& mesh = s.u->mesh();
  const TriangleRule rule = triangle_rule(12);
  double e = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const FieldValues fv = field_values(pd, t, rule.points);
    const ElementGeometry geo = mesh.geometry(t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const GeometryPoint g = geo.eval(rule.points[q]);
      e += rule.weights[q] * g.det * w(g.x) * fv.scalar[q] * fv.scalar[q];
    }
  }
  return e;
}

TEST(M2System, SchurComplementOfTangentialFields) {
  const M2Setup s = m2_setup(kZeroLoad);
  const Eigen::MatrixXd schur = schur_complement(s);
  // Zero the normal component at boundary nodes of the unit square.
  const Mesh& mesh = s.u->mesh();
  const auto& nodes = reference_lagrange(2).nodes();
  for (unsigned seed = 0; seed < 5; ++seed) {
    Eigen::VectorXd u = test::random_vector(s.u->ndof(), 300 + seed);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      const ElementGeometry geo = mesh.geometry(t);
      const auto dofs = s.u->element_dofs(t);
      for (std::size_t k = 0; k < nodes.size(); ++k) {
        const Vec2 x = geo.map(nodes[k]);
        if (std::abs(x.x()) < 1e-14 || std::abs(x.x() - 1) < 1e-14) u[dofs[2 * k]] = 0.0;
        if (std::abs(x.y()) < 1e-14 || std::abs(x.y() - 1) < 1e-14) u[dofs[2 * k + 1]] = 0.0;
      }
    }
    ASSERT_LE((Eigen::MatrixXd(s.blocks.boundary_coupling) * u).norm(), 1e-14);
    const double oracle = -quad_form(s.blocks.a, u) + projected_divergence_energy(s, u);
    EXPECT_NEAR(u.dot(schur * u), oracle, 1e-9 * (1 + std::abs(oracle)));
  }
}

// In general the elimination adds the lifting C^T M^-1 C of the boundary
// coupling to the projected form.
TEST(M2System, SchurComplementIncludesBoundaryLifting) {
  const M2Setup s = m2_setup(kZeroLoad);
  const Eigen::MatrixXd schur = schur_complement(s);
  const Eigen::MatrixXd c = dense(s.blocks.boundary_coupling);
  const Eigen::MatrixXd lifting = c.transpose() * dense(s.blocks.mass).ldlt().solve(c);
  const Eigen::MatrixXd expected = -dense(s.blocks.a) + pseudo_pressure_gram(s.blocks) + lifting;
  EXPECT_LE((schur - expected).cwiseAbs().maxCoeff(), 1e-9 * schur.cwiseAbs().maxCoeff());
  // The projected form itself, against the explicit projection.
  for (unsigned seed = 0; seed < 5; ++seed) {
    const Eigen::VectorXd u = test::random_vector(s.u->ndof(), 400 + seed);
    const Eigen::VectorXd cu = c * u;
    const double pi_div = projected_divergence_energy(s, u);
    const Eigen::MatrixXd d = dense(s.blocks.divergence);
    const Eigen::VectorXd pdiv = dense(s.blocks.mass).ldlt().solve(d * u);
    const double form = pi_div + quad_form(s.blocks.penalty, u) - 2.0 * pdiv.dot(cu);
    EXPECT_NEAR(u.dot(pseudo_pressure_gram(s.blocks) * u), form, 1e-9 * (1 + std::abs(form)));
  }
}

TEST(M2System, RejectsInvalidPairings) {
  const auto mesh = square(1);
  const CoefficientSet c = default_coefficients(2);
  const auto u1 = build_space(Family::VectorLagrange, mesh, 1);
  const auto u2 = build_space(Family::VectorLagrange, mesh, 2);
  const auto q1 = build_space(Family::ScalarLagrange, mesh, 1);
  const auto q2 = build_space(Family::ScalarLagrange, mesh, 2);
  EXPECT_THROW(assemble_m2_blocks(*u1, *q1, c, kZeroLoad), PreconditionError);
  EXPECT_THROW(assemble_m2_blocks(*u2, *q2, c, kZeroLoad), PreconditionError);
  const auto other = build_space(Family::ScalarLagrange, square(1), 1);
  EXPECT_THROW(assemble_m2_blocks(*u2, *other, c, kZeroLoad), PreconditionError);
}

}  // namespace
}  // namespace galbrun
