#include "galbrun/field.hpp"

#include <cmath>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "galbrun/integration.hpp"
#include "galbrun/polynomials.hpp"

namespace galbrun {

void evaluate_field(const ElementBasis& basis, std::span<const int> dofs,
                    const Eigen::VectorXd& coefficients, FieldValues& out) {
  const int nq = basis.n_points;
  const int nb = basis.n_basis;
  const bool scalar = !basis.scalar.empty();
  if (scalar) {
    out.scalar.assign(nq, 0.0);
    out.scalar_grad.assign(nq, Vec2::Zero());
  } else {
    out.value.assign(nq, Vec2::Zero());
    out.grad.assign(nq, Mat2::Zero());
    out.div.assign(nq, 0.0);
  }
  for (int q = 0; q < nq; ++q) {
    for (int i = 0; i < nb; ++i) {
      const double c = coefficients(dofs[i]);
      if (c == 0.0) continue;
      const int idx = basis.at(q, i);
      if (scalar) {
        out.scalar[q] += c * basis.scalar[idx];
        out.scalar_grad[q] += c * basis.scalar_grad[idx];
      } else {
        out.value[q] += c * basis.value[idx];
        out.grad[q] += c * basis.grad[idx];
        out.div[q] += c * basis.div[idx];
      }
    }
  }
}

FieldValues field_values(const DiscreteField& field, int t, std::span<const Vec2> ref_points) {
  const ElementBasis basis = field.space->evaluate(t, ref_points);
  FieldValues values;
  evaluate_field(basis, field.space->element_dofs(t), field.coefficients, values);
  return values;
}

FacetTrace facet_trace(const DiscreteField& field, int facet, const SegmentRule& rule,
                       const VectorField& flow) {
  const FeSpace& space = *field.space;
  if (!space.is_vector()) throw PreconditionError("facet_trace needs a vector field");
  const FacetQuadrature fq = facet_quadrature(space.mesh(), facet, rule);
  FacetTrace tr;
  tr.facet = facet;
  tr.boundary = fq.boundary;
  tr.x = fq.x;
  tr.normal = fq.normals;
  tr.weight = fq.weights;
  const std::size_t nq = fq.x.size();
  std::array<FieldValues, 2> sides;
  for (int s = 0; s < fq.side_count; ++s) {
    sides[s] = field_values(field, fq.sides[s].element, fq.sides[s].ref_points);
    tr.side_value[s] = sides[s].value;
  }
  for (std::size_t q = 0; q < nq; ++q) {
    const Vec2 b = flow(fq.x[q]);
    const Vec2& n = fq.normals[q];
    const FieldValues& plus = sides[0];
    if (fq.side_count == 1) {
      tr.avg.push_back(plus.value[q]);
      tr.avg_flow_derivative.push_back(plus.grad[q] * b);
      tr.avg_div.push_back(plus.div[q]);
      tr.jump_b.push_back(b.dot(n) * plus.value[q]);
      tr.jump_n.push_back(plus.value[q].dot(n));
    } else {
      const FieldValues& minus = sides[1];
      tr.avg.push_back(0.5 * (plus.value[q] + minus.value[q]));
      tr.avg_flow_derivative.push_back(0.5 * (plus.grad[q] + minus.grad[q]) * b);
      tr.avg_div.push_back(0.5 * (plus.div[q] + minus.div[q]));
      tr.jump_b.push_back(b.dot(n) * (plus.value[q] - minus.value[q]));
      tr.jump_n.push_back((plus.value[q] - minus.value[q]).dot(n));
    }
  }
  return tr;
}

DiscreteField bdm_interpolate(std::shared_ptr<const FeSpace> space, const VectorField& v) {
  if (space->family() != Family::HdivBDM) {
    throw PreconditionError("bdm_interpolate needs an HdivBDM space");
  }
  const Mesh& mesh = space->mesh();
  const ReferenceBdm& ref = reference_bdm(space->degree());
  const int p = space->degree();
  const int ne = ref.edge_dofs();
  const int ni = ref.interior_dofs();
  const int order = form_quadrature_order(p, mesh.geom_order()) + kSmoothDataMargin;
  const SegmentRule seg = segment_rule(order);
  const TriangleRule tri = triangle_rule(order);

  DiscreteField out{space, Eigen::VectorXd::Zero(space->ndof())};
  Eigen::VectorXd local(ref.size());
  Eigen::MatrixX2d psi(std::max(ni, 1), 2);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry geo = mesh.geometry(t);
    local.setZero();
    for (int e = 0; e < 3; ++e) {
      for (std::size_t q = 0; q < seg.size(); ++q) {
        const double s = seg.points[q];
        const GeometryPoint g = geo.eval(reference_edge_point(e, s));
        const double flux = v(g.x).dot(ElementGeometry::scaled_normal(e, g));
        for (int k = 0; k <= p; ++k) {
          local(e * ne + k) += seg.weights[q] * shifted_legendre(k, s) * flux;
        }
      }
    }
    if (ni > 0) {
      for (std::size_t q = 0; q < tri.size(); ++q) {
        const GeometryPoint g = geo.eval(tri.points[q]);
        // contravariant pull-back: vhat = det J^{-1} v
        const Vec2 vhat = g.det * g.jacobian.inverse() * v(g.x);
        ref.interior_test_functions(tri.points[q], psi);
        for (int j = 0; j < ni; ++j) {
          local(3 * ne + j) += tri.weights[q] * (psi(j, 0) * vhat.x() + psi(j, 1) * vhat.y());
        }
      }
    }
    const auto dofs = space->element_dofs(t);
    const auto signs = space->element_signs(t);
    for (int i = 0; i < ref.size(); ++i) out.coefficients(dofs[i]) = signs[i] * local(i);
  }
  return out;
}

namespace {

template <class Assign>
void for_each_node(const FeSpace& space, Assign&& assign) {
  const Mesh& mesh = space.mesh();
  const ReferenceLagrange& ref = reference_lagrange(space.degree());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry geo = mesh.geometry(t);
    const auto dofs = space.element_dofs(t);
    for (int s = 0; s < ref.size(); ++s) assign(geo.eval(ref.nodes()[s]), dofs, s);
  }
}

}  // namespace

DiscreteField nodal_interpolate(std::shared_ptr<const FeSpace> space, const VectorField& v) {
  if (space->family() != Family::VectorLagrange && space->family() != Family::VectorDG) {
    throw PreconditionError("nodal_interpolate(vector) needs a vector Lagrange or DG space");
  }
  DiscreteField out{space, Eigen::VectorXd::Zero(space->ndof())};
  const bool piola = space->family() == Family::VectorDG;
  for_each_node(*space, [&](const GeometryPoint& g, std::span<const int> dofs, int s) {
    // DG coefficients are reference values of the contravariant pull-back.
    const Vec2 value = piola ? Vec2(g.det * g.jacobian.inverse() * v(g.x)) : v(g.x);
    out.coefficients(dofs[2 * s]) = value.x();
    out.coefficients(dofs[2 * s + 1]) = value.y();
  });
  return out;
}

DiscreteField nodal_interpolate(std::shared_ptr<const FeSpace> space, const ScalarField& v) {
  if (space->family() != Family::ScalarLagrange) {
    throw PreconditionError("nodal_interpolate(scalar) needs a ScalarLagrange space");
  }
  DiscreteField out{space, Eigen::VectorXd::Zero(space->ndof())};
  for_each_node(*space, [&](const GeometryPoint& g, std::span<const int> dofs, int s) {
    out.coefficients(dofs[s]) = v(g.x);
  });
  return out;
}

DiscreteField l2_project_samples(std::shared_ptr<const FeSpace> space,
                                 const ElementScalarSampler& sampler, const ScalarField& weight,
                                 int extra_order) {
  if (space->is_vector()) throw PreconditionError("scalar projection needs a scalar space");
  const Mesh& mesh = space->mesh();
  const int n = space->ndof();
  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  const int order = form_quadrature_order(space->degree(), mesh.geom_order()) + extra_order;
  const TriangleRule rule = triangle_rule(order);
  const ReferenceTable table = space->tabulate(rule.points);
  ElementBasis basis;
  std::vector<double> samples;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    space->evaluate(t, mesh.geometry(t), table, basis);
    sampler(t, rule.points, basis, samples);
    const auto dofs = space->element_dofs(t);
    for (int q = 0; q < basis.n_points; ++q) {
      const double w = rule.weights[q] * basis.geometry[q].det * weight(basis.geometry[q].x);
      for (int i = 0; i < basis.n_basis; ++i) {
        const double wi = w * basis.scalar[basis.at(q, i)];
        rhs(dofs[i]) += wi * samples[q];
        for (int j = 0; j < basis.n_basis; ++j) {
          triplets.emplace_back(dofs[i], dofs[j], wi * basis.scalar[basis.at(q, j)]);
        }
      }
    }
  }
  Eigen::SparseMatrix<double> mass(n, n);
  mass.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(mass);
  if (ldlt.info() != Eigen::Success) throw SolverError("mass matrix factorization failed");
  return {space, ldlt.solve(rhs)};
}

DiscreteField l2_project(std::shared_ptr<const FeSpace> space, const ScalarField& f,
                         const ScalarField& weight) {
  return l2_project_samples(
      space,
      [&f](int, std::span<const Vec2>, const ElementBasis& basis, std::vector<double>& out) {
        out.resize(basis.n_points);
        for (int q = 0; q < basis.n_points; ++q) out[q] = f(basis.geometry[q].x);
      },
      weight, kSmoothDataMargin);
}

DiscreteField l2_project(std::shared_ptr<const FeSpace> space, const VectorField& f,
                         const ScalarField& weight) {
  if (!space->is_vector()) throw PreconditionError("vector projection needs a vector space");
  const Mesh& mesh = space->mesh();
  const int n = space->ndof();
  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  const int order = form_quadrature_order(space->degree(), mesh.geom_order()) + kSmoothDataMargin;
  const TriangleRule rule = triangle_rule(order);
  const ReferenceTable table = space->tabulate(rule.points);
  ElementBasis basis;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    space->evaluate(t, mesh.geometry(t), table, basis);
    const auto dofs = space->element_dofs(t);
    for (int q = 0; q < basis.n_points; ++q) {
      const Vec2& x = basis.geometry[q].x;
      const double w = rule.weights[q] * basis.geometry[q].det * weight(x);
      const Vec2 fx = f(x);
      for (int i = 0; i < basis.n_basis; ++i) {
        const Vec2& vi = basis.value[basis.at(q, i)];
        rhs(dofs[i]) += w * vi.dot(fx);
        for (int j = 0; j < basis.n_basis; ++j) {
          triplets.emplace_back(dofs[i], dofs[j], w * vi.dot(basis.value[basis.at(q, j)]));
        }
      }
    }
  }
  Eigen::SparseMatrix<double> mass(n, n);
  mass.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(mass);
  if (ldlt.info() != Eigen::Success) throw SolverError("mass matrix factorization failed");
  return {space, ldlt.solve(rhs)};
}

double l2_norm(const DiscreteField& field) {
  const FeSpace& space = *field.space;
  const Mesh& mesh = space.mesh();
  const TriangleRule rule = triangle_rule(form_quadrature_order(space.degree(), mesh.geom_order()));
  const ReferenceTable table = space.tabulate(rule.points);
  ElementBasis basis;
  FieldValues values;
  double sum = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    space.evaluate(t, mesh.geometry(t), table, basis);
    evaluate_field(basis, space.element_dofs(t), field.coefficients, values);
    for (int q = 0; q < basis.n_points; ++q) {
      const double w = rule.weights[q] * basis.geometry[q].det;
      sum += w * (space.is_vector() ? values.value[q].squaredNorm()
                                    : values.scalar[q] * values.scalar[q]);
    }
  }
  return std::sqrt(sum);
}

}  // namespace galbrun
