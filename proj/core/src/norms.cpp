#include "galbrun/norms.hpp"

#include <algorithm>
#include <cmath>

#include "evaluators.hpp"

namespace galbrun {

using detail::FacetBasis;
using detail::FacetEvaluator;
using detail::VolumeEvaluator;

double l2_error(const DiscreteField& uh, const VectorField& exact, int extra_order) {
  const FeSpace& space = *uh.space;
  const VolumeEvaluator vol(space,
                            form_quadrature_order(space.degree(), space.mesh().geom_order()) +
                                extra_order);
  ElementBasis basis;
  FieldValues values;
  double sum = 0.0;
  for (int t = 0; t < space.mesh().num_triangles(); ++t) {
    vol.evaluate(t, basis);
    evaluate_field(basis, space.element_dofs(t), uh.coefficients, values);
    for (int q = 0; q < basis.n_points; ++q) {
      sum += vol.weight(basis, q) * (values.value[q] - exact(basis.geometry[q].x)).squaredNorm();
    }
  }
  return std::sqrt(sum);
}

double xh_error_squared(Method method, const DiscreteField& uh, const ExactSolution& exact,
                        const CoefficientSet& coeffs,
                        const std::shared_ptr<const FeSpace>& pressure) {
  const FeSpace& space = *uh.space;
  const Mesh& mesh = space.mesh();
  if (method == Method::M2 && !pressure) {
    throw PreconditionError("M2 error norm needs the pseudo-pressure space");
  }
  const int order = form_quadrature_order(space.degree(), mesh.geom_order()) + kSmoothDataMargin;
  const double b2 = coeffs.flow_sup * coeffs.flow_sup;
  const ScalarField weight = [&coeffs](const Vec2& x) { return coeffs.rho(x) * coeffs.cs2(x); };
  double a_sum = 0.0;
  double b_sum = 0.0;

  const VolumeEvaluator vol(space, order);
  ElementBasis basis;
  FieldValues values;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    vol.evaluate(t, basis);
    evaluate_field(basis, space.element_dofs(t), uh.coefficients, values);
    for (int q = 0; q < basis.n_points; ++q) {
      const Vec2& x = basis.geometry[q].x;
      const double w = vol.weight(basis, q);
      const Vec2 e = values.value[q] - exact.value(x);
      const Vec2 de_b = (values.grad[q] - exact.gradient(x)) * coeffs.flow(x);
      a_sum += w * coeffs.rho(x) * (de_b.squaredNorm() + b2 * e.squaredNorm());
      if (method != Method::M2) {
        const double de = values.div[q] - exact.divergence(x);
        b_sum += w * weight(x) * de * de;
      }
    }
  }

  // Projected divergence of the error for M2.
  std::optional<DiscreteField> proj;
  if (method == Method::M2) {
    proj = l2_project_samples(
        pressure,
        [&](int t, std::span<const Vec2> pts, const ElementBasis& pb, std::vector<double>& out) {
          const FieldValues v = field_values(uh, t, pts);
          out.resize(pts.size());
          for (std::size_t q = 0; q < pts.size(); ++q) {
            out[q] = v.div[q] - exact.divergence(pb.geometry[q].x);
          }
        },
        weight, kSmoothDataMargin);
    const VolumeEvaluator pvol(*pressure, order);
    ElementBasis pb;
    FieldValues pv;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      pvol.evaluate(t, pb);
      evaluate_field(pb, pressure->element_dofs(t), proj->coefficients, pv);
      for (int q = 0; q < pb.n_points; ++q) {
        b_sum += pvol.weight(pb, q) * weight(pb.geometry[q].x) * pv.scalar[q] * pv.scalar[q];
      }
    }
  }

  const bool a_facets = method == Method::M3 || method == Method::M4;
  const FacetEvaluator fe(space, order);
  FacetBasis fb;
  std::array<FieldValues, 2> side;
  for (int f = 0; f < mesh.num_facets(); ++f) {
    const bool boundary = mesh.facets()[f].boundary;
    bool b_terms = false;
    switch (method) {
      case Method::M1:
      case Method::M2: b_terms = boundary; break;
      case Method::M3: b_terms = false; break;
      case Method::M4: b_terms = true; break;
    }
    const bool a_terms = a_facets && !boundary;
    if (!a_terms && !b_terms) continue;
    fe.evaluate(f, fb);
    for (int s = 0; s < fb.fq.side_count; ++s) {
      evaluate_field(fb.side[s], space.element_dofs(fb.fq.sides[s].element), uh.coefficients,
                     side[s]);
    }
    FieldValues pi_trace;
    if (method == Method::M2) pi_trace = field_values(*proj, fb.fq.sides[0].element,
                                                      fb.fq.sides[0].ref_points);
    const double h = fb.fq.diameter;
    for (std::size_t q = 0; q < fb.fq.x.size(); ++q) {
      const Vec2& x = fb.fq.x[q];
      const Vec2& n = fb.fq.normals[q];
      const double w = fb.fq.weights[q];
      const Vec2 u = exact.value(x);
      const Mat2 gu = exact.gradient(x);
      const double du = exact.divergence(x);
      const Vec2 e0 = side[0].value[q] - u;
      if (a_terms) {
        const Vec2 b = coeffs.flow(x);
        const Vec2 jump = b.dot(n) * (side[0].value[q] - side[1].value[q]);
        const Vec2 avg = 0.5 * (side[0].grad[q] + side[1].grad[q] - 2.0 * gu) * b;
        a_sum += w * coeffs.rho(x) * (coeffs.lambda_b / h * jump.squaredNorm() - 2.0 * avg.dot(jump));
      }
      if (b_terms) {
        double jn = 0.0;
        double avg_div = 0.0;
        if (method == Method::M2) {
          jn = e0.dot(n);
          avg_div = pi_trace.scalar[q];
        } else if (boundary) {
          jn = e0.dot(n);
          avg_div = side[0].div[q] - du;
        } else {
          jn = (side[0].value[q] - side[1].value[q]).dot(n);
          avg_div = 0.5 * (side[0].div[q] + side[1].div[q]) - du;
        }
        b_sum += w * weight(x) * (coeffs.lambda_n / h * jn * jn - 2.0 * avg_div * jn);
      }
    }
  }
  return a_sum + b_sum;
}

ErrorNorms error_norms(Method method, const DiscreteField& uh, const ExactSolution& exact,
                       const CoefficientSet& coeffs,
                       const std::shared_ptr<const FeSpace>& pressure) {
  ErrorNorms norms;
  norms.l2_error = l2_error(uh, exact.value);
  norms.xh_error = std::sqrt(std::max(0.0, xh_error_squared(method, uh, exact, coeffs, pressure)));
  norms.l2_norm = l2_norm(uh);
  return norms;
}

}  // namespace galbrun
