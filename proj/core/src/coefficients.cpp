#include "galbrun/coefficients.hpp"

#include <algorithm>
#include <cmath>

#include "galbrun/integration.hpp"

namespace galbrun {

CoefficientSet rotating_flow_coefficients(double rho, double cs2, double flow_scale,
                                          double lambda_b, double lambda_n) {
  if (rho <= 0.0 || cs2 <= 0.0) throw PreconditionError("rho and c_s^2 must be positive");
  CoefficientSet c;
  c.rho = [rho](const Vec2&) { return rho; };
  const double cs = std::sqrt(cs2);
  c.sound_speed = [cs](const Vec2&) { return cs; };
  c.flow = [flow_scale](const Vec2& x) { return Vec2(-flow_scale * x.y(), flow_scale * x.x()); };
  c.flow_sup = std::abs(flow_scale);
  c.lambda_b = lambda_b;
  c.lambda_n = lambda_n;
  return c;
}

void validate_coefficients(const CoefficientSet& coeffs, const Mesh& mesh) {
  if (!coeffs.rho || !coeffs.sound_speed || !coeffs.flow) {
    throw PreconditionError("coefficient set is incomplete");
  }
  if (!(coeffs.flow_sup > 0.0)) {
    throw PreconditionError("|b|_inf must be positive: a(u,u) vanishes on constants otherwise");
  }
  if (coeffs.lambda_b < 0.0 || coeffs.lambda_n < 0.0) {
    throw PreconditionError("penalties must be non-negative");
  }
  for (const Vec2& v : mesh.vertices()) {
    if (!(coeffs.rho(v) > 0.0) || !(coeffs.sound_speed(v) > 0.0)) {
      throw PreconditionError("rho and c_s must be positive");
    }
  }
}

double max_boundary_normal_flow(const CoefficientSet& coeffs, const Mesh& mesh, int order) {
  const SegmentRule rule = segment_rule(order);
  double worst = 0.0;
  for (int f = 0; f < mesh.num_facets(); ++f) {
    if (!mesh.facets()[f].boundary) continue;
    const FacetQuadrature fq = facet_quadrature(mesh, f, rule);
    for (std::size_t q = 0; q < fq.x.size(); ++q) {
      worst = std::max(worst, std::abs(coeffs.flow(fq.x[q]).dot(fq.normals[q])));
    }
  }
  return worst;
}

}  // namespace galbrun
