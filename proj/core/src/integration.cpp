#include "galbrun/integration.hpp"

#include "galbrun/polynomials.hpp"

namespace galbrun {

FacetQuadrature facet_quadrature(const Mesh& mesh, int f, const SegmentRule& rule) {
  const Facet& facet = mesh.facets()[f];
  FacetQuadrature fq;
  fq.facet = f;
  fq.boundary = facet.boundary;
  fq.diameter = mesh.facet_diameter(f);
  fq.side_count = facet.owner_count();
  for (int s = 0; s < fq.side_count; ++s) {
    const int t = facet.owners[s];
    const int e = facet.local_edges[s];
    const bool aligned = mesh.edge_aligned(t, e);
    FacetSide& side = fq.sides[s];
    side.element = t;
    side.local_edge = e;
    for (double sq : rule.points) {
      side.ref_points.push_back(reference_edge_point(e, aligned ? sq : 1.0 - sq));
    }
  }
  const ElementGeometry geo = mesh.geometry(facet.owners[0]);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const GeometryPoint g = geo.eval(fq.sides[0].ref_points[q]);
    const Vec2 nu = ElementGeometry::scaled_normal(fq.sides[0].local_edge, g);
    const double ds = nu.norm();
    fq.x.push_back(g.x);
    fq.weights.push_back(rule.weights[q] * ds);
    fq.normals.push_back(nu / ds);
  }
  return fq;
}

}  // namespace galbrun
