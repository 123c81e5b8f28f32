#pragma once

#include <array>
#include <vector>

#include "galbrun/geometry.hpp"
#include "galbrun/mesh.hpp"
#include "galbrun/quadrature.hpp"

namespace galbrun {

/// Volume/facet quadrature order for degree-p fields on a geometry of order g.
inline int form_quadrature_order(int p, int geom_order) {
  return 2 * p + 2 * (geom_order - 1) + 2;
}

/// Extra order for loads and error integrals with smooth non-polynomial data.
inline constexpr int kSmoothDataMargin = 4;

/// Quadrature points of one facet seen from each owner.
struct FacetSide {
  int element = -1;
  int local_edge = -1;
  std::vector<Vec2> ref_points;  // reference coordinates in the owner
};

struct FacetQuadrature {
  int facet = -1;
  bool boundary = false;
  double diameter = 0.0;          // h_F
  std::vector<Vec2> x;            // physical points
  std::vector<double> weights;    // rule weight * ds
  std::vector<Vec2> normals;      // unit normal, outward of owner 0
  std::array<FacetSide, 2> sides;
  int side_count = 1;
};

/// Maps the segment rule onto facet f; point q matches across both owners.
FacetQuadrature facet_quadrature(const Mesh& mesh, int f, const SegmentRule& rule);

}  // namespace galbrun
