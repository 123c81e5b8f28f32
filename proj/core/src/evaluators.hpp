#pragma once

// Cached reference tables for volume and facet loops. Internal to the library.

#include <array>

#include "galbrun/fespace.hpp"
#include "galbrun/integration.hpp"
#include "galbrun/polynomials.hpp"
#include "galbrun/quadrature.hpp"

namespace galbrun::detail {

class VolumeEvaluator {
 public:
  VolumeEvaluator(const FeSpace& space, int order)
      : space_(space), rule_(triangle_rule(order)), table_(space.tabulate(rule_.points)) {}

  [[nodiscard]] const TriangleRule& rule() const { return rule_; }
  void evaluate(int t, ElementBasis& out) const {
    space_.evaluate(t, space_.mesh().geometry(t), table_, out);
  }
  /// Quadrature weight including the Jacobian determinant.
  [[nodiscard]] double weight(const ElementBasis& basis, int q) const {
    return rule_.weights[q] * basis.geometry[q].det;
  }

 private:
  const FeSpace& space_;
  TriangleRule rule_;
  ReferenceTable table_;
};

/// Basis of both owners at matching facet quadrature points.
struct FacetBasis {
  FacetQuadrature fq;
  std::array<ElementBasis, 2> side;
};

class FacetEvaluator {
 public:
  FacetEvaluator(const FeSpace& space, int order) : space_(space), rule_(segment_rule(order)) {
    for (int e = 0; e < 3; ++e) {
      for (int aligned = 0; aligned < 2; ++aligned) {
        std::vector<Vec2> pts;
        for (double s : rule_.points) pts.push_back(reference_edge_point(e, aligned ? s : 1.0 - s));
        tables_[2 * e + aligned] = space.tabulate(pts);
      }
    }
  }

  [[nodiscard]] const SegmentRule& rule() const { return rule_; }

  void evaluate(int f, FacetBasis& out) const {
    const Mesh& mesh = space_.mesh();
    out.fq = facet_quadrature(mesh, f, rule_);
    for (int s = 0; s < out.fq.side_count; ++s) {
      const int t = out.fq.sides[s].element;
      const int e = out.fq.sides[s].local_edge;
      const int key = 2 * e + (mesh.edge_aligned(t, e) ? 1 : 0);
      space_.evaluate(t, mesh.geometry(t), tables_[key], out.side[s]);
    }
  }

 private:
  const FeSpace& space_;
  SegmentRule rule_;
  std::array<ReferenceTable, 6> tables_;
};

}  // namespace galbrun::detail
