#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "galbrun/geometry.hpp"
#include "galbrun/types.hpp"

namespace galbrun {

enum class Domain { UnitSquare, UnitDisc };

/// Mesh edge. `vertices` is sorted ascending, which fixes the global edge
/// direction; `owners` is sorted ascending, and the global facet normal is the
/// outward normal of owners[0].
struct Facet {
  std::array<int, 2> vertices{-1, -1};
  std::array<int, 2> owners{-1, -1};
  std::array<int, 2> local_edges{-1, -1};
  bool boundary = false;

  [[nodiscard]] int owner_count() const { return owners[1] < 0 ? 1 : 2; }
};

/// Conforming triangulation with optional curved boundary edges.
///
/// Immutable after construction.
class Mesh {
 public:
  Mesh(Domain domain, std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
       int geom_order);

  [[nodiscard]] Domain domain() const { return domain_; }
  [[nodiscard]] int geom_order() const { return geom_order_; }
  [[nodiscard]] const std::vector<Vec2>& vertices() const { return vertices_; }
  [[nodiscard]] const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  [[nodiscard]] const std::vector<Facet>& facets() const { return facets_; }
  [[nodiscard]] int num_triangles() const { return static_cast<int>(triangles_.size()); }
  [[nodiscard]] int num_facets() const { return static_cast<int>(facets_.size()); }
  [[nodiscard]] int num_boundary_facets() const;

  /// Facet index of local edge e of triangle t.
  [[nodiscard]] int element_facet(int t, int e) const { return element_facets_[t][e]; }

  /// g-1 arc nodes of a curved boundary facet, ordered from vertices[0] to
  /// vertices[1]. Empty for straight facets.
  [[nodiscard]] const std::vector<Vec2>& curved_edge_nodes(int facet) const {
    return curve_nodes_[facet];
  }
  [[nodiscard]] bool is_curved(int t) const;
  [[nodiscard]] ElementGeometry geometry(int t) const;

  /// Straight distance between the facet end points.
  [[nodiscard]] double facet_diameter(int f) const;
  /// Max pairwise distance of the straight element vertices.
  [[nodiscard]] double element_diameter(int t) const;

  /// Local edge of `t` runs in global facet direction.
  [[nodiscard]] bool edge_aligned(int t, int e) const;

 private:
  void build_facets();
  void build_curve_nodes();

  Domain domain_;
  int geom_order_;
  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<Facet> facets_;
  std::vector<std::array<int, 3>> element_facets_;
  std::vector<std::vector<Vec2>> curve_nodes_;
};

/// Hexagon fan of six triangles refined `level` times, boundary vertices on
/// the unit circle, boundary edges curved with degree `geom_order`.
Mesh make_unit_disc_mesh(int level, int geom_order);

/// n x n squares on [0,1]^2, each split along its (i,j)-(i+1,j+1) diagonal.
Mesh make_unit_square_mesh(int n);

/// Uniform red refinement; new disc boundary vertices are projected radially.
Mesh refine(const Mesh& mesh);

/// Maximum element diameter.
double mesh_size(const Mesh& mesh);

/// Sum of element areas through the (possibly curved) geometry maps.
double mesh_area(const Mesh& mesh);

/// Smallest interior angle over all straight triangles, in radians.
double min_angle(const Mesh& mesh);

/// Plain-text dump: header "vertices <n> triangles <m> facets <k> geom_order <g>"
/// followed by one line per vertex, triangle and facet.
void write_mesh(const Mesh& mesh, std::ostream& os);

}  // namespace galbrun
