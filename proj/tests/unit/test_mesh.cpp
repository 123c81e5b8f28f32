#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "galbrun/geometry.hpp"
#include "galbrun/mesh.hpp"
#include "galbrun/polynomials.hpp"
#include "galbrun/quadrature.hpp"

namespace galbrun {
namespace {

TEST(Mesh, DiscLevelZeroIsHexagonFan) {
  const Mesh m = make_unit_disc_mesh(0, 1);
  EXPECT_EQ(m.vertices().size(), 7u);
  EXPECT_EQ(m.num_triangles(), 6);
  EXPECT_EQ(m.num_facets(), 12);
  EXPECT_EQ(m.num_boundary_facets(), 6);
  EXPECT_NEAR(mesh_size(m), 1.0, 1e-15);
}

TEST(Mesh, DiscRefinementCounts) {
  EXPECT_EQ(make_unit_disc_mesh(1, 1).num_triangles(), 24);
  EXPECT_EQ(make_unit_disc_mesh(3, 2).num_triangles(), 384);
}

TEST(Mesh, CurvedEdgeNodesLieOnCircle) {
  const Mesh m = make_unit_disc_mesh(2, 3);
  int checked = 0;
  for (int f = 0; f < m.num_facets(); ++f) {
    const auto& nodes = m.curved_edge_nodes(f);
    if (!m.facets()[f].boundary) {
      EXPECT_TRUE(nodes.empty());
      continue;
    }
    ASSERT_EQ(nodes.size(), 2u);
    for (const Vec2& c : nodes) {
      EXPECT_LE(std::abs(c.norm() - 1.0), 1e-12);
      ++checked;
    }
  }
  EXPECT_EQ(checked, 2 * m.num_boundary_facets());
}

TEST(Mesh, SquareCounts) {
  const Mesh m1 = make_unit_square_mesh(1);
  EXPECT_EQ(m1.num_triangles(), 2);
  EXPECT_EQ(m1.num_facets(), 5);
  EXPECT_EQ(m1.num_boundary_facets(), 4);
  EXPECT_EQ(make_unit_square_mesh(2).num_triangles(), 8);
  EXPECT_NEAR(mesh_size(make_unit_square_mesh(4)), std::sqrt(2.0) / 4.0, 1e-15);
  EXPECT_NEAR(mesh_size(make_unit_square_mesh(2)), std::sqrt(2.0) / 2.0, 1e-15);
}

TEST(Mesh, RefineDiscMatchesDirectConstruction) {
  for (int g : {1, 2, 4}) {
    const Mesh a = refine(make_unit_disc_mesh(0, g));
    const Mesh b = make_unit_disc_mesh(1, g);
    ASSERT_EQ(a.vertices().size(), b.vertices().size());
    for (std::size_t i = 0; i < a.vertices().size(); ++i) {
      EXPECT_LE((a.vertices()[i] - b.vertices()[i]).norm(), 1e-15);
    }
    EXPECT_EQ(a.triangles(), b.triangles());
    EXPECT_EQ(a.geom_order(), g);
  }
}

TEST(Mesh, RefineSquareHalvesMeshSize) {
  Mesh m = make_unit_square_mesh(1);
  for (int k = 0; k < 3; ++k) {
    const Mesh r = refine(m);
    EXPECT_EQ(r.num_triangles(), 4 * m.num_triangles());
    EXPECT_LE(mesh_size(r), 0.51 * mesh_size(m));
    m = r;
  }
  EXPECT_EQ(refine(make_unit_square_mesh(1)).num_triangles(), 8);
}

TEST(Mesh, MeshSizeMatchesBruteForce) {
  const Mesh m = make_unit_disc_mesh(1, 2);
  double h = 0.0;
  for (const auto& t : m.triangles()) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        h = std::max(h, (m.vertices()[t[i]] - m.vertices()[t[j]]).norm());
      }
    }
  }
  EXPECT_DOUBLE_EQ(mesh_size(m), h);
}

TEST(Mesh, FacetTopologyInvariants) {
  const Mesh m = make_unit_disc_mesh(2, 2);
  // Euler characteristic of a disc.
  EXPECT_EQ(static_cast<int>(m.vertices().size()) - m.num_facets() + m.num_triangles(), 1);
  for (int f = 0; f < m.num_facets(); ++f) {
    const Facet& fc = m.facets()[f];
    EXPECT_LT(fc.vertices[0], fc.vertices[1]);
    EXPECT_EQ(fc.boundary, fc.owner_count() == 1);
    if (!fc.boundary) {
      EXPECT_LT(fc.owners[0], fc.owners[1]);
      // Neighbours traverse a shared edge in opposite local directions.
      EXPECT_NE(m.edge_aligned(fc.owners[0], fc.local_edges[0]),
                m.edge_aligned(fc.owners[1], fc.local_edges[1]));
    }
    for (int s = 0; s < fc.owner_count(); ++s) {
      EXPECT_EQ(m.element_facet(fc.owners[s], fc.local_edges[s]), f);
    }
  }
}

TEST(Mesh, InteriorNormalsAreAntisymmetric) {
  const Mesh m = make_unit_disc_mesh(2, 1);
  for (int f = 0; f < m.num_facets(); ++f) {
    const Facet& fc = m.facets()[f];
    if (fc.boundary) continue;
    std::array<Vec2, 2> n;
    for (int s = 0; s < 2; ++s) {
      const auto& tri = m.triangles()[fc.owners[s]];
      const int e = fc.local_edges[s];
      const Vec2 t = m.vertices()[tri[(e + 2) % 3]] - m.vertices()[tri[(e + 1) % 3]];
      n[s] = Vec2(t.y(), -t.x()).normalized();  // outward for counterclockwise triangles
    }
    EXPECT_LE((n[0] + n[1]).norm(), 1e-12);
  }
}

TEST(Mesh, RefinementKeepsMinimumAngle) {
  // Red refinement of a straight mesh only produces similar copies.
  Mesh m = make_unit_square_mesh(2);
  const double base = min_angle(m);
  for (int level = 1; level <= 3; ++level) {
    m = refine(m);
    EXPECT_GE(min_angle(m), base - 1e-9) << level;
  }
  // Radially projected boundary vertices perturb the shapes, but only boundedly.
  Mesh d = make_unit_disc_mesh(0, 1);
  for (int level = 1; level <= 5; ++level) {
    d = refine(d);
    EXPECT_GE(min_angle(d), 0.7) << level;
  }
}

TEST(Mesh, CurvedAreaConvergesToPi) {
  // Arc interpolation of degree g misses the disc area by O(h^(g+1)); for even
  // g the leading error term integrates to zero along each edge, giving O(h^(g+2)).
  for (int g : {1, 2, 3, 4}) {
    const double rate = g % 2 == 0 ? g + 2 : g + 1;
    double prev = 0.0;
    for (int level = 0; level <= 2; ++level) {
      const double err = std::abs(mesh_area(make_unit_disc_mesh(level, g)) - std::numbers::pi);
      if (level > 0) {
        EXPECT_LT(err, prev / std::pow(2.0, rate - 0.5)) << g << " " << level;
      }
      prev = err;
    }
  }
  EXPECT_NEAR(mesh_area(make_unit_disc_mesh(0, 1)), 1.5 * std::sqrt(3.0), 1e-14);
}

TEST(Mesh, CurvedBoundaryApproximatesCircle) {
  const SegmentRule seg = segment_rule(10);
  for (int g : {2, 3, 4}) {
    double prev = 0.0;
    for (int level = 0; level <= 2; ++level) {
      const Mesh m = make_unit_disc_mesh(level, g);
      double dev = 0.0;
      for (int f = 0; f < m.num_facets(); ++f) {
        const Facet& fc = m.facets()[f];
        if (!fc.boundary) continue;
        const ElementGeometry geo = m.geometry(fc.owners[0]);
        for (double t : seg.points) {
          const Vec2 x = geo.map(reference_edge_point(fc.local_edges[0], t));
          dev = std::max(dev, std::abs(x.norm() - 1.0));
        }
      }
      if (level > 0) {
        EXPECT_LT(dev, prev / std::pow(2.0, g + 0.5)) << g << " " << level;
      }
      prev = dev;
    }
  }
}

TEST(Mesh, GeometryJacobianMatchesFiniteDifferences) {
  const Mesh m = make_unit_disc_mesh(1, 4);
  const double h = 1e-6;
  for (int t = 0; t < m.num_triangles(); ++t) {
    if (!m.is_curved(t)) continue;
    const ElementGeometry geo = m.geometry(t);
    const Vec2 xi(0.2, 0.3);
    const GeometryPoint g = geo.eval(xi);
    EXPECT_GT(g.det, 0.0);
    for (int d = 0; d < 2; ++d) {
      Vec2 e = Vec2::Zero();
      e[d] = h;
      const Vec2 fd = (geo.map(xi + e) - geo.map(xi - e)) / (2 * h);
      EXPECT_LE((fd - g.jacobian.col(d)).norm(), 1e-8);
      const Mat2 dj = (geo.eval(xi + e).jacobian - geo.eval(xi - e).jacobian) / (2 * h);
      EXPECT_LE((dj - g.djacobian[d]).cwiseAbs().maxCoeff(), 1e-6);
    }
  }
}

TEST(Mesh, InteriorElementsStayAffine) {
  const Mesh m = make_unit_disc_mesh(2, 3);
  for (int t = 0; t < m.num_triangles(); ++t) {
    bool touches = false;
    for (int e = 0; e < 3; ++e) touches |= m.facets()[m.element_facet(t, e)].boundary;
    EXPECT_EQ(m.is_curved(t), touches);
    EXPECT_EQ(m.geometry(t).affine(), !touches);
  }
}

TEST(Mesh, WriteMeshHeader) {
  std::ostringstream os;
  write_mesh(make_unit_square_mesh(1), os);
  EXPECT_EQ(os.str().rfind("vertices 4 triangles 2 facets 5 geom_order 1", 0), 0u);
}

TEST(Mesh, RejectsInvalidInput) {
  EXPECT_THROW(make_unit_disc_mesh(-1, 1), PreconditionError);
  EXPECT_THROW(make_unit_disc_mesh(0, 0), PreconditionError);
  EXPECT_THROW(make_unit_square_mesh(0), PreconditionError);
  // Clockwise triangle.
  EXPECT_THROW(Mesh(Domain::UnitSquare, {{0, 0}, {0, 1}, {1, 0}}, {{{0, 1, 2}}}, 1),
               PreconditionError);
}

}  // namespace
}  // namespace galbrun
