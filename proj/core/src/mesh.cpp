#include "galbrun/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>
#include <unordered_map>

#include "galbrun/polynomials.hpp"
#include "galbrun/quadrature.hpp"

namespace galbrun {

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

double orientation(const Vec2& a, const Vec2& b, const Vec2& c) {
  const Vec2 u = b - a;
  const Vec2 v = c - a;
  return u.x() * v.y() - u.y() * v.x();
}

}  // namespace

Mesh::Mesh(Domain domain, std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
           int geom_order)
    : domain_(domain),
      geom_order_(geom_order),
      vertices_(std::move(vertices)),
      triangles_(std::move(triangles)) {
  if (geom_order_ < 1) throw PreconditionError("geometry order must be >= 1");
  for (const auto& tri : triangles_) {
    if (orientation(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]) <= 0.0) {
      throw PreconditionError("triangle is not counterclockwise");
    }
  }
  build_facets();
  build_curve_nodes();
}

void Mesh::build_facets() {
  std::unordered_map<std::uint64_t, int> lookup;
  lookup.reserve(3 * triangles_.size());
  element_facets_.resize(triangles_.size());
  for (int t = 0; t < num_triangles(); ++t) {
    for (int e = 0; e < 3; ++e) {
      const int a = triangles_[t][kEdgeVertices[e][0]];
      const int b = triangles_[t][kEdgeVertices[e][1]];
      const auto [it, inserted] = lookup.try_emplace(edge_key(a, b), num_facets());
      if (inserted) {
        Facet f;
        f.vertices = {std::min(a, b), std::max(a, b)};
        f.owners[0] = t;
        f.local_edges[0] = e;
        facets_.push_back(f);
      } else {
        Facet& f = facets_[it->second];
        if (f.owners[1] >= 0) throw PreconditionError("edge shared by more than two triangles");
        f.owners[1] = t;
        f.local_edges[1] = e;
      }
      element_facets_[t][e] = it->second;
    }
  }
  for (auto& f : facets_) f.boundary = f.owners[1] < 0;
}

void Mesh::build_curve_nodes() {
  curve_nodes_.assign(facets_.size(), {});
  if (domain_ != Domain::UnitDisc || geom_order_ < 2) return;
  for (int i = 0; i < num_facets(); ++i) {
    const Facet& f = facets_[i];
    if (!f.boundary) continue;
    const Vec2& a = vertices_[f.vertices[0]];
    const Vec2& b = vertices_[f.vertices[1]];
    const double ta = std::atan2(a.y(), a.x());
    const double tb = std::atan2(b.y(), b.x());
    const double sweep = std::atan2(std::sin(tb - ta), std::cos(tb - ta));
    for (int k = 1; k < geom_order_; ++k) {
      const double theta = ta + sweep * k / geom_order_;
      curve_nodes_[i].emplace_back(std::cos(theta), std::sin(theta));
    }
  }
}

int Mesh::num_boundary_facets() const {
  return static_cast<int>(
      std::count_if(facets_.begin(), facets_.end(), [](const Facet& f) { return f.boundary; }));
}

bool Mesh::edge_aligned(int t, int e) const {
  const int a = triangles_[t][kEdgeVertices[e][0]];
  const int b = triangles_[t][kEdgeVertices[e][1]];
  return a < b;
}

bool Mesh::is_curved(int t) const {
  for (int e = 0; e < 3; ++e) {
    if (!curve_nodes_[element_facets_[t][e]].empty()) return true;
  }
  return false;
}

ElementGeometry Mesh::geometry(int t) const {
  const auto& tri = triangles_[t];
  const std::array<Vec2, 3> v{vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]};
  std::vector<std::pair<int, Vec2>> displacements;
  if (geom_order_ < 2 || !is_curved(t)) return ElementGeometry(v, geom_order_, {});

  // Each curved edge e = (a, b) contributes lambda_a lambda_b P(lambda_b - lambda_a),
  // with P of degree g-2 interpolating (arc - chord) / (s (1 - s)) at the edge
  // nodes. It vanishes on the other edges and keeps all map derivatives of
  // order k at O(h^k).
  const int g = geom_order_;
  const ReferenceLagrange& basis = reference_lagrange(g);
  std::vector<Vec2> offset(basis.size(), Vec2::Zero());
  for (int e = 0; e < 3; ++e) {
    const auto& nodes = curve_nodes_[element_facets_[t][e]];
    if (nodes.empty()) continue;
    const bool aligned = edge_aligned(t, e);
    const int ia = kEdgeVertices[e][0];
    const int ib = kEdgeVertices[e][1];
    std::vector<double> tj(g - 1);
    std::vector<Vec2> qj(g - 1);
    for (int j = 0; j < g - 1; ++j) {
      const double sj = static_cast<double>(j + 1) / g;
      const Vec2 chord = (1.0 - sj) * v[ia] + sj * v[ib];
      tj[j] = 2.0 * sj - 1.0;
      qj[j] = (nodes[aligned ? j : g - 2 - j] - chord) / (sj * (1.0 - sj));
    }
    for (int n = 3; n < basis.size(); ++n) {
      const Vec2& xi = basis.nodes()[n];
      const std::array<double, 3> lambda{1.0 - xi.x() - xi.y(), xi.x(), xi.y()};
      const double bubble = lambda[ia] * lambda[ib];
      if (bubble == 0.0) continue;
      const double tt = lambda[ib] - lambda[ia];
      Vec2 poly = Vec2::Zero();
      for (int j = 0; j < g - 1; ++j) {
        double ell = 1.0;
        for (int k = 0; k < g - 1; ++k) {
          if (k != j) ell *= (tt - tj[k]) / (tj[j] - tj[k]);
        }
        poly += ell * qj[j];
      }
      offset[n] += bubble * poly;
    }
  }
  for (int n = 3; n < basis.size(); ++n) {
    if (offset[n] != Vec2::Zero()) displacements.emplace_back(n, offset[n]);
  }
  return ElementGeometry(v, geom_order_, std::move(displacements));
}

double Mesh::facet_diameter(int f) const {
  return (vertices_[facets_[f].vertices[0]] - vertices_[facets_[f].vertices[1]]).norm();
}

double Mesh::element_diameter(int t) const {
  const auto& tri = triangles_[t];
  double d = 0.0;
  for (int i = 0; i < 3; ++i) {
    d = std::max(d, (vertices_[tri[i]] - vertices_[tri[(i + 1) % 3]]).norm());
  }
  return d;
}

Mesh make_unit_square_mesh(int n) {
  if (n < 1) throw PreconditionError("square mesh needs n >= 1");
  std::vector<Vec2> vertices;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
    }
  }
  const auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::array<int, 3>> triangles;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return Mesh(Domain::UnitSquare, std::move(vertices), std::move(triangles), 1);
}

Mesh make_unit_disc_mesh(int level, int geom_order) {
  if (level < 0) throw PreconditionError("disc level must be >= 0");
  std::vector<Vec2> vertices{Vec2::Zero()};
  for (int k = 0; k < 6; ++k) {
    const double theta = k * std::numbers::pi / 3.0;
    vertices.emplace_back(std::cos(theta), std::sin(theta));
  }
  std::vector<std::array<int, 3>> triangles;
  for (int k = 0; k < 6; ++k) triangles.push_back({0, 1 + k, 1 + (k + 1) % 6});
  Mesh mesh(Domain::UnitDisc, std::move(vertices), std::move(triangles), geom_order);
  for (int l = 0; l < level; ++l) mesh = refine(mesh);
  return mesh;
}

Mesh refine(const Mesh& mesh) {
  std::vector<Vec2> vertices = mesh.vertices();
  const int nv = static_cast<int>(vertices.size());
  for (const Facet& f : mesh.facets()) {
    Vec2 mid = 0.5 * (mesh.vertices()[f.vertices[0]] + mesh.vertices()[f.vertices[1]]);
    if (f.boundary && mesh.domain() == Domain::UnitDisc) mid.normalize();
    vertices.push_back(mid);
  }
  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(4 * mesh.triangles().size());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto [a, b, c] = mesh.triangles()[t];
    const int m0 = nv + mesh.element_facet(t, 0);  // midpoint of (b, c)
    const int m1 = nv + mesh.element_facet(t, 1);  // (c, a)
    const int m2 = nv + mesh.element_facet(t, 2);  // (a, b)
    triangles.push_back({a, m2, m1});
    triangles.push_back({m2, b, m0});
    triangles.push_back({m1, m0, c});
    triangles.push_back({m0, m1, m2});
  }
  return Mesh(mesh.domain(), std::move(vertices), std::move(triangles), mesh.geom_order());
}

double mesh_size(const Mesh& mesh) {
  double h = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) h = std::max(h, mesh.element_diameter(t));
  return h;
}

double mesh_area(const Mesh& mesh) {
  const TriangleRule rule = triangle_rule(2 * mesh.geom_order());
  double area = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry geo = mesh.geometry(t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      area += rule.weights[q] * geo.eval(rule.points[q]).det;
    }
  }
  return area;
}

double min_angle(const Mesh& mesh) {
  double result = std::numbers::pi;
  for (const auto& tri : mesh.triangles()) {
    for (int i = 0; i < 3; ++i) {
      const Vec2& p = mesh.vertices()[tri[i]];
      const Vec2 u = mesh.vertices()[tri[(i + 1) % 3]] - p;
      const Vec2 v = mesh.vertices()[tri[(i + 2) % 3]] - p;
      const double cosine = std::clamp(u.dot(v) / (u.norm() * v.norm()), -1.0, 1.0);
      result = std::min(result, std::acos(cosine));
    }
  }
  return result;
}

void write_mesh(const Mesh& mesh, std::ostream& os) {
  os << "vertices " << mesh.vertices().size() << " triangles " << mesh.num_triangles()
     << " facets " << mesh.num_facets() << " geom_order " << mesh.geom_order() << '\n';
  const auto old_precision = os.precision(17);
  for (const Vec2& v : mesh.vertices()) os << v.x() << ' ' << v.y() << '\n';
  for (const auto& t : mesh.triangles()) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (int i = 0; i < mesh.num_facets(); ++i) {
    const Facet& f = mesh.facets()[i];
    os << f.vertices[0] << ' ' << f.vertices[1] << ' ' << f.owners[0] << ' ' << f.owners[1]
       << ' ' << f.local_edges[0] << ' ' << f.local_edges[1] << ' ' << (f.boundary ? 1 : 0);
    for (const Vec2& c : mesh.curved_edge_nodes(i)) os << ' ' << c.x() << ' ' << c.y();
    os << '\n';
  }
  os.precision(old_precision);
}

}  // namespace galbrun
