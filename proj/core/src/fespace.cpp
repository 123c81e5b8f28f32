#include "galbrun/fespace.hpp"

#include <cmath>
#include <string>

#include <Eigen/LU>

#include "galbrun/polynomials.hpp"

namespace galbrun {

std::string_view family_name(Family family) {
  switch (family) {
    case Family::VectorLagrange: return "VectorLagrange";
    case Family::ScalarLagrange: return "ScalarLagrange";
    case Family::VectorDG: return "VectorDG";
    case Family::HdivBDM: return "HdivBDM";
  }
  return "?";
}

FeSpace::FeSpace(Family family, std::shared_ptr<const Mesh> mesh, int degree)
    : family_(family), mesh_(std::move(mesh)), degree_(degree) {
  if (!mesh_) throw PreconditionError("FeSpace needs a mesh");
  if (degree < 1) throw PreconditionError("polynomial degree must be >= 1");
  switch (family_) {
    case Family::ScalarLagrange: build_lagrange_dofs(1); break;
    case Family::VectorLagrange: build_lagrange_dofs(2); break;
    case Family::VectorDG: build_dg_dofs(); break;
    case Family::HdivBDM: build_bdm_dofs(); break;
  }
}

void FeSpace::build_lagrange_dofs(int components) {
  const Mesh& m = *mesh_;
  const ReferenceLagrange& ref = reference_lagrange(degree_);
  const int k = degree_;
  const int nv = static_cast<int>(m.vertices().size());
  const int per_edge = k - 1;
  const int per_cell = (k - 1) * (k - 2) / 2;
  const int nscalar = nv + per_edge * m.num_facets() + per_cell * m.num_triangles();
  local_dim_ = components * ref.size();
  ndof_ = components * nscalar;
  dofs_.resize(static_cast<std::size_t>(local_dim_) * m.num_triangles());
  signs_.assign(dofs_.size(), 1.0);
  for (int t = 0; t < m.num_triangles(); ++t) {
    std::vector<int> scalar(ref.size());
    for (int v = 0; v < 3; ++v) scalar[v] = m.triangles()[t][v];
    for (int e = 0; e < 3; ++e) {
      const int f = m.element_facet(t, e);
      const bool aligned = m.edge_aligned(t, e);
      for (int j = 0; j < per_edge; ++j) {
        const int jg = aligned ? j : per_edge - 1 - j;
        scalar[ref.edge_node(e, j)] = nv + f * per_edge + jg;
      }
    }
    for (int j = 0; j < per_cell; ++j) {
      scalar[ref.first_interior_node() + j] = nv + per_edge * m.num_facets() + t * per_cell + j;
    }
    for (int s = 0; s < ref.size(); ++s) {
      for (int c = 0; c < components; ++c) {
        dofs_[static_cast<std::size_t>(t) * local_dim_ + components * s + c] =
            components * scalar[s] + c;
      }
    }
  }
}

void FeSpace::build_dg_dofs() {
  const int n = (degree_ + 1) * (degree_ + 2) / 2;
  local_dim_ = 2 * n;
  ndof_ = local_dim_ * mesh_->num_triangles();
  dofs_.resize(ndof_);
  signs_.assign(ndof_, 1.0);
  for (int i = 0; i < ndof_; ++i) dofs_[i] = i;
}

void FeSpace::build_bdm_dofs() {
  const Mesh& m = *mesh_;
  const ReferenceBdm& ref = reference_bdm(degree_);
  const int ne = ref.edge_dofs();
  const int ni = ref.interior_dofs();
  local_dim_ = ref.size();
  ndof_ = ne * m.num_facets() + ni * m.num_triangles();
  dofs_.resize(static_cast<std::size_t>(local_dim_) * m.num_triangles());
  signs_.resize(dofs_.size());
  for (int t = 0; t < m.num_triangles(); ++t) {
    const std::size_t base = static_cast<std::size_t>(t) * local_dim_;
    for (int e = 0; e < 3; ++e) {
      const int f = m.element_facet(t, e);
      const double side = m.facets()[f].owners[0] == t ? 1.0 : -1.0;
      const bool aligned = m.edge_aligned(t, e);
      for (int k = 0; k < ne; ++k) {
        dofs_[base + e * ne + k] = f * ne + k;
        signs_[base + e * ne + k] = side * ((aligned || k % 2 == 0) ? 1.0 : -1.0);
      }
    }
    for (int j = 0; j < ni; ++j) {
      dofs_[base + 3 * ne + j] = ne * m.num_facets() + t * ni + j;
      signs_[base + 3 * ne + j] = 1.0;
    }
  }
  for (int f = 0; f < m.num_facets(); ++f) {
    if (!m.facets()[f].boundary) continue;
    for (int k = 0; k < ne; ++k) constrained_.push_back(f * ne + k);
  }
}

ReferenceTable FeSpace::tabulate(std::span<const Vec2> points) const {
  ReferenceTable table;
  table.points.assign(points.begin(), points.end());
  if (family_ == Family::HdivBDM) {
    const ReferenceBdm& ref = reference_bdm(degree_);
    for (const Vec2& x : points) {
      Eigen::MatrixX2d v(ref.size(), 2);
      ref.values(x, v);
      table.bdm_values.push_back(std::move(v));
      std::vector<Mat2> g;
      ref.gradients(x, g);
      table.bdm_grads.push_back(std::move(g));
    }
  } else {
    const ReferenceLagrange& ref = reference_lagrange(degree_);
    for (const Vec2& x : points) {
      Eigen::VectorXd v(ref.size());
      Eigen::MatrixX2d g(ref.size(), 2);
      ref.values(x, v);
      ref.gradients(x, g);
      table.lagrange_values.push_back(std::move(v));
      table.lagrange_grads.push_back(std::move(g));
    }
  }
  return table;
}

void FeSpace::evaluate(int t, const ElementGeometry& geo, const ReferenceTable& table,
                       ElementBasis& out) const {
  const int nq = static_cast<int>(table.points.size());
  const int nb = local_dim_;
  out.element = t;
  out.n_points = nq;
  out.n_basis = nb;
  out.geometry.resize(nq);
  const bool vector = is_vector();
  if (vector) {
    out.value.resize(static_cast<std::size_t>(nq) * nb);
    out.grad.resize(static_cast<std::size_t>(nq) * nb);
    out.div.resize(static_cast<std::size_t>(nq) * nb);
  } else {
    out.scalar.resize(static_cast<std::size_t>(nq) * nb);
    out.scalar_grad.resize(static_cast<std::size_t>(nq) * nb);
  }
  const double* sign = signs_.data() + static_cast<std::size_t>(t) * nb;

  for (int q = 0; q < nq; ++q) {
    const GeometryPoint g = geo.eval(table.points[q]);
    if (g.det <= 0.0) throw SolverError("non-positive Jacobian in element " + std::to_string(t));
    out.geometry[q] = g;
    const Mat2 jinv = g.jacobian.inverse();
    const Mat2 jinv_t = jinv.transpose();

    switch (family_) {
      case Family::ScalarLagrange: {
        const auto& v = table.lagrange_values[q];
        const auto& dv = table.lagrange_grads[q];
        for (int i = 0; i < nb; ++i) {
          out.scalar[out.at(q, i)] = v(i);
          out.scalar_grad[out.at(q, i)] = jinv_t * Vec2(dv(i, 0), dv(i, 1));
        }
        break;
      }
      case Family::VectorLagrange: {
        const auto& v = table.lagrange_values[q];
        const auto& dv = table.lagrange_grads[q];
        for (int s = 0; s < nb / 2; ++s) {
          const Vec2 gs = jinv_t * Vec2(dv(s, 0), dv(s, 1));
          for (int c = 0; c < 2; ++c) {
            const int idx = out.at(q, 2 * s + c);
            out.value[idx] = Vec2::Zero();
            out.value[idx](c) = v(s);
            out.grad[idx] = Mat2::Zero();
            out.grad[idx].row(c) = gs.transpose();
            out.div[idx] = gs(c);
          }
        }
        break;
      }
      case Family::VectorDG:
      case Family::HdivBDM: {
        const double inv_det = 1.0 / g.det;
        // d det / d xi_m = det * tr(J^{-1} dJ_m)
        std::array<Mat2, 2> d_piola;
        for (int m = 0; m < 2; ++m) {
          const double ddet = g.det * (jinv * g.djacobian[m]).trace();
          d_piola[m] = g.djacobian[m] * inv_det - g.jacobian * (ddet * inv_det * inv_det);
        }
        const Mat2 piola = g.jacobian * inv_det;
        // uhat: reference value, dhat: column m = d uhat / d xi_m
        const auto map = [&](int i, const Vec2& uhat, const Mat2& dhat) {
          const int idx = out.at(q, i);
          out.value[idx] = sign[i] * (piola * uhat);
          Mat2 dxi;
          dxi.col(0) = d_piola[0] * uhat + piola * dhat.col(0);
          dxi.col(1) = d_piola[1] * uhat + piola * dhat.col(1);
          out.grad[idx] = sign[i] * (dxi * jinv);
          out.div[idx] = sign[i] * dhat.trace() * inv_det;
        };
        if (family_ == Family::HdivBDM) {
          const auto& v = table.bdm_values[q];
          const auto& dv = table.bdm_grads[q];
          for (int i = 0; i < nb; ++i) map(i, Vec2(v(i, 0), v(i, 1)), dv[i]);
        } else {
          const auto& v = table.lagrange_values[q];
          const auto& dv = table.lagrange_grads[q];
          for (int s = 0; s < nb / 2; ++s) {
            for (int c = 0; c < 2; ++c) {
              Vec2 uhat = Vec2::Zero();
              uhat(c) = v(s);
              Mat2 dhat = Mat2::Zero();
              dhat.row(c) = dv.row(s);
              map(2 * s + c, uhat, dhat);
            }
          }
        }
        break;
      }
    }
  }
}

ElementBasis FeSpace::evaluate(int t, std::span<const Vec2> points) const {
  ElementBasis basis;
  evaluate(t, mesh_->geometry(t), tabulate(points), basis);
  return basis;
}

std::shared_ptr<const FeSpace> build_space(Family family, std::shared_ptr<const Mesh> mesh,
                                           int degree) {
  return std::make_shared<const FeSpace>(family, std::move(mesh), degree);
}

std::shared_ptr<const FeSpace> build_pseudo_pressure_space(std::shared_ptr<const Mesh> mesh,
                                                           int velocity_degree) {
  if (velocity_degree < 2) {
    throw PreconditionError("pseudo-pressure pairing needs velocity degree >= 2, got " +
                            std::to_string(velocity_degree));
  }
  return build_space(Family::ScalarLagrange, std::move(mesh), velocity_degree - 1);
}

int expected_ndof(Family family, const Mesh& mesh, int degree) {
  const int p = degree;
  const int v = static_cast<int>(mesh.vertices().size());
  const int e = mesh.num_facets();
  const int t = mesh.num_triangles();
  const int scalar = v + (p - 1) * e + (p - 1) * (p - 2) / 2 * t;
  switch (family) {
    case Family::ScalarLagrange: return scalar;
    case Family::VectorLagrange: return 2 * scalar;
    case Family::VectorDG: return t * (p + 1) * (p + 2);
    case Family::HdivBDM: return (p + 1) * e + (p - 1) * (p + 1) * t;
  }
  return 0;
}

}  // namespace galbrun
