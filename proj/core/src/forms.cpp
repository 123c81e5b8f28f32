#include "galbrun/forms.hpp"

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <Eigen/SparseCholesky>

#include "evaluators.hpp"

namespace galbrun {

namespace {

using detail::FacetBasis;
using detail::FacetEvaluator;
using detail::VolumeEvaluator;

class TripletSink {
 public:
  void add(std::span<const int> rows, std::span<const int> cols, const Eigen::MatrixXd& k) {
    for (int i = 0; i < k.rows(); ++i) {
      for (int j = 0; j < k.cols(); ++j) {
        if (k(i, j) != 0.0) triplets_.emplace_back(rows[i], cols[j], k(i, j));
      }
    }
  }
  SparseMatrix finish(int rows, int cols) {
    SparseMatrix m(rows, cols);
    m.setFromTriplets(triplets_.begin(), triplets_.end());
    m.makeCompressed();
    return m;
  }

 private:
  std::vector<Eigen::Triplet<double>> triplets_;
};

void require_vector(const FeSpace& space, const char* what) {
  if (!space.is_vector()) throw PreconditionError(std::string(what) + " needs a vector space");
}

int volume_order(const FeSpace& space) {
  return form_quadrature_order(space.degree(), space.mesh().geom_order());
}

/// Exactly symmetric (A + A^T) / 2.
Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& k) { return 0.5 * (k + k.transpose()); }

/// Concatenated dofs of all owners of a facet and their jump signs.
void facet_dofs(const FeSpace& space, const FacetBasis& fb, std::vector<int>& dofs,
                std::vector<double>& side_sign) {
  dofs.clear();
  side_sign.clear();
  for (int s = 0; s < fb.fq.side_count; ++s) {
    const auto d = space.element_dofs(fb.fq.sides[s].element);
    dofs.insert(dofs.end(), d.begin(), d.end());
    side_sign.insert(side_sign.end(), d.size(), s == 0 ? 1.0 : -1.0);
  }
}

}  // namespace

SparseMatrix assemble_a_volume(const FeSpace& space, const CoefficientSet& coeffs) {
  require_vector(space, "assemble_a_volume");
  const VolumeEvaluator vol(space, volume_order(space));
  const double b2 = coeffs.flow_sup * coeffs.flow_sup;
  TripletSink sink;
  ElementBasis basis;
  for (int t = 0; t < space.mesh().num_triangles(); ++t) {
    vol.evaluate(t, basis);
    const int nb = basis.n_basis;
    Eigen::MatrixXd g(nb, 2 * basis.n_points);
    Eigen::MatrixXd v(nb, 2 * basis.n_points);
    for (int q = 0; q < basis.n_points; ++q) {
      const Vec2& x = basis.geometry[q].x;
      const double s = std::sqrt(vol.weight(basis, q) * coeffs.rho(x));
      const Vec2 b = coeffs.flow(x);
      for (int i = 0; i < nb; ++i) {
        const Vec2 db = basis.grad[basis.at(q, i)] * b;
        const Vec2& vi = basis.value[basis.at(q, i)];
        g(i, 2 * q) = s * db.x();
        g(i, 2 * q + 1) = s * db.y();
        v(i, 2 * q) = s * vi.x();
        v(i, 2 * q + 1) = s * vi.y();
      }
    }
    const Eigen::MatrixXd k = g * g.transpose() + b2 * (v * v.transpose());
    const auto dofs = space.element_dofs(t);
    sink.add(dofs, dofs, symmetrized(k));
  }
  return sink.finish(space.ndof(), space.ndof());
}

SparseMatrix assemble_a_facets(const FeSpace& space, const CoefficientSet& coeffs) {
  require_vector(space, "assemble_a_facets");
  const FacetEvaluator fe(space, volume_order(space));
  TripletSink sink;
  FacetBasis fb;
  std::vector<int> dofs;
  std::vector<double> sign;
  for (int f = 0; f < space.mesh().num_facets(); ++f) {
    // b.n = 0 on the boundary: no boundary contribution.
    if (space.mesh().facets()[f].boundary) continue;
    fe.evaluate(f, fb);
    facet_dofs(space, fb, dofs, sign);
    const int n = static_cast<int>(dofs.size());
    const int nq = static_cast<int>(fb.fq.x.size());
    Eigen::MatrixXd jump(n, 2 * nq);
    Eigen::MatrixXd avg(n, 2 * nq);
    for (int q = 0; q < nq; ++q) {
      const Vec2& x = fb.fq.x[q];
      const double s = std::sqrt(fb.fq.weights[q] * coeffs.rho(x));
      const Vec2 b = coeffs.flow(x);
      const double bn = b.dot(fb.fq.normals[q]);
      int row = 0;
      for (int side = 0; side < 2; ++side) {
        const ElementBasis& eb = fb.side[side];
        for (int i = 0; i < eb.n_basis; ++i, ++row) {
          const Vec2 j = sign[row] * bn * eb.value[eb.at(q, i)];
          const Vec2 a = 0.5 * (eb.grad[eb.at(q, i)] * b);
          jump(row, 2 * q) = s * j.x();
          jump(row, 2 * q + 1) = s * j.y();
          avg(row, 2 * q) = s * a.x();
          avg(row, 2 * q + 1) = s * a.y();
        }
      }
    }
    const double penalty = coeffs.lambda_b / fb.fq.diameter;
    const Eigen::MatrixXd ja = jump * avg.transpose();
    const Eigen::MatrixXd k = penalty * (jump * jump.transpose()) - ja - ja.transpose();
    sink.add(dofs, dofs, symmetrized(k));
  }
  return sink.finish(space.ndof(), space.ndof());
}

SparseMatrix assemble_a_dg(const FeSpace& space, const CoefficientSet& coeffs) {
  SparseMatrix a = assemble_a_volume(space, coeffs);
  a += assemble_a_facets(space, coeffs);
  return a;
}

SparseMatrix assemble_b_volume(const FeSpace& space, const CoefficientSet& coeffs) {
  require_vector(space, "assemble_b_volume");
  const VolumeEvaluator vol(space, volume_order(space));
  TripletSink sink;
  ElementBasis basis;
  for (int t = 0; t < space.mesh().num_triangles(); ++t) {
    vol.evaluate(t, basis);
    Eigen::MatrixXd d(basis.n_basis, basis.n_points);
    for (int q = 0; q < basis.n_points; ++q) {
      const Vec2& x = basis.geometry[q].x;
      const double s = std::sqrt(vol.weight(basis, q) * coeffs.rho(x) * coeffs.cs2(x));
      for (int i = 0; i < basis.n_basis; ++i) d(i, q) = s * basis.div[basis.at(q, i)];
    }
    const auto dofs = space.element_dofs(t);
    sink.add(dofs, dofs, symmetrized(d * d.transpose()));
  }
  return sink.finish(space.ndof(), space.ndof());
}

SparseMatrix assemble_b_facets(const FeSpace& space, const CoefficientSet& coeffs,
                               FacetSelection selection) {
  require_vector(space, "assemble_b_facets");
  const FacetEvaluator fe(space, volume_order(space));
  TripletSink sink;
  FacetBasis fb;
  std::vector<int> dofs;
  std::vector<double> sign;
  for (int f = 0; f < space.mesh().num_facets(); ++f) {
    const bool boundary = space.mesh().facets()[f].boundary;
    if ((boundary && selection == FacetSelection::Interior) ||
        (!boundary && selection == FacetSelection::Boundary)) {
      continue;
    }
    fe.evaluate(f, fb);
    facet_dofs(space, fb, dofs, sign);
    const int n = static_cast<int>(dofs.size());
    const int nq = static_cast<int>(fb.fq.x.size());
    const double avg_factor = fb.fq.side_count == 2 ? 0.5 : 1.0;
    Eigen::MatrixXd jump(n, nq);
    Eigen::MatrixXd avg(n, nq);
    for (int q = 0; q < nq; ++q) {
      const Vec2& x = fb.fq.x[q];
      const double s = std::sqrt(fb.fq.weights[q] * coeffs.rho(x) * coeffs.cs2(x));
      const Vec2& normal = fb.fq.normals[q];
      int row = 0;
      for (int side = 0; side < fb.fq.side_count; ++side) {
        const ElementBasis& eb = fb.side[side];
        for (int i = 0; i < eb.n_basis; ++i, ++row) {
          jump(row, q) = s * sign[row] * eb.value[eb.at(q, i)].dot(normal);
          avg(row, q) = s * avg_factor * eb.div[eb.at(q, i)];
        }
      }
    }
    const double penalty = coeffs.lambda_n / fb.fq.diameter;
    const Eigen::MatrixXd ja = avg * jump.transpose();
    const Eigen::MatrixXd k = penalty * (jump * jump.transpose()) - ja - ja.transpose();
    sink.add(dofs, dofs, symmetrized(k));
  }
  return sink.finish(space.ndof(), space.ndof());
}

SparseMatrix assemble_b_dg(const FeSpace& space, const CoefficientSet& coeffs) {
  SparseMatrix b = assemble_b_volume(space, coeffs);
  b += assemble_b_facets(space, coeffs, FacetSelection::All);
  return b;
}

SparseMatrix assemble_mass(const FeSpace& space, const ScalarField& weight) {
  const VolumeEvaluator vol(space, volume_order(space));
  TripletSink sink;
  ElementBasis basis;
  const int width = space.is_vector() ? 2 : 1;
  for (int t = 0; t < space.mesh().num_triangles(); ++t) {
    vol.evaluate(t, basis);
    Eigen::MatrixXd v(basis.n_basis, width * basis.n_points);
    for (int q = 0; q < basis.n_points; ++q) {
      const double s = std::sqrt(vol.weight(basis, q) * weight(basis.geometry[q].x));
      for (int i = 0; i < basis.n_basis; ++i) {
        const int idx = basis.at(q, i);
        if (space.is_vector()) {
          v(i, 2 * q) = s * basis.value[idx].x();
          v(i, 2 * q + 1) = s * basis.value[idx].y();
        } else {
          v(i, q) = s * basis.scalar[idx];
        }
      }
    }
    const auto dofs = space.element_dofs(t);
    sink.add(dofs, dofs, symmetrized(v * v.transpose()));
  }
  return sink.finish(space.ndof(), space.ndof());
}

Eigen::VectorXd assemble_rhs(const FeSpace& space, const VectorField& f, int extra_order) {
  require_vector(space, "assemble_rhs");
  const VolumeEvaluator vol(space, volume_order(space) + extra_order);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(space.ndof());
  ElementBasis basis;
  for (int t = 0; t < space.mesh().num_triangles(); ++t) {
    vol.evaluate(t, basis);
    const auto dofs = space.element_dofs(t);
    for (int q = 0; q < basis.n_points; ++q) {
      const Vec2 fx = vol.weight(basis, q) * f(basis.geometry[q].x);
      for (int i = 0; i < basis.n_basis; ++i) {
        rhs(dofs[i]) += fx.dot(basis.value[basis.at(q, i)]);
      }
    }
  }
  return rhs;
}

PseudoPressureBlocks assemble_m2_blocks(const FeSpace& velocity, const FeSpace& pressure,
                                        const CoefficientSet& coeffs, const VectorField& f) {
  if (velocity.family() != Family::VectorLagrange || velocity.degree() < 2) {
    throw PreconditionError("pseudo-pressure velocity must be VectorLagrange with p >= 2");
  }
  if (pressure.family() != Family::ScalarLagrange || pressure.degree() != velocity.degree() - 1) {
    throw PreconditionError("pseudo-pressure space must be ScalarLagrange of degree p - 1");
  }
  if (&velocity.mesh() != &pressure.mesh()) {
    throw PreconditionError("velocity and pseudo-pressure live on different meshes");
  }
  const Mesh& mesh = velocity.mesh();
  const ScalarField weight = [&coeffs](const Vec2& x) { return coeffs.rho(x) * coeffs.cs2(x); };

  PseudoPressureBlocks blocks;
  blocks.a = assemble_a_volume(velocity, coeffs);
  blocks.mass = assemble_mass(pressure, weight);
  blocks.load = assemble_rhs(velocity, f);

  const int order = volume_order(velocity);
  {
    const VolumeEvaluator vu(velocity, order);
    const VolumeEvaluator vp(pressure, order);
    TripletSink sink;
    ElementBasis bu;
    ElementBasis bp;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      vu.evaluate(t, bu);
      vp.evaluate(t, bp);
      Eigen::MatrixXd k = Eigen::MatrixXd::Zero(bp.n_basis, bu.n_basis);
      for (int q = 0; q < bu.n_points; ++q) {
        const double w = vu.weight(bu, q) * weight(bu.geometry[q].x);
        for (int i = 0; i < bp.n_basis; ++i) {
          const double wi = w * bp.scalar[bp.at(q, i)];
          for (int j = 0; j < bu.n_basis; ++j) k(i, j) += wi * bu.div[bu.at(q, j)];
        }
      }
      sink.add(pressure.element_dofs(t), velocity.element_dofs(t), k);
    }
    blocks.divergence = sink.finish(pressure.ndof(), velocity.ndof());
  }
  {
    const FacetEvaluator fu(velocity, order);
    const FacetEvaluator fp(pressure, order);
    TripletSink coupling;
    TripletSink penalty;
    FacetBasis bu;
    FacetBasis bp;
    for (int f_idx = 0; f_idx < mesh.num_facets(); ++f_idx) {
      if (!mesh.facets()[f_idx].boundary) continue;
      fu.evaluate(f_idx, bu);
      fp.evaluate(f_idx, bp);
      const ElementBasis& eu = bu.side[0];
      const ElementBasis& ep = bp.side[0];
      const int nq = static_cast<int>(bu.fq.x.size());
      Eigen::MatrixXd un(eu.n_basis, nq);
      Eigen::MatrixXd c = Eigen::MatrixXd::Zero(ep.n_basis, eu.n_basis);
      for (int q = 0; q < nq; ++q) {
        const double w = bu.fq.weights[q] * weight(bu.fq.x[q]);
        const double s = std::sqrt(w);
        for (int j = 0; j < eu.n_basis; ++j) {
          const double vn = eu.value[eu.at(q, j)].dot(bu.fq.normals[q]);
          un(j, q) = s * vn;
          for (int i = 0; i < ep.n_basis; ++i) c(i, j) += w * ep.scalar[ep.at(q, i)] * vn;
        }
      }
      const int t = bu.fq.sides[0].element;
      const auto udofs = velocity.element_dofs(t);
      coupling.add(pressure.element_dofs(t), udofs, c);
      penalty.add(udofs, udofs,
                  symmetrized(coeffs.lambda_n / bu.fq.diameter * (un * un.transpose())));
    }
    blocks.boundary_coupling = coupling.finish(pressure.ndof(), velocity.ndof());
    blocks.penalty = penalty.finish(velocity.ndof(), velocity.ndof());
  }
  return blocks;
}

LinearSystem assemble_m2_system(const PseudoPressureBlocks& blocks) {
  const int nu = static_cast<int>(blocks.a.rows());
  const int np = static_cast<int>(blocks.mass.rows());
  const SparseMatrix top_left = SparseMatrix(blocks.penalty - blocks.a);
  const SparseMatrix coupling = SparseMatrix(blocks.divergence - blocks.boundary_coupling);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(top_left.nonZeros() + 2 * coupling.nonZeros() + blocks.mass.nonZeros());
  for (int k = 0; k < top_left.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(top_left, k); it; ++it) {
      triplets.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (int k = 0; k < coupling.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(coupling, k); it; ++it) {
      triplets.emplace_back(nu + it.row(), it.col(), it.value());
      triplets.emplace_back(it.col(), nu + it.row(), it.value());
    }
  }
  for (int k = 0; k < blocks.mass.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(blocks.mass, k); it; ++it) {
      triplets.emplace_back(nu + it.row(), nu + it.col(), -it.value());
    }
  }
  LinearSystem system;
  system.matrix.resize(nu + np, nu + np);
  system.matrix.setFromTriplets(triplets.begin(), triplets.end());
  system.matrix.makeCompressed();
  system.rhs = Eigen::VectorXd::Zero(nu + np);
  system.rhs.head(nu) = blocks.load;
  return system;
}

LinearSystem assemble_m2_system(const FeSpace& velocity, const FeSpace& pressure,
                                const CoefficientSet& coeffs, const VectorField& f) {
  return assemble_m2_system(assemble_m2_blocks(velocity, pressure, coeffs, f));
}

Eigen::MatrixXd pseudo_pressure_gram(const PseudoPressureBlocks& blocks) {
  if (blocks.a.rows() > kDenseDiagnosticLimit) {
    throw PreconditionError("pseudo_pressure_gram exceeds the dense diagnostic size limit");
  }
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(blocks.mass);
  if (ldlt.info() != Eigen::Success) throw SolverError("pseudo-pressure mass factorization failed");
  const Eigen::MatrixXd d = Eigen::MatrixXd(blocks.divergence);
  const Eigen::MatrixXd c = Eigen::MatrixXd(blocks.boundary_coupling);
  const Eigen::MatrixXd proj = ldlt.solve(d);  // coefficients of Pi div
  const Eigen::MatrixXd cross = c.transpose() * proj;
  const Eigen::MatrixXd gram =
      d.transpose() * proj + Eigen::MatrixXd(blocks.penalty) - cross - cross.transpose();
  return symmetrized(gram);
}

}  // namespace galbrun
