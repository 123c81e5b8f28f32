#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "galbrun/coefficients.hpp"
#include "galbrun/fespace.hpp"
#include "galbrun/field.hpp"
#include "galbrun/linalg.hpp"

namespace galbrun {

/// M1: continuous [P^p]^2, a + Nitsche-only b_dg.
/// M2: continuous [P^p]^2 with a P^{p-1} pseudo-pressure.
/// M3: BDM_p with interior-penalty streamline terms, u.n = 0 strongly.
/// M4: discontinuous [P^p]^2, full interior penalty.
enum class Method { M1, M2, M3, M4 };

inline constexpr std::array<Method, 4> kAllMethods{Method::M1, Method::M2, Method::M3, Method::M4};
inline constexpr int kMaxMethodDegree = 6;

std::string_view method_name(Method method);
/// Column suffix in study tables: H1, H1pp, Hdiv, DG.
std::string_view method_suffix(Method method);
/// Accepts "M1".."M4" (case-insensitive) or a suffix; throws PreconditionError.
Method parse_method(std::string_view text);
Family method_family(Method method);
/// Whether (method, p) is an admissible combination.
bool method_supports(Method method, int p);

/// Assembled discrete problem.
struct Discretization {
  Method method = Method::M1;
  int degree = 1;
  std::shared_ptr<const Mesh> mesh;
  std::shared_ptr<const FeSpace> space;     // velocity
  std::shared_ptr<const FeSpace> pressure;  // M2 only
  CoefficientSet coefficients;
  LinearSystem system;
};

/// Builds the space(s) and the system -a_h(u, v) + b_h(u, v) = <f, v>.
/// Throws PreconditionError for invalid (method, p) or coefficients.
Discretization assemble_method(Method method, std::shared_ptr<const Mesh> mesh, int p,
                               const CoefficientSet& coeffs, const VectorField& f);

struct MethodSolution {
  DiscreteField velocity;
  std::optional<DiscreteField> pressure;
};

/// Throws SolverError when the system is numerically singular.
MethodSolution solve_method(const Discretization& disc);

/// Gram matrices of a_h and b_h of a method (M1, M3, M4). For M3 the
/// constrained boundary dofs are listed so they can be removed.
struct FormGrams {
  SparseMatrix a;
  SparseMatrix b;
  std::vector<int> constrained;
};
FormGrams method_grams(Method method, const FeSpace& space, const CoefficientSet& coeffs);

/// Dense a_h and b_h restricted to the free dofs, all four methods.
struct DenseGrams {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
};
DenseGrams dense_method_grams(Method method, std::shared_ptr<const Mesh> mesh, int p,
                              const CoefficientSet& coeffs);

}  // namespace galbrun
