#include "galbrun/methods.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "galbrun/forms.hpp"

namespace galbrun {

std::string_view method_name(Method method) {
  switch (method) {
    case Method::M1: return "M1";
    case Method::M2: return "M2";
    case Method::M3: return "M3";
    case Method::M4: return "M4";
  }
  return "?";
}

std::string_view method_suffix(Method method) {
  switch (method) {
    case Method::M1: return "H1";
    case Method::M2: return "H1pp";
    case Method::M3: return "Hdiv";
    case Method::M4: return "DG";
  }
  return "?";
}

Method parse_method(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (Method m : kAllMethods) {
    std::string name(method_name(m));
    std::string suffix(method_suffix(m));
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::transform(suffix.begin(), suffix.end(), suffix.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == name || lower == suffix) return m;
  }
  throw PreconditionError("unknown method '" + std::string(text) + "'");
}

Family method_family(Method method) {
  switch (method) {
    case Method::M1:
    case Method::M2: return Family::VectorLagrange;
    case Method::M3: return Family::HdivBDM;
    case Method::M4: return Family::VectorDG;
  }
  return Family::VectorLagrange;
}

bool method_supports(Method method, int p) {
  if (p < 1 || p > kMaxMethodDegree) return false;
  return method != Method::M2 || p >= 2;
}

namespace {

void check_method(Method method, int p) {
  if (!method_supports(method, p)) {
    throw PreconditionError(std::string(method_name(method)) + " does not support p = " +
                            std::to_string(p));
  }
}

}  // namespace

FormGrams method_grams(Method method, const FeSpace& space, const CoefficientSet& coeffs) {
  FormGrams grams;
  switch (method) {
    case Method::M1:
      // Interior b_dg terms vanish for continuous fields; only Nitsche remains.
      grams.a = assemble_a_volume(space, coeffs);
      grams.b = assemble_b_volume(space, coeffs);
      grams.b += assemble_b_facets(space, coeffs, FacetSelection::Boundary);
      break;
    case Method::M3:
      grams.a = assemble_a_dg(space, coeffs);
      grams.b = assemble_b_volume(space, coeffs);
      grams.constrained = space.constrained_dofs();
      break;
    case Method::M4:
      grams.a = assemble_a_dg(space, coeffs);
      grams.b = assemble_b_dg(space, coeffs);
      break;
    case Method::M2:
      throw PreconditionError("M2 has no sparse b_h; use dense_method_grams");
  }
  return grams;
}

Discretization assemble_method(Method method, std::shared_ptr<const Mesh> mesh, int p,
                               const CoefficientSet& coeffs, const VectorField& f) {
  check_method(method, p);
  validate_coefficients(coeffs, *mesh);
  Discretization disc;
  disc.method = method;
  disc.degree = p;
  disc.mesh = mesh;
  disc.coefficients = coeffs;
  disc.space = build_space(method_family(method), mesh, p);
  if (method == Method::M2) {
    disc.pressure = build_pseudo_pressure_space(mesh, p);
    disc.system = assemble_m2_system(*disc.space, *disc.pressure, coeffs, f);
    return disc;
  }
  FormGrams grams = method_grams(method, *disc.space, coeffs);
  disc.system.matrix = grams.b - grams.a;
  disc.system.rhs = assemble_rhs(*disc.space, f);
  disc.system.constrained = std::move(grams.constrained);
  return disc;
}

MethodSolution solve_method(const Discretization& disc) {
  const Eigen::VectorXd x = solve(disc.system);
  const int nu = disc.space->ndof();
  MethodSolution sol{{disc.space, x.head(nu)}, std::nullopt};
  if (disc.pressure) sol.pressure = DiscreteField{disc.pressure, x.tail(disc.pressure->ndof())};
  return sol;
}

DenseGrams dense_method_grams(Method method, std::shared_ptr<const Mesh> mesh, int p,
                              const CoefficientSet& coeffs) {
  check_method(method, p);
  validate_coefficients(coeffs, *mesh);
  const auto space = build_space(method_family(method), mesh, p);
  if (space->ndof() > kDenseDiagnosticLimit) {
    throw PreconditionError("dense diagnostics limited to n <= " +
                            std::to_string(kDenseDiagnosticLimit) + ", got " +
                            std::to_string(space->ndof()));
  }
  DenseGrams dense;
  if (method == Method::M2) {
    const auto pressure = build_pseudo_pressure_space(mesh, p);
    const PseudoPressureBlocks blocks = assemble_m2_blocks(*space, *pressure, coeffs,
                                                           [](const Vec2&) -> Vec2 { return Vec2::Zero(); });
    dense.a = Eigen::MatrixXd(blocks.a);
    dense.b = pseudo_pressure_gram(blocks);
    return dense;
  }
  const FormGrams grams = method_grams(method, *space, coeffs);
  dense.a = restrict_dense(grams.a, grams.constrained);
  dense.b = restrict_dense(grams.b, grams.constrained);
  return dense;
}

}  // namespace galbrun
