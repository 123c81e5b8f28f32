#include "galbrun/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace galbrun {

namespace {

constexpr double kPi = std::numbers::pi;

/// Scalar s with first and second derivatives at a point.
struct ScalarJet {
  double s, sx, sy, sxx, sxy, syy;
};

using JetFunction = std::function<ScalarJet(const Vec2&)>;

/// Exact u = s (-y, x) from the jet of s. With D = -y d_x + x d_y:
/// div u = D s and grad u = [[-y s_x, -s - y s_y], [s + x s_x, x s_y]].
ExactSolution rotational_solution(const JetFunction& jet) {
  ExactSolution u;
  u.value = [jet](const Vec2& x) -> Vec2 {
    const double s = jet(x).s;
    return {-x.y() * s, x.x() * s};
  };
  u.gradient = [jet](const Vec2& x) -> Mat2 {
    const ScalarJet j = jet(x);
    Mat2 g;
    g << -x.y() * j.sx, -j.s - x.y() * j.sy, j.s + x.x() * j.sx, x.x() * j.sy;
    return g;
  };
  u.divergence = [jet](const Vec2& x) {
    const ScalarJet j = jet(x);
    return -x.y() * j.sx + x.x() * j.sy;
  };
  return u;
}

ScalarJet sin_cos_jet(const Vec2& x) {
  const double sx = std::sin(kPi * x.x());
  const double cx = std::cos(kPi * x.x());
  const double sy = std::sin(kPi * x.y());
  const double cy = std::cos(kPi * x.y());
  const double s = sx * cy;
  return {s, kPi * cx * cy, -kPi * sx * sy, -kPi * kPi * s, -kPi * kPi * cx * sy, -kPi * kPi * s};
}

ScalarJet radial_cos_jet(const Vec2& x) {
  const double r2 = x.squaredNorm();
  const double c = std::cos(kPi * r2);
  const double s = std::sin(kPi * r2);
  // d/dx cos(pi r^2) = -2 pi x sin(pi r^2)
  const double sxx = -2.0 * kPi * s - 4.0 * kPi * kPi * x.x() * x.x() * c;
  const double syy = -2.0 * kPi * s - 4.0 * kPi * kPi * x.y() * x.y() * c;
  const double sxy = -4.0 * kPi * kPi * x.x() * x.y() * c;
  return {c, -2.0 * kPi * x.x() * s, -2.0 * kPi * x.y() * s, sxx, sxy, syy};
}

}  // namespace

ManufacturedProblem convergence_problem(int p) {
  if (p < 1) throw PreconditionError("convergence_problem needs p >= 1");
  const double p2 = static_cast<double>(p * p);
  ManufacturedProblem prob;
  prob.name = "convergence";
  prob.degree = p;
  prob.coefficients = rotating_flow_coefficients(1.0, 1.0, kFlowScale, 10.0 * p2, 100.0 * p2);
  prob.exact = rotational_solution(sin_cos_jet);
  const double beta = kFlowScale;
  const double binf = kFlowScale;
  const double cs2 = 1.0;
  // rho = 1, c_s^2 = 1, b = beta r_perp with r = (x, y), r_perp = (-y, x).
  //   -c^2 grad(Ds) with grad(Ds) = (-y s_xx + s_y + x s_xy, -s_x - y s_xy + x s_yy)
  //   d_b d_b u = beta^2 [(D^2 s - s) r_perp - 2 (Ds) r]
  //   D^2 s = y^2 s_xx - 2xy s_xy + x^2 s_yy - x s_x - y s_y
  //   -binf^2 s r_perp
  prob.forcing = [=](const Vec2& x) -> Vec2 {
    const ScalarJet j = sin_cos_jet(x);
    const double X = x.x();
    const double Y = x.y();
    const double ds = -Y * j.sx + X * j.sy;
    const Vec2 grad_ds(-Y * j.sxx + j.sy + X * j.sxy, -j.sx - Y * j.sxy + X * j.syy);
    const double d2s =
        Y * Y * j.sxx - 2.0 * X * Y * j.sxy + X * X * j.syy - X * j.sx - Y * j.sy;
    const Vec2 rperp(-Y, X);
    const Vec2 r(X, Y);
    return -cs2 * grad_ds + beta * beta * ((d2s - j.s) * rperp - 2.0 * ds * r) -
           binf * binf * j.s * rperp;
  };
  return prob;
}

ManufacturedProblem locking_problem(int p, double cs2) {
  if (p < 1) throw PreconditionError("locking_problem needs p >= 1");
  if (!(cs2 > 0.0)) throw PreconditionError("locking_problem needs cs2 > 0");
  const double p2 = static_cast<double>(p * p);
  ManufacturedProblem prob;
  prob.name = "locking";
  prob.degree = p;
  prob.coefficients = rotating_flow_coefficients(1.0, cs2, kFlowScale, 10.0 * p2, 10.0 * p2);
  prob.exact = rotational_solution(radial_cos_jet);
  // s radial: Ds = 0 and D^2 s = 0, so div u = 0 and
  // f = d_b d_b u - binf^2 u = -(beta^2 + binf^2) s r_perp.
  const double factor = -(kFlowScale * kFlowScale + kFlowScale * kFlowScale);
  prob.forcing = [factor](const Vec2& x) -> Vec2 {
    const double s = std::cos(kPi * x.squaredNorm());
    return factor * s * Vec2(-x.y(), x.x());
  };
  return prob;
}

ManufacturedProblem gradrob_problem(int p, double cs2) {
  ManufacturedProblem prob = locking_problem(p, cs2);
  prob.name = "gradrob";
  prob.exact.reset();
  prob.forcing = [](const Vec2& x) -> Vec2 {
    return {6.0 * std::pow(x.x(), 5), 6.0 * std::pow(x.y(), 5)};
  };
  return prob;
}

Vec2 apply_operator_fd(const VectorField& u, const CoefficientSet& c, const Vec2& x,
                       double step, const ScalarField& div_exact) {
  const double h = step;
  const Vec2 ex(h, 0.0);
  const Vec2 ey(0.0, h);
  const auto div = [&](const Vec2& y) {
    return (u(y + ex).x() - u(y - ex).x() + u(y + ey).y() - u(y - ey).y()) / (2.0 * h);
  };
  const auto pressure = [&](const Vec2& y) {
    return c.rho(y) * c.cs2(y) * (div_exact ? div_exact(y) : div(y));
  };
  const Vec2 grad_p((pressure(x + ex) - pressure(x - ex)) / (2.0 * h),
                    (pressure(x + ey) - pressure(x - ey)) / (2.0 * h));
  const auto flux = [&](const Vec2& y) -> Vec2 {
    const Vec2 b = c.flow(y);
    return c.rho(y) * (u(y + h * b) - u(y - h * b)) / (2.0 * h);
  };
  const Vec2 b = c.flow(x);
  const Vec2 streamline = (flux(x + h * b) - flux(x - h * b)) / (2.0 * h);
  return -grad_p + streamline - c.flow_sup * c.flow_sup * c.rho(x) * u(x);
}

Vec2 apply_operator_fd_extrapolated(const VectorField& u, const CoefficientSet& c,
                                    const Vec2& x, double step, const ScalarField& div) {
  const Vec2 f1 = apply_operator_fd(u, c, x, step, div);
  const Vec2 f2 = apply_operator_fd(u, c, x, 2.0 * step, div);
  const Vec2 f4 = apply_operator_fd(u, c, x, 4.0 * step, div);
  const Vec2 r1 = (4.0 * f1 - f2) / 3.0;
  const Vec2 r2 = (4.0 * f2 - f4) / 3.0;
  return (16.0 * r1 - r2) / 15.0;
}

ManufacturedCheck check_manufactured(const ManufacturedProblem& problem, int samples,
                                     std::uint64_t seed) {
  ManufacturedCheck check;
  if (!problem.exact) return check;
  const ExactSolution& ex = *problem.exact;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  const double h = 1e-5;
  double grad_diff = 0.0, grad_scale = 0.0;
  double div_diff = 0.0, div_scale = 0.0;
  double f_diff = 0.0, f_scale = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double r = 0.9 * std::sqrt(radius(rng));
    const double a = angle(rng);
    const Vec2 x(r * std::cos(a), r * std::sin(a));
    Mat2 fd;
    fd.col(0) = (ex.value(x + Vec2(h, 0)) - ex.value(x - Vec2(h, 0))) / (2.0 * h);
    fd.col(1) = (ex.value(x + Vec2(0, h)) - ex.value(x - Vec2(0, h))) / (2.0 * h);
    const Mat2 g = ex.gradient(x);
    grad_diff = std::max(grad_diff, (g - fd).cwiseAbs().maxCoeff());
    grad_scale = std::max(grad_scale, g.cwiseAbs().maxCoeff());
    const double d = ex.divergence(x);
    div_diff = std::max(div_diff, std::abs(d - fd.trace()));
    div_scale = std::max(div_scale, std::abs(d));
    const Vec2 f = problem.forcing(x);
    const Vec2 f_fd = apply_operator_fd_extrapolated(ex.value, problem.coefficients, x, 2e-3, ex.divergence);
    f_diff = std::max(f_diff, (f - f_fd).norm());
    f_scale = std::max(f_scale, f.norm());
  }
  // Divergence-free fields have no scale of their own; use the gradient's.
  check.gradient = grad_diff / std::max(grad_scale, 1e-300);
  check.divergence = div_diff / std::max({div_scale, grad_scale, 1e-300});
  check.forcing = f_diff / std::max(f_scale, 1e-300);
  return check;
}

void gate_manufactured(const ManufacturedProblem& problem) {
  const ManufacturedCheck c = check_manufactured(problem);
  if (c.gradient > 1e-6 || c.divergence > 1e-6 || c.forcing > 1e-4) {
    std::ostringstream os;
    os << "manufactured problem '" << problem.name << "' fails its finite-difference gate"
       << " (gradient " << c.gradient << ", divergence " << c.divergence << ", forcing "
       << c.forcing << ")";
    throw PreconditionError(os.str());
  }
}

}  // namespace galbrun
