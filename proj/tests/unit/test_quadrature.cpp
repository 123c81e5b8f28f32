#include <gtest/gtest.h>

#include <cmath>

#include "galbrun/quadrature.hpp"

namespace galbrun {
namespace {

// a! b! / (a + b + 2)!, built from ratios so high orders stay accurate.
double triangle_monomial_integral(int a, int b) {
  double r = 1.0;
  for (int i = 1; i <= b; ++i) r *= static_cast<double>(i) / (a + i);
  return r / ((a + b + 1.0) * (a + b + 2.0));
}

double integrate(const TriangleRule& rule, int a, int b) {
  double s = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    s += rule.weights[q] * std::pow(rule.points[q].x(), a) * std::pow(rule.points[q].y(), b);
  }
  return s;
}

TEST(Quadrature, TriangleExamples) {
  EXPECT_NEAR(integrate(triangle_rule(0), 0, 0), 0.5, 1e-15);
  EXPECT_NEAR(integrate(triangle_rule(2), 1, 1), 1.0 / 24.0, 1e-15);
  EXPECT_NEAR(integrate(triangle_rule(4), 4, 0), 1.0 / 30.0, 1e-15);
}

TEST(Quadrature, TriangleExactnessSweep) {
  for (int order = 0; order <= kMaxQuadratureOrder; ++order) {
    const TriangleRule rule = triangle_rule(order);
    ASSERT_GE(rule.exactness_order, order);
    for (int a = 0; a <= order; ++a) {
      for (int b = 0; a + b <= order; ++b) {
        const double exact = triangle_monomial_integral(a, b);
        EXPECT_LE(std::abs(integrate(rule, a, b) - exact), 1e-13 * exact)
            << "order " << order << " monomial x^" << a << " y^" << b;
      }
    }
  }
}

TEST(Quadrature, TrianglePointsInsideWithPositiveWeights) {
  for (int order = 0; order <= kMaxQuadratureOrder; order += 3) {
    const TriangleRule rule = triangle_rule(order);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      EXPECT_GT(rule.weights[q], 0.0);
      EXPECT_GT(rule.points[q].x(), 0.0);
      EXPECT_GT(rule.points[q].y(), 0.0);
      EXPECT_LT(rule.points[q].sum(), 1.0);
    }
  }
}

TEST(Quadrature, SegmentExamples) {
  const auto integrate1d = [](const SegmentRule& r, int k) {
    double s = 0.0;
    for (std::size_t q = 0; q < r.size(); ++q) s += r.weights[q] * std::pow(r.points[q], k);
    return s;
  };
  EXPECT_NEAR(integrate1d(segment_rule(0), 0), 1.0, 1e-15);
  EXPECT_NEAR(integrate1d(segment_rule(2), 2), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(integrate1d(segment_rule(7), 7), 1.0 / 8.0, 1e-15);
  for (int order = 0; order <= kMaxQuadratureOrder; ++order) {
    const SegmentRule rule = segment_rule(order);
    for (int k = 0; k <= order; ++k) {
      const double exact = 1.0 / (k + 1.0);
      EXPECT_LE(std::abs(integrate1d(rule, k) - exact), 1e-13 * exact) << order << " " << k;
    }
  }
}

TEST(Quadrature, GaussJacobiWeightsMatchMoments) {
  // int_{-1}^{1} (1 - x) dx = 2 and int (1 - x) x dx = -2/3.
  std::vector<double> x, w;
  gauss_jacobi(4, 1.0, 0.0, x, w);
  double m0 = 0.0, m1 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    m0 += w[i];
    m1 += w[i] * x[i];
  }
  EXPECT_NEAR(m0, 2.0, 1e-14);
  EXPECT_NEAR(m1, -2.0 / 3.0, 1e-14);
}

TEST(Quadrature, RejectsOrdersOutsideTable) {
  EXPECT_THROW(triangle_rule(kMaxQuadratureOrder + 1), UnsupportedOrderError);
  EXPECT_THROW(triangle_rule(-1), UnsupportedOrderError);
  EXPECT_THROW(segment_rule(kMaxQuadratureOrder + 1), UnsupportedOrderError);
}

}  // namespace
}  // namespace galbrun
