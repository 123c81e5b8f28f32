#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/LU>

namespace galbrun {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

using ScalarField = std::function<double(const Vec2&)>;
using VectorField = std::function<Vec2(const Vec2&)>;
using TensorField = std::function<Mat2(const Vec2&)>;

/// Base class of all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (bad degree, bad size, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A quadrature rule beyond the tabulated range was requested.
class UnsupportedOrderError : public Error {
 public:
  using Error::Error;
};

/// Factorization or local inversion failed; usually a singular operator.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace galbrun
