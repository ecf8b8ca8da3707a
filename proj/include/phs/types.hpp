#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <utility>

namespace phs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Matrix2 = Eigen::Matrix2d;
using Vector2 = Eigen::Vector2d;
using Matrix24 = Eigen::Matrix<double, 2, 4>;
using Matrix4 = Eigen::Matrix4d;
using Matrix48 = Eigen::Matrix<double, 4, 8>;
using Index = Eigen::Index;

// Failure taxonomy. Plain precondition violations throw std::invalid_argument;
// the types below exist where callers route failures differently (CLI exit
// codes, retry with a coarser grid, diagnostic reporting).

/// Q(z) failed the coercivity window [m, M] at a sample point.
class CoercivityError : public std::runtime_error {
public:
  CoercivityError(const std::string& msg, int segment, double position)
      : std::runtime_error(msg), segment(segment), position(position) {}
  int segment;
  double position;
};

/// Segments do not tile the domain, or interfaces are out of order.
class GeometryError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One-sided interface traces disagree in the component that must be shared.
class ContinuityViolation : public std::runtime_error {
public:
  ContinuityViolation(const std::string& msg, double residual)
      : std::runtime_error(msg), residual(residual) {}
  double residual;
};

/// A linear solve or factorization failed.
class SolverError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A configured size/time cap was exceeded.
class ResourceError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Every trial of a sampled estimate was skipped; nothing can be reported.
class InconclusiveError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace phs
