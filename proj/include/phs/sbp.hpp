#pragma once

#include <phs/types.hpp>

namespace phs {

/// Second-order summation-by-parts pair on a uniform grid of n points with
/// spacing h: central differences inside, first-order one-sided closures at
/// the ends, trapezoid weights. The pair satisfies
///   Hw*D + (Hw*D)^T = diag(-1, 0, ..., 0, 1),
/// the discrete counterpart of integration by parts, which is what makes the
/// semi-discrete energy bookkeeping exact.
struct SbpOperator {
  int n = 0;
  double h = 0.0;
  Matrix d;   // n x n difference matrix
  Vector hw;  // positive quadrature weights (diagonal of Hw)
};

SbpOperator build_sbp(int n, double h);

}  // namespace phs
