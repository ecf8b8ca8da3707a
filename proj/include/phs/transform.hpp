#pragma once

#include <phs/kernels.hpp>

#include <utility>

namespace phs {

/// The single-interface system on [a,b], interface at 0, rewritten as a
/// 4-component system on [0, length]: the left segment is pulled back onto
/// [0, length] with ratio eta = -a/b and stacked on top of the right one. The
/// two component pairs keep their own grids, since the pullback of the left
/// grid need not match the right grid.
struct BoundaryFormSystem {
  double length = 0.0;
  double eta = 0.0;
  double a = 0.0;  // original left endpoint, needed to evaluate the pullback
  QField q_minus;
  QField q_plus;
  Vector zeta1;  // pullback of the left-segment grid
  Vector zeta2;  // right-segment grid, unchanged

  /// Coefficient field of the rewritten system:
  /// diag(eta^{-1} Q^-(eta*zeta + a), Q^+(zeta)).
  [[nodiscard]] Matrix4 h0(double zeta) const;
};

/// Samples of the 4-component state: the first pair on zeta1, the second on
/// zeta2, each in the usual component-block layout.
struct BoundaryState {
  Vector upper;
  Vector lower;
};

struct IsometryReport {
  double original = 0.0;  // weighted inner product on [a,b]
  double boundary = 0.0;  // weighted inner product of the rewritten pair
  double mismatch = 0.0;
  bool ok = false;
};

/// Rewrites a state of a single-interface system (interface exactly at 0)
/// into boundary form: upper = eta * x^- on the pulled-back grid, lower = x^+
/// as-is. Throws std::invalid_argument unless spec has one interface at 0;
/// shifting coordinates is the caller's job.
std::pair<BoundaryFormSystem, BoundaryState> to_boundary_form(const SystemSpec& spec,
                                                              const DiscreteLayout& lay,
                                                              const Vector& x);

/// Inverse map: x^- = upper / eta on the push-forward of zeta1, x^+ = lower.
/// Returns the state in the block layout of the original two-segment grid.
Vector from_boundary_form(const BoundaryFormSystem& bfs, const BoundaryState& w);

/// (1/2) * integral of y' Q x over [a,b], composite trapezoid per segment
/// (this is exactly (1/2) y' Mw x for the layout's weights).
double weighted_inner(const DiscreteLayout& lay, const Vector& x, const Vector& y);

/// Same quadrature for the rewritten system, with weight H0 and each
/// component pair integrated on its own grid.
double boundary_inner(const BoundaryFormSystem& bfs, const BoundaryState& wx,
                      const BoundaryState& wy);

/// Computes both inner products for the same pair of states and checks that
/// they agree within tol (scaled by the magnitude of the result). At the
/// pulled-back grids the two quadratures are algebraically identical, so the
/// mismatch is pure roundoff; tol guards against misuse, not discretization.
IsometryReport verify_isometry(const SystemSpec& spec, const DiscreteLayout& lay,
                               const Vector& x, const Vector& y, double tol = 1e-10);

}  // namespace phs
