#pragma once

#include <phs/core.hpp>

#include <vector>

namespace phs {

/// Bookkeeping for one discretized segment. Within the global state vector,
/// component 1 occupies [offset, offset+n) and component 2
/// [offset+n, offset+2n); nodes are uniform including both endpoints, so
/// interface values are one-sided degrees of freedom.
struct GridSegment {
  int n = 0;
  int offset = 0;
  double lo = 0.0;
  double hi = 0.0;
  double h = 0.0;
};

/// Grid data consumed by the hot loops: Q samples, quadrature weights, and
/// node coordinates, stored per segment in the same block layout as the
/// state.
struct DiscreteLayout {
  std::vector<GridSegment> segments;
  int dofs = 0;
  std::vector<Vector> q11, q12, q22;  // per segment, per node
  std::vector<Vector> hw;             // trapezoid weights per node
  std::vector<Vector> z;              // node coordinates
};

/// Samples the spec on uniform per-segment grids. points holds one node
/// count (>= 3) per segment.
DiscreteLayout build_layout(const SystemSpec& spec, const std::vector<int>& points);

// The kernels below come in pairs: a serial reference and the OpenMP
// production version, parallel over columns. The pairs compute identical
// arithmetic per element, so tests compare them for exact equality. All
// operate on dofs x m column blocks.

namespace kernels {

/// e = Q x pointwise (co-energy variables).
void coenergy_serial(const DiscreteLayout& lay, const Matrix& x, Matrix& e);
void coenergy(const DiscreteLayout& lay, const Matrix& x, Matrix& e);

/// y = P1 * d_z(Q x) per segment through the SBP stencil (the unconstrained
/// generator).
void apply_free_serial(const DiscreteLayout& lay, const Matrix& x, Matrix& y);
void apply_free(const DiscreteLayout& lay, const Matrix& x, Matrix& y);

/// y = Mw x: pointwise quadrature-weighted Q application (the weighted mass
/// matrix).
void apply_mass_serial(const DiscreteLayout& lay, const Matrix& x, Matrix& y);
void apply_mass(const DiscreteLayout& lay, const Matrix& x, Matrix& y);

}  // namespace kernels

}  // namespace phs
