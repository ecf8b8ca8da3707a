#pragma once

#include <phs/types.hpp>

#include <vector>

namespace phs {

// ============================================================================
// Constant structure matrices
// ============================================================================

/// Flux coupling matrix [[0,-1],[-1,0]]; symmetric, involutory.
Matrix2 p1();

/// Block exchange matrix [[0, I_n],[I_n, 0]] of size 2n; involutory.
Matrix sigma(int n);

/// Orthogonal trace-to-port rotation (1/sqrt(2))[[Phat,-Phat],[I,I]] where
/// Phat is p1 (dim 4) or diag(p1,p1) (dim 8). Satisfies R*R^T = I, so the
/// inverse is the transpose.
Matrix rext(int dim);

// ============================================================================
// System description
// ============================================================================

/// Symmetric 2x2 coefficient field Q(z) = q0 + z*q1 on a segment. Affine is
/// the whole configurable class; anything smoother would not survive the trip
/// through a config file anyway.
struct QField {
  Matrix2 q0 = Matrix2::Identity();
  Matrix2 q1 = Matrix2::Zero();

  [[nodiscard]] Matrix2 at(double z) const { return q0 + z * q1; }
  [[nodiscard]] bool constant() const { return q1.isZero(0.0); }
};

struct SegmentQ {
  double lo = 0.0;
  double hi = 1.0;
  QField q;
  bool smooth = true;  // C^1 claimed by the modeler; recorded, not enforced
};

/// Boundary condition held in both sign conventions: the trace form acts on
/// stacked co-energy traces [e(b); e(a)], the port form on [f; e]. Whichever
/// was given, the other is derived through rext(4).
class BoundarySpec {
public:
  enum class Form { trace, port };

  BoundarySpec();  // zero trace matrix: no boundary constraint
  static BoundarySpec from_trace(const Matrix24& wtilde);
  static BoundarySpec from_port(const Matrix24& wb);

  [[nodiscard]] const Matrix24& trace() const { return trace_; }
  [[nodiscard]] const Matrix24& port() const { return port_; }
  [[nodiscard]] Form form() const { return form_; }
  [[nodiscard]] int rank() const { return rank_; }

private:
  Matrix24 trace_;
  Matrix24 port_;
  Form form_ = Form::trace;
  int rank_ = 0;
};

/// Piecewise system on [a,b] with stationary interfaces. segments tile
/// [a,b] with breakpoints exactly at the interfaces; r holds one resistance
/// per interface (f_I = r_k * e_I at interface k).
struct SystemSpec {
  double a = -1.0;
  double b = 1.0;
  std::vector<double> interfaces;
  std::vector<SegmentQ> segments;
  std::vector<double> r;
  BoundarySpec boundary;

  bool validated = false;
  double q_min = 0.0;  // coercivity window, filled in by validate_spec
  double q_max = 0.0;

  [[nodiscard]] int n_interfaces() const { return static_cast<int>(interfaces.size()); }
};

/// Checks segment tiling and pointwise coercivity m*I <= Q(z) <= M*I at
/// sample points, and returns the spec annotated with the window. Throws
/// CoercivityError naming the segment and position on violation,
/// GeometryError on tiling defects. Idempotent.
SystemSpec validate_spec(SystemSpec spec, double m, double M);

/// Same checks, with (m, M) taken from the extreme sampled eigenvalues.
SystemSpec validate_spec(SystemSpec spec);

}  // namespace phs
