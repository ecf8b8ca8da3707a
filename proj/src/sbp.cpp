#include <phs/sbp.hpp>

namespace phs {

SbpOperator build_sbp(int n, double h) {
  if (n < 3) throw std::invalid_argument("build_sbp: need at least 3 points");
  if (!(h > 0.0)) throw std::invalid_argument("build_sbp: spacing must be positive");
  SbpOperator op;
  op.n = n;
  op.h = h;
  op.hw = Vector::Constant(n, h);
  op.hw(0) = 0.5 * h;
  op.hw(n - 1) = 0.5 * h;
  op.d = Matrix::Zero(n, n);
  const double inv_h = 1.0 / h;
  op.d(0, 0) = -inv_h;
  op.d(0, 1) = inv_h;
  for (int i = 1; i + 1 < n; ++i) {
    op.d(i, i - 1) = -0.5 * inv_h;
    op.d(i, i + 1) = 0.5 * inv_h;
  }
  op.d(n - 1, n - 2) = -inv_h;
  op.d(n - 1, n - 1) = inv_h;
  return op;
}

}  // namespace phs
