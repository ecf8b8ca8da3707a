#include <phs/core.hpp>

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace phs {

Matrix2 p1() {
  Matrix2 m;
  m << 0.0, -1.0, -1.0, 0.0;
  return m;
}

Matrix sigma(int n) {
  if (n < 1) throw std::invalid_argument("sigma: n must be >= 1");
  Matrix s = Matrix::Zero(2 * n, 2 * n);
  s.topRightCorner(n, n).setIdentity();
  s.bottomLeftCorner(n, n).setIdentity();
  return s;
}

Matrix rext(int dim) {
  if (dim != 4 && dim != 8) throw std::invalid_argument("rext: dim must be 4 or 8");
  const int half = dim / 2;
  Matrix phat = Matrix::Zero(half, half);
  for (int k = 0; k < half / 2; ++k) phat.block<2, 2>(2 * k, 2 * k) = p1();
  Matrix r(dim, dim);
  const double s = 1.0 / std::sqrt(2.0);
  r.topLeftCorner(half, half) = s * phat;
  r.topRightCorner(half, half) = -s * phat;
  r.bottomLeftCorner(half, half) = s * Matrix::Identity(half, half);
  r.bottomRightCorner(half, half) = s * Matrix::Identity(half, half);
  return r;
}

namespace {

int rank_of(const Matrix24& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double thresh = 1e-12 * sv(0);
  int rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > thresh) ++rank;
  return rank;
}

}  // namespace

BoundarySpec::BoundarySpec() : trace_(Matrix24::Zero()), port_(Matrix24::Zero()) {}

BoundarySpec BoundarySpec::from_trace(const Matrix24& wtilde) {
  BoundarySpec bs;
  bs.form_ = Form::trace;
  bs.trace_ = wtilde;
  bs.port_ = wtilde * rext(4).transpose();
  bs.rank_ = rank_of(wtilde);
  return bs;
}

BoundarySpec BoundarySpec::from_port(const Matrix24& wb) {
  BoundarySpec bs;
  bs.form_ = Form::port;
  bs.port_ = wb;
  bs.trace_ = wb * rext(4);
  bs.rank_ = rank_of(wb);
  return bs;
}

namespace {

constexpr int kProbesPerSegment = 33;

struct EigPair {
  double lo, hi;
};

// Closed-form eigenvalues of a symmetric 2x2.
EigPair sym_eigs(const Matrix2& q) {
  const double mean = 0.5 * (q(0, 0) + q(1, 1));
  const double disc = std::hypot(0.5 * (q(0, 0) - q(1, 1)), q(0, 1));
  return {mean - disc, mean + disc};
}

void check_geometry(const SystemSpec& spec) {
  if (!(spec.a < spec.b)) throw GeometryError("validate_spec: requires a < b");
  const std::size_t n = spec.interfaces.size();
  if (spec.segments.size() != n + 1) {
    std::ostringstream os;
    os << "validate_spec: " << n << " interface(s) require " << n + 1 << " segments, got "
       << spec.segments.size();
    throw GeometryError(os.str());
  }
  if (spec.r.size() != n)
    throw std::invalid_argument("validate_spec: r must have one entry per interface");
  const double tol = 1e-12 * std::max({1.0, std::abs(spec.a), std::abs(spec.b)});
  for (std::size_t k = 0; k < n; ++k) {
    const double l = spec.interfaces[k];
    if (!(spec.a < l && l < spec.b))
      throw GeometryError("validate_spec: interface outside (a,b)");
    if (k > 0 && !(spec.interfaces[k - 1] < l))
      throw GeometryError("validate_spec: interfaces must be strictly increasing");
  }
  // Breakpoint list the segments must reproduce: a, l_1, ..., l_n, b.
  std::vector<double> breaks;
  breaks.push_back(spec.a);
  breaks.insert(breaks.end(), spec.interfaces.begin(), spec.interfaces.end());
  breaks.push_back(spec.b);
  for (std::size_t k = 0; k < spec.segments.size(); ++k) {
    const auto& seg = spec.segments[k];
    if (!(seg.lo < seg.hi)) throw GeometryError("validate_spec: segment with lo >= hi");
    if (std::abs(seg.lo - breaks[k]) > tol || std::abs(seg.hi - breaks[k + 1]) > tol) {
      std::ostringstream os;
      os << "validate_spec: segment " << k << " spans [" << seg.lo << ", " << seg.hi
         << "] but the tiling requires [" << breaks[k] << ", " << breaks[k + 1] << "]";
      throw GeometryError(os.str());
    }
  }
}

struct SampledBounds {
  double lo, hi;
};

SampledBounds check_coercivity(const SystemSpec& spec, double m, double M, bool enforce) {
  const double slack = 1e-9 * std::max(1.0, M);
  double seen_lo = std::numeric_limits<double>::infinity();
  double seen_hi = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < spec.segments.size(); ++k) {
    const auto& seg = spec.segments[k];
    for (int i = 0; i < kProbesPerSegment; ++i) {
      const double z = seg.lo + (seg.hi - seg.lo) * i / (kProbesPerSegment - 1);
      const Matrix2 q = seg.q.at(z);
      const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
      if (std::abs(q(0, 1) - q(1, 0)) > 1e-12 * scale) {
        std::ostringstream os;
        os << "validate_spec: Q not symmetric in segment " << k << " at z=" << z;
        throw CoercivityError(os.str(), static_cast<int>(k), z);
      }
      const EigPair e = sym_eigs(q);
      seen_lo = std::min(seen_lo, e.lo);
      seen_hi = std::max(seen_hi, e.hi);
      if (enforce && (e.lo < m - slack || e.hi > M + slack)) {
        std::ostringstream os;
        os << "validate_spec: Q spectrum [" << e.lo << ", " << e.hi << "] in segment " << k
           << " at z=" << z << " leaves the window [" << m << ", " << M << "]";
        throw CoercivityError(os.str(), static_cast<int>(k), z);
      }
    }
  }
  if (seen_lo <= 0.0) {
    // Even with caller-supplied bounds a nonpositive eigenvalue is fatal:
    // the energy norm degenerates.
    throw CoercivityError("validate_spec: Q has a nonpositive eigenvalue", -1, 0.0);
  }
  return {seen_lo, seen_hi};
}

}  // namespace

SystemSpec validate_spec(SystemSpec spec, double m, double M) {
  if (!(m > 0.0) || !(m <= M)) throw std::invalid_argument("validate_spec: need 0 < m <= M");
  check_geometry(spec);
  check_coercivity(spec, m, M, /*enforce=*/true);
  spec.q_min = m;
  spec.q_max = M;
  spec.validated = true;
  return spec;
}

SystemSpec validate_spec(SystemSpec spec) {
  check_geometry(spec);
  const SampledBounds sb =
      check_coercivity(spec, 0.0, std::numeric_limits<double>::infinity(), /*enforce=*/false);
  spec.q_min = sb.lo;
  spec.q_max = sb.hi;
  spec.validated = true;
  return spec;
}

}  // namespace phs
