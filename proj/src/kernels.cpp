#include <phs/kernels.hpp>

#include <cstddef>
#include <stdexcept>

namespace phs {

DiscreteLayout build_layout(const SystemSpec& spec, const std::vector<int>& points) {
  const SystemSpec s = spec.validated ? spec : validate_spec(spec);
  if (points.size() != s.segments.size())
    throw std::invalid_argument("build_layout: one node count per segment required");

  DiscreteLayout lay;
  lay.segments.reserve(s.segments.size());
  int offset = 0;
  for (std::size_t k = 0; k < s.segments.size(); ++k) {
    const int n = points[k];
    if (n < 3) throw std::invalid_argument("build_layout: need at least 3 points per segment");
    GridSegment g;
    g.n = n;
    g.offset = offset;
    g.lo = s.segments[k].lo;
    g.hi = s.segments[k].hi;
    g.h = (g.hi - g.lo) / static_cast<double>(n - 1);
    offset += 2 * n;

    Vector q11(n), q12(n), q22(n), hw(n), z(n);
    for (int i = 0; i < n; ++i) {
      z(i) = g.lo + static_cast<double>(i) * g.h;
      const Matrix2 q = s.segments[k].q.at(z(i));
      q11(i) = q(0, 0);
      q12(i) = 0.5 * (q(0, 1) + q(1, 0));
      q22(i) = q(1, 1);
      hw(i) = (i == 0 || i == n - 1) ? 0.5 * g.h : g.h;
    }
    lay.segments.push_back(g);
    lay.q11.push_back(std::move(q11));
    lay.q12.push_back(std::move(q12));
    lay.q22.push_back(std::move(q22));
    lay.hw.push_back(std::move(hw));
    lay.z.push_back(std::move(z));
  }
  lay.dofs = offset;
  return lay;
}

namespace kernels {

namespace {

// Below this many output elements the OpenMP versions stay serial; spinning
// up a team costs more than the loop.
constexpr long kParallelGrain = 1 << 12;

void check_shapes(const DiscreteLayout& lay, const Matrix& x, Matrix& y) {
  if (x.rows() != lay.dofs)
    throw std::invalid_argument("kernel: state rows do not match layout dofs");
  if (y.rows() != x.rows() || y.cols() != x.cols()) y.resize(x.rows(), x.cols());
}

// Single-node bodies shared by the serial and OpenMP variants, so the two
// perform literally the same arithmetic. x1/x2/y1/y2 point at the segment's
// component blocks within one column.

inline void coenergy_node(const double* q11, const double* q12, const double* q22,
                          const double* x1, const double* x2, double* e1, double* e2,
                          int i) {
  e1[i] = q11[i] * x1[i] + q12[i] * x2[i];
  e2[i] = q12[i] * x1[i] + q22[i] * x2[i];
}

inline void free_node(const double* q11, const double* q12, const double* q22,
                      const double* x1, const double* x2, double* y1, double* y2,
                      int i, int n, double inv_h) {
  // Co-energy at the stencil nodes is formed on the fly; no scratch columns.
  auto e1 = [&](int j) { return q11[j] * x1[j] + q12[j] * x2[j]; };
  auto e2 = [&](int j) { return q12[j] * x1[j] + q22[j] * x2[j]; };
  double d1, d2;
  if (i == 0) {
    d1 = (e1(1) - e1(0)) * inv_h;
    d2 = (e2(1) - e2(0)) * inv_h;
  } else if (i == n - 1) {
    d1 = (e1(n - 1) - e1(n - 2)) * inv_h;
    d2 = (e2(n - 1) - e2(n - 2)) * inv_h;
  } else {
    d1 = (e1(i + 1) - e1(i - 1)) * (0.5 * inv_h);
    d2 = (e2(i + 1) - e2(i - 1)) * (0.5 * inv_h);
  }
  y1[i] = -d2;
  y2[i] = -d1;
}

inline void mass_node(const double* q11, const double* q12, const double* q22,
                      const double* hw, const double* x1, const double* x2,
                      double* y1, double* y2, int i) {
  y1[i] = hw[i] * (q11[i] * x1[i] + q12[i] * x2[i]);
  y2[i] = hw[i] * (q12[i] * x1[i] + q22[i] * x2[i]);
}

}  // namespace

void coenergy_serial(const DiscreteLayout& lay, const Matrix& x, Matrix& e) {
  check_shapes(lay, x, e);
  const long m = static_cast<long>(x.cols());
  for (std::size_t s = 0; s < lay.segments.size(); ++s) {
    const GridSegment& g = lay.segments[s];
    const double* q11 = lay.q11[s].data();
    const double* q12 = lay.q12[s].data();
    const double* q22 = lay.q22[s].data();
    for (long t = 0; t < m * g.n; ++t) {
      const long c = t / g.n;
      const int i = static_cast<int>(t % g.n);
      const double* xc = x.data() + c * lay.dofs + g.offset;
      double* ec = e.data() + c * lay.dofs + g.offset;
      coenergy_node(q11, q12, q22, xc, xc + g.n, ec, ec + g.n, i);
    }
  }
}

void coenergy(const DiscreteLayout& lay, const Matrix& x, Matrix& e) {
  check_shapes(lay, x, e);
  const long m = static_cast<long>(x.cols());
  for (std::size_t s = 0; s < lay.segments.size(); ++s) {
    const GridSegment& g = lay.segments[s];
    const double* q11 = lay.q11[s].data();
    const double* q12 = lay.q12[s].data();
    const double* q22 = lay.q22[s].data();
    const long work = m * g.n;
#pragma omp parallel for schedule(static) if (work >= kParallelGrain)
    for (long t = 0; t < work; ++t) {
      const long c = t / g.n;
      const int i = static_cast<int>(t % g.n);
      const double* xc = x.data() + c * lay.dofs + g.offset;
      double* ec = e.data() + c * lay.dofs + g.offset;
      coenergy_node(q11, q12, q22, xc, xc + g.n, ec, ec + g.n, i);
    }
  }
}

void apply_free_serial(const DiscreteLayout& lay, const Matrix& x, Matrix& y) {
  check_shapes(lay, x, y);
  const long m = static_cast<long>(x.cols());
  for (std::size_t s = 0; s < lay.segments.size(); ++s) {
    const GridSegment& g = lay.segments[s];
    const double* q11 = lay.q11[s].data();
    const double* q12 = lay.q12[s].data();
    const double* q22 = lay.q22[s].data();
    const double inv_h = 1.0 / g.h;
    for (long t = 0; t < m * g.n; ++t) {
      const long c = t / g.n;
      const int i = static_cast<int>(t % g.n);
      const double* xc = x.data() + c * lay.dofs + g.offset;
      double* yc = y.data() + c * lay.dofs + g.offset;
      free_node(q11, q12, q22, xc, xc + g.n, yc, yc + g.n, i, g.n, inv_h);
    }
  }
}

void apply_free(const DiscreteLayout& lay, const Matrix& x, Matrix& y) {
  check_shapes(lay, x, y);
  const long m = static_cast<long>(x.cols());
  for (std::size_t s = 0; s < lay.segments.size(); ++s) {
    const GridSegment& g = lay.segments[s];
    const double* q11 = lay.q11[s].data();
    const double* q12 = lay.q12[s].data();
    const double* q22 = lay.q22[s].data();
    const double inv_h = 1.0 / g.h;
    const long work = m * g.n;
#pragma omp parallel for schedule(static) if (work >= kParallelGrain)
    for (long t = 0; t < work; ++t) {
      const long c = t / g.n;
      const int i = static_cast<int>(t % g.n);
      const double* xc = x.data() + c * lay.dofs + g.offset;
      double* yc = y.data() + c * lay.dofs + g.offset;
      free_node(q11, q12, q22, xc, xc + g.n, yc, yc + g.n, i, g.n, inv_h);
    }
  }
}

void apply_mass_serial(const DiscreteLayout& lay, const Matrix& x, Matrix& y) {
  check_shapes(lay, x, y);
  const long m = static_cast<long>(x.cols());
  for (std::size_t s = 0; s < lay.segments.size(); ++s) {
    const GridSegment& g = lay.segments[s];
    const double* q11 = lay.q11[s].data();
    const double* q12 = lay.q12[s].data();
    const double* q22 = lay.q22[s].data();
    const double* hw = lay.hw[s].data();
    for (long t = 0; t < m * g.n; ++t) {
      const long c = t / g.n;
      const int i = static_cast<int>(t % g.n);
      const double* xc = x.data() + c * lay.dofs + g.offset;
      double* yc = y.data() + c * lay.dofs + g.offset;
      mass_node(q11, q12, q22, hw, xc, xc + g.n, yc, yc + g.n, i);
    }
  }
}

void apply_mass(const DiscreteLayout& lay, const Matrix& x, Matrix& y) {
  check_shapes(lay, x, y);
  const long m = static_cast<long>(x.cols());
  for (std::size_t s = 0; s < lay.segments.size(); ++s) {
    const GridSegment& g = lay.segments[s];
    const double* q11 = lay.q11[s].data();
    const double* q12 = lay.q12[s].data();
    const double* q22 = lay.q22[s].data();
    const double* hw = lay.hw[s].data();
    const long work = m * g.n;
#pragma omp parallel for schedule(static) if (work >= kParallelGrain)
    for (long t = 0; t < work; ++t) {
      const long c = t / g.n;
      const int i = static_cast<int>(t % g.n);
      const double* xc = x.data() + c * lay.dofs + g.offset;
      double* yc = y.data() + c * lay.dofs + g.offset;
      mass_node(q11, q12, q22, hw, xc, xc + g.n, yc, yc + g.n, i);
    }
  }
}

}  // namespace kernels

}  // namespace phs
