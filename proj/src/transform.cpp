#include <phs/transform.hpp>

#include <cmath>
#include <stdexcept>

namespace phs {

namespace {

// Composite trapezoid of (1/2) wy' B(zeta) wx over one component pair on its
// own uniform grid, with B supplied per node.
template <typename BlockAt>
double pair_quadrature(const Vector& zeta, const Vector& wx, const Vector& wy,
                       BlockAt block_at) {
  const Index n = zeta.size();
  const double h = (zeta(n - 1) - zeta(0)) / static_cast<double>(n - 1);
  double acc = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double tw = (i == 0 || i == n - 1) ? 0.5 * h : h;
    const Matrix2 q = block_at(zeta(i));
    const double x1 = wx(i), x2 = wx(n + i);
    const double y1 = wy(i), y2 = wy(n + i);
    acc += tw * (y1 * (q(0, 0) * x1 + q(0, 1) * x2) + y2 * (q(1, 0) * x1 + q(1, 1) * x2));
  }
  return 0.5 * acc;
}

void require_single_interface_at_zero(const SystemSpec& spec) {
  if (spec.interfaces.size() != 1)
    throw std::invalid_argument("to_boundary_form: exactly one interface required");
  const double scale = std::max({1.0, std::abs(spec.a), std::abs(spec.b)});
  if (std::abs(spec.interfaces[0]) > 1e-12 * scale)
    throw std::invalid_argument(
        "to_boundary_form: interface must sit at 0; shift coordinates first");
}

}  // namespace

Matrix4 BoundaryFormSystem::h0(double zeta) const {
  Matrix4 m = Matrix4::Zero();
  m.topLeftCorner<2, 2>() = (1.0 / eta) * q_minus.at(eta * zeta + a);
  m.bottomRightCorner<2, 2>() = q_plus.at(zeta);
  return m;
}

std::pair<BoundaryFormSystem, BoundaryState> to_boundary_form(const SystemSpec& spec,
                                                              const DiscreteLayout& lay,
                                                              const Vector& x) {
  require_single_interface_at_zero(spec);
  if (lay.segments.size() != 2)
    throw std::invalid_argument("to_boundary_form: layout must cover both segments");
  if (x.size() != lay.dofs)
    throw std::invalid_argument("to_boundary_form: state size does not match layout");

  BoundaryFormSystem bfs;
  bfs.length = spec.b;
  bfs.eta = -spec.a / spec.b;
  bfs.a = spec.a;
  bfs.q_minus = spec.segments[0].q;
  bfs.q_plus = spec.segments[1].q;

  const GridSegment& left = lay.segments[0];
  const GridSegment& right = lay.segments[1];
  bfs.zeta1 = ((lay.z[0].array() - spec.a) / bfs.eta).matrix();
  bfs.zeta2 = lay.z[1];

  BoundaryState w;
  w.upper = bfs.eta * x.segment(left.offset, 2 * left.n);
  w.lower = x.segment(right.offset, 2 * right.n);
  return {bfs, w};
}

Vector from_boundary_form(const BoundaryFormSystem& bfs, const BoundaryState& w) {
  if (!(bfs.eta > 0.0))
    throw std::invalid_argument("from_boundary_form: contraction ratio must be positive");
  if (w.upper.size() % 2 != 0 || w.lower.size() % 2 != 0)
    throw std::invalid_argument("from_boundary_form: component blocks must pair up");
  Vector x(w.upper.size() + w.lower.size());
  x.head(w.upper.size()) = w.upper / bfs.eta;
  x.tail(w.lower.size()) = w.lower;
  return x;
}

double weighted_inner(const DiscreteLayout& lay, const Vector& x, const Vector& y) {
  if (x.size() != lay.dofs || y.size() != lay.dofs)
    throw std::invalid_argument("weighted_inner: state size does not match layout");
  double acc = 0.0;
  for (std::size_t s = 0; s < lay.segments.size(); ++s) {
    const GridSegment& g = lay.segments[s];
    for (int i = 0; i < g.n; ++i) {
      const double x1 = x(g.offset + i), x2 = x(g.offset + g.n + i);
      const double y1 = y(g.offset + i), y2 = y(g.offset + g.n + i);
      const double q11 = lay.q11[s](i), q12 = lay.q12[s](i), q22 = lay.q22[s](i);
      acc += lay.hw[s](i) *
             (y1 * (q11 * x1 + q12 * x2) + y2 * (q12 * x1 + q22 * x2));
    }
  }
  return 0.5 * acc;
}

double boundary_inner(const BoundaryFormSystem& bfs, const BoundaryState& wx,
                      const BoundaryState& wy) {
  if (wx.upper.size() != wy.upper.size() || wx.lower.size() != wy.lower.size())
    throw std::invalid_argument("boundary_inner: states sampled on different grids");
  if (wx.upper.size() != 2 * bfs.zeta1.size() || wx.lower.size() != 2 * bfs.zeta2.size())
    throw std::invalid_argument("boundary_inner: state size does not match the grids");
  const double upper = pair_quadrature(bfs.zeta1, wx.upper, wy.upper, [&](double zeta) {
    return Matrix2((1.0 / bfs.eta) * bfs.q_minus.at(bfs.eta * zeta + bfs.a));
  });
  const double lower = pair_quadrature(bfs.zeta2, wx.lower, wy.lower,
                                       [&](double zeta) { return bfs.q_plus.at(zeta); });
  return upper + lower;
}

IsometryReport verify_isometry(const SystemSpec& spec, const DiscreteLayout& lay,
                               const Vector& x, const Vector& y, double tol) {
  const auto [bfs, wx] = to_boundary_form(spec, lay, x);
  const BoundaryState wy = to_boundary_form(spec, lay, y).second;
  IsometryReport rep;
  rep.original = weighted_inner(lay, x, y);
  rep.boundary = boundary_inner(bfs, wx, wy);
  rep.mismatch = std::abs(rep.original - rep.boundary);
  rep.ok = rep.mismatch <= tol * std::max(1.0, std::abs(rep.original));
  return rep;
}

}  // namespace phs
