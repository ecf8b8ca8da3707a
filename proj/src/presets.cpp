#include <phs/presets.hpp>

#include <stdexcept>

namespace phs {

namespace {

QField constant_q(double q11, double q22) {
  QField q;
  q.q0 = Matrix2::Zero();
  q.q0(0, 0) = q11;
  q.q0(1, 1) = q22;
  q.q1 = Matrix2::Zero();
  return q;
}

}  // namespace

SystemSpec acoustic(const AcousticParams& p) {
  if (!(p.a < p.b)) throw std::invalid_argument("acoustic: need a < b");
  for (double v : {p.bulk_minus, p.bulk_plus, p.rho_minus, p.rho_plus,
                   p.interface_resistance, p.boundary_resistance})
    if (!(v > 0.0))
      throw std::invalid_argument("acoustic: physical parameters must be positive");

  SystemSpec spec;
  spec.a = p.a;
  spec.b = p.b;
  const double mid = 0.5 * (p.a + p.b);
  spec.interfaces = {mid};
  spec.segments = {
      SegmentQ{p.a, mid, constant_q(p.bulk_minus, 1.0 / p.rho_minus), true},
      SegmentQ{mid, p.b, constant_q(p.bulk_plus, 1.0 / p.rho_plus), true}};
  spec.r = {1.0 / p.interface_resistance};

  // rows act on (e1(b), e2(b), e1(a), e2(a)): pin the pressure at a, tie
  // pressure to velocity through the impedance at b
  Matrix24 wt;
  wt << 0, 0, 1, 0,
      -1, p.boundary_resistance, 0, 0;
  spec.boundary = BoundarySpec::from_trace(wt);
  return validate_spec(spec);
}

BoundarySpec closed_boundary() {
  Matrix24 wb = Matrix24::Zero();
  wb(0, 0) = 1.0;
  wb(1, 1) = 1.0;
  return BoundarySpec::from_port(wb);
}

SystemSpec isometric_demo(double a, double b, double l) {
  SystemSpec spec;
  spec.a = a;
  spec.b = b;
  spec.interfaces = {l};
  spec.segments = {SegmentQ{a, l, QField{}, true}, SegmentQ{l, b, QField{}, true}};
  spec.r = {0.0};
  spec.boundary = closed_boundary();
  return validate_spec(spec);
}

SystemSpec multi_interface_chain(int n, const std::vector<double>& r,
                                 const BoundarySpec& boundary) {
  if (n < 1) throw std::invalid_argument("multi_interface_chain: need n >= 1");
  if (static_cast<int>(r.size()) != n)
    throw std::invalid_argument("multi_interface_chain: r must have n entries");

  SystemSpec spec;
  spec.a = 0.0;
  spec.b = 1.0;
  const double step = 1.0 / (n + 1);
  for (int k = 1; k <= n; ++k) spec.interfaces.push_back(k * step);
  for (int k = 0; k <= n; ++k)
    spec.segments.push_back(SegmentQ{k * step, (k + 1) * step, QField{}, true});
  spec.r = r;
  spec.boundary = boundary;
  return validate_spec(spec);
}

}  // namespace phs
