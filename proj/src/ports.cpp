#include <phs/ports.hpp>

#include <phs/core.hpp>

#include <cmath>
#include <sstream>

namespace phs {

BoundaryPorts boundary_ports(const Vector2& trace_b, const Vector2& trace_a) {
  const double s = 1.0 / std::sqrt(2.0);
  BoundaryPorts bp;
  bp.f = s * (p1() * trace_b - p1() * trace_a);
  bp.e = s * (trace_b + trace_a);
  return bp;
}

InterfacePorts interface_ports(const Vector2& trace_minus, const Vector2& trace_plus,
                               double tol) {
  InterfacePorts ip;
  ip.f = trace_plus(1);
  ip.e = trace_minus(0) - trace_plus(0);
  ip.continuity_residual = std::abs(trace_plus(1) - trace_minus(1));
  const double band = tol >= 0.0 ? tol : 1e-9 * std::max(1.0, std::abs(ip.f));
  if (ip.continuity_residual > band) {
    std::ostringstream os;
    os << "interface_ports: one-sided flux traces disagree by " << ip.continuity_residual
       << " (allowed " << band << ")";
    throw ContinuityViolation(os.str(), ip.continuity_residual);
  }
  return ip;
}

double power_rate(const BoundaryPorts& bp, const std::vector<InterfacePorts>& ips) {
  double rate = bp.e.dot(bp.f);
  for (const auto& ip : ips) rate -= ip.e * ip.f;
  return rate;
}

}  // namespace phs
