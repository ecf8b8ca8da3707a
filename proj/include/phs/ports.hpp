#pragma once

#include <phs/types.hpp>

#include <vector>

namespace phs {

/// Boundary port pair: (f; e) = rext(4) * [trace_b; trace_a].
struct BoundaryPorts {
  Vector2 f = Vector2::Zero();
  Vector2 e = Vector2::Zero();
};

/// Interface port pair at one interior interface. f_I is the shared second
/// trace component; e_I is the jump of the first component, minus side first.
struct InterfacePorts {
  double f = 0.0;
  double e = 0.0;
  double continuity_residual = 0.0;
};

/// Ports from the co-energy traces at z=b and z=a (in that stacking order).
BoundaryPorts boundary_ports(const Vector2& trace_b, const Vector2& trace_a);

/// Ports from the one-sided co-energy traces at an interface. Throws
/// ContinuityViolation if the second components differ beyond tol; pass a
/// larger tol to inspect badly matched traces anyway. The default matches
/// the documented band 1e-9 * max(1, |f_I|).
InterfacePorts interface_ports(const Vector2& trace_minus, const Vector2& trace_plus,
                               double tol = -1.0);

/// Power flowing into the system: <e,f> at the boundary minus the interface
/// pairings, i.e. the right side of the energy balance.
double power_rate(const BoundaryPorts& bp, const std::vector<InterfacePorts>& ips);

}  // namespace phs
