#pragma once

#include <phs/core.hpp>

#include <vector>

namespace phs {

/// Two-waveguide acoustic model: constant bulk modulus and density on each
/// side of a resistive interface, pressure pinned at the left end, impedance
/// condition p = R_b v at the right end. Defaults give unit wave speed on
/// both sides with the canonical resistances used throughout the tests.
struct AcousticParams {
  double a = -1.0;
  double b = 1.0;
  double bulk_minus = 1.0;
  double bulk_plus = 1.0;
  double rho_minus = 1.0;
  double rho_plus = 1.0;
  double interface_resistance = 2.0;
  double boundary_resistance = 1.0;
};

/// Validated spec for the acoustic model; the interface sits at the midpoint
/// of [a, b]. Throws std::invalid_argument when a >= b or any physical
/// parameter is not strictly positive.
SystemSpec acoustic(const AcousticParams& p = {});

/// Zero-boundary-flow port matrix [I 0]; closes the domain ends so every
/// boundary port is lossless.
BoundarySpec closed_boundary();

/// Unit-Q system on [a, b] with a single rigid interface at l, closed
/// boundary. Every port is lossless, so the generator is skew and the
/// semigroup isometric. Geometry errors surface through validation.
SystemSpec isometric_demo(double a = -1.0, double b = 1.0, double l = 0.0);

/// n+1 unit-Q segments on [0, 1] with equispaced interfaces carrying the
/// given resistances and the given boundary condition. Throws
/// std::invalid_argument when n < 1 or r.size() != n.
SystemSpec multi_interface_chain(int n, const std::vector<double>& r,
                                 const BoundarySpec& boundary);

}  // namespace phs
