#pragma once

#include <phs/config.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace phs {

/// Parsed command line. The exit-code contract is stable for scripting:
/// 0 analysis completed (even with a negative verdict), 2 config error,
/// 3 resource cap exceeded, 4 unsupported topology.
struct CliOptions {
  std::string command;  // check | simulate | spectrum | transform-verify
  std::string config_path;
  std::string out_override;  // empty keeps the config's directory
  bool has_seed = false;
  std::uint64_t seed = 0;
};

/// Loads the config, applies overrides, dispatches, maps errors to the exit
/// codes above. Unexpected internal failures propagate to the caller.
int run_command(const CliOptions& opt);

int cmd_check(const RunConfig& cfg);
int cmd_simulate(const RunConfig& cfg);
int cmd_spectrum(const RunConfig& cfg);
int cmd_transform_verify(const RunConfig& cfg);

/// Result of sweeping verify_isometry over seeded random smooth states plus
/// a quadrature-refinement study of the rewritten-side inner product.
struct TransformBatteryReport {
  double worst_relative_mismatch = 0.0;
  double slope = 0.0;  // log-log slope of quadrature error vs grid spacing
  int functions = 0;
  std::vector<int> points;
};

/// Runs the battery on a single-interface system whose interface sits at the
/// origin. points gives nodes per segment for the mismatch sweep; the slope
/// study uses coarsened copies of the same grids against a 4x-fine
/// reference. Throws std::invalid_argument on unsupported topology.
TransformBatteryReport transform_battery(const SystemSpec& spec,
                                         const std::vector<int>& points,
                                         int functions, std::uint64_t seed);

}  // namespace phs
