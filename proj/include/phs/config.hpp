#pragma once

#include <phs/core.hpp>
#include <phs/kernels.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace phs {

/// Raised for malformed config files; field carries the JSON pointer of the
/// offending entry so scripts can diagnose without parsing prose.
struct ConfigError : std::runtime_error {
  std::string field;
  ConfigError(std::string f, const std::string& message)
      : std::runtime_error("config field '" + f + "': " + message),
        field(std::move(f)) {}
};

struct InitialSpec {
  enum class Kind { gaussian, standing_wave, random };
  Kind kind = Kind::gaussian;
  int mode = 1;        // standing_wave harmonic index
  double width = 0.15; // gaussian bump width as a fraction of segment length
};

/// Everything a command needs, resolved and validated. dt and horizon stay
/// zero when the file does not provide them; commands that integrate insist
/// on positive values.
struct RunConfig {
  SystemSpec system;
  std::string preset;  // empty for inline systems
  std::vector<int> resolution;
  double dt = 0.0;
  double horizon = 0.0;
  double tolerance = 1e-10;
  InitialSpec initial;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  int trajectory_stride = 10;
  int battery_functions = 50;
};

/// Parses and validates a JSON config document. origin labels error messages
/// (a file path or "<string>"). Throws ConfigError on any defect, including
/// system specs that fail validation.
RunConfig parse_config_text(const std::string& text,
                            const std::string& origin = "<string>");

/// parse_config_text over the contents of path; unreadable file throws
/// ConfigError on the pseudo-field "<file>".
RunConfig load_config(const std::string& path);

/// Samples the configured initial condition on the discrete grid. The random
/// kind draws from Rng(cfg.seed); the state is returned in full coordinates
/// and is not yet constrained.
Vector build_initial_state(const RunConfig& cfg, const DiscreteLayout& lay);

}  // namespace phs
