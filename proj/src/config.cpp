#include <phs/config.hpp>

#include <phs/presets.hpp>
#include <phs/rng.hpp>

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace phs {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw ConfigError(field, message);
}

void expect_keys(const json& j, const std::string& where,
                 const std::set<std::string>& allowed) {
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) fail(where + "/" + key, "unknown key");
}

double number_at(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

Matrix2 matrix2_at(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) fail(where, "expected a 2x2 array");
  Matrix2 m;
  for (int r = 0; r < 2; ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.size() != 2) fail(where, "expected a 2x2 array");
    for (int c = 0; c < 2; ++c)
      m(r, c) = number_at(row[c], where);
  }
  return m;
}

Matrix24 matrix24_at(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) fail(where, "expected a 2x4 array");
  Matrix24 m;
  for (int r = 0; r < 2; ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.size() != 4) fail(where, "expected a 2x4 array");
    for (int c = 0; c < 4; ++c)
      m(r, c) = number_at(row[c], where);
  }
  return m;
}

BoundarySpec boundary_at(const json& j, const std::string& where) {
  if (j.is_string()) {
    if (j.get<std::string>() == "closed") return closed_boundary();
    fail(where, "unknown boundary name (only \"closed\" is predefined)");
  }
  if (!j.is_object()) fail(where, "expected \"closed\" or an object");
  expect_keys(j, where, {"trace", "port"});
  const bool has_trace = j.contains("trace");
  const bool has_port = j.contains("port");
  if (has_trace == has_port) fail(where, "give exactly one of trace or port");
  if (has_trace) return BoundarySpec::from_trace(matrix24_at(j["trace"], where + "/trace"));
  return BoundarySpec::from_port(matrix24_at(j["port"], where + "/port"));
}

SystemSpec inline_system(const json& j) {
  expect_keys(j, "/system", {"domain", "interfaces", "segments", "r", "boundary"});
  for (const char* key : {"domain", "segments", "boundary"})
    if (!j.contains(key)) fail(std::string("/system/") + key, "required");

  const json& dom = j["domain"];
  if (!dom.is_array() || dom.size() != 2) fail("/system/domain", "expected [a, b]");
  SystemSpec spec;
  spec.a = number_at(dom[0], "/system/domain");
  spec.b = number_at(dom[1], "/system/domain");

  if (j.contains("interfaces")) {
    if (!j["interfaces"].is_array()) fail("/system/interfaces", "expected an array");
    for (const json& v : j["interfaces"])
      spec.interfaces.push_back(number_at(v, "/system/interfaces"));
  }

  const json& segs = j["segments"];
  if (!segs.is_array() || segs.size() != spec.interfaces.size() + 1)
    fail("/system/segments", "expected one segment per subinterval (interfaces + 1)");
  std::vector<double> cuts;
  cuts.push_back(spec.a);
  for (double l : spec.interfaces) cuts.push_back(l);
  cuts.push_back(spec.b);
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const std::string where = "/system/segments/" + std::to_string(k);
    const json& sj = segs[k];
    if (!sj.is_object()) fail(where, "expected an object");
    expect_keys(sj, where, {"q0", "q1"});
    QField q;
    if (sj.contains("q0")) q.q0 = matrix2_at(sj["q0"], where + "/q0");
    if (sj.contains("q1")) q.q1 = matrix2_at(sj["q1"], where + "/q1");
    spec.segments.push_back(SegmentQ{cuts[k], cuts[k + 1], q, true});
  }

  if (j.contains("r")) {
    if (!j["r"].is_array()) fail("/system/r", "expected an array");
    for (const json& v : j["r"]) spec.r.push_back(number_at(v, "/system/r"));
  }
  if (spec.r.size() != spec.interfaces.size())
    fail("/system/r", "expected one resistance per interface");

  spec.boundary = boundary_at(j["boundary"], "/system/boundary");
  return spec;
}

SystemSpec preset_system(const json& j, std::string& preset_name) {
  const std::string name = j["preset"].get<std::string>();
  preset_name = name;
  if (name == "acoustic") {
    expect_keys(j, "/system",
                {"preset", "a", "b", "bulk_minus", "bulk_plus", "rho_minus",
                 "rho_plus", "interface_resistance", "boundary_resistance"});
    AcousticParams p;
    auto pick = [&](const char* key, double& slot) {
      if (j.contains(key)) slot = number_at(j[key], std::string("/system/") + key);
    };
    pick("a", p.a);
    pick("b", p.b);
    pick("bulk_minus", p.bulk_minus);
    pick("bulk_plus", p.bulk_plus);
    pick("rho_minus", p.rho_minus);
    pick("rho_plus", p.rho_plus);
    pick("interface_resistance", p.interface_resistance);
    pick("boundary_resistance", p.boundary_resistance);
    return acoustic(p);
  }
  if (name == "isometric") {
    expect_keys(j, "/system", {"preset", "a", "b", "l"});
    double a = -1.0, b = 1.0, l = 0.0;
    if (j.contains("a")) a = number_at(j["a"], "/system/a");
    if (j.contains("b")) b = number_at(j["b"], "/system/b");
    if (j.contains("l")) l = number_at(j["l"], "/system/l");
    return isometric_demo(a, b, l);
  }
  if (name == "chain") {
    expect_keys(j, "/system", {"preset", "n", "r", "boundary"});
    if (!j.contains("n") || !j["n"].is_number_integer())
      fail("/system/n", "required integer");
    const int n = j["n"].get<int>();
    std::vector<double> r;
    if (j.contains("r")) {
      if (!j["r"].is_array()) fail("/system/r", "expected an array");
      for (const json& v : j["r"]) r.push_back(number_at(v, "/system/r"));
    } else {
      r.assign(std::max(n, 0), 0.0);
    }
    BoundarySpec boundary = closed_boundary();
    if (j.contains("boundary")) boundary = boundary_at(j["boundary"], "/system/boundary");
    return multi_interface_chain(n, r, boundary);
  }
  fail("/system/preset", "unknown preset \"" + name + "\"");
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("<parse>", origin + ": " + e.what());
  }
  if (!j.is_object()) fail("<root>", "expected a JSON object");
  expect_keys(j, "", {"system", "resolution", "dt", "T", "tolerance", "initial",
                      "seed", "out", "trajectory_stride", "functions"});
  if (!j.contains("system")) fail("/system", "required");
  const json& sys = j["system"];
  if (!sys.is_object()) fail("/system", "expected an object");

  RunConfig cfg;
  try {
    if (sys.contains("preset"))
      cfg.system = preset_system(sys, cfg.preset);
    else
      cfg.system = validate_spec(inline_system(sys));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail("/system", e.what());
  }

  const int n_segments = static_cast<int>(cfg.system.segments.size());
  if (j.contains("resolution")) {
    const json& res = j["resolution"];
    if (res.is_number_integer()) {
      cfg.resolution.assign(n_segments, res.get<int>());
    } else if (res.is_array()) {
      for (const json& v : res) {
        if (!v.is_number_integer()) fail("/resolution", "expected integers");
        cfg.resolution.push_back(v.get<int>());
      }
      if (static_cast<int>(cfg.resolution.size()) != n_segments)
        fail("/resolution", "expected one entry per segment");
    } else {
      fail("/resolution", "expected an integer or an array of integers");
    }
    for (int n : cfg.resolution)
      if (n < 3) fail("/resolution", "need at least 3 points per segment");
  }

  if (j.contains("dt")) {
    cfg.dt = number_at(j["dt"], "/dt");
    if (!(cfg.dt > 0.0)) fail("/dt", "must be positive");
  }
  if (j.contains("T")) {
    cfg.horizon = number_at(j["T"], "/T");
    if (!(cfg.horizon > 0.0)) fail("/T", "must be positive");
  }
  if (j.contains("tolerance")) {
    cfg.tolerance = number_at(j["tolerance"], "/tolerance");
    if (!(cfg.tolerance > 0.0)) fail("/tolerance", "must be positive");
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail("/seed", "expected a nonnegative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("out")) {
    if (!j["out"].is_string()) fail("/out", "expected a string");
    cfg.out_dir = j["out"].get<std::string>();
  }
  if (j.contains("trajectory_stride")) {
    if (!j["trajectory_stride"].is_number_integer())
      fail("/trajectory_stride", "expected an integer");
    cfg.trajectory_stride = j["trajectory_stride"].get<int>();
  }
  if (j.contains("functions")) {
    if (!j["functions"].is_number_integer() || j["functions"].get<int>() < 1)
      fail("/functions", "expected a positive integer");
    cfg.battery_functions = j["functions"].get<int>();
  }

  if (j.contains("initial")) {
    const json& init = j["initial"];
    if (!init.is_object()) fail("/initial", "expected an object");
    expect_keys(init, "/initial", {"kind", "mode", "width"});
    if (!init.contains("kind") || !init["kind"].is_string())
      fail("/initial/kind", "required string");
    const std::string kind = init["kind"].get<std::string>();
    if (kind == "gaussian")
      cfg.initial.kind = InitialSpec::Kind::gaussian;
    else if (kind == "standing_wave")
      cfg.initial.kind = InitialSpec::Kind::standing_wave;
    else if (kind == "random")
      cfg.initial.kind = InitialSpec::Kind::random;
    else
      fail("/initial/kind", "unknown kind \"" + kind + "\"");
    if (init.contains("mode")) {
      if (!init["mode"].is_number_integer() || init["mode"].get<int>() < 1)
        fail("/initial/mode", "expected a positive integer");
      cfg.initial.mode = init["mode"].get<int>();
    }
    if (init.contains("width")) {
      cfg.initial.width = number_at(init["width"], "/initial/width");
      if (!(cfg.initial.width > 0.0)) fail("/initial/width", "must be positive");
    }
  }

  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("<file>", "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

Vector build_initial_state(const RunConfig& cfg, const DiscreteLayout& lay) {
  Vector x = Vector::Zero(lay.dofs);
  switch (cfg.initial.kind) {
    case InitialSpec::Kind::gaussian:
      for (std::size_t s = 0; s < lay.segments.size(); ++s) {
        const GridSegment& g = lay.segments[s];
        const double center = 0.5 * (g.lo + g.hi);
        const double width = cfg.initial.width * (g.hi - g.lo);
        for (int i = 0; i < g.n; ++i) {
          const double u = (lay.z[s](i) - center) / width;
          x(g.offset + i) = std::exp(-u * u);
        }
      }
      break;
    case InitialSpec::Kind::standing_wave: {
      const SystemSpec& spec = cfg.system;
      const double span = spec.b - spec.a;
      for (std::size_t s = 0; s < lay.segments.size(); ++s) {
        const GridSegment& g = lay.segments[s];
        for (int i = 0; i < g.n; ++i) {
          const double u = (lay.z[s](i) - spec.a) / span;
          x(g.offset + i) = std::sin(cfg.initial.mode * M_PI * u);
        }
      }
      break;
    }
    case InitialSpec::Kind::random: {
      Rng rng(cfg.seed);
      for (Index i = 0; i < x.size(); ++i) x(i) = rng.normal();
      x /= std::sqrt(static_cast<double>(lay.dofs));
      break;
    }
  }
  return x;
}

}  // namespace phs
