#include <phs/cli.hpp>

#include <phs/certify.hpp>
#include <phs/csv.hpp>
#include <phs/rng.hpp>
#include <phs/simulate.hpp>
#include <phs/transform.hpp>

#include "json.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace phs {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path ensure_out_dir(const RunConfig& cfg) {
  fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  return dir;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << j.dump(2) << "\n";
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

void require_resolution(const RunConfig& cfg) {
  if (cfg.resolution.empty())
    throw ConfigError("/resolution", "required for this command");
}

/// Random band-limited state: five sine and five cosine harmonics per
/// component with seeded coefficients. Smooth in z, so trapezoid quadrature
/// converges at its design order on these.
struct TrigState {
  std::array<double, 5> s1{}, c1{}, s2{}, c2{};
  double a = 0.0;
  double span = 1.0;

  void draw(Rng& rng, const SystemSpec& spec) {
    a = spec.a;
    span = spec.b - spec.a;
    for (int j = 0; j < 5; ++j) {
      s1[j] = rng.normal();
      c1[j] = rng.normal();
      s2[j] = rng.normal();
      c2[j] = rng.normal();
    }
  }

  [[nodiscard]] Vector sample(const DiscreteLayout& lay) const {
    Vector x(lay.dofs);
    for (std::size_t s = 0; s < lay.segments.size(); ++s) {
      const GridSegment& g = lay.segments[s];
      for (int i = 0; i < g.n; ++i) {
        const double u = (lay.z[s](i) - a) / span;
        double v1 = 0.0, v2 = 0.0;
        for (int j = 0; j < 5; ++j) {
          const double arg = (j + 1) * M_PI * u;
          v1 += s1[j] * std::sin(arg) + c1[j] * std::cos(arg);
          v2 += s2[j] * std::sin(arg) + c2[j] * std::cos(arg);
        }
        x(g.offset + i) = v1;
        x(g.offset + g.n + i) = v2;
      }
    }
    return x;
  }
};

/// Translates the domain so the single interface lands at the origin;
/// affine coefficient fields are re-expressed in the shifted coordinate.
SystemSpec shift_to_origin(const SystemSpec& spec) {
  const double l = spec.interfaces.at(0);
  SystemSpec s = spec;
  s.a -= l;
  s.b -= l;
  s.interfaces = {0.0};
  s.segments.clear();
  for (const SegmentQ& seg : spec.segments) {
    QField q;
    q.q1 = seg.q.q1;
    q.q0 = seg.q.q0 + l * seg.q.q1;
    s.segments.push_back(SegmentQ{seg.lo - l, seg.hi - l, q, seg.smooth});
  }
  s.validated = false;
  return validate_spec(s);
}

const char* yesno(bool b) { return b ? "yes" : "no"; }

}  // namespace

TransformBatteryReport transform_battery(const SystemSpec& spec,
                                         const std::vector<int>& points,
                                         int functions, std::uint64_t seed) {
  if (spec.n_interfaces() != 1)
    throw std::invalid_argument("transform battery needs exactly one interface");
  if (functions < 1)
    throw std::invalid_argument("transform battery needs at least one function");

  const DiscreteLayout lay = build_layout(spec, points);
  Rng rng(seed);
  TransformBatteryReport rep;
  rep.functions = functions;
  rep.points = points;

  for (int f = 0; f < functions; ++f) {
    TrigState fx, fy;
    fx.draw(rng, spec);
    fy.draw(rng, spec);
    const IsometryReport ir =
        verify_isometry(spec, lay, fx.sample(lay), fy.sample(lay));
    rep.worst_relative_mismatch =
        std::max(rep.worst_relative_mismatch,
                 ir.mismatch / std::max(1.0, std::abs(ir.original)));
  }

  // quadrature refinement of the rewritten-side inner product for one fixed
  // pair, on coarsened copies of the grid against a 4x-fine reference
  TrigState gx, gy;
  gx.draw(rng, spec);
  gy.draw(rng, spec);
  const auto inner_at = [&](const std::vector<int>& pts) {
    const DiscreteLayout l = build_layout(spec, pts);
    const auto [bfs, wx] = to_boundary_form(spec, l, gx.sample(l));
    const BoundaryState wy = to_boundary_form(spec, l, gy.sample(l)).second;
    return boundary_inner(bfs, wx, wy);
  };
  std::vector<int> fine = points;
  for (int& p : fine) p *= 4;
  const double reference = inner_at(fine);

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int levels = 0;
  for (int div : {4, 2, 1}) {
    std::vector<int> pts = points;
    for (int& p : pts) p = std::max(3, p / div);
    const DiscreteLayout l = build_layout(spec, pts);
    const double err = std::abs(inner_at(pts) - reference);
    if (err <= 0.0) continue;  // too clean to fit, skip the level
    const double lx = std::log(l.segments[0].h);
    const double ly = std::log(err);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++levels;
  }
  rep.slope = levels >= 2
                  ? (levels * sxy - sx * sy) / (levels * sxx - sx * sx)
                  : 0.0;
  return rep;
}

int cmd_check(const RunConfig& cfg) {
  const SystemSpec& spec = cfg.system;
  const Classification cls =
      classify(spec.boundary.port(), spec.r, cfg.tolerance);

  std::printf("rank(W_B) = %d\n", cls.rank_wb);
  std::printf("Gram = [[%.12g, %.12g], [%.12g, %.12g]]\n", cls.gram(0, 0),
              cls.gram(0, 1), cls.gram(1, 0), cls.gram(1, 1));
  std::printf("Gram eigenvalues = {%.12g, %.12g}\n", cls.gram_eigs(0),
              cls.gram_eigs(1));
  for (std::size_t k = 0; k < spec.r.size(); ++k)
    std::printf("r[%zu] = %.12g (%s)\n", k, spec.r[k],
                spec.r[k] >= -cfg.tolerance ? "ok" : "negative");
  std::printf("contraction = %s\n", yesno(cls.contraction));
  std::printf("isometric = %s\n", yesno(cls.isometric));
  std::printf("exponential stability sufficient condition = %s\n",
              yesno(cls.exp_stable_sufficient));
  if (!cls.reason.empty()) std::printf("reason: %s\n", cls.reason.c_str());

  json out{{"seed", cfg.seed},
           {"preset", cfg.preset},
           {"tolerance", cfg.tolerance},
           {"rank", cls.rank_wb},
           {"gram", matrix_to_json(cls.gram)},
           {"gram_eigenvalues", {cls.gram_eigs(0), cls.gram_eigs(1)}},
           {"r", spec.r},
           {"r_ok", cls.r_ok},
           {"contraction", cls.contraction},
           {"isometric", cls.isometric},
           {"exp_stable_sufficient", cls.exp_stable_sufficient},
           {"reason", cls.reason},
           {"lemma", nullptr}};

  if (spec.n_interfaces() == 1) {
    const LemmaEvidence ev =
        lemma_equivalence_check(spec.boundary.trace(), spec.r[0], cfg.tolerance);
    std::printf("single-interface equivalence: direct=%s extended=%s agree=%s\n",
                to_string(ev.status4), to_string(ev.status8), yesno(ev.agree));
    out["lemma"] = json{{"agree", ev.agree},
                        {"side_direct", ev.side_direct},
                        {"side_extended", ev.side_extended},
                        {"status4", to_string(ev.status4)},
                        {"status8", to_string(ev.status8)},
                        {"gram4", matrix_to_json(ev.gram4)},
                        {"gram8", matrix_to_json(ev.gram8)}};
  }

  write_json(ensure_out_dir(cfg) / "check.json", out);
  return 0;
}

int cmd_simulate(const RunConfig& cfg) {
  require_resolution(cfg);
  if (!(cfg.dt > 0.0)) throw ConfigError("/dt", "required for simulate");
  if (!(cfg.horizon > 0.0)) throw ConfigError("/T", "required for simulate");

  const DiscreteSystem ds = assemble(cfg.system, cfg.resolution);
  if (!ds.cls.contraction)
    std::fprintf(stderr,
                 "warning: system is not certified contractive, energy may "
                 "grow; simulating anyway\n");

  const Vector x0 = build_initial_state(cfg, ds.lay);
  const Vector y0 = ds.project(x0);
  const RunResult rr =
      run(ds, y0, cfg.dt, cfg.horizon, cfg.trajectory_stride);
  const EnergyTrace& tr = rr.trace;

  const fs::path dir = ensure_out_dir(cfg);
  const std::size_t n_if = cfg.system.r.size();
  {
    std::vector<std::string> cols{"t", "H", "boundary_power"};
    for (std::size_t k = 0; k < n_if; ++k)
      cols.push_back("interface_power_" + std::to_string(k));
    cols.push_back("balance_residual");
    CsvWriter csv((dir / "energy.csv").string(), cfg.seed, cols);
    std::vector<double> row(cols.size());
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      row[0] = tr.times[i];
      row[1] = tr.h[i];
      row[2] = tr.boundary_power[i];
      for (std::size_t k = 0; k < n_if; ++k) row[3 + k] = tr.interface_power[i][k];
      row.back() = tr.balance_residual[i];
      csv.row(row);
    }
  }
  if (cfg.trajectory_stride > 0) {
    CsvWriter csv((dir / "trajectory.csv").string(), cfg.seed,
                  {"t", "segment", "z", "x1", "x2"});
    for (Index j = 0; j < rr.trajectory.cols(); ++j)
      for (std::size_t s = 0; s < ds.lay.segments.size(); ++s) {
        const GridSegment& g = ds.lay.segments[s];
        for (int i = 0; i < g.n; ++i)
          csv.row({rr.sample_times[static_cast<std::size_t>(j)],
                   static_cast<double>(s), ds.lay.z[s](i),
                   rr.trajectory(g.offset + i, j),
                   rr.trajectory(g.offset + g.n + i, j)});
      }
  }

  double max_residual = 0.0;
  double worst_growth = 0.0;
  for (std::size_t i = 1; i < tr.h.size(); ++i) {
    max_residual = std::max(max_residual, std::abs(tr.balance_residual[i]));
    worst_growth = std::max(worst_growth, tr.h[i] - tr.h[i - 1]);
  }
  const bool monotone = worst_growth <= 1e-12 * std::max(1.0, tr.h[0]);

  bool have_rate = true;
  double rate = 0.0;
  try {
    rate = decay_rate(tr, 0.5 * cfg.horizon, cfg.horizon);
  } catch (const std::invalid_argument&) {
    have_rate = false;
  }

  std::printf("steps = %zu, H(0) = %.12e, H(T) = %.12e\n", tr.h.size() - 1,
              tr.h.front(), tr.h.back());
  std::printf("max balance residual = %.3e\n", max_residual);
  std::printf("energy monotone nonincreasing = %s\n", yesno(monotone));
  if (have_rate)
    std::printf("estimated decay rate over [T/2, T] = %.6e\n", rate);
  else
    std::printf("estimated decay rate over [T/2, T] = n/a\n");

  json summary{{"seed", cfg.seed},
               {"preset", cfg.preset},
               {"dt", cfg.dt},
               {"T", cfg.horizon},
               {"steps", tr.h.size() - 1},
               {"energy_initial", tr.h.front()},
               {"energy_final", tr.h.back()},
               {"max_balance_residual", max_residual},
               {"monotone", monotone},
               {"contraction_certified", ds.cls.contraction},
               {"decay_rate", have_rate ? json(rate) : json(nullptr)}};
  write_json(dir / "summary.json", summary);
  return 0;
}

int cmd_spectrum(const RunConfig& cfg) {
  require_resolution(cfg);
  // the reduced dimension is at least dofs minus the condition-row count, so
  // an over-cap request can be refused before paying for assembly
  long dofs = 0;
  for (int n : cfg.resolution) dofs += 2L * n;
  const long reduced_floor =
      dofs - 2 - 2 * static_cast<long>(cfg.system.r.size());
  if (reduced_floor > kSpectrumCap)
    throw ResourceError(
        "spectrum: the requested grid exceeds the dense eigenvalue cap; "
        "coarsen the resolution");
  const DiscreteSystem ds = assemble(cfg.system, cfg.resolution);
  const Spectrum sp = spectral_abscissa(ds);  // ResourceError propagates

  std::vector<std::complex<double>> ev = sp.eigenvalues;
  std::sort(ev.begin(), ev.end(), [](const auto& x, const auto& y) {
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
  });

  const fs::path dir = ensure_out_dir(cfg);
  CsvWriter csv((dir / "eigenvalues.csv").string(), cfg.seed, {"re", "im"});
  for (const auto& lambda : ev) csv.row({lambda.real(), lambda.imag()});

  std::printf("reduced dimension = %d\n", ds.reduced_dim());
  std::printf("spectral abscissa = %.12e\n", sp.abscissa);
  return 0;
}

int cmd_transform_verify(const RunConfig& cfg) {
  require_resolution(cfg);
  const SystemSpec& spec = cfg.system;
  if (spec.n_interfaces() != 1) {
    std::fprintf(stderr,
                 "transform-verify supports exactly one interface (got %d)\n",
                 spec.n_interfaces());
    return 4;
  }
  SystemSpec local = spec;
  const double scale =
      std::max({1.0, std::abs(spec.a), std::abs(spec.b)});
  if (std::abs(spec.interfaces[0]) > 1e-12 * scale) {
    std::fprintf(stderr,
                 "notice: shifting coordinates by %.12g to move the interface "
                 "to the origin\n",
                 -spec.interfaces[0]);
    local = shift_to_origin(spec);
  }

  const TransformBatteryReport rep =
      transform_battery(local, cfg.resolution, cfg.battery_functions, cfg.seed);

  std::printf("functions = %d, points per segment =", rep.functions);
  for (int p : rep.points) std::printf(" %d", p);
  std::printf("\n");
  std::printf("worst relative mismatch = %.3e\n", rep.worst_relative_mismatch);
  std::printf("quadrature refinement slope = %.3f\n", rep.slope);

  json out{{"seed", cfg.seed},
           {"preset", cfg.preset},
           {"functions", rep.functions},
           {"points", rep.points},
           {"worst_relative_mismatch", rep.worst_relative_mismatch},
           {"refinement_slope", rep.slope}};
  write_json(ensure_out_dir(cfg) / "transform.json", out);
  return 0;
}

int run_command(const CliOptions& opt) {
  RunConfig cfg;
  try {
    cfg = load_config(opt.config_path);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }
  if (!opt.out_override.empty()) cfg.out_dir = opt.out_override;
  if (opt.has_seed) cfg.seed = opt.seed;

  try {
    if (opt.command == "check") return cmd_check(cfg);
    if (opt.command == "simulate") return cmd_simulate(cfg);
    if (opt.command == "spectrum") return cmd_spectrum(cfg);
    if (opt.command == "transform-verify") return cmd_transform_verify(cfg);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const ResourceError& e) {
    std::fprintf(stderr, "resource cap exceeded: %s\n", e.what());
    return 3;
  }
  std::fprintf(stderr, "unknown command \"%s\"\n", opt.command.c_str());
  return 2;
}

}  // namespace phs
