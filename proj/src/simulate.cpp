#include <phs/simulate.hpp>

#include <phs/rng.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace phs {

namespace {

// Pointwise Cholesky factors of the 2x2 weighted mass blocks hw*Q. Solving
// with L / L^T turns the Mw inner product into the Euclidean one, which is
// how the null-space basis comes out Mw-orthonormal.
struct MassChol {
  std::vector<Vector> l11, l21, l22;

  explicit MassChol(const DiscreteLayout& lay) {
    for (std::size_t s = 0; s < lay.segments.size(); ++s) {
      const int n = lay.segments[s].n;
      Vector a(n), b(n), c(n);
      for (int i = 0; i < n; ++i) {
        const double m11 = lay.hw[s](i) * lay.q11[s](i);
        const double m12 = lay.hw[s](i) * lay.q12[s](i);
        const double m22 = lay.hw[s](i) * lay.q22[s](i);
        if (!(m11 > 0.0)) throw SolverError("weighted mass block lost positivity");
        a(i) = std::sqrt(m11);
        b(i) = m12 / a(i);
        const double rest = m22 - b(i) * b(i);
        if (!(rest > 0.0)) throw SolverError("weighted mass block lost positivity");
        c(i) = std::sqrt(rest);
      }
      l11.push_back(std::move(a));
      l21.push_back(std::move(b));
      l22.push_back(std::move(c));
    }
  }

  void solve_lower(const DiscreteLayout& lay, Matrix& x) const {
    for (std::size_t s = 0; s < lay.segments.size(); ++s) {
      const GridSegment& g = lay.segments[s];
      for (Index col = 0; col < x.cols(); ++col) {
        for (int i = 0; i < g.n; ++i) {
          double& x1 = x(g.offset + i, col);
          double& x2 = x(g.offset + g.n + i, col);
          x1 /= l11[s](i);
          x2 = (x2 - l21[s](i) * x1) / l22[s](i);
        }
      }
    }
  }

  void solve_upper(const DiscreteLayout& lay, Matrix& x) const {
    for (std::size_t s = 0; s < lay.segments.size(); ++s) {
      const GridSegment& g = lay.segments[s];
      for (Index col = 0; col < x.cols(); ++col) {
        for (int i = 0; i < g.n; ++i) {
          double& x1 = x(g.offset + i, col);
          double& x2 = x(g.offset + g.n + i, col);
          x2 /= l22[s](i);
          x1 = (x1 - l21[s](i) * x2) / l11[s](i);
        }
      }
    }
  }
};

// Co-energy trace extraction: per segment the rows e1(lo), e2(lo), e1(hi),
// e2(hi) as linear functionals of the state.
Matrix build_trace_map(const DiscreteLayout& lay) {
  const int ns = static_cast<int>(lay.segments.size());
  Matrix v = Matrix::Zero(4 * ns, lay.dofs);
  for (int s = 0; s < ns; ++s) {
    const GridSegment& g = lay.segments[s];
    const int last = g.n - 1;
    v(4 * s + 0, g.offset) = lay.q11[s](0);
    v(4 * s + 0, g.offset + g.n) = lay.q12[s](0);
    v(4 * s + 1, g.offset) = lay.q12[s](0);
    v(4 * s + 1, g.offset + g.n) = lay.q22[s](0);
    v(4 * s + 2, g.offset + last) = lay.q11[s](last);
    v(4 * s + 2, g.offset + g.n + last) = lay.q12[s](last);
    v(4 * s + 3, g.offset + last) = lay.q12[s](last);
    v(4 * s + 3, g.offset + g.n + last) = lay.q22[s](last);
  }
  return v;
}

// Boundary and interface conditions as rows over the trace vector. The
// resistive row writes the shared flux as the average of the two one-sided
// values, so together with the continuity row it pins both.
Matrix build_condition_rows(const SystemSpec& spec, int n_segments) {
  const int n = spec.n_interfaces();
  Matrix b = Matrix::Zero(2 + 2 * n, 4 * n_segments);
  const Matrix24& wt = spec.boundary.trace();
  for (int j = 0; j < 2; ++j) {
    b(j, 4 * (n_segments - 1) + 2) = wt(j, 0);  // e1(b)
    b(j, 4 * (n_segments - 1) + 3) = wt(j, 1);  // e2(b)
    b(j, 0) = wt(j, 2);                         // e1(a)
    b(j, 1) = wt(j, 3);                         // e2(a)
  }
  for (int k = 0; k < n; ++k) {
    const int m1 = 4 * k + 2, m2 = 4 * k + 3;          // minus-side traces
    const int p1 = 4 * (k + 1), p2 = 4 * (k + 1) + 1;  // plus-side traces
    b(2 + 2 * k, m2) = 1.0;
    b(2 + 2 * k, p2) = -1.0;
    b(3 + 2 * k, m2) = 0.5;
    b(3 + 2 * k, p2) = 0.5;
    b(3 + 2 * k, m1) = -spec.r[k];
    b(3 + 2 * k, p1) = spec.r[k];
  }
  return b;
}

// The quadratic form t' Omega t on trace vectors equals twice the net power:
// per segment 2*e1*e2(lo) - 2*e1*e2(hi), telescoping to the boundary and
// interface pairings once the constraints hold.
Matrix omega_times(const Matrix& w) {
  Matrix out(w.rows(), w.cols());
  for (Index s = 0; 4 * s < w.rows(); ++s) {
    out.row(4 * s + 0) = w.row(4 * s + 1);
    out.row(4 * s + 1) = w.row(4 * s + 0);
    out.row(4 * s + 2) = -w.row(4 * s + 3);
    out.row(4 * s + 3) = -w.row(4 * s + 2);
  }
  return out;
}

}  // namespace

Vector DiscreteSystem::lift(const Vector& y) const {
  if (y.size() != reduced_dim())
    throw std::invalid_argument("lift: reduced state has wrong size");
  return basis * y;
}

Vector DiscreteSystem::project(const Vector& x) const {
  if (x.size() != lay.dofs)
    throw std::invalid_argument("project: full state has wrong size");
  Matrix xm = x;
  Matrix mx;
  kernels::apply_mass_serial(lay, xm, mx);
  return basis.transpose() * mx.col(0);
}

DiscreteSystem assemble(const SystemSpec& spec, const std::vector<int>& points) {
  DiscreteSystem ds;
  ds.spec = spec.validated ? spec : validate_spec(spec);
  ds.lay = build_layout(ds.spec, points);
  const int ns = static_cast<int>(ds.lay.segments.size());

  ds.trace_map = build_trace_map(ds.lay);
  ds.constraints = build_condition_rows(ds.spec, ns) * ds.trace_map;

  const MassChol chol(ds.lay);
  Matrix ct = ds.constraints.transpose();
  chol.solve_lower(ds.lay, ct);
  const Eigen::ColPivHouseholderQR<Matrix> qr(ct);
  const int rank = static_cast<int>(qr.rank());
  const Matrix q = qr.householderQ();
  Matrix nullspace = q.rightCols(ds.lay.dofs - rank);
  chol.solve_upper(ds.lay, nullspace);
  ds.basis = std::move(nullspace);

  // Reduced generator, split so that the symmetric part is exactly the
  // port-power quadratic form (from the traces) and the remainder is exactly
  // antisymmetric. The difference from the plain Galerkin product is
  // roundoff-sized, but the split makes the energy identity hold by
  // construction instead of up to assembly noise.
  Matrix df, mdf;
  kernels::apply_free(ds.lay, ds.basis, df);
  kernels::apply_mass(ds.lay, df, mdf);
  const Matrix galerkin = ds.basis.transpose() * mdf;
  const Matrix skew = 0.5 * (galerkin - galerkin.transpose());
  ds.reduced_traces = ds.trace_map * ds.basis;
  const Matrix p = ds.reduced_traces.transpose() * omega_times(ds.reduced_traces);
  ds.a_red = skew + 0.25 * (p + p.transpose());

  ds.cls = classify(ds.spec.boundary.port(), ds.spec.r);
  return ds;
}

PortSnapshot ports_at(const DiscreteSystem& ds, const Vector& y) {
  if (y.size() != ds.reduced_dim())
    throw std::invalid_argument("ports_at: reduced state has wrong size");
  const Vector t = ds.reduced_traces * y;
  const int ns = static_cast<int>(ds.lay.segments.size());
  PortSnapshot snap;
  const Vector2 trace_a(t(0), t(1));
  const Vector2 trace_b(t(4 * (ns - 1) + 2), t(4 * (ns - 1) + 3));
  snap.boundary = boundary_ports(trace_b, trace_a);
  snap.interfaces.reserve(ds.spec.n_interfaces());
  for (int k = 0; k < ds.spec.n_interfaces(); ++k) {
    const Vector2 minus(t(4 * k + 2), t(4 * k + 3));
    const Vector2 plus(t(4 * k + 4), t(4 * k + 5));
    snap.interfaces.push_back(interface_ports(minus, plus));
  }
  snap.rate = power_rate(snap.boundary, snap.interfaces);
  return snap;
}

Stepper::Stepper(const DiscreteSystem& ds, double dt) : dt_(dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("Stepper: dt must be positive");
  const int n = ds.reduced_dim();
  const Matrix lhs = Matrix::Identity(n, n) - (0.5 * dt) * ds.a_red;
  rhs_ = Matrix::Identity(n, n) + (0.5 * dt) * ds.a_red;
  lu_.compute(lhs);
  if (n > 0) {
    const Vector diag = lu_.matrixLU().diagonal().cwiseAbs();
    if (!(diag.minCoeff() > 1e-14 * std::max(1.0, diag.maxCoeff())))
      throw SolverError("implicit midpoint system is singular at this dt");
  }
}

Vector Stepper::advance(const Vector& y) const {
  if (y.size() != rhs_.rows())
    throw std::invalid_argument("advance: reduced state has wrong size");
  return lu_.solve(rhs_ * y);
}

Vector step(const DiscreteSystem& ds, const Vector& y, double dt) {
  return Stepper(ds, dt).advance(y);
}

RunResult run(const DiscreteSystem& ds, const Vector& y0, double dt, double T,
              int stride) {
  if (!(dt > 0.0)) throw std::invalid_argument("run: dt must be positive");
  if (!(T > 0.0)) throw std::invalid_argument("run: horizon must be positive");
  if (y0.size() != ds.reduced_dim())
    throw std::invalid_argument("run: reduced state has wrong size");
  const long nsteps =
      std::max<long>(1, static_cast<long>(std::llround(std::ceil(T / dt - 1e-9))));
  const Stepper st(ds, dt);

  RunResult res;
  EnergyTrace& tr = res.trace;
  tr.times.reserve(nsteps + 1);
  tr.h.reserve(nsteps + 1);
  tr.boundary_power.reserve(nsteps + 1);
  tr.interface_power.reserve(nsteps + 1);
  tr.balance_residual.reserve(nsteps + 1);

  auto record = [&](double time, double hval, const PortSnapshot& snap, double residual) {
    tr.times.push_back(time);
    tr.h.push_back(hval);
    tr.boundary_power.push_back(snap.boundary.f.dot(snap.boundary.e));
    std::vector<double> ip;
    ip.reserve(snap.interfaces.size());
    for (const InterfacePorts& p : snap.interfaces) ip.push_back(p.e * p.f);
    tr.interface_power.push_back(std::move(ip));
    tr.balance_residual.push_back(residual);
  };

  std::vector<Vector> samples;
  std::vector<double> sample_times;
  auto sample = [&](double time, const Vector& y) {
    samples.push_back(ds.lift(y));
    sample_times.push_back(time);
  };

  double h_prev = energy(y0);
  record(0.0, h_prev, ports_at(ds, y0), 0.0);
  if (stride > 0) sample(0.0, y0);

  Vector y = y0;
  for (long i = 1; i <= nsteps; ++i) {
    const Vector ynext = st.advance(y);
    const Vector mid = 0.5 * (y + ynext);
    const double hval = energy(ynext);
    const PortSnapshot snap = ports_at(ds, mid);
    record(static_cast<double>(i) * dt, hval,
           snap, (hval - h_prev) / dt - snap.rate);
    if (stride > 0 && (i % stride == 0 || i == nsteps))
      sample(static_cast<double>(i) * dt, ynext);
    y = ynext;
    h_prev = hval;
  }

  res.sample_times = std::move(sample_times);
  res.trajectory.resize(samples.empty() ? 0 : ds.lay.dofs,
                        static_cast<Index>(samples.size()));
  for (std::size_t j = 0; j < samples.size(); ++j)
    res.trajectory.col(static_cast<Index>(j)) = samples[j];
  return res;
}

Spectrum spectral_abscissa(const Matrix& a) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("spectral_abscissa: matrix must be square");
  Spectrum sp;
  if (a.rows() == 0) {
    sp.abscissa = -std::numeric_limits<double>::infinity();
    return sp;
  }
  const Eigen::EigenSolver<Matrix> es(a);
  if (es.info() != Eigen::Success) throw SolverError("eigendecomposition failed");
  sp.eigenvalues.reserve(a.rows());
  sp.abscissa = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < a.rows(); ++i) {
    const std::complex<double> ev = es.eigenvalues()(i);
    sp.eigenvalues.push_back(ev);
    sp.abscissa = std::max(sp.abscissa, ev.real());
  }
  return sp;
}

Spectrum spectral_abscissa(const DiscreteSystem& ds, int cap) {
  if (ds.reduced_dim() > cap)
    throw ResourceError(
        "spectral_abscissa: reduced dimension exceeds the dense eigenvalue cap; "
        "coarsen the grid or use decay_rate on a simulation instead");
  return spectral_abscissa(ds.a_red);
}

double decay_rate(const EnergyTrace& trace, double t0, double t1) {
  const double slack = 1e-12 * std::max({1.0, std::abs(t0), std::abs(t1)});
  std::vector<double> ts, ys;
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    const double t = trace.times[i];
    if (t < t0 - slack || t > t1 + slack) continue;
    if (!(trace.h[i] > 0.0))
      throw std::invalid_argument("decay_rate: nonpositive energy inside the window");
    ts.push_back(t);
    ys.push_back(-0.5 * std::log(trace.h[i]));
  }
  if (ts.size() < 2)
    throw std::invalid_argument("decay_rate: need at least two samples in the window");
  double tm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    tm += ts[i];
    ym += ys[i];
  }
  tm /= static_cast<double>(ts.size());
  ym /= static_cast<double>(ts.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    num += (ts[i] - tm) * (ys[i] - ym);
    den += (ts[i] - tm) * (ts[i] - tm);
  }
  if (!(den > 0.0))
    throw std::invalid_argument("decay_rate: window has no time spread");
  return num / den;
}

DissipationCheck dissipation_bound_check(const DiscreteSystem& ds, Side side,
                                         int trials, std::uint64_t seed) {
  if (trials < 1)
    throw std::invalid_argument("dissipation_bound_check: trials must be >= 1");
  const int ns = static_cast<int>(ds.lay.segments.size());
  Rng rng(seed);
  DissipationCheck out;
  out.k_hat = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < trials; ++trial) {
    Vector y(ds.reduced_dim());
    for (Index i = 0; i < y.size(); ++i) y(i) = rng.normal();
    const Vector t = ds.reduced_traces * y;
    const double at = t(0) * t(0) + t(1) * t(1);
    const double bt = t(4 * (ns - 1) + 2) * t(4 * (ns - 1) + 2) +
                      t(4 * (ns - 1) + 3) * t(4 * (ns - 1) + 3);
    const double den = side == Side::a ? at : (side == Side::b ? bt : at + bt);
    if (den < 1e-14) {
      ++out.skipped;
      continue;
    }
    const double num = -0.5 * ports_at(ds, y).rate;
    out.k_hat = std::min(out.k_hat, num / den);
    ++out.used;
  }
  if (out.used == 0)
    throw InconclusiveError(
        "dissipation_bound_check: every trial had a negligible boundary trace");
  out.holds = out.k_hat > 1e-12;
  return out;
}

}  // namespace phs
