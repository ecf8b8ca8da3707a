#include <phs/certify.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace phs {

const char* to_string(PsdStatus s) {
  switch (s) {
    case PsdStatus::zero: return "zero";
    case PsdStatus::positive_semidefinite: return "positive_semidefinite";
    case PsdStatus::positive_definite: return "positive_definite";
    case PsdStatus::indefinite: return "indefinite";
  }
  return "unknown";
}

Matrix24 wb_from_tilde(const Matrix24& tilde_wb) { return tilde_wb * rext(4).transpose(); }

namespace {

// Gram through the exchange matrix, filled entry by entry so the result is
// symmetric to the bit (each off-diagonal pair is evaluated once).
Matrix gram_through_sigma(const Matrix& w) {
  const Index n = w.rows();
  const Matrix ws = w * sigma(static_cast<int>(w.cols() / 2));
  Matrix g(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      g(i, j) = ws.row(i).dot(w.row(j));
      g(j, i) = g(i, j);
    }
  }
  return g;
}

bool is_psd(PsdStatus s) { return s != PsdStatus::indefinite; }

}  // namespace

PsdStatus psd_status(const Matrix& m, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("psd_status: tol must be positive");
  if (m.rows() != m.cols()) throw std::invalid_argument("psd_status: matrix must be square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol * scale)
    throw std::invalid_argument("psd_status: matrix is not symmetric within tol");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()),
                                           Eigen::EigenvaluesOnly);
  const Vector& ev = es.eigenvalues();
  const double lo = ev.minCoeff();
  const double hi = ev.maxCoeff();
  if (lo >= tol) return PsdStatus::positive_definite;
  if (std::max(std::abs(lo), std::abs(hi)) <= tol) return PsdStatus::zero;
  if (lo >= -tol) return PsdStatus::positive_semidefinite;
  return PsdStatus::indefinite;
}

Classification classify(const Matrix24& wb, const std::vector<double>& r, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("classify: tol must be positive");
  Classification c;

  Eigen::JacobiSVD<Matrix> svd(wb);
  const Vector& sv = svd.singularValues();
  c.rank_wb = 0;
  if (sv.size() > 0 && sv(0) > 0.0)
    for (Index i = 0; i < sv.size(); ++i)
      if (sv(i) > tol * sv(0)) ++c.rank_wb;

  c.gram = gram_through_sigma(wb);
  c.tolerance = tol * std::max(1.0, c.gram.cwiseAbs().maxCoeff());
  Eigen::SelfAdjointEigenSolver<Matrix2> es(c.gram, Eigen::EigenvaluesOnly);
  c.gram_eigs = es.eigenvalues();

  const PsdStatus status = psd_status(c.gram, c.tolerance);
  const bool gram_psd = is_psd(status);
  c.r_ok = std::all_of(r.begin(), r.end(), [tol](double rk) { return rk >= -tol; });
  const bool r_zero =
      std::all_of(r.begin(), r.end(), [tol](double rk) { return std::abs(rk) <= tol; });

  c.contraction = (c.rank_wb == 2) && gram_psd && c.r_ok;
  c.isometric = c.contraction && status == PsdStatus::zero && r_zero;
  c.exp_stable_sufficient = c.contraction && status == PsdStatus::positive_definite;

  if (!c.contraction) {
    std::vector<std::string> parts;
    if (c.rank_wb != 2) parts.emplace_back("rank");
    if (!gram_psd) parts.emplace_back("gram");
    if (!c.r_ok) parts.emplace_back("r");
    for (std::size_t i = 0; i < parts.size(); ++i)
      c.reason += (i == 0 ? "" : "+") + parts[i];
  }
  return c;
}

Matrix48 build_wbc(const Matrix24& tilde_wb, double r) {
  Matrix2 u1, u2;
  u1 << -r, 1.0, 0.0, 1.0;
  u2 << r, 0.0, 0.0, -1.0;
  Matrix tilde_wbc = Matrix::Zero(4, 8);
  tilde_wbc.block<2, 2>(0, 0) = u1;
  tilde_wbc.block<2, 2>(0, 6) = u2;
  tilde_wbc.block<2, 4>(2, 2) = tilde_wb;
  return tilde_wbc * rext(8).transpose();
}

LemmaEvidence lemma_equivalence_check(const Matrix24& tilde_wb, double r, double tol) {
  if (!(tol > 0.0))
    throw std::invalid_argument("lemma_equivalence_check: tol must be positive");
  LemmaEvidence ev;
  const Matrix24 wb = wb_from_tilde(tilde_wb);
  ev.gram4 = gram_through_sigma(wb);
  ev.gram8 = gram_through_sigma(build_wbc(tilde_wb, r));

  ev.status4 = psd_status(ev.gram4, tol * std::max(1.0, ev.gram4.cwiseAbs().maxCoeff()));
  ev.status8 = psd_status(ev.gram8, tol * std::max(1.0, ev.gram8.cwiseAbs().maxCoeff()));
  ev.side_direct = is_psd(ev.status4) && r >= -tol;
  ev.side_extended = is_psd(ev.status8);
  ev.agree = ev.side_direct == ev.side_extended;
  return ev;
}

}  // namespace phs
