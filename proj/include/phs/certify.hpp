#pragma once

#include <phs/core.hpp>

#include <string>
#include <vector>

namespace phs {

enum class PsdStatus { zero, positive_semidefinite, positive_definite, indefinite };

const char* to_string(PsdStatus s);

/// Verdicts drawn from the boundary port matrix and interface resistances.
/// contraction requires full rank, a psd Gram, and nonnegative resistances;
/// isometric additionally needs a vanishing Gram and zero resistances;
/// exp_stable_sufficient needs the Gram strictly positive definite. The
/// strict verdict is sufficient only: systems failing it may still decay.
struct Classification {
  int rank_wb = 0;
  Matrix2 gram = Matrix2::Zero();
  Vector2 gram_eigs = Vector2::Zero();
  bool r_ok = false;
  bool contraction = false;
  bool isometric = false;
  bool exp_stable_sufficient = false;
  double tolerance = 0.0;  // absolute tolerance applied to the Gram spectrum
  std::string reason;      // failed requirements; empty when contraction holds
};

/// Port form from trace form: W_B = W~_B * rext(4)^T.
Matrix24 wb_from_tilde(const Matrix24& tilde_wb);

/// Eigenvalue classification of a symmetric matrix with absolute tolerance
/// tol. Verdict order, strongest first: positive_definite (all eigenvalues
/// >= tol), zero (all |eigenvalues| <= tol), positive_semidefinite (all
/// >= -tol), indefinite otherwise.
PsdStatus psd_status(const Matrix& m, double tol);

/// Full classification. tol is relative: the Gram spectrum is judged at
/// tol * max(1, ||gram||_max), resistances at plain tol.
Classification classify(const Matrix24& wb, const std::vector<double>& r, double tol = 1e-10);

/// Port-form boundary matrix of the single-interface system rewritten as a
/// 4-component boundary system on one leg: builds the 4x8 trace-form matrix
/// [[U1, 0, U2],[0, W~_B, 0]] with U1 = [[-r,1],[0,1]], U2 = [[r,0],[0,-1]]
/// and rotates it through rext(8).
Matrix48 build_wbc(const Matrix24& tilde_wb, double r);

struct LemmaEvidence {
  bool agree = false;
  bool side_direct = false;    // psd Gram of the 2x4 matrix and r >= -tol
  bool side_extended = false;  // psd Gram of the extended 4x8 matrix
  PsdStatus status4 = PsdStatus::indefinite;
  PsdStatus status8 = PsdStatus::indefinite;
  Matrix2 gram4 = Matrix2::Zero();
  Matrix gram8 = Matrix::Zero(4, 4);
};

/// Evaluates both semidefiniteness verdicts on concrete numbers and reports
/// whether they agree. The two sides are computed along independent routes:
/// the 2x4 Gram directly, the 4x4 Gram through the explicit extended matrix.
LemmaEvidence lemma_equivalence_check(const Matrix24& tilde_wb, double r, double tol = 1e-9);

}  // namespace phs
