#pragma once

#include <vector>

#include "goldnash/types.hpp"

namespace goldnash {

// Tolerances for the dense kernels. Singularity and rank thresholds are
// relative to the infinity norm of the factored matrix.
inline constexpr double kSingularTol = 1e-12;
inline constexpr double kSolveTol = 1e-9;

// PG = LU with partial (row) pivoting. perm[i] is the source row of G that
// ends up in row i of PG.
struct LUFactors {
  Matrix L;  // unit lower triangular
  Matrix U;  // upper triangular
  std::vector<int> perm;
  double norm_inf = 0.0;  // of the factored matrix, for scaled residual checks

  int size() const { return static_cast<int>(perm.size()); }
};

// A Pi = Q_orth R with Businger-Golub column pivoting. col_perm[j] is the
// original column sitting at permuted position j. Columns in the fixed tail
// (see qr_pivot) are triangularized but never pivoted and never counted
// toward rank.
struct QRPivotFactors {
  Matrix Q_orth;  // m x m orthogonal
  Matrix R;       // m x n upper trapezoidal
  std::vector<int> col_perm;
  int rank = 0;
};

// Solution of the saddle-point system [G E^T; E 0][x; nu] = [-g; f].
struct KKTBlockSolve {
  Vector x;
  Vector nu;
};

// Throws SingularMatrix when a pivot falls below kSingularTol * ||G||_inf.
LUFactors lu_factor(const Matrix& G);

// X with G X = B, by permuted forward/backward substitution.
Matrix lu_solve(const LUFactors& F, const Matrix& B);
Vector lu_solve(const LUFactors& F, const Vector& b);

// Householder QR with column pivoting. rank counts leading diagonal entries
// of R above rank_tol (default 1e-10 * max(m,n) * max|Aug|); the last
// fixed_tail columns are excluded from pivoting and from the rank.
QRPivotFactors qr_pivot(const Matrix& Aug, double rank_tol = -1.0, int fixed_tail = 0);

// Block elimination: x <- -G^{-1} g; nu <- (E G^{-1} E^T)^{-1} (E x - f);
// x <- x - G^{-1} E^T nu. Requires E full row rank; throws SingularSchur if
// the Schur complement cannot be factored.
KKTBlockSolve solve_equality_kkt(const LUFactors& G_lu, const Matrix& E, const Vector& g,
                                 const Vector& f);

}  // namespace goldnash
