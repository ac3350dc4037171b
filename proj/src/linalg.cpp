#include "goldnash/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace goldnash {

LUFactors lu_factor(const Matrix& G) {
  if (G.rows() != G.cols()) {
    throw DimensionMismatch("lu_factor: matrix must be square");
  }
  const int n = static_cast<int>(G.rows());

  LUFactors F;
  F.norm_inf = inf_norm(G);
  F.perm.resize(n);
  for (int i = 0; i < n; ++i) F.perm[i] = i;

  Matrix A = G;  // factored in place: strict lower part holds L
  const double tol = kSingularTol * F.norm_inf;

  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(A(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double v = std::abs(A(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best <= tol) {
      throw SingularMatrix("lu_factor: pivot " + std::to_string(k) + " below threshold");
    }
    if (piv != k) {
      A.row(piv).swap(A.row(k));
      std::swap(F.perm[piv], F.perm[k]);
    }
    for (int i = k + 1; i < n; ++i) {
      A(i, k) /= A(k, k);
      for (int j = k + 1; j < n; ++j) {
        A(i, j) -= A(i, k) * A(k, j);
      }
    }
  }

  F.L = Matrix::Identity(n, n);
  F.U = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) F.L(i, j) = A(i, j);
    for (int j = i; j < n; ++j) F.U(i, j) = A(i, j);
  }
  return F;
}

Matrix lu_solve(const LUFactors& F, const Matrix& B) {
  const int n = F.size();
  if (B.rows() != n) {
    throw DimensionMismatch("lu_solve: right-hand side has wrong row count");
  }
  const int k = static_cast<int>(B.cols());

  Matrix X(n, k);
  for (int i = 0; i < n; ++i) X.row(i) = B.row(F.perm[i]);

  // L y = P b
  for (int i = 1; i < n; ++i) {
    for (int j = 0; j < i; ++j) X.row(i) -= F.L(i, j) * X.row(j);
  }
  // U x = y
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) X.row(i) -= F.U(i, j) * X.row(j);
    X.row(i) /= F.U(i, i);
  }
  return X;
}

Vector lu_solve(const LUFactors& F, const Vector& b) {
  return lu_solve(F, Matrix(b)).col(0);
}

QRPivotFactors qr_pivot(const Matrix& Aug, double rank_tol, int fixed_tail) {
  const int m = static_cast<int>(Aug.rows());
  const int n = static_cast<int>(Aug.cols());
  const int n_piv = n - fixed_tail;  // pivotable columns

  QRPivotFactors F;
  F.Q_orth = Matrix::Identity(m, m);
  F.R = Aug;
  F.col_perm.resize(n);
  for (int j = 0; j < n; ++j) F.col_perm[j] = j;

  if (rank_tol < 0.0) {
    rank_tol = 1e-10 * static_cast<double>(std::max(m, n)) * max_abs(Aug);
  }

  const int steps = std::min(m, n);
  for (int k = 0; k < steps; ++k) {
    if (k < n_piv) {
      int best_col = k;
      double best_norm = F.R.col(k).tail(m - k).squaredNorm();
      for (int j = k + 1; j < n_piv; ++j) {
        const double nj = F.R.col(j).tail(m - k).squaredNorm();
        if (nj > best_norm) {
          best_norm = nj;
          best_col = j;
        }
      }
      if (best_col != k) {
        F.R.col(best_col).swap(F.R.col(k));
        std::swap(F.col_perm[best_col], F.col_perm[k]);
      }
    }

    // Householder reflector annihilating R(k+1:, k).
    Vector x = F.R.col(k).tail(m - k);
    const double xnorm = x.norm();
    if (xnorm == 0.0) continue;
    const double alpha = x(0) >= 0.0 ? -xnorm : xnorm;
    Vector v = x;
    v(0) -= alpha;
    const double vsq = v.squaredNorm();
    if (vsq == 0.0) continue;

    auto Rblk = F.R.block(k, 0, m - k, n);
    const Vector w = (2.0 / vsq) * (Rblk.transpose() * v);
    Rblk.noalias() -= v * w.transpose();
    auto Qblk = F.Q_orth.block(0, k, m, m - k);
    const Vector u = (2.0 / vsq) * (Qblk * v);
    Qblk.noalias() -= u * v.transpose();

    F.R(k, k) = alpha;
    F.R.col(k).tail(m - k - 1).setZero();
  }

  F.rank = 0;
  for (int k = 0; k < std::min(m, n_piv); ++k) {
    if (std::abs(F.R(k, k)) > rank_tol) {
      ++F.rank;
    } else {
      break;
    }
  }
  return F;
}

KKTBlockSolve solve_equality_kkt(const LUFactors& G_lu, const Matrix& E, const Vector& g,
                                 const Vector& f) {
  const int n = G_lu.size();
  const int q = static_cast<int>(E.rows());
  if ((q > 0 && E.cols() != n) || g.size() != n || f.size() != q) {
    throw DimensionMismatch("solve_equality_kkt: inconsistent dimensions");
  }

  KKTBlockSolve out;
  out.x = lu_solve(G_lu, Vector(-g));
  if (q == 0) {
    out.nu = Vector(0);
    return out;
  }

  const Matrix Y_E = lu_solve(G_lu, Matrix(E.transpose()));
  const Matrix S = E * Y_E;
  LUFactors S_lu;
  try {
    S_lu = lu_factor(S);
  } catch (const SingularMatrix&) {
    throw SingularSchur("solve_equality_kkt: E G^{-1} E^T is singular");
  }
  out.nu = lu_solve(S_lu, Vector(E * out.x - f));
  out.x -= Y_E * out.nu;
  return out;
}

}  // namespace goldnash
