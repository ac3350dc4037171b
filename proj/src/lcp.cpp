#include "goldnash/lcp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace goldnash {

LCPInstance build_primal_lcp(const LQGame& game, const Pseudogradient& F,
                             const Vector& lower_bounds) {
  const auto& C = game.constraints;
  if (C.q() > 0) {
    throw HasEqualities("build_primal_lcp: problem has equality constraints");
  }
  if (lower_bounds.size() != game.n) {
    throw NoBounds("build_primal_lcp: finite lower bounds required for every variable");
  }
  const int n = game.n;
  const int m = C.m();

  LCPInstance lcp;
  lcp.provenance = LCPProvenance::primal;
  lcp.n = n;
  lcp.m = m;
  lcp.lower_bounds = lower_bounds;
  lcp.A = C.A;
  lcp.b = C.b;

  lcp.M = Matrix::Zero(n + m, n + m);
  lcp.M.topLeftCorner(n, n) = F.G;
  if (m > 0) {
    lcp.M.topRightCorner(n, m) = C.A.transpose();
    lcp.M.bottomLeftCorner(m, n) = -C.A;
  }
  lcp.qv.resize(n + m);
  lcp.qv.head(n) = F.G * lower_bounds + F.g;
  if (m > 0) lcp.qv.tail(m) = C.b - C.A * lower_bounds;
  return lcp;
}

LCPInstance build_dual_lcp(const LQGame& game, const Pseudogradient& F) {
  const auto& C = game.constraints;
  const int n = game.n;
  const int m = C.m();
  const int q = C.q();

  LCPInstance lcp;
  lcp.provenance = LCPProvenance::dual;
  lcp.n = n;
  lcp.m = m;
  lcp.A = C.A;
  lcp.g = F.g;
  lcp.f = C.f;

  Matrix H = Matrix::Zero(n + q, n + q);
  H.topLeftCorner(n, n) = F.G;
  if (q > 0) {
    H.topRightCorner(n, q) = C.E.transpose();
    H.bottomLeftCorner(q, n) = C.E;
  }
  try {
    lcp.kkt_lu = lu_factor(H);
  } catch (const SingularMatrix&) {
    throw SingularKKT("build_dual_lcp: [G E^T; E 0] is singular");
  }

  // x(lambda) = -H11 (g + A^T lambda) + H12 f from the saddle system
  // [G E^T; E 0][x; nu] = [-(g + A^T lambda); f], so the slack b - Ax is
  // A H11 A^T lambda + b + A (H11 g - H12 f). Columns of H^{-1}[A^T; 0]
  // give H11 A^T; H^{-1}[g; -f] gives H11 g - H12 f.
  Matrix rhs = Matrix::Zero(n + q, m + 1);
  if (m > 0) rhs.block(0, 0, n, m) = C.A.transpose();
  rhs.block(0, m, n, 1) = F.g;
  if (q > 0) rhs.block(n, m, q, 1) = -C.f;
  const Matrix sol = lu_solve(lcp.kkt_lu, rhs);

  lcp.M = m > 0 ? Matrix(C.A * sol.block(0, 0, n, m)) : Matrix(0, 0);
  lcp.qv = m > 0 ? Vector(C.b + C.A * sol.block(0, m, n, 1)) : Vector(0);
  return lcp;
}

namespace {

// Lexicographic comparison of tableau rows i and j scaled by their pivot
// column entries, over the right-hand side followed by the basis-inverse
// columns (the initial w columns).
bool lex_less(const Matrix& T, int i, int j, int piv_col, int k, int rhs_col) {
  const double pi = T(i, piv_col);
  const double pj = T(j, piv_col);
  double di = T(i, rhs_col) / pi;
  double dj = T(j, rhs_col) / pj;
  if (di != dj) return di < dj;
  for (int c = 0; c < k; ++c) {
    di = T(i, c) / pi;
    dj = T(j, c) / pj;
    if (di != dj) return di < dj;
  }
  return false;
}

}  // namespace

LemkeResult lemke_solve(const LCPInstance& lcp, int max_pivots) {
  const int k = lcp.dim();
  LemkeResult res;
  if (k == 0) {
    res.status = LemkeStatus::solved;
    res.z = Vector(0);
    res.w = Vector(0);
    return res;
  }
  if (max_pivots <= 0) max_pivots = 50 * k;

  const double tol = kLcpTolFactor * std::max(1.0, max_abs(lcp.M));
  if (lcp.qv.minCoeff() >= -tol) {
    res.status = LemkeStatus::solved;
    res.z = Vector::Zero(k);
    res.w = lcp.qv;
    return res;
  }

  // Tableau columns: [w_0..w_{k-1} | z_0..z_{k-1} | z0 | rhs].
  const int z0_col = 2 * k;
  const int rhs_col = 2 * k + 1;
  Matrix T(k, 2 * k + 2);
  T.leftCols(k) = Matrix::Identity(k, k);
  T.block(0, k, k, k) = -lcp.M;
  T.col(z0_col) = -Vector::Ones(k);
  T.col(rhs_col) = lcp.qv;

  std::vector<int> basis(k);
  for (int i = 0; i < k; ++i) basis[i] = i;  // w_i

  auto pivot = [&](int row, int col) {
    T.row(row) /= T(row, col);
    for (int i = 0; i < k; ++i) {
      if (i != row && T(i, col) != 0.0) {
        T.row(i) -= T(i, col) * T.row(row);
      }
    }
    ++res.pivots;
  };

  // Bring z0 into the basis against the most negative rhs entry.
  int row = 0;
  for (int i = 1; i < k; ++i) {
    if (T(i, rhs_col) < T(row, rhs_col)) row = i;
  }
  pivot(row, z0_col);
  basis[row] = z0_col;
  int entering = row + k;  // complement of the w that just left

  const double piv_eps = 1e-11 * std::max(1.0, max_abs(lcp.M));

  while (res.pivots < max_pivots) {
    // Lexicographic ratio test over rows with positive pivot entries.
    int leave = -1;
    int z0_row = -1;
    for (int i = 0; i < k; ++i) {
      if (T(i, entering) <= piv_eps) continue;
      if (basis[i] == z0_col) z0_row = i;
      if (leave < 0 || lex_less(T, i, leave, entering, k, rhs_col)) leave = i;
    }
    if (leave < 0) {
      res.status = LemkeStatus::ray_termination;
      break;
    }
    // Prefer retiring z0 whenever it ties the minimum ratio: that ends the run.
    if (z0_row >= 0 && z0_row != leave) {
      const double r_z0 = T(z0_row, rhs_col) / T(z0_row, entering);
      const double r_min = T(leave, rhs_col) / T(leave, entering);
      if (r_z0 <= r_min) leave = z0_row;
    }

    const int leaving_var = basis[leave];
    pivot(leave, entering);
    basis[leave] = entering;

    if (leaving_var == z0_col) {
      res.status = LemkeStatus::solved;
      break;
    }
    entering = leaving_var < k ? leaving_var + k : leaving_var - k;
  }

  res.z = Vector::Zero(k);
  res.w = Vector::Zero(k);
  if (res.status == LemkeStatus::solved) {
    for (int i = 0; i < k; ++i) {
      const double v = std::max(T(i, rhs_col), 0.0);
      if (basis[i] < k) {
        res.w(basis[i]) = v;
      } else if (basis[i] < 2 * k) {
        res.z(basis[i] - k) = v;
      }
    }
  }
  return res;
}

namespace {

// Fold a lower-bound multiplier into lambda when the bound is also a row of
// A (the row -e_i^T x <= -l_i); otherwise the mass stays on the bound and the
// recovered point only certifies against the bounded problem.
void fold_bound_multipliers(const LCPInstance& lcp, const Vector& mu, Vector& lambda) {
  const int n = lcp.n;
  const int m = lcp.m;
  const double match_tol = 1e-12;
  for (int i = 0; i < n; ++i) {
    if (mu(i) <= 0.0) continue;
    for (int kk = 0; kk < m; ++kk) {
      if (std::abs(lcp.b(kk) + lcp.lower_bounds(i)) > match_tol) continue;
      bool is_bound_row = std::abs(lcp.A(kk, i) + 1.0) <= match_tol;
      for (int j = 0; is_bound_row && j < n; ++j) {
        if (j != i && lcp.A(kk, j) != 0.0) is_bound_row = false;
      }
      if (is_bound_row) {
        lambda(kk) += mu(i);
        break;
      }
    }
  }
}

}  // namespace

SolveResult solve_via_lemke(const LQGame& game, LemkeVariant variant,
                            const std::optional<Vector>& lower_bounds, int max_pivots) {
  const Pseudogradient F = assemble_pseudogradient(game);

  LCPInstance lcp;
  if (variant == LemkeVariant::primal) {
    if (!lower_bounds.has_value()) {
      throw NoBounds("solve_via_lemke: primal variant needs finite lower bounds");
    }
    lcp = build_primal_lcp(game, F, *lower_bounds);
  } else {
    lcp = build_dual_lcp(game, F);
  }

  const LemkeResult lr = lemke_solve(lcp, max_pivots);

  SolveResult res;
  res.iterations = lr.pivots;
  switch (lr.status) {
    case LemkeStatus::solved: res.status = SolveStatus::optimal; break;
    case LemkeStatus::ray_termination: res.status = SolveStatus::infeasible; break;
    case LemkeStatus::max_pivots: res.status = SolveStatus::unsolved; break;
  }

  const int n = game.n;
  const int m = game.constraints.m();
  const int q = game.constraints.q();
  res.x = Vector::Zero(n);
  res.lambda = Vector::Zero(m);
  res.nu = Vector::Zero(q);
  if (res.status != SolveStatus::optimal) return res;

  if (variant == LemkeVariant::primal) {
    res.x = lr.z.head(n) + lcp.lower_bounds;
    res.lambda = lr.z.tail(m);
    fold_bound_multipliers(lcp, Vector(lr.w.head(n)), res.lambda);
  } else {
    Vector rhs(n + q);
    rhs.head(n) = lcp.g;
    if (m > 0) rhs.head(n) += lcp.A.transpose() * lr.z;
    if (q > 0) rhs.tail(q) = -lcp.f;
    const Vector xnu = -lu_solve(lcp.kkt_lu, rhs);
    res.x = xnu.head(n);
    res.nu = xnu.tail(q);
    res.lambda = lr.z;
  }
  return res;
}

}  // namespace goldnash
