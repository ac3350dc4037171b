#include "goldnash/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace goldnash {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kInvTolFactor = 1e-8;
}  // namespace

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unsolved: return "unsolved";
  }
  return "unknown";
}

bool WorkingSet::contains(int k) const {
  return std::binary_search(indices_.begin(), indices_.end(), k);
}

void WorkingSet::add(int k) {
  indices_.insert(std::upper_bound(indices_.begin(), indices_.end(), k), k);
}

void WorkingSet::remove_at(int pos) {
  indices_.erase(indices_.begin() + pos);
}

Precomputed precompute(const Pseudogradient& F, const SharedConstraints& C) {
  Precomputed pre;
  pre.G_lu = lu_factor(F.G);
  pre.Y_A = C.m() > 0 ? lu_solve(pre.G_lu, Matrix(C.A.transpose())) : Matrix(F.G.rows(), 0);
  pre.Y_E = C.q() > 0 ? lu_solve(pre.G_lu, Matrix(C.E.transpose())) : Matrix(F.G.rows(), 0);
  return pre;
}

IterateState initialize(const Pseudogradient& F, const SharedConstraints& C,
                        const Precomputed& pre) {
  IterateState state;
  const KKTBlockSolve init = solve_equality_kkt(pre.G_lu, C.E, F.g, C.f);
  state.x = init.x;
  state.nu = init.nu;
  state.lambda = Vector::Zero(C.m());
  state.mu_p = 0.0;
  state.p = -1;
  state.iter_count = 0;
  return state;
}

std::pair<int, double> select_violated(const Vector& x, const Matrix& A, const Vector& b,
                                       double eps) {
  int p = -1;
  double worst = eps;
  for (int k = 0; k < A.rows(); ++k) {
    const double viol = A.row(k).dot(x) - b(k);
    if (viol > worst) {
      worst = viol;
      p = k;
    }
  }
  return p < 0 ? std::make_pair(-1, 0.0) : std::make_pair(p, worst);
}

Directions directions(const Precomputed& pre, const WorkingSet& W, int p, const Matrix& A,
                      const Matrix& E) {
  const int n = static_cast<int>(pre.Y_A.rows());
  const int w = W.size();
  const int q = static_cast<int>(E.rows());

  Directions dir;
  const Vector y_p = pre.Y_A.col(p);
  if (w + q == 0) {
    dir.z = -y_p;
    dir.r_W = Vector(0);
    dir.s = Vector(0);
    return dir;
  }

  Matrix Y_bar(n, w + q);
  Matrix A_bar(w + q, n);
  for (int i = 0; i < w; ++i) {
    Y_bar.col(i) = pre.Y_A.col(W[i]);
    A_bar.row(i) = A.row(W[i]);
  }
  if (q > 0) {
    Y_bar.rightCols(q) = pre.Y_E;
    A_bar.bottomRows(q) = E;
  }

  const Matrix S_bar = A_bar * Y_bar;
  LUFactors S_lu;
  try {
    S_lu = lu_factor(S_bar);
  } catch (const SingularMatrix&) {
    throw SingularSchur("directions: working-set Schur matrix is singular");
  }
  const Vector r_bar = lu_solve(S_lu, Vector(A_bar * y_p));

  dir.z = Y_bar * r_bar - y_p;
  dir.r_W = r_bar.head(w);
  dir.s = r_bar.tail(q);
  return dir;
}

StepLengths step_lengths(const IterateState& state, int p, const Vector& z, const Vector& r_W,
                         const Matrix& A, const Vector& b, double eps) {
  StepLengths sl;
  const double apz = A.row(p).dot(z);
  if (apz < -eps) {
    sl.t2 = -(A.row(p).dot(state.x) - b(p)) / apz;
  } else {
    sl.t2 = kInf;
  }

  sl.t1 = kInf;
  const auto& W = state.working_set;
  for (int i = 0; i < W.size(); ++i) {
    if (r_W(i) > kRatioEps) {
      const double ratio = state.lambda(W[i]) / r_W(i);
      if (ratio < sl.t1) {
        sl.t1 = ratio;
        sl.drop_pos = i;
      }
    }
  }
  return sl;
}

void take_step(IterateState& state, double t, const Directions& dir) {
  state.x += t * dir.z;
  const auto& W = state.working_set;
  for (int i = 0; i < W.size(); ++i) {
    state.lambda(W[i]) -= t * dir.r_W(i);
  }
  if (dir.s.size() > 0) state.nu -= t * dir.s;
  state.mu_p += t;
  if (state.p >= 0) state.lambda(state.p) = state.mu_p;
}

namespace {

InvariantSample sample_invariants(const IterateState& state, const Pseudogradient& F,
                                  const SharedConstraints& C, double apz, double znorm) {
  InvariantSample s;
  s.iter = state.iter_count;

  Vector stat = F.G * state.x + F.g;
  if (C.m() > 0) stat += C.A.transpose() * state.lambda;
  if (C.q() > 0) stat += C.E.transpose() * state.nu;
  s.stationarity = inf_norm(stat);

  const auto& W = state.working_set;
  s.working_tight = 0.0;
  for (int i = 0; i < W.size(); ++i) {
    s.working_tight = std::max(s.working_tight,
                               std::abs(C.A.row(W[i]).dot(state.x) - C.b(W[i])));
  }
  s.eq_tight = C.q() > 0 ? inf_norm(Vector(C.E * state.x - C.f)) : 0.0;

  s.min_multiplier = state.mu_p;
  for (int i = 0; i < W.size(); ++i) {
    s.min_multiplier = std::min(s.min_multiplier, state.lambda(W[i]));
  }

  s.a_p_dot_z = apz;
  s.z_norm = znorm;
  const double scale =
      std::max(1.0, inf_norm(F.G) * inf_norm(state.x) + inf_norm(F.g));
  s.tol = kInvTolFactor * scale;
  s.ok = s.stationarity <= s.tol && s.working_tight <= s.tol && s.eq_tight <= s.tol &&
         s.min_multiplier >= -s.tol && (znorm <= 1e-10 || apz < 0.0);
  return s;
}

SolveResult finish(const IterateState& state, SolveStatus status, int adds, int drops,
                   std::vector<InvariantSample> log) {
  SolveResult res;
  res.status = status;
  res.x = state.x;
  res.lambda = state.lambda;
  res.nu = state.nu;
  res.iterations = state.iter_count;
  res.working_set = state.working_set;
  res.adds = adds;
  res.drops = drops;
  res.invariant_log = std::move(log);
  return res;
}

// When preprocessing dropped dependent equality rows, the computed nu lives
// on the reduced rows. Map it back to original-row multipliers: the reduced
// rows span the same space, so E_orig^T nu_orig = E_red^T nu_red has a
// solution; take the minimum-norm one.
Vector remap_equality_multipliers(const Matrix& E_orig, const Matrix& E_red,
                                  const Vector& nu_red) {
  const Vector target = E_red.transpose() * nu_red;
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(E_orig.transpose());
  return cod.solve(target);
}

}  // namespace

SolveResult solve(const LQGame& game, const SolverOptions& options) {
  const ValidationReport report = validate_game(game);
  if (!report.ok()) {
    std::string msg = "solve: game failed validation";
    for (const auto& m : report.messages) msg += "; " + m;
    throw InvalidGame(msg);
  }

  const Pseudogradient F = assemble_pseudogradient(game);
  const SharedConstraints C = preprocess_equalities(game.constraints);
  const bool equalities_reduced = C.q() < game.constraints.q();
  const int m = C.m();
  const int q = C.q();
  const double eps = options.eps;
  const int max_iters =
      options.max_iters > 0 ? options.max_iters : 100 * (m + q + 1);

  const Precomputed pre = precompute(F, C);
  IterateState state = initialize(F, C, pre);

  int adds = 0;
  int drops = 0;
  std::vector<InvariantSample> log;

  auto result = [&](SolveStatus status) {
    SolveResult res = finish(state, status, adds, drops, std::move(log));
    if (equalities_reduced && status == SolveStatus::optimal) {
      res.nu = remap_equality_multipliers(game.constraints.E, C.E, res.nu);
    }
    return res;
  };

  while (true) {  // outer: target the most violated row
    const auto [p, violation] = select_violated(state.x, C.A, C.b, eps);
    if (p < 0) return result(SolveStatus::optimal);

    state.p = p;
    state.mu_p = 0.0;
    state.iter_count += 1;

    int zero_steps = 0;
    while (true) {  // inner: steps toward making row p tight
      const Directions dir = directions(pre, state.working_set, p, C.A, C.E);
      state.iter_count += 1;

      const StepLengths sl = step_lengths(state, p, dir.z, dir.r_W, C.A, C.b, eps);
      if (std::isinf(sl.t1) && std::isinf(sl.t2)) {
        if (options.check_invariants) {
          log.push_back(sample_invariants(state, F, C, C.A.row(p).dot(dir.z), inf_norm(dir.z)));
        }
        return result(SolveStatus::infeasible);
      }

      const double t = std::min(sl.t1, sl.t2);
      take_step(state, t, dir);

      if (options.check_invariants) {
        log.push_back(sample_invariants(state, F, C, C.A.row(p).dot(dir.z), inf_norm(dir.z)));
      }

      if (sl.t2 <= sl.t1) {
        state.working_set.add(p);
        ++adds;
        break;
      }

      // Blocking constraint: zero its multiplier and drop it, keep targeting p.
      state.lambda(state.working_set[sl.drop_pos]) = 0.0;
      state.working_set.remove_at(sl.drop_pos);
      ++drops;

      if (t == 0.0) {
        // Degenerate drop; bail out once a full sweep of drops made no progress.
        if (++zero_steps >= m) return result(SolveStatus::unsolved);
      } else {
        zero_steps = 0;
      }

      if (state.iter_count >= max_iters) return result(SolveStatus::unsolved);
    }

    if (state.iter_count >= max_iters) return result(SolveStatus::unsolved);
  }
}

}  // namespace goldnash
