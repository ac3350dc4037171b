#include "goldnash/certify.hpp"

#include <algorithm>
#include <cmath>

namespace goldnash {

double KKTResiduals::max() const {
  return std::max({stationarity, eq_feas, ineq_feas, dual_feas, complementarity});
}

KKTResiduals kkt_residuals(const LQGame& game, const Pseudogradient& F, const Vector& x,
                           const Vector& lambda, const Vector& nu) {
  const auto& C = game.constraints;
  const int n = game.n;
  if (x.size() != n || lambda.size() != C.m() || nu.size() != C.q()) {
    throw DimensionMismatch("kkt_residuals: candidate dimensions do not match the game");
  }

  KKTResiduals r;
  Vector stat = F.G * x + F.g;
  if (C.m() > 0) stat += C.A.transpose() * lambda;
  if (C.q() > 0) stat += C.E.transpose() * nu;
  r.stationarity = inf_norm(stat);

  if (C.q() > 0) r.eq_feas = inf_norm(Vector(C.E * x - C.f));
  if (C.m() > 0) {
    const Vector slack = C.A * x - C.b;
    r.ineq_feas = slack.cwiseMax(0.0).maxCoeff();
    r.dual_feas = (-lambda).cwiseMax(0.0).maxCoeff();
    r.complementarity = std::abs(lambda.dot(slack));
  }
  return r;
}

bool is_vgne(const KKTResiduals& residuals, double tol) {
  return residuals.max() <= tol;
}

std::optional<OracleSolution> enumerate_oracle(const LQGame& game, const Pseudogradient& F) {
  const auto& C = game.constraints;
  const int n = game.n;
  const int m = C.m();
  const int q = C.q();
  if (m > 20) {
    throw Error("enumerate_oracle: enumeration budget allows at most 20 inequality rows");
  }

  for (long mask = 0; mask < (1L << m); ++mask) {
    std::vector<int> active;
    for (int k = 0; k < m; ++k) {
      if (mask & (1L << k)) active.push_back(k);
    }
    const int w = static_cast<int>(active.size());

    Matrix stacked(w + q, n);
    for (int i = 0; i < w; ++i) stacked.row(i) = C.A.row(active[i]);
    if (q > 0) stacked.bottomRows(q) = C.E;

    if (w + q > 0) {
      Eigen::FullPivLU<Matrix> rank_check(stacked);
      if (rank_check.rank() < w + q) continue;
    }

    Matrix K = Matrix::Zero(n + w + q, n + w + q);
    K.topLeftCorner(n, n) = F.G;
    if (w + q > 0) {
      K.block(0, n, n, w + q) = stacked.transpose();
      K.block(n, 0, w + q, n) = stacked;
    }
    Vector rhs(n + w + q);
    rhs.head(n) = -F.g;
    for (int i = 0; i < w; ++i) rhs(n + i) = C.b(active[i]);
    if (q > 0) rhs.tail(q) = C.f;

    Eigen::FullPivLU<Matrix> lu(K);
    if (!lu.isInvertible()) continue;
    const Vector sol = lu.solve(rhs);

    OracleSolution cand;
    cand.x = sol.head(n);
    cand.lambda = Vector::Zero(m);
    for (int i = 0; i < w; ++i) cand.lambda(active[i]) = sol(n + i);
    cand.nu = sol.tail(q);
    cand.active_mask = static_cast<int>(mask);

    if (is_vgne(kkt_residuals(game, F, cand.x, cand.lambda, cand.nu), kOracleTol)) {
      return cand;
    }
  }
  return std::nullopt;
}

}  // namespace goldnash
