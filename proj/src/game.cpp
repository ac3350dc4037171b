#include "goldnash/game.hpp"

#include <algorithm>
#include <cmath>

#include "goldnash/linalg.hpp"

namespace goldnash {

LQGame make_game(std::vector<PlayerCost> players, SharedConstraints constraints) {
  LQGame game;
  int n = 0;
  for (auto& p : players) {
    p.block_start = n;
    n += p.block_size;
  }
  for (auto& p : players) {
    const double asym = max_abs(Matrix(p.Q - p.Q.transpose()));
    if (asym > kSymTol * max_abs(p.Q)) {
      p.Q = 0.5 * (p.Q + p.Q.transpose()).eval();
    }
  }
  game.players = std::move(players);
  game.constraints = std::move(constraints);
  game.n = n;
  if (game.constraints.b.size() == 0 && game.constraints.A.rows() == 0) {
    game.constraints.A.resize(0, n);
  }
  if (game.constraints.f.size() == 0 && game.constraints.E.rows() == 0) {
    game.constraints.E.resize(0, n);
  }
  return game;
}

Pseudogradient assemble_pseudogradient(const LQGame& game) {
  const int n = game.n;
  Pseudogradient F;
  F.G = Matrix::Zero(n, n);
  F.g = Vector::Zero(n);
  for (const auto& p : game.players) {
    if (p.Q.rows() != n || p.Q.cols() != n) {
      throw DimensionMismatch("assemble_pseudogradient: player Hessian is not n x n");
    }
    if (p.c.size() != n) {
      throw DimensionMismatch("assemble_pseudogradient: player linear term has wrong length");
    }
    F.G.middleRows(p.block_start, p.block_size) = p.Q.middleRows(p.block_start, p.block_size);
    F.g.segment(p.block_start, p.block_size) = p.c.segment(p.block_start, p.block_size);
  }
  return F;
}

ValidationReport check_strong_monotonicity(const Pseudogradient& F, double margin) {
  ValidationReport report;
  const Matrix Gs = 0.5 * (F.G + F.G.transpose());
  if (Gs.rows() == 0) {
    report.min_eig_Gs = 0.0;
    report.monotone = false;
    return report;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(Gs, Eigen::EigenvaluesOnly);
  report.min_eig_Gs = eig.eigenvalues().minCoeff();
  report.monotone = report.min_eig_Gs > margin;
  if (!report.monotone) {
    report.messages.push_back("pseudogradient symmetric part is not positive definite (min eig " +
                              std::to_string(report.min_eig_Gs) + ")");
  }
  return report;
}

SharedConstraints preprocess_equalities(const SharedConstraints& C) {
  const int q = C.q();
  if (q == 0) return C;
  const int n = static_cast<int>(C.E.cols());

  Matrix aug(q, n + 1);
  aug.leftCols(n) = C.E;
  aug.col(n) = -C.f;

  const double rank_tol = 1e-10 * static_cast<double>(std::max(q, n)) * max_abs(aug);
  const QRPivotFactors qr = qr_pivot(aug, rank_tol, /*fixed_tail=*/1);
  const int r = qr.rank;

  if (r < q) {
    // Eliminated block: rows past the rank, all trailing columns including
    // the right-hand side. Any nonzero entry there means the dropped rows
    // carried information the kept rows do not, i.e. Ex = f is inconsistent.
    const double resid = max_abs(Matrix(qr.R.block(r, r, q - r, n + 1 - r)));
    if (resid > rank_tol) {
      throw InconsistentEqualities("preprocess_equalities: equality rows are contradictory");
    }
  }
  if (r == q) return C;  // already full row rank

  SharedConstraints out;
  out.A = C.A;
  out.b = C.b;
  out.E = Matrix::Zero(r, n);
  out.f = Vector::Zero(r);
  for (int k = 0; k < r; ++k) {
    const double d = qr.R(k, k);
    for (int j = k; j < n; ++j) {
      out.E(k, qr.col_perm[j]) = qr.R(k, j) / d;
    }
    out.f(k) = -qr.R(k, n) / d;
  }
  return out;
}

namespace {

void check_structure(const LQGame& game, ValidationReport& report) {
  const int n = game.n;
  auto fail = [&](const std::string& msg) {
    report.structure_ok = false;
    report.messages.push_back(msg);
  };

  if (game.players.empty()) fail("game has no players");

  int cursor = 0;
  for (int i = 0; i < game.player_count(); ++i) {
    const auto& p = game.players[i];
    if (p.block_start != cursor || p.block_size <= 0) {
      fail("player blocks do not partition the joint variable contiguously");
      break;
    }
    cursor += p.block_size;
  }
  if (cursor != n) fail("player block sizes do not sum to n");

  for (int i = 0; i < game.player_count(); ++i) {
    const auto& p = game.players[i];
    if (p.Q.rows() != n || p.Q.cols() != n || p.c.size() != n) {
      fail("player " + std::to_string(i) + " has mis-sized cost data");
      continue;
    }
    const double asym = max_abs(Matrix(p.Q - p.Q.transpose()));
    if (asym > kSymTol * max_abs(p.Q)) {
      report.messages.push_back("player " + std::to_string(i) +
                                " Hessian is asymmetric beyond tolerance");
    }
    const Matrix own = p.Q.block(p.block_start, p.block_start, p.block_size, p.block_size);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (own + own.transpose()),
                                              Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() <= 0.0) {
      fail("player " + std::to_string(i) + " own-block Hessian is not positive definite");
    }
  }

  const auto& C = game.constraints;
  if ((C.m() > 0 && C.A.cols() != n) || C.b.size() != C.m()) {
    fail("inequality constraint dimensions disagree");
  }
  if ((C.q() > 0 && C.E.cols() != n) || C.f.size() != C.q()) {
    fail("equality constraint dimensions disagree");
  }
  for (int k = 0; k < C.m(); ++k) {
    if (C.A.row(k).cwiseAbs().maxCoeff() == 0.0 && C.b(k) < 0.0) {
      fail("inequality row " + std::to_string(k) + " is 0^T x <= negative (structurally infeasible)");
    }
  }
}

}  // namespace

ValidationReport validate_game(const LQGame& game) {
  ValidationReport report;
  check_structure(game, report);
  if (!report.structure_ok) {
    report.monotone = false;
    return report;
  }

  const Pseudogradient F = assemble_pseudogradient(game);
  const ValidationReport mono = check_strong_monotonicity(F);
  report.monotone = mono.monotone;
  report.min_eig_Gs = mono.min_eig_Gs;
  report.messages.insert(report.messages.end(), mono.messages.begin(), mono.messages.end());

  try {
    const SharedConstraints reduced = preprocess_equalities(game.constraints);
    report.equality_rank = reduced.q();
    if (reduced.q() < game.constraints.q()) {
      report.messages.push_back("equality rows are rank deficient; reduced from " +
                                std::to_string(game.constraints.q()) + " to " +
                                std::to_string(reduced.q()) + " rows");
    }
  } catch (const InconsistentEqualities& e) {
    report.equalities_consistent = false;
    report.equality_rank = 0;
    report.messages.push_back(e.what());
  }
  return report;
}

}  // namespace goldnash
