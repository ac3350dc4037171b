#pragma once

#include <string>
#include <vector>

#include "goldnash/types.hpp"

namespace goldnash {

// One player's quadratic cost 1/2 x^T Q x + c^T x over the joint variable x,
// of which the player controls the contiguous block
// [block_start, block_start + block_size).
struct PlayerCost {
  Matrix Q;  // n x n, symmetric; diagonal block over the own variables is PD
  Vector c;  // length n
  int block_start = 0;
  int block_size = 0;
};

// Shared affine constraints A x <= b, E x = f.
struct SharedConstraints {
  Matrix A;
  Vector b;
  Matrix E;
  Vector f;

  int m() const { return static_cast<int>(A.rows()); }
  int q() const { return static_cast<int>(E.rows()); }
};

struct LQGame {
  std::vector<PlayerCost> players;
  SharedConstraints constraints;
  int n = 0;  // total variable count

  int player_count() const { return static_cast<int>(players.size()); }
};

// The affine pseudogradient F(x) = G x + g: row block i of G is row block i
// of Q^{(i)}, and the matching entries of g come from c^{(i)}.
struct Pseudogradient {
  Matrix G;
  Vector g;
};

struct ValidationReport {
  bool structure_ok = true;
  bool monotone = false;
  double min_eig_Gs = 0.0;
  int equality_rank = 0;
  bool equalities_consistent = true;
  std::vector<std::string> messages;

  bool ok() const { return structure_ok && monotone && equalities_consistent; }
};

// Relative tolerance for treating a player Hessian as symmetric.
inline constexpr double kSymTol = 1e-10;
// Margin for the strong-monotonicity flag: monotone iff min eig exceeds it.
inline constexpr double kMonoMargin = 0.0;

// Builds the game, filling n and block_start from the declared block sizes
// (players partition [0, n) contiguously, in order). Player Hessians whose
// asymmetry exceeds kSymTol * ||Q||_inf are replaced by (Q + Q^T)/2.
LQGame make_game(std::vector<PlayerCost> players, SharedConstraints constraints);

// Throws DimensionMismatch if any Q^{(i)} is not n x n.
Pseudogradient assemble_pseudogradient(const LQGame& game);

// Diagnostic: min eigenvalue of (G + G^T)/2 against the margin.
ValidationReport check_strong_monotonicity(const Pseudogradient& F, double margin = kMonoMargin);

// Reduces E x = f to full row rank via column-pivoted QR of [E -f] (the
// right-hand-side column is kept last, never pivoted). Already-full-rank
// systems are returned unchanged, which makes the operation idempotent.
// Throws InconsistentEqualities when the eliminated block is nonzero.
SharedConstraints preprocess_equalities(const SharedConstraints& C);

// Aggregates structural checks, strong monotonicity, and equality
// consistency. Pure; never throws, never mutates.
ValidationReport validate_game(const LQGame& game);

}  // namespace goldnash
