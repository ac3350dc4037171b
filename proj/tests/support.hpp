#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "goldnash/game.hpp"
#include "goldnash/rng.hpp"
#include "goldnash/types.hpp"

namespace testsupport {

using goldnash::LQGame;
using goldnash::Matrix;
using goldnash::PlayerCost;
using goldnash::SharedConstraints;
using goldnash::SplitMix64;
using goldnash::Vector;

// Two players, one variable each:
//   Q1 = [2 1; 1 1], c1 = (-1, 0);  Q2 = [1 0; 0 2], c2 = (0, -1)
// giving G = [2 1; 0 2], g = (-1, -1). The unconstrained point is
// (0.25, 0.5); with the row x1 + x2 <= 0.5 the equilibrium is (1/6, 1/3)
// with multiplier 1/3.
inline LQGame gex_game(Matrix A, Vector b, Matrix E = Matrix(0, 2), Vector f = Vector(0)) {
  PlayerCost p1;
  p1.Q = (Matrix(2, 2) << 2, 1, 1, 1).finished();
  p1.c = (Vector(2) << -1, 0).finished();
  p1.block_size = 1;
  PlayerCost p2;
  p2.Q = (Matrix(2, 2) << 1, 0, 0, 2).finished();
  p2.c = (Vector(2) << 0, -1).finished();
  p2.block_size = 1;
  SharedConstraints C;
  C.A = std::move(A);
  C.b = std::move(b);
  C.E = std::move(E);
  C.f = std::move(f);
  return goldnash::make_game({p1, p2}, std::move(C));
}

inline LQGame gex_capped() {
  return gex_game((Matrix(1, 2) << 1, 1).finished(), Vector::Constant(1, 0.5));
}

inline LQGame gex_unconstrained() {
  return gex_game(Matrix(0, 2), Vector(0));
}

// Small heterogeneous instance: 2-3 players with 1-2 variables each, at most
// 8 inequality rows, at most one equality, feasible by construction. Box
// bounds are included whenever they fit into the row budget, which makes the
// primal LCP route applicable.
struct SmallInstance {
  LQGame game;
  Vector x0;
  Vector lower;
  Vector upper;
  bool has_bounds = false;
};

inline SmallInstance random_small_instance(std::uint64_t seed, bool with_equality_choice = true,
                                           bool identical_hessians = false) {
  SplitMix64 rng(seed);
  const int N = 2 + static_cast<int>(rng.next_u64() % 2);
  std::vector<int> sizes(N);
  int n = 0;
  for (int i = 0; i < N; ++i) {
    sizes[i] = 1 + static_cast<int>(rng.next_u64() % 2);
    n += sizes[i];
  }
  const int q = with_equality_choice ? static_cast<int>(rng.next_u64() % 2) : 0;

  std::vector<Matrix> Qt(N);
  if (identical_hessians) {
    Matrix B(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) B(r, c) = rng.normal();
    const Matrix BtB = B.transpose() * B;
    for (int i = 0; i < N; ++i) Qt[i] = 0.5 * (BtB + BtB.transpose());
  } else {
    for (int i = 0; i < N; ++i) {
      Matrix B(n, n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) B(r, c) = rng.normal();
      const Matrix BtB = B.transpose() * B;
      Qt[i] = 0.5 * (BtB + BtB.transpose());
    }
  }

  Matrix Gt = Matrix::Zero(n, n);
  int at = 0;
  for (int i = 0; i < N; ++i) {
    Gt.middleRows(at, sizes[i]) = Qt[i].middleRows(at, sizes[i]);
    at += sizes[i];
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (Gt + Gt.transpose()),
                                            Eigen::EigenvaluesOnly);
  const double shift = std::max(-eig.eigenvalues().minCoeff(), 0.0) + 1e-4;

  std::vector<PlayerCost> players(N);
  for (int i = 0; i < N; ++i) {
    players[i].Q = Qt[i] + shift * Matrix::Identity(n, n);
    players[i].block_size = sizes[i];
    players[i].c = Vector(n);
    for (int j = 0; j < n; ++j) players[i].c(j) = rng.normal(0.0, 5.0);
  }

  SmallInstance inst;
  inst.has_bounds = 2 * n <= 8;
  const int nc = inst.has_bounds ? std::min(N, 8 - 2 * n) : 8;
  const int n_box = inst.has_bounds ? 2 * n : 0;

  if (inst.has_bounds) {
    inst.upper = Vector(n);
    inst.lower = Vector(n);
    for (int j = 0; j < n; ++j) inst.upper(j) = rng.uniform(0.1, 1.0);
    for (int j = 0; j < n; ++j) inst.lower(j) = rng.uniform(-1.0, -0.1);
  }

  Matrix Ac(nc, n);
  for (int r = 0; r < nc; ++r)
    for (int c = 0; c < n; ++c) Ac(r, c) = rng.normal();
  Matrix E(q, n);
  for (int r = 0; r < q; ++r)
    for (int c = 0; c < n; ++c) E(r, c) = rng.normal();

  inst.x0 = Vector(n);
  for (int j = 0; j < n; ++j) {
    inst.x0(j) = inst.has_bounds ? rng.uniform(inst.lower(j), inst.upper(j))
                                 : rng.uniform(-1.0, 1.0);
  }

  SharedConstraints C;
  C.A = Matrix::Zero(n_box + nc, n);
  C.b = Vector::Zero(n_box + nc);
  if (inst.has_bounds) {
    for (int j = 0; j < n; ++j) {
      C.A(j, j) = 1.0;
      C.b(j) = inst.upper(j);
      C.A(n + j, j) = -1.0;
      C.b(n + j) = -inst.lower(j);
    }
  }
  for (int r = 0; r < nc; ++r) {
    C.A.row(n_box + r) = Ac.row(r);
    C.b(n_box + r) = Ac.row(r).dot(inst.x0) + rng.uniform(0.1, 0.5);
  }
  C.E = E;
  C.f = q > 0 ? Vector(E * inst.x0) : Vector(0);

  inst.game = goldnash::make_game(std::move(players), std::move(C));
  return inst;
}

}  // namespace testsupport
