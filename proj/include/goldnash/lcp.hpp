#pragma once

#include <optional>

#include "goldnash/game.hpp"
#include "goldnash/linalg.hpp"
#include "goldnash/solver.hpp"
#include "goldnash/types.hpp"

namespace goldnash {

enum class LCPProvenance { primal, dual, raw };

// Complementarity problem 0 <= z  perp  M z + qv >= 0, together with the
// data needed to map a solution back to game coordinates.
struct LCPInstance {
  Matrix M;
  Vector qv;
  LCPProvenance provenance = LCPProvenance::raw;

  int n = 0;  // game variables
  int m = 0;  // inequality rows

  // primal: z = (y, lambda) with x = y + lower_bounds; bound multipliers are
  // folded into lambda for rows of A that duplicate a bound.
  Vector lower_bounds;
  Matrix A;
  Vector b;

  // dual: z = lambda; (x, nu) recovered through the factorized saddle block.
  LUFactors kkt_lu;
  Vector g;
  Vector f;

  int dim() const { return static_cast<int>(qv.size()); }
};

enum class LemkeStatus { solved, ray_termination, max_pivots };

struct LemkeResult {
  LemkeStatus status = LemkeStatus::max_pivots;
  Vector z;
  Vector w;
  int pivots = 0;
};

inline constexpr double kLcpTolFactor = 1e-9;

// M = [G A^T; -A 0], qv = [G l + g; b - A l] for the bound substitution
// y = x - l. Requires q = 0 (HasEqualities otherwise) and finite bounds
// (NoBounds when l is empty).
LCPInstance build_primal_lcp(const LQGame& game, const Pseudogradient& F,
                             const Vector& lower_bounds);

// Eliminates (x, nu) through the saddle block H = [G E^T; E 0]:
// M = A H11 A^T, qv = b + A (H11 g - H12 f). Throws SingularKKT if H cannot
// be factored.
LCPInstance build_dual_lcp(const LQGame& game, const Pseudogradient& F);

// Lemke complementary pivoting with an all-ones covering vector and
// lexicographic ratio test. max_pivots <= 0 selects the default 50 * dim.
LemkeResult lemke_solve(const LCPInstance& lcp, int max_pivots = 0);

enum class LemkeVariant { primal, dual };

// Builds the requested reformulation, pivots, and maps the result back to
// (x, lambda, nu). Status map: solved -> optimal, ray_termination ->
// infeasible, max_pivots -> unsolved; iterations reports pivots.
SolveResult solve_via_lemke(const LQGame& game, LemkeVariant variant,
                            const std::optional<Vector>& lower_bounds = std::nullopt,
                            int max_pivots = 0);

}  // namespace goldnash
