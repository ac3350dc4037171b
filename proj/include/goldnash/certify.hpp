#pragma once

#include <optional>

#include "goldnash/game.hpp"
#include "goldnash/types.hpp"

namespace goldnash {

// Residuals of the joint KKT system at a candidate (x, lambda, nu). All
// fields are nonnegative; a v-GNE has all of them (near) zero.
struct KKTResiduals {
  double stationarity = 0.0;    // ||G x + g + A^T lambda + E^T nu||_inf
  double eq_feas = 0.0;         // ||E x - f||_inf
  double ineq_feas = 0.0;       // ||max(0, A x - b)||_inf
  double dual_feas = 0.0;       // ||max(0, -lambda)||_inf
  double complementarity = 0.0; // |lambda^T (A x - b)|

  double max() const;
};

inline constexpr double kOracleTol = 1e-7;

KKTResiduals kkt_residuals(const LQGame& game, const Pseudogradient& F, const Vector& x,
                           const Vector& lambda, const Vector& nu);

bool is_vgne(const KKTResiduals& residuals, double tol);

struct OracleSolution {
  Vector x;
  Vector lambda;
  Vector nu;
  int active_mask = 0;  // bit k set <=> inequality row k active in the certified subset
};

// Brute-force reference: tries every subset of inequality rows as the active
// set, solves the resulting equality-KKT system, and returns the first
// candidate (in subset index order) whose residuals pass kOracleTol.
// Requires m <= 20. Subsets whose stacked rows are rank deficient are
// skipped. Returns nullopt when no subset certifies, which for a monotone
// game means the constraint set is empty (or numerically pathological).
//
// Deliberately implemented on Eigen's own rank-revealing factorizations so
// it shares no linear-algebra path with the solvers it checks.
std::optional<OracleSolution> enumerate_oracle(const LQGame& game, const Pseudogradient& F);

}  // namespace goldnash
