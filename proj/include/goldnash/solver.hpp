#pragma once

#include <utility>
#include <vector>

#include "goldnash/game.hpp"
#include "goldnash/linalg.hpp"
#include "goldnash/types.hpp"

namespace goldnash {

enum class SolveStatus { optimal, infeasible, unsolved };

const char* to_string(SolveStatus status);

struct SolverOptions {
  double eps = 1e-8;       // feasibility / step threshold
  int max_iters = 0;       // iteration budget; <= 0 means 100 * (m + q + 1)
  bool check_invariants = false;  // per-iteration residual assertions + log
};

// Inequality rows currently treated as active. Kept sorted ascending so that
// tie-breaks ("lowest index") fall out of plain scans and runs are
// deterministic.
class WorkingSet {
 public:
  const std::vector<int>& indices() const { return indices_; }
  int size() const { return static_cast<int>(indices_.size()); }
  int operator[](int pos) const { return indices_[pos]; }
  bool contains(int k) const;
  void add(int k);            // keeps order; k must not be present
  void remove_at(int pos);

 private:
  std::vector<int> indices_;
};

// Primal/dual iterate. lambda has length m with zeros off the working set;
// while a violated row p is targeted, lambda(p) mirrors the tentative
// multiplier mu_p.
struct IterateState {
  Vector x;
  Vector lambda;
  Vector nu;
  double mu_p = 0.0;
  int p = -1;  // targeted row, or -1
  int iter_count = 0;
  WorkingSet working_set;
};

// Residuals of the stationarity/tightness invariants at one iterate, sampled
// when SolverOptions::check_invariants is on.
struct InvariantSample {
  int iter = 0;
  double stationarity = 0.0;  // ||G x + g + A^T lambda + E^T nu||_inf
  double working_tight = 0.0; // ||A_W x - b_W||_inf
  double eq_tight = 0.0;      // ||E x - f||_inf
  double min_multiplier = 0.0;  // min over lambda_W and mu_p
  double a_p_dot_z = 0.0;
  double z_norm = 0.0;
  double tol = 0.0;  // scaled tolerance the residuals were checked against
  bool ok = true;
};

struct SolveResult {
  SolveStatus status = SolveStatus::unsolved;
  Vector x;
  Vector lambda;
  Vector nu;
  int iterations = 0;
  WorkingSet working_set;
  int adds = 0;
  int drops = 0;
  std::vector<InvariantSample> invariant_log;  // populated when check_invariants
};

// Precomputed factorization and solves reused across iterations.
struct Precomputed {
  LUFactors G_lu;
  Matrix Y_A;  // G^{-1} A^T
  Matrix Y_E;  // G^{-1} E^T
};

Precomputed precompute(const Pseudogradient& F, const SharedConstraints& C);

// Equality-constrained start: W empty, lambda zero, (x, nu) from the
// saddle-point system solved by block elimination.
IterateState initialize(const Pseudogradient& F, const SharedConstraints& C,
                        const Precomputed& pre);

// Most violated inequality row and its violation; {-1, 0} when every
// violation is <= eps. Ties go to the lowest row index.
std::pair<int, double> select_violated(const Vector& x, const Matrix& A, const Vector& b,
                                       double eps);

struct Directions {
  Vector z;    // primal direction, in the null space of the active stack
  Vector r_W;  // dual direction on the working-set multipliers
  Vector s;    // dual direction on the equality multipliers
};

// Solves the working-set Schur system for the dual direction and forms
// z = Y_Wbar r_bar - y_p. Throws SingularSchur if the Schur matrix cannot
// be factored.
Directions directions(const Precomputed& pre, const WorkingSet& W, int p, const Matrix& A,
                      const Matrix& E);

struct StepLengths {
  double t1 = 0.0;     // max step before a working-set multiplier hits zero
  double t2 = 0.0;     // step that makes row p tight (infinity if z is no descent)
  int drop_pos = -1;   // position in W attaining t1, or -1
};

inline constexpr double kRatioEps = 1e-12;  // positivity floor for r_k in t1

StepLengths step_lengths(const IterateState& state, int p, const Vector& z, const Vector& r_W,
                         const Matrix& A, const Vector& b, double eps);

// x += t z; lambda_W -= t r_W; nu -= t s; mu_p += t; lambda_p = mu_p.
void take_step(IterateState& state, double t, const Directions& dir);

// Full dual active-set solve. Throws InvalidGame when validation fails and
// SingularSchur on working-set rank corruption.
SolveResult solve(const LQGame& game, const SolverOptions& options = {});

}  // namespace goldnash
