#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "goldnash/game.hpp"
#include "goldnash/solver.hpp"
#include "goldnash/types.hpp"

namespace goldnash {

// Random LQ game recipe. All draws come from one SplitMix64 stream seeded
// with `seed`, in this fixed order (see rng.hpp for the draw contract):
//   1. per agent i ascending: B_i as n x n standard normals, row major
//      (Q~_i = sym(B_i^T B_i));
//   2. per agent i ascending: c_i as n normals with stddev c_stddev;
//   3. if box_bounds: n upper bounds U[upper_lo, upper_hi], then n lower
//      bounds U[lower_lo, lower_hi];
//   4. coupling A rows as normals, row major; then E rows likewise;
//   5. x0: n draws U[lower_j, upper_j] (U[-1, 1] without box bounds);
//   6. coupling slacks U[slack_lo, slack_hi].
// The Hessians are then shifted by (max(-min_eig(sym(G~)), 0) + shift_margin) I
// so the assembled pseudogradient is strongly monotone, and the right-hand
// sides are set to b = [upper; -lower; A_c x0 + slack], f = E x0, making x0
// feasible by construction.
struct GenConfig {
  int N = 2;
  int n_per_agent = 5;
  int q = 0;
  int n_coupling = -1;  // dense inequality rows; -1 means N
  bool box_bounds = true;
  std::uint64_t seed = 0;

  double upper_lo = 0.1, upper_hi = 1.0;
  double lower_lo = -1.0, lower_hi = -0.1;
  double slack_lo = 0.1, slack_hi = 0.5;
  double c_stddev = 5.0;
  double shift_margin = 1e-4;

  int joint_dim() const { return N * n_per_agent; }
  int coupling_rows() const { return n_coupling < 0 ? N : n_coupling; }
  int ineq_rows() const { return (box_bounds ? 2 * joint_dim() : 0) + coupling_rows(); }
};

// Standard benchmark sizes: n_per_agent = 5, box bounds, N dense coupling
// rows, and q = floor(N/2) equalities when requested.
GenConfig benchmark_preset(int N, std::uint64_t seed, bool with_equalities);

struct GeneratedInstance {
  LQGame game;
  Vector x0;     // feasible by construction
  Vector lower;  // box bounds used for the primal LCP; empty without them
  Vector upper;
};

GeneratedInstance random_instance(const GenConfig& cfg);
LQGame random_game(const GenConfig& cfg);

// Canonical solver names: "goldnash", "lemke" (primal LCP), "lemke_dual".
const std::vector<std::string>& known_solvers();

struct NamedSolveOutcome {
  bool applicable = true;
  SolveResult result;
};

// Dispatches by name; the primal LCP route is inapplicable when the instance
// has equality constraints or carries no box bounds.
NamedSolveOutcome run_named_solver(const std::string& name, const GeneratedInstance& inst,
                                   const SolverOptions& options = {});

struct BenchRow {
  int N = 0, n = 0, m = 0, q = 0;
  std::string solver;
  int trial = 0;
  std::uint64_t seed = 0;
  std::string status;  // optimal / infeasible / unsolved / inapplicable
  double wall_ms = 0.0;
  int iterations = 0;
  double kkt_resid = 0.0;  // NaN when no candidate point exists
};

struct SolverStats {
  std::string solver;
  int runs = 0;
  int successes = 0;
  int inapplicable = 0;
  double mean_ms = 0.0, median_ms = 0.0, min_ms = 0.0, max_ms = 0.0;
  double mean_iterations = 0.0;
};

struct SizeSummary {
  GenConfig config;
  std::vector<SolverStats> stats;
  double max_x_disagreement = 0.0;  // max pairwise ||x||_inf gap among optimal solvers
};

struct BenchResult {
  std::vector<BenchRow> rows;
  std::vector<SizeSummary> summaries;
};

// Runs trials x solvers per size. Trial t of a size uses the substream seed
// derive(size.seed, t). One warm-up solve per (size, solver) is excluded
// from the timing statistics. Individual failures are recorded as rows,
// never propagated.
BenchResult benchmark_sweep(const std::vector<GenConfig>& sizes, int trials,
                            const std::vector<std::string>& solvers,
                            const SolverOptions& options = {});

// Table-style summary (sizes down, solvers across, mean ms in the cells;
// "--" for inapplicable columns).
std::string format_bench_summary(const BenchResult& result);

}  // namespace goldnash
