#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "goldnash/game.hpp"
#include "goldnash/solver.hpp"
#include "goldnash/types.hpp"

namespace goldnash {

// Discrete-time plant x+ = A x + B u, y = C x, partitioned into per-agent
// input/output blocks. Generated plants have spectral radius 0.95 and unit
// DC gain C (I - A)^{-1} B = I.
struct LTIPlant {
  Matrix A;
  Matrix B;
  Matrix C;
  int num_agents = 0;
  int states_per_agent = 0;
  int inputs_per_agent = 2;
  int outputs_per_agent = 2;

  int nx() const { return static_cast<int>(A.rows()); }
  int nu() const { return static_cast<int>(B.cols()); }
  int ny() const { return static_cast<int>(C.rows()); }
  int input_start(int agent) const { return agent * inputs_per_agent; }
  int output_start(int agent) const { return agent * outputs_per_agent; }
};

// Per-agent stable blocks (controllable-canonical form with random stable
// poles) plus N(0, coupling_sigma^2) noise on every entry of A, B, C, then
// spectral-radius scaling and DC-gain normalization. Throws SingularDCGain
// after bounded retries on fresh substreams.
LTIPlant random_plant(std::uint64_t seed, int N, int states_per_agent = 3,
                      double coupling_sigma = 0.02);

struct MPCAgentSpec {
  Vector Qy;            // diagonal of the output tracking weight, length ny
  Matrix Qdu;           // input-increment weight, inputs_per_agent square, PD
  double Qeps = 1e3;    // linear slack penalty
  double Qeps2 = 1e-3;  // quadratic slack penalty (> 0 keeps the slack strictly convex)
  double u_min = -3.0, u_max = 3.0;
  double du_min = -2.0, du_max = 2.0;
  double y_min = 0.0, y_max = 2.0;
  int T = 10;           // prediction horizon
};

// Standard benchmark weights: output weight 1 with the agent's own outputs
// bumped to 1.5, Qdu = 0.1 I, and the bounds above.
std::vector<MPCAgentSpec> benchmark_agent_specs(int N, int ny, int T);

// Alternating [1 2 1 2 ...] set-point.
Vector benchmark_setpoint(int ny);

// The finite-horizon game condensed onto z = (du_1(0:T-1), eps_1, ...,
// du_N(0:T-1), eps_N): tracking costs through the stacked prediction
// y(1:T) = Phi x_e + Gamma_z z, shared soft output rows with -1 slack
// columns, and local du / cumulative-u / slack-positivity rows. No equality
// constraints.
struct CondensedGame {
  LQGame game;
  Matrix Phi;      // (T ny) x (nx + nu)
  Matrix Gamma_z;  // (T ny) x n_z
  int T = 0;
  int num_agents = 0;
  int inputs_per_agent = 0;

  int agent_block() const { return T * inputs_per_agent + 1; }
  int agent_offset(int i) const { return i * agent_block(); }
  int eps_index(int i) const { return agent_offset(i) + T * inputs_per_agent; }
};

// x_e = [x; u(t-1)] is the extended state; r is the output set-point held
// over the horizon.
CondensedGame condense(const LTIPlant& plant, const std::vector<MPCAgentSpec>& specs,
                       const Vector& x_e, const Vector& r);

struct StepRecord {
  int step = 0;
  std::string status;
  double wall_ms = 0.0;
  int iterations = 0;
  Vector x;    // state at decision time
  Vector u;    // input applied
  Vector y;    // output after the update, = predicted first-step output
  Vector r;
  Vector eps;  // per-agent slacks from the solved game
};

struct ClosedLoopTrace {
  int nx = 0, nu = 0, ny = 0, neps = 0;
  std::vector<StepRecord> steps;
};

// Receding horizon: condense for the current x_e, solve the game with the
// named solver ("goldnash", "lemke", "lemke_dual"), apply the first
// increment, advance the plant. Non-optimal steps are recorded and the loop
// continues with a zero increment.
ClosedLoopTrace closed_loop(const LTIPlant& plant, const std::vector<MPCAgentSpec>& specs,
                            const Vector& x0, int steps, const std::string& solver,
                            const std::function<Vector(int)>& setpoint,
                            const SolverOptions& options = {});

// random_plant filtered on the condensed game being strongly monotone for
// the given specs (checked once; the quadratic part does not depend on the
// state). Rejected seeds are reported through `notes` when given.
LTIPlant benchmark_plant(std::uint64_t seed, int N, const std::vector<MPCAgentSpec>& specs,
                         std::vector<std::string>* notes = nullptr);

}  // namespace goldnash
