#include "goldnash/gtmpc.hpp"

#include <chrono>
#include <cmath>

#include "goldnash/lcp.hpp"
#include "goldnash/rng.hpp"

namespace goldnash {

namespace {

double spectral_radius(const Matrix& A) {
  if (A.rows() == 0) return 0.0;
  Eigen::EigenSolver<Matrix> eig(A, /*computeEigenvectors=*/false);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

LTIPlant plant_attempt(SplitMix64& rng, int N, int ns, double coupling_sigma) {
  const int niu = 2, noy = 2;
  const int nx = N * ns, nu = N * niu, ny = N * noy;

  LTIPlant plant;
  plant.num_agents = N;
  plant.states_per_agent = ns;
  plant.A = Matrix::Zero(nx, nx);
  plant.B = Matrix::Zero(nx, nu);
  plant.C = Matrix::Zero(ny, nx);

  for (int i = 0; i < N; ++i) {
    // Controllable-canonical block from random stable poles.
    Vector poles(ns);
    for (int j = 0; j < ns; ++j) poles(j) = rng.uniform(-0.85, 0.85);
    Vector coeff = Vector::Zero(ns + 1);  // monic characteristic polynomial
    coeff(0) = 1.0;
    for (int j = 0; j < ns; ++j) {
      for (int d = j + 1; d >= 1; --d) coeff(d) -= poles(j) * coeff(d - 1);
    }
    Matrix Ai = Matrix::Zero(ns, ns);
    for (int r2 = 0; r2 + 1 < ns; ++r2) Ai(r2, r2 + 1) = 1.0;
    for (int c2 = 0; c2 < ns; ++c2) Ai(ns - 1, c2) = -coeff(ns - c2);

    Matrix Bi = Matrix::Zero(ns, niu);
    Bi(ns - 1, 0) = 1.0;
    for (int r2 = 0; r2 < ns; ++r2) Bi(r2, 1) = rng.normal();
    Matrix Ci(noy, ns);
    for (int r2 = 0; r2 < noy; ++r2)
      for (int c2 = 0; c2 < ns; ++c2) Ci(r2, c2) = rng.normal();

    plant.A.block(i * ns, i * ns, ns, ns) = Ai;
    plant.B.block(i * ns, i * niu, ns, niu) = Bi;
    plant.C.block(i * noy, i * ns, noy, ns) = Ci;
  }

  // Inter-agent coupling on every entry (zero sigma keeps the draws aligned).
  for (int r2 = 0; r2 < nx; ++r2)
    for (int c2 = 0; c2 < nx; ++c2) plant.A(r2, c2) += coupling_sigma * rng.normal();
  for (int r2 = 0; r2 < nx; ++r2)
    for (int c2 = 0; c2 < nu; ++c2) plant.B(r2, c2) += coupling_sigma * rng.normal();
  for (int r2 = 0; r2 < ny; ++r2)
    for (int c2 = 0; c2 < nx; ++c2) plant.C(r2, c2) += coupling_sigma * rng.normal();

  const double rho = spectral_radius(plant.A);
  if (rho < 1e-12) throw SingularDCGain("random_plant: degenerate dynamics");
  plant.A *= 0.95 / rho;

  const Matrix resolvent = (Matrix::Identity(nx, nx) - plant.A).partialPivLu().solve(plant.B);
  const Matrix dc = plant.C * resolvent;
  Eigen::FullPivLU<Matrix> dc_lu(dc);
  if (!dc_lu.isInvertible()) throw SingularDCGain("random_plant: singular DC gain");
  plant.C = dc_lu.solve(plant.C).eval();
  return plant;
}

}  // namespace

LTIPlant random_plant(std::uint64_t seed, int N, int states_per_agent, double coupling_sigma) {
  const int max_attempts = 16;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    SplitMix64 rng(SplitMix64::derive(seed, static_cast<std::uint64_t>(attempt)));
    try {
      return plant_attempt(rng, N, states_per_agent, coupling_sigma);
    } catch (const SingularDCGain&) {
      continue;
    }
  }
  throw SingularDCGain("random_plant: no usable plant after retries");
}

std::vector<MPCAgentSpec> benchmark_agent_specs(int N, int ny, int T) {
  std::vector<MPCAgentSpec> specs(N);
  for (int i = 0; i < N; ++i) {
    specs[i].Qy = Vector::Ones(ny);
    specs[i].Qy.segment(2 * i, 2).setConstant(1.5);
    specs[i].Qdu = 0.1 * Matrix::Identity(2, 2);
    specs[i].T = T;
  }
  return specs;
}

Vector benchmark_setpoint(int ny) {
  Vector r(ny);
  for (int k = 0; k < ny; ++k) r(k) = (k % 2 == 0) ? 1.0 : 2.0;
  return r;
}

CondensedGame condense(const LTIPlant& plant, const std::vector<MPCAgentSpec>& specs,
                       const Vector& x_e, const Vector& r) {
  const int N = plant.num_agents;
  const int nx = plant.nx(), nu = plant.nu(), ny = plant.ny();
  const int niu = plant.inputs_per_agent;
  if (static_cast<int>(specs.size()) != N) {
    throw DimensionMismatch("condense: one spec per agent required");
  }
  const int T = specs.front().T;
  for (const auto& s : specs) {
    if (s.T != T) throw DimensionMismatch("condense: agents must share the horizon");
  }
  if (x_e.size() != nx + nu || r.size() != ny) {
    throw DimensionMismatch("condense: extended state or set-point has wrong length");
  }

  CondensedGame cg;
  cg.T = T;
  cg.num_agents = N;
  cg.inputs_per_agent = niu;
  const int nz = N * cg.agent_block();

  // Extended dynamics over x_e = [x; u_prev] driven by increments.
  const int ne = nx + nu;
  Matrix Ae = Matrix::Zero(ne, ne);
  Ae.topLeftCorner(nx, nx) = plant.A;
  Ae.topRightCorner(nx, nu) = plant.B;
  Ae.bottomRightCorner(nu, nu) = Matrix::Identity(nu, nu);
  Matrix Be = Matrix::Zero(ne, nu);
  Be.topRows(nx) = plant.B;
  Be.bottomRows(nu) = Matrix::Identity(nu, nu);
  Matrix Ce = Matrix::Zero(ny, ne);
  Ce.leftCols(nx) = plant.C;

  // CAp[d] = Ce Ae^d.
  std::vector<Matrix> CAp(T + 1);
  CAp[0] = Ce;
  for (int d = 1; d <= T; ++d) CAp[d] = CAp[d - 1] * Ae;

  cg.Phi = Matrix::Zero(T * ny, ne);
  Matrix Gamma = Matrix::Zero(T * ny, T * nu);  // step-major increment order
  for (int k = 0; k < T; ++k) {
    cg.Phi.middleRows(k * ny, ny) = CAp[k + 1];
    for (int j = 0; j <= k; ++j) {
      Gamma.block(k * ny, j * nu, ny, nu) = CAp[k - j] * Be;
    }
  }

  // Reorder forced-response columns into the per-agent decision layout.
  cg.Gamma_z = Matrix::Zero(T * ny, nz);
  for (int i = 0; i < N; ++i) {
    for (int k = 0; k < T; ++k) {
      cg.Gamma_z.middleCols(cg.agent_offset(i) + k * niu, niu) =
          Gamma.middleCols(k * nu + plant.input_start(i), niu);
    }
  }

  const Vector free_response = cg.Phi * x_e;
  Vector r_stack(T * ny);
  for (int k = 0; k < T; ++k) r_stack.segment(k * ny, ny) = r;

  std::vector<PlayerCost> players(N);
  for (int i = 0; i < N; ++i) {
    Vector qy_stack(T * ny);
    for (int k = 0; k < T; ++k) qy_stack.segment(k * ny, ny) = specs[i].Qy;

    Matrix Q = 2.0 * (cg.Gamma_z.transpose() * qy_stack.asDiagonal() * cg.Gamma_z);
    for (int k = 0; k < T; ++k) {
      const int at = cg.agent_offset(i) + k * niu;
      Q.block(at, at, niu, niu) += 2.0 * specs[i].Qdu;
    }
    Q(cg.eps_index(i), cg.eps_index(i)) += 2.0 * specs[i].Qeps2;

    Vector c = 2.0 * (cg.Gamma_z.transpose() *
                      (qy_stack.asDiagonal() * (free_response - r_stack)));
    c(cg.eps_index(i)) += specs[i].Qeps;

    players[i].Q = std::move(Q);
    players[i].c = std::move(c);
    players[i].block_size = cg.agent_block();
  }

  const auto& sp = specs.front();
  const Vector u_prev = x_e.tail(nu);
  const int m_shared = 2 * T * ny;
  const int m_local_per_agent = 4 * T * niu;
  const int m = m_shared + N * m_local_per_agent + N;

  SharedConstraints C;
  C.A = Matrix::Zero(m, nz);
  C.b = Vector::Zero(m);
  C.E = Matrix(0, nz);
  C.f = Vector(0);

  // Shared soft output rows: y <= y_max + sum eps, y >= y_min - sum eps.
  for (int idx = 0; idx < T * ny; ++idx) {
    C.A.row(idx) = cg.Gamma_z.row(idx);
    C.b(idx) = sp.y_max - free_response(idx);
    C.A.row(T * ny + idx) = -cg.Gamma_z.row(idx);
    C.b(T * ny + idx) = free_response(idx) - sp.y_min;
    for (int i = 0; i < N; ++i) {
      C.A(idx, cg.eps_index(i)) -= 1.0;
      C.A(T * ny + idx, cg.eps_index(i)) -= 1.0;
    }
  }

  // Local rows: increment box, then input box through cumulative sums.
  int row = m_shared;
  for (int i = 0; i < N; ++i) {
    const int off = cg.agent_offset(i);
    for (int k = 0; k < T; ++k) {
      for (int cidx = 0; cidx < niu; ++cidx) {
        C.A(row, off + k * niu + cidx) = 1.0;
        C.b(row++) = sp.du_max;
      }
    }
    for (int k = 0; k < T; ++k) {
      for (int cidx = 0; cidx < niu; ++cidx) {
        C.A(row, off + k * niu + cidx) = -1.0;
        C.b(row++) = -sp.du_min;
      }
    }
    for (int k = 0; k < T; ++k) {
      for (int cidx = 0; cidx < niu; ++cidx) {
        for (int j = 0; j <= k; ++j) C.A(row, off + j * niu + cidx) = 1.0;
        C.b(row++) = sp.u_max - u_prev(plant.input_start(i) + cidx);
      }
    }
    for (int k = 0; k < T; ++k) {
      for (int cidx = 0; cidx < niu; ++cidx) {
        for (int j = 0; j <= k; ++j) C.A(row, off + j * niu + cidx) = -1.0;
        C.b(row++) = u_prev(plant.input_start(i) + cidx) - sp.u_min;
      }
    }
  }
  for (int i = 0; i < N; ++i) {
    C.A(row, cg.eps_index(i)) = -1.0;
    C.b(row++) = 0.0;
  }

  cg.game = make_game(std::move(players), std::move(C));
  return cg;
}

ClosedLoopTrace closed_loop(const LTIPlant& plant, const std::vector<MPCAgentSpec>& specs,
                            const Vector& x0, int steps, const std::string& solver,
                            const std::function<Vector(int)>& setpoint,
                            const SolverOptions& options) {
  ClosedLoopTrace trace;
  trace.nx = plant.nx();
  trace.nu = plant.nu();
  trace.ny = plant.ny();
  trace.neps = plant.num_agents;

  Vector x = x0;
  Vector u_prev = Vector::Zero(plant.nu());
  const int niu = plant.inputs_per_agent;

  for (int t = 0; t < steps; ++t) {
    const Vector r = setpoint(t);
    Vector x_e(plant.nx() + plant.nu());
    x_e << x, u_prev;
    const CondensedGame cg = condense(plant, specs, x_e, r);

    StepRecord rec;
    rec.step = t;
    rec.r = r;
    rec.eps = Vector::Zero(plant.num_agents);
    Vector du = Vector::Zero(plant.nu());

    const auto t0 = std::chrono::steady_clock::now();
    try {
      SolveResult sr;
      if (solver == "goldnash") {
        sr = solve(cg.game, options);
      } else if (solver == "lemke_dual") {
        sr = solve_via_lemke(cg.game, LemkeVariant::dual);
      } else if (solver == "lemke") {
        Vector lb(cg.game.n);
        for (int i = 0; i < plant.num_agents; ++i) {
          lb.segment(cg.agent_offset(i), cg.T * niu).setConstant(specs[i].du_min);
          lb(cg.eps_index(i)) = 0.0;
        }
        sr = solve_via_lemke(cg.game, LemkeVariant::primal, lb);
      } else {
        throw Error("closed_loop: unknown solver '" + solver + "'");
      }
      rec.status = to_string(sr.status);
      rec.iterations = sr.iterations;
      if (sr.status == SolveStatus::optimal) {
        for (int i = 0; i < plant.num_agents; ++i) {
          du.segment(plant.input_start(i), niu) = sr.x.segment(cg.agent_offset(i), niu);
          rec.eps(i) = sr.x(cg.eps_index(i));
        }
      }
    } catch (const Error& e) {
      rec.status = std::string("error:") + e.what();
    }
    rec.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    const Vector u = u_prev + du;
    const Vector x_next = plant.A * x + plant.B * u;
    rec.x = x;
    rec.u = u;
    rec.y = plant.C * x_next;
    trace.steps.push_back(std::move(rec));

    x = x_next;
    u_prev = u;
  }
  return trace;
}

LTIPlant benchmark_plant(std::uint64_t seed, int N, const std::vector<MPCAgentSpec>& specs,
                         std::vector<std::string>* notes) {
  const int max_attempts = 16;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const std::uint64_t sub = SplitMix64::derive(seed, 1000 + static_cast<std::uint64_t>(attempt));
    const LTIPlant plant = random_plant(sub, N);
    const Vector x_e = Vector::Zero(plant.nx() + plant.nu());
    const CondensedGame cg = condense(plant, specs, x_e, benchmark_setpoint(plant.ny()));
    const ValidationReport report = validate_game(cg.game);
    if (report.ok()) return plant;
    if (notes) {
      notes->push_back("plant substream " + std::to_string(attempt) +
                       " rejected: condensed game not strongly monotone (min eig " +
                       std::to_string(report.min_eig_Gs) + ")");
    }
  }
  throw Error("benchmark_plant: no strongly monotone plant after retries");
}

}  // namespace goldnash
