// End-to-end acceptance runs: prints one PASS/FAIL line per criterion and
// exits nonzero if any fail. argv[1] must be the path to the CLI binary
// (used by the determinism checks).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "goldnash/certify.hpp"
#include "goldnash/gtmpc.hpp"
#include "goldnash/instance_gen.hpp"
#include "goldnash/io.hpp"
#include "goldnash/lcp.hpp"
#include "goldnash/rng.hpp"
#include "goldnash/solver.hpp"
#include "support.hpp"

using namespace goldnash;
using testsupport::random_small_instance;

namespace {

int g_failures = 0;

class Criterion {
 public:
  Criterion(int id, std::string name) : id_(id), name_(std::move(name)) {
    start_ = std::chrono::steady_clock::now();
  }

  void fail(const std::string& why) {
    ok_ = false;
    details_.push_back(why);
  }

  void require(bool cond, const std::string& why) {
    if (!cond) fail(why);
  }

  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  ~Criterion() {
    std::printf("[%s] criterion %d: %s (%.1fs)\n", ok_ ? "PASS" : "FAIL", id_, name_.c_str(),
                seconds());
    for (const auto& d : details_) std::printf("       %s\n", d.c_str());
    if (!ok_) ++g_failures;
    std::fflush(stdout);
  }

 private:
  int id_;
  std::string name_;
  bool ok_ = true;
  std::vector<std::string> details_;
  std::chrono::steady_clock::time_point start_;
};

void dump_invariant_trace(const LQGame& game, std::uint64_t seed, const std::string& label) {
  SolverOptions opts;
  opts.check_invariants = true;
  const SolveResult res = solve(game, opts);
  std::fprintf(stderr, "non-optimal %s (seed %llu): status=%s iters=%d\n", label.c_str(),
               static_cast<unsigned long long>(seed), to_string(res.status), res.iterations);
  for (const auto& s : res.invariant_log) {
    std::fprintf(stderr,
                 "  iter=%d stat=%.3e tight=%.3e eq=%.3e min_mult=%.3e apz=%.3e |z|=%.3e%s\n",
                 s.iter, s.stationarity, s.working_tight, s.eq_tight, s.min_multiplier,
                 s.a_p_dot_z, s.z_norm, s.ok ? "" : "  <-- violated");
  }
}

void criterion1_worked_instance() {
  Criterion c(1, "worked 2-player instance solved exactly in one add");
  const LQGame game = testsupport::gex_capped();
  const SolveResult res = solve(game);
  c.require(res.status == SolveStatus::optimal, "status not optimal");
  c.require(std::abs(res.x(0) - 1.0 / 6.0) <= 1e-10, "x1 off");
  c.require(std::abs(res.x(1) - 1.0 / 3.0) <= 1e-10, "x2 off");
  c.require(std::abs(res.lambda(0) - 1.0 / 3.0) <= 1e-10, "lambda off");
  c.require(res.adds == 1 && res.drops == 0, "expected exactly one constraint addition");
}

void criterion2_oracle_equivalence() {
  Criterion c(2, "200 random instances match the enumeration oracle across solvers");
  const int total = 200;
  int goldnash_optimal = 0;
  int primal_checked = 0;

  for (int i = 0; i < total; ++i) {
    const std::uint64_t seed = 20000 + i;
    const auto inst = random_small_instance(seed);
    const Pseudogradient F = assemble_pseudogradient(inst.game);
    const auto oracle = enumerate_oracle(inst.game, F);
    if (!oracle) {
      c.fail("oracle found no equilibrium for seed " + std::to_string(seed));
      continue;
    }

    const SolveResult gold = solve(inst.game);
    if (gold.status == SolveStatus::optimal) {
      ++goldnash_optimal;
      c.require(inf_norm(Vector(gold.x - oracle->x)) <= 1e-6,
                "goldnash/oracle mismatch at seed " + std::to_string(seed));
      c.require(kkt_residuals(inst.game, F, gold.x, gold.lambda, gold.nu).max() <= 1e-8,
                "goldnash residuals above 1e-8 at seed " + std::to_string(seed));
    } else {
      dump_invariant_trace(inst.game, seed, "goldnash");
    }

    const SolveResult dual = solve_via_lemke(inst.game, LemkeVariant::dual);
    c.require(dual.status == SolveStatus::optimal,
              "dual lemke non-optimal at seed " + std::to_string(seed));
    if (dual.status == SolveStatus::optimal) {
      c.require(inf_norm(Vector(dual.x - oracle->x)) <= 1e-6,
                "dual lemke/oracle mismatch at seed " + std::to_string(seed));
      c.require(kkt_residuals(inst.game, F, dual.x, dual.lambda, dual.nu).max() <= 1e-8,
                "dual lemke residuals above 1e-8 at seed " + std::to_string(seed));
    }

    if (inst.game.constraints.q() == 0 && inst.has_bounds) {
      ++primal_checked;
      const SolveResult primal = solve_via_lemke(inst.game, LemkeVariant::primal, inst.lower);
      c.require(primal.status == SolveStatus::optimal,
                "primal lemke non-optimal at seed " + std::to_string(seed));
      if (primal.status == SolveStatus::optimal) {
        c.require(inf_norm(Vector(primal.x - oracle->x)) <= 1e-6,
                  "primal lemke/oracle mismatch at seed " + std::to_string(seed));
        c.require(kkt_residuals(inst.game, F, primal.x, primal.lambda, primal.nu).max() <= 1e-8,
                  "primal lemke residuals above 1e-8 at seed " + std::to_string(seed));
      }
    }
  }

  c.require(goldnash_optimal >= 198, "goldnash optimal rate below 99% (" +
                                         std::to_string(goldnash_optimal) + "/200)");
  c.require(primal_checked >= 40, "too few bounded q=0 instances exercised the primal route");
  c.require(c.seconds() < 30.0, "runtime budget of 30s exceeded");
}

void criterion3_invariant_suite() {
  Criterion c(3, "1000+ instrumented iterations with zero invariant violations");
  SolverOptions opts;
  opts.check_invariants = true;

  long iterations = 0;
  long samples = 0;
  int eq5_violations = 0;
  int lemma3_violations = 0;
  int singular_schur = 0;

  for (int i = 0; iterations < 1000 && i < 2000; ++i) {
    const auto inst = random_small_instance(30000 + i);
    try {
      const SolveResult res = solve(inst.game, opts);
      iterations += res.iterations;
      for (const auto& s : res.invariant_log) {
        ++samples;
        const bool eq5_ok = s.stationarity <= s.tol && s.working_tight <= s.tol &&
                            s.eq_tight <= s.tol && s.min_multiplier >= -s.tol;
        if (!eq5_ok) ++eq5_violations;
        if (s.z_norm > 1e-10 && !(s.a_p_dot_z < 0.0)) ++lemma3_violations;
      }
    } catch (const SingularSchur&) {
      ++singular_schur;
    }
  }

  c.require(iterations >= 1000, "accumulated only " + std::to_string(iterations) + " iterations");
  c.require(eq5_violations == 0,
            std::to_string(eq5_violations) + " stationarity/tightness violations in " +
                std::to_string(samples) + " samples");
  c.require(lemma3_violations == 0,
            std::to_string(lemma3_violations) + " descent-sign violations");
  c.require(singular_schur == 0, std::to_string(singular_schur) + " singular Schur events");
  c.require(c.seconds() < 60.0, "runtime budget of 60s exceeded");
}

void criterion4_potential_games() {
  Criterion c(4, "50 potential-game instances match the oracle within 1e-8");
  for (int i = 0; i < 50; ++i) {
    const std::uint64_t seed = 40000 + i;
    const auto inst = random_small_instance(seed, true, /*identical_hessians=*/true);
    const Pseudogradient F = assemble_pseudogradient(inst.game);
    const auto oracle = enumerate_oracle(inst.game, F);
    if (!oracle) {
      c.fail("oracle found no equilibrium for seed " + std::to_string(seed));
      continue;
    }
    const SolveResult res = solve(inst.game);
    c.require(res.status == SolveStatus::optimal,
              "non-optimal at seed " + std::to_string(seed));
    if (res.status == SolveStatus::optimal) {
      c.require(inf_norm(Vector(res.x - oracle->x)) <= 1e-8,
                "oracle mismatch at seed " + std::to_string(seed));
    }
  }
}

void criterion5_cross_reformulation() {
  Criterion c(5, "solver agreement on the standard preset for N in {2,3,5,10}");
  for (int N : {2, 3, 5, 10}) {
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      GenConfig cfg = benchmark_preset(N, SplitMix64::derive(50000 + N, t), false);
      const GeneratedInstance inst = random_instance(cfg);

      const SolveResult gold = solve(inst.game);
      const SolveResult dual = solve_via_lemke(inst.game, LemkeVariant::dual);
      const SolveResult primal = solve_via_lemke(inst.game, LemkeVariant::primal, inst.lower);
      const bool all_optimal = gold.status == SolveStatus::optimal &&
                               dual.status == SolveStatus::optimal &&
                               primal.status == SolveStatus::optimal;
      c.require(all_optimal, "non-optimal solve at N=" + std::to_string(N) + " trial " +
                                 std::to_string(t));
      if (!all_optimal) continue;
      worst = std::max(worst, inf_norm(Vector(gold.x - dual.x)));
      worst = std::max(worst, inf_norm(Vector(gold.x - primal.x)));
      worst = std::max(worst, inf_norm(Vector(dual.x - primal.x)));
    }
    c.require(worst <= 1e-6, "max disagreement " + std::to_string(worst) + " at N=" +
                                 std::to_string(N));
  }

  // Equality preset: the primal reformulation must report inapplicable.
  const GeneratedInstance eq_inst = random_instance(benchmark_preset(5, 5150, true));
  const NamedSolveOutcome primal_eq = run_named_solver("lemke", eq_inst);
  c.require(!primal_eq.applicable, "primal lemke should be inapplicable when q > 0");
}

void criterion6_gtmpc() {
  Criterion c(6, "closed-loop MPC benchmark: constraints, slacks, and solver agreement");
  const int N = 3, T = 10, steps = 40;
  const auto specs = benchmark_agent_specs(N, 2 * N, T);
  const LTIPlant plant = benchmark_plant(1, N, specs);
  c.require(plant.nx() == 9 && plant.nu() == 6 && plant.ny() == 6, "plant dimensions wrong");

  const Vector r = benchmark_setpoint(plant.ny());
  const auto setpoint = [&](int) { return r; };
  const ClosedLoopTrace gold =
      closed_loop(plant, specs, Vector::Zero(plant.nx()), steps, "goldnash", setpoint);
  const ClosedLoopTrace dual =
      closed_loop(plant, specs, Vector::Zero(plant.nx()), steps, "lemke_dual", setpoint);

  c.require(static_cast<int>(gold.steps.size()) == steps, "trace truncated");
  Vector u_prev = Vector::Zero(plant.nu());
  for (int t = 0; t < steps; ++t) {
    const auto& g = gold.steps[t];
    c.require(g.status == "optimal", "goldnash non-optimal at step " + std::to_string(t));
    c.require(dual.steps[t].status == "optimal",
              "dual lemke non-optimal at step " + std::to_string(t));

    c.require(g.u.cwiseAbs().maxCoeff() <= 3.0 + 1e-12,
              "input bound violated at step " + std::to_string(t));
    c.require((g.u - u_prev).cwiseAbs().maxCoeff() <= 2.0 + 1e-12,
              "increment bound violated at step " + std::to_string(t));
    u_prev = g.u;

    const double band = g.eps.sum() + 1e-8;
    c.require(g.y.maxCoeff() <= 2.0 + band,
              "soft upper output bound exceeded at step " + std::to_string(t));
    c.require(g.y.minCoeff() >= 0.0 - band,
              "soft lower output bound exceeded at step " + std::to_string(t));

    c.require(inf_norm(Vector(g.x - dual.steps[t].x)) <= 1e-6,
              "solver state mismatch at step " + std::to_string(t));
  }
  c.require(c.seconds() < 60.0, "runtime budget of 60s exceeded");
}

void criterion7_scaling_sweep() {
  Criterion c(7, "equality-preset sweep over N in {2,3,5,10,20} is all-optimal CSV");
  std::vector<GenConfig> sizes;
  const std::vector<int> Ns = {2, 3, 5, 10, 20};
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    sizes.push_back(benchmark_preset(Ns[i], SplitMix64::derive(70000, i), true));
  }
  const std::vector<std::string> solvers = {"goldnash", "lemke_dual"};
  const BenchResult result = benchmark_sweep(sizes, 10, solvers);

  c.require(result.rows.size() == Ns.size() * solvers.size() * 10, "row count wrong");
  for (const auto& row : result.rows) {
    c.require(row.status == "optimal", "non-optimal row: N=" + std::to_string(row.N) + " " +
                                           row.solver + " trial " + std::to_string(row.trial));
    c.require(row.solver != "lemke", "primal lemke column must be absent");
  }
  const std::string csv = bench_csv(result.rows);
  std::istringstream ss(csv);
  std::string header;
  std::getline(ss, header);
  c.require(header == "N,n,m,q,solver,trial,seed,status,wall_ms,iterations,kkt_resid",
            "CSV header mismatch");
  int lines = 0;
  for (std::string line; std::getline(ss, line);) {
    if (!line.empty()) ++lines;
  }
  c.require(lines == static_cast<int>(result.rows.size()), "CSV line count mismatch");
}

int run_cli(const std::string& cli, const std::string& args) {
  const std::string cmd = cli + " " + args + " >/dev/null 2>&1";
  return std::system(cmd.c_str());
}

void criterion8_determinism(const std::string& cli) {
  Criterion c(8, "identical seeds give byte-identical generated/solution/CSV files");
  namespace fs = std::filesystem;
  const fs::path dir = fs::path("acceptance_tmp");
  fs::create_directories(dir);
  auto path = [&](const std::string& name) { return (dir / name).string(); };

  auto same_bytes = [&](const std::string& a, const std::string& b) {
    return read_text_file(a) == read_text_file(b);
  };

  c.require(run_cli(cli, "gen --agents 3 --equalities 1 --seed 42 --out " + path("g1.json")) == 0,
            "gen run 1 failed");
  c.require(run_cli(cli, "gen --agents 3 --equalities 1 --seed 42 --out " + path("g2.json")) == 0,
            "gen run 2 failed");
  c.require(same_bytes(path("g1.json"), path("g2.json")), "instance files differ");

  c.require(run_cli(cli, "solve --input " + path("g1.json") + " --out " + path("s1.json")) == 0,
            "solve run 1 failed");
  c.require(run_cli(cli, "solve --input " + path("g1.json") + " --out " + path("s2.json")) == 0,
            "solve run 2 failed");
  c.require(same_bytes(path("s1.json"), path("s2.json")), "solution files differ");

  // Full round trip through the files the CLI emitted.
  const std::string certify_cmd = cli + " certify --input " + path("g1.json") + " --solution " +
                                  path("s1.json") + " > " + path("cert.txt") + " 2>&1";
  c.require(std::system(certify_cmd.c_str()) == 0, "certify run failed");
  const std::string cert_out = read_text_file(path("cert.txt"));
  c.require(cert_out.find("yes") != std::string::npos,
            "certify did not accept the emitted solution");

  const std::string bench_args =
      "bench --agents 2,3 --preset paper-eq --trials 3 --seed 9 --no-timing --out ";
  c.require(run_cli(cli, bench_args + path("b1.csv")) == 0, "bench run 1 failed");
  c.require(run_cli(cli, bench_args + path("b2.csv")) == 0, "bench run 2 failed");
  c.require(same_bytes(path("b1.csv"), path("b2.csv")), "bench CSVs differ");

  const std::string mpc_args =
      "mpc --agents 2 --horizon 5 --steps 5 --seed 4 --no-timing --out ";
  c.require(run_cli(cli, mpc_args + path("t1.csv")) == 0, "mpc run 1 failed");
  c.require(run_cli(cli, mpc_args + path("t2.csv")) == 0, "mpc run 2 failed");
  c.require(same_bytes(path("t1.csv"), path("t2.csv")), "trace CSVs differ");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <path-to-cli>\n");
    return 2;
  }

  criterion1_worked_instance();
  criterion2_oracle_equivalence();
  criterion3_invariant_suite();
  criterion4_potential_games();
  criterion5_cross_reformulation();
  criterion6_gtmpc();
  criterion7_scaling_sweep();
  criterion8_determinism(argv[1]);

  if (g_failures == 0) {
    std::printf("all acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criteria FAILED\n", g_failures);
  return 1;
}
