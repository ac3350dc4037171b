#include "goldnash/instance_gen.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "goldnash/certify.hpp"
#include "goldnash/lcp.hpp"
#include "goldnash/rng.hpp"

namespace goldnash {

GenConfig benchmark_preset(int N, std::uint64_t seed, bool with_equalities) {
  GenConfig cfg;
  cfg.N = N;
  cfg.n_per_agent = 5;
  cfg.n_coupling = N;
  cfg.box_bounds = true;
  cfg.q = with_equalities ? N / 2 : 0;
  cfg.seed = seed;
  return cfg;
}

GeneratedInstance random_instance(const GenConfig& cfg) {
  SplitMix64 rng(cfg.seed);
  const int n = cfg.joint_dim();
  const int nc = cfg.coupling_rows();

  std::vector<Matrix> Qt(cfg.N);
  for (int i = 0; i < cfg.N; ++i) {
    Matrix B(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) B(r, c) = rng.normal();
    const Matrix BtB = B.transpose() * B;
    Qt[i] = 0.5 * (BtB + BtB.transpose());
  }

  // Shift every Hessian so the assembled pseudogradient is strongly monotone:
  // adding alpha I to each Q~_i adds alpha I to G~.
  Matrix Gt = Matrix::Zero(n, n);
  for (int i = 0; i < cfg.N; ++i) {
    Gt.middleRows(i * cfg.n_per_agent, cfg.n_per_agent) =
        Qt[i].middleRows(i * cfg.n_per_agent, cfg.n_per_agent);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (Gt + Gt.transpose()), Eigen::EigenvaluesOnly);
  const double shift = std::max(-eig.eigenvalues().minCoeff(), 0.0) + cfg.shift_margin;

  std::vector<PlayerCost> players(cfg.N);
  for (int i = 0; i < cfg.N; ++i) {
    players[i].Q = Qt[i] + shift * Matrix::Identity(n, n);
    players[i].block_size = cfg.n_per_agent;
  }
  for (int i = 0; i < cfg.N; ++i) {
    players[i].c = Vector(n);
    for (int j = 0; j < n; ++j) players[i].c(j) = rng.normal(0.0, cfg.c_stddev);
  }

  GeneratedInstance inst;
  if (cfg.box_bounds) {
    inst.upper = Vector(n);
    inst.lower = Vector(n);
    for (int j = 0; j < n; ++j) inst.upper(j) = rng.uniform(cfg.upper_lo, cfg.upper_hi);
    for (int j = 0; j < n; ++j) inst.lower(j) = rng.uniform(cfg.lower_lo, cfg.lower_hi);
  }

  Matrix A_coupling(nc, n);
  for (int r = 0; r < nc; ++r)
    for (int c = 0; c < n; ++c) A_coupling(r, c) = rng.normal();
  Matrix E(cfg.q, n);
  for (int r = 0; r < cfg.q; ++r)
    for (int c = 0; c < n; ++c) E(r, c) = rng.normal();

  inst.x0 = Vector(n);
  for (int j = 0; j < n; ++j) {
    inst.x0(j) = cfg.box_bounds ? rng.uniform(inst.lower(j), inst.upper(j))
                                : rng.uniform(-1.0, 1.0);
  }

  const int n_box = cfg.box_bounds ? 2 * n : 0;
  SharedConstraints C;
  C.A = Matrix::Zero(n_box + nc, n);
  C.b = Vector::Zero(n_box + nc);
  if (cfg.box_bounds) {
    for (int j = 0; j < n; ++j) {
      C.A(j, j) = 1.0;
      C.b(j) = inst.upper(j);
      C.A(n + j, j) = -1.0;
      C.b(n + j) = -inst.lower(j);
    }
  }
  if (nc > 0) {
    C.A.bottomRows(nc) = A_coupling;
    Vector slack(nc);
    for (int r = 0; r < nc; ++r) slack(r) = rng.uniform(cfg.slack_lo, cfg.slack_hi);
    C.b.tail(nc) = A_coupling * inst.x0 + slack;
  }
  C.E = E;
  C.f = cfg.q > 0 ? Vector(E * inst.x0) : Vector(0);

  inst.game = make_game(std::move(players), std::move(C));
  return inst;
}

LQGame random_game(const GenConfig& cfg) {
  return random_instance(cfg).game;
}

const std::vector<std::string>& known_solvers() {
  static const std::vector<std::string> names = {"goldnash", "lemke", "lemke_dual"};
  return names;
}

NamedSolveOutcome run_named_solver(const std::string& name, const GeneratedInstance& inst,
                                   const SolverOptions& options) {
  NamedSolveOutcome out;
  if (name == "goldnash") {
    out.result = solve(inst.game, options);
  } else if (name == "lemke_dual") {
    out.result = solve_via_lemke(inst.game, LemkeVariant::dual);
  } else if (name == "lemke") {
    if (inst.game.constraints.q() > 0 || inst.lower.size() != inst.game.n) {
      out.applicable = false;
      return out;
    }
    out.result = solve_via_lemke(inst.game, LemkeVariant::primal, inst.lower);
  } else {
    throw Error("unknown solver '" + name + "'");
  }
  return out;
}

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace

BenchResult benchmark_sweep(const std::vector<GenConfig>& sizes, int trials,
                            const std::vector<std::string>& solvers,
                            const SolverOptions& options) {
  BenchResult result;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  for (const auto& cfg : sizes) {
    SizeSummary summary;
    summary.config = cfg;

    std::vector<GeneratedInstance> instances(static_cast<std::size_t>(std::max(trials, 0)));
    std::vector<std::uint64_t> seeds(instances.size());
    for (int t = 0; t < trials; ++t) {
      GenConfig trial_cfg = cfg;
      trial_cfg.seed = SplitMix64::derive(cfg.seed, static_cast<std::uint64_t>(t));
      seeds[t] = trial_cfg.seed;
      instances[t] = random_instance(trial_cfg);
    }

    // Optimal solutions per solver per trial, for the disagreement figure.
    std::vector<std::vector<Vector>> xs(solvers.size(), std::vector<Vector>(instances.size()));

    for (std::size_t s = 0; s < solvers.size(); ++s) {
      const std::string& solver_name = solvers[s];
      SolverStats stats;
      stats.solver = solver_name;
      std::vector<double> times;
      double iter_sum = 0.0;

      if (trials > 0) {
        try {
          run_named_solver(solver_name, instances[0], options);  // warm-up
        } catch (const Error&) {
        }
      }

      for (int t = 0; t < trials; ++t) {
        BenchRow row;
        row.N = cfg.N;
        row.n = cfg.joint_dim();
        row.m = cfg.ineq_rows();
        row.q = cfg.q;
        row.solver = solver_name;
        row.trial = t;
        row.seed = seeds[t];
        row.kkt_resid = nan;

        const auto t0 = std::chrono::steady_clock::now();
        try {
          const NamedSolveOutcome out = run_named_solver(solver_name, instances[t], options);
          row.wall_ms = elapsed_ms(t0);
          if (!out.applicable) {
            row.status = "inapplicable";
            row.wall_ms = 0.0;
            ++stats.inapplicable;
          } else {
            row.status = to_string(out.result.status);
            row.iterations = out.result.iterations;
            ++stats.runs;
            times.push_back(row.wall_ms);
            iter_sum += out.result.iterations;
            const Pseudogradient F = assemble_pseudogradient(instances[t].game);
            row.kkt_resid = kkt_residuals(instances[t].game, F, out.result.x, out.result.lambda,
                                          out.result.nu)
                                .max();
            if (out.result.status == SolveStatus::optimal) {
              ++stats.successes;
              xs[s][t] = out.result.x;
            }
          }
        } catch (const Error& e) {
          row.wall_ms = elapsed_ms(t0);
          row.status = std::string("error:") + e.what();
          ++stats.runs;
          times.push_back(row.wall_ms);
        }
        result.rows.push_back(std::move(row));
      }

      if (!times.empty()) {
        stats.mean_ms = 0.0;
        stats.min_ms = times.front();
        stats.max_ms = times.front();
        for (double v : times) {
          stats.mean_ms += v;
          stats.min_ms = std::min(stats.min_ms, v);
          stats.max_ms = std::max(stats.max_ms, v);
        }
        stats.mean_ms /= static_cast<double>(times.size());
        stats.median_ms = median(times);
        stats.mean_iterations = stats.runs > 0 ? iter_sum / stats.runs : 0.0;
      }
      summary.stats.push_back(std::move(stats));
    }

    for (int t = 0; t < trials; ++t) {
      for (std::size_t a = 0; a < solvers.size(); ++a) {
        for (std::size_t bidx = a + 1; bidx < solvers.size(); ++bidx) {
          if (xs[a][t].size() == 0 || xs[bidx][t].size() == 0) continue;
          summary.max_x_disagreement = std::max(
              summary.max_x_disagreement, inf_norm(Vector(xs[a][t] - xs[bidx][t])));
        }
      }
    }
    result.summaries.push_back(std::move(summary));
  }
  return result;
}

std::string format_bench_summary(const BenchResult& result) {
  std::ostringstream os;
  os << "N      n    m    q";
  if (!result.summaries.empty()) {
    for (const auto& st : result.summaries.front().stats) {
      os << "  " << st.solver << "(mean ms)";
    }
  }
  os << "  max_x_disagreement\n";
  for (const auto& sz : result.summaries) {
    os << sz.config.N << "  " << sz.config.joint_dim() << "  " << sz.config.ineq_rows() << "  "
       << sz.config.q;
    for (const auto& st : sz.stats) {
      if (st.runs == 0 && st.inapplicable > 0) {
        os << "  --";
      } else {
        os << "  " << st.mean_ms;
      }
    }
    os << "  " << sz.max_x_disagreement << "\n";
  }
  return os.str();
}

}  // namespace goldnash
