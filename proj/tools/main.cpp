#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "goldnash/certify.hpp"
#include "goldnash/gtmpc.hpp"
#include "goldnash/instance_gen.hpp"
#include "goldnash/io.hpp"
#include "goldnash/lcp.hpp"
#include "goldnash/rng.hpp"
#include "goldnash/solver.hpp"

namespace gn = goldnash;

namespace {

void print_vector(const std::string& name, const gn::Vector& v) {
  std::cout << name << ": [";
  for (int i = 0; i < v.size(); ++i) {
    if (i) std::cout << ", ";
    std::cout << gn::format_number(v(i));
  }
  std::cout << "]\n";
}

void print_residuals(const gn::KKTResiduals& r) {
  std::cout << "kkt residuals: stationarity=" << gn::format_number(r.stationarity)
            << " eq_feas=" << gn::format_number(r.eq_feas)
            << " ineq_feas=" << gn::format_number(r.ineq_feas)
            << " dual_feas=" << gn::format_number(r.dual_feas)
            << " complementarity=" << gn::format_number(r.complementarity) << "\n";
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string tok = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
    out.push_back(std::stoi(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<std::string> parse_name_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t comma = text.find(',', pos);
    out.push_back(text.substr(pos, comma == std::string::npos ? comma : comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string canonical_solver(std::string name) {
  if (name == "lemke-dual" || name == "lemke_D") name = "lemke_dual";
  return name;
}

int run_solve(const std::string& input, const std::string& solver_arg, double eps, int max_iters,
              const std::optional<double>& lbound, const std::string& out_path, bool verbose) {
  const gn::LQGame game = gn::read_instance_file(input);
  const gn::ValidationReport report = gn::validate_game(game);
  if (!report.ok()) {
    std::cerr << "invalid game:";
    for (const auto& msg : report.messages) std::cerr << " " << msg << ";";
    std::cerr << "\n";
    return 1;
  }
  if (verbose) {
    std::cerr << "validated: n=" << game.n << " m=" << game.constraints.m()
              << " q=" << game.constraints.q()
              << " min_eig(Gs)=" << gn::format_number(report.min_eig_Gs) << "\n";
    for (const auto& msg : report.messages) std::cerr << "note: " << msg << "\n";
  }
  const gn::Pseudogradient F = gn::assemble_pseudogradient(game);

  gn::SolverOptions options;
  options.eps = eps;
  options.max_iters = max_iters;

  std::vector<std::string> names;
  if (solver_arg == "all") {
    names = {"goldnash", "lemke_dual"};
    if (game.constraints.q() == 0 && lbound.has_value()) names.push_back("lemke");
  } else {
    names = {canonical_solver(solver_arg)};
  }

  std::vector<gn::Vector> solutions;
  bool first = true;
  for (const auto& name : names) {
    gn::SolveResult res;
    if (name == "goldnash") {
      res = gn::solve(game, options);
    } else if (name == "lemke_dual") {
      res = gn::solve_via_lemke(game, gn::LemkeVariant::dual);
    } else if (name == "lemke") {
      if (!lbound.has_value()) {
        std::cerr << "solver 'lemke' needs --lbound for the bound substitution\n";
        return 1;
      }
      res = gn::solve_via_lemke(game, gn::LemkeVariant::primal,
                                gn::Vector::Constant(game.n, *lbound));
    } else {
      std::cerr << "unknown solver '" << name << "'\n";
      return 1;
    }

    std::cout << "solver: " << name << "\n";
    std::cout << "status: " << gn::to_string(res.status) << "\n";
    std::cout << "iterations: " << res.iterations << "\n";
    print_vector("x", res.x);
    print_vector("lambda", res.lambda);
    print_vector("nu", res.nu);
    print_residuals(gn::kkt_residuals(game, F, res.x, res.lambda, res.nu));
    if (res.status == gn::SolveStatus::optimal) solutions.push_back(res.x);
    if (first && !out_path.empty()) {
      gn::write_solution_file({res.x, res.lambda, res.nu}, out_path);
    }
    first = false;
    if (names.size() > 1) std::cout << "\n";
  }

  if (names.size() > 1) {
    double disagreement = 0.0;
    for (std::size_t a = 0; a < solutions.size(); ++a) {
      for (std::size_t b = a + 1; b < solutions.size(); ++b) {
        disagreement =
            std::max(disagreement, gn::inf_norm(gn::Vector(solutions[a] - solutions[b])));
      }
    }
    std::cout << "max cross-solver x disagreement: " << gn::format_number(disagreement) << "\n";
  }
  return 0;
}

int run_certify(const std::string& input, const std::string& solution_path, double tol) {
  const gn::LQGame game = gn::read_instance_file(input);
  const gn::Solution sol = gn::read_solution_file(solution_path);
  const gn::Pseudogradient F = gn::assemble_pseudogradient(game);
  const gn::KKTResiduals r = gn::kkt_residuals(game, F, sol.x, sol.lambda, sol.nu);
  print_residuals(r);
  std::cout << "max residual: " << gn::format_number(r.max()) << "\n";
  std::cout << "v-gne within " << gn::format_number(tol) << ": "
            << (gn::is_vgne(r, tol) ? "yes" : "no") << "\n";
  return 0;
}

int run_gen(int N, int vars_per_agent, int equalities, int coupling, bool no_box,
            std::uint64_t seed, const std::string& out_path) {
  gn::GenConfig cfg;
  cfg.N = N;
  cfg.n_per_agent = vars_per_agent;
  cfg.q = equalities;
  cfg.n_coupling = coupling;
  cfg.box_bounds = !no_box;
  cfg.seed = seed;
  const gn::LQGame game = gn::random_game(cfg);
  const std::string text = gn::instance_to_json(game);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    gn::write_text_file(text, out_path);
    std::cout << "wrote " << out_path << " (N=" << N << ", n=" << game.n
              << ", m=" << game.constraints.m() << ", q=" << game.constraints.q() << ")\n";
  }
  return 0;
}

int run_bench(const std::string& agents, const std::string& preset, int trials,
              std::uint64_t seed, const std::string& solvers_arg, const std::string& out_path,
              bool no_timing, bool verbose) {
  const bool with_eq = preset == "paper-eq";
  if (!with_eq && preset != "paper") {
    std::cerr << "unknown preset '" << preset << "' (expected paper or paper-eq)\n";
    return 1;
  }

  std::vector<gn::GenConfig> sizes;
  const std::vector<int> Ns = parse_int_list(agents);
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    sizes.push_back(gn::benchmark_preset(Ns[i], gn::SplitMix64::derive(seed, i), with_eq));
  }

  std::vector<std::string> solvers;
  if (!solvers_arg.empty()) {
    for (auto& s : parse_name_list(solvers_arg)) solvers.push_back(canonical_solver(s));
  } else if (with_eq) {
    solvers = {"goldnash", "lemke_dual"};  // the primal LCP column does not apply
  } else {
    solvers = {"goldnash", "lemke", "lemke_dual"};
  }

  if (verbose) {
    for (const auto& cfg : sizes) {
      std::cerr << "size N=" << cfg.N << ": n=" << cfg.joint_dim() << " m=" << cfg.ineq_rows()
                << " q=" << cfg.q << " seed=" << cfg.seed << "\n";
    }
  }
  const gn::BenchResult result = gn::benchmark_sweep(sizes, trials, solvers);
  const std::string csv = gn::bench_csv(result.rows, !no_timing);
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    gn::write_text_file(csv, out_path);
  }
  std::cout << gn::format_bench_summary(result);
  return 0;
}

int run_mpc(int N, int horizon, int steps, std::uint64_t seed, const std::string& solver,
            const std::string& out_path, bool no_timing, bool verbose) {
  const int ny = 2 * N;
  const auto specs = gn::benchmark_agent_specs(N, ny, horizon);
  std::vector<std::string> notes;
  const gn::LTIPlant plant = gn::benchmark_plant(seed, N, specs, &notes);
  for (const auto& note : notes) std::cerr << note << "\n";
  if (verbose) {
    std::cerr << "plant: nx=" << plant.nx() << " nu=" << plant.nu() << " ny=" << plant.ny()
              << ", horizon " << horizon << ", " << steps << " steps, solver " << solver << "\n";
  }

  const gn::Vector r = gn::benchmark_setpoint(ny);
  const gn::ClosedLoopTrace trace =
      gn::closed_loop(plant, specs, gn::Vector::Zero(plant.nx()), steps,
                      canonical_solver(solver), [&](int) { return r; });

  const std::string csv = gn::trace_csv(trace, !no_timing);
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    gn::write_text_file(csv, out_path);
  }

  int optimal_steps = 0;
  for (const auto& s : trace.steps) {
    if (s.status == "optimal") ++optimal_steps;
  }
  std::cout << "steps: " << trace.steps.size() << ", optimal: " << optimal_steps << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"v-GNE solvers for linear-quadratic games with shared affine constraints"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "extra diagnostics on stderr");

  auto* solve_cmd = app.add_subcommand("solve", "solve an instance file");
  std::string solve_input, solve_solver = "goldnash", solve_out;
  double solve_eps = 1e-8;
  int solve_max_iters = 0;
  double lbound_value = 0.0;
  solve_cmd->add_option("--input", solve_input, "instance file (JSON)")->required();
  solve_cmd->add_option("--solver", solve_solver, "goldnash | lemke | lemke-dual | all");
  solve_cmd->add_option("--eps", solve_eps, "feasibility threshold");
  solve_cmd->add_option("--max-iters", solve_max_iters, "iteration budget (0 = auto)");
  auto* lbound_opt =
      solve_cmd->add_option("--lbound", lbound_value, "uniform lower bound for the primal LCP");
  solve_cmd->add_option("--out", solve_out, "write the solution file here");

  auto* certify_cmd = app.add_subcommand("certify", "check a solution file against an instance");
  std::string cert_input, cert_solution;
  double cert_tol = 1e-8;
  certify_cmd->add_option("--input", cert_input, "instance file")->required();
  certify_cmd->add_option("--solution", cert_solution, "solution file")->required();
  certify_cmd->add_option("--tol", cert_tol, "acceptance tolerance");

  auto* gen_cmd = app.add_subcommand("gen", "generate a random instance file");
  int gen_N = 2, gen_vars = 5, gen_q = 0, gen_coupling = -1;
  bool gen_no_box = false;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen_cmd->add_option("--agents", gen_N, "number of players")->required();
  gen_cmd->add_option("--vars-per-agent", gen_vars, "variables per player");
  gen_cmd->add_option("--equalities", gen_q, "equality rows");
  gen_cmd->add_option("--coupling", gen_coupling, "dense coupling rows (-1 = agents)");
  gen_cmd->add_flag("--no-box", gen_no_box, "skip the box-bound rows");
  gen_cmd->add_option("--seed", gen_seed, "instance seed");
  gen_cmd->add_option("--out", gen_out, "output path (stdout when omitted)");

  auto* bench_cmd = app.add_subcommand("bench", "random-instance benchmark sweep (CSV)");
  std::string bench_agents = "2,3,5", bench_preset = "paper", bench_solvers, bench_out;
  int bench_trials = 10;
  std::uint64_t bench_seed = 0;
  bool bench_no_timing = false, bench_serial = false;
  bench_cmd->add_option("--agents", bench_agents, "comma list of agent counts");
  bench_cmd->add_option("--preset", bench_preset, "paper | paper-eq");
  bench_cmd->add_option("--trials", bench_trials, "instances per size");
  bench_cmd->add_option("--seed", bench_seed, "base seed");
  bench_cmd->add_option("--solvers", bench_solvers, "comma list (default depends on preset)");
  bench_cmd->add_option("--out", bench_out, "CSV path (stdout when omitted)");
  bench_cmd->add_flag("--no-timing", bench_no_timing,
                      "write wall_ms as 0 for byte-reproducible CSVs");
  bench_cmd->add_flag("--serial", bench_serial, "force serial trial execution (always on)");

  auto* mpc_cmd = app.add_subcommand("mpc", "closed-loop MPC benchmark (trace CSV)");
  int mpc_N = 3, mpc_T = 10, mpc_steps = 40;
  std::uint64_t mpc_seed = 0;
  std::string mpc_solver = "goldnash", mpc_out;
  bool mpc_no_timing = false;
  mpc_cmd->add_option("--agents", mpc_N, "number of agents");
  mpc_cmd->add_option("--horizon", mpc_T, "prediction horizon");
  mpc_cmd->add_option("--steps", mpc_steps, "closed-loop steps");
  mpc_cmd->add_option("--seed", mpc_seed, "plant seed");
  mpc_cmd->add_option("--solver", mpc_solver, "goldnash | lemke | lemke-dual");
  mpc_cmd->add_option("--out", mpc_out, "trace CSV path (stdout when omitted)");
  mpc_cmd->add_flag("--no-timing", mpc_no_timing, "write wall_ms as 0");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (solve_cmd->parsed()) {
      std::optional<double> lbound;
      if (lbound_opt->count() > 0) lbound = lbound_value;
      return run_solve(solve_input, solve_solver, solve_eps, solve_max_iters, lbound, solve_out,
                       verbose);
    }
    if (certify_cmd->parsed()) return run_certify(cert_input, cert_solution, cert_tol);
    if (gen_cmd->parsed()) {
      return run_gen(gen_N, gen_vars, gen_q, gen_coupling, gen_no_box, gen_seed, gen_out);
    }
    if (bench_cmd->parsed()) {
      return run_bench(bench_agents, bench_preset, bench_trials, bench_seed, bench_solvers,
                       bench_out, bench_no_timing, verbose);
    }
    if (mpc_cmd->parsed()) {
      return run_mpc(mpc_N, mpc_T, mpc_steps, mpc_seed, mpc_solver, mpc_out, mpc_no_timing,
                     verbose);
    }
  } catch (const gn::InvalidGame& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const gn::HasEqualities& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const gn::NoBounds& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const gn::DimensionMismatch& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const gn::IOError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "bad argument: " << e.what() << "\n";
    return 1;
  } catch (const gn::Error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
