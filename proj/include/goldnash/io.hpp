#pragma once

#include <string>
#include <vector>

#include "goldnash/game.hpp"
#include "goldnash/gtmpc.hpp"
#include "goldnash/instance_gen.hpp"
#include "goldnash/types.hpp"

namespace goldnash {

// All numeric output uses 17 significant digits so files round-trip exactly
// and identical inputs produce byte-identical outputs.
std::string format_number(double v);

// Instance files are JSON with top-level keys:
//   players: list of {"block_size": int, "Q": row-major nested arrays,
//                     "c": array}
//   A, b:    inequality rows (empty arrays allowed)
//   E, f:    equality rows, omitted when there are none
std::string instance_to_json(const LQGame& game);
LQGame instance_from_json(const std::string& text);
void write_instance_file(const LQGame& game, const std::string& path);
LQGame read_instance_file(const std::string& path);

struct Solution {
  Vector x;
  Vector lambda;
  Vector nu;
};

// Solution files: JSON with keys x, lambda, nu.
std::string solution_to_json(const Solution& sol);
Solution solution_from_json(const std::string& text);
void write_solution_file(const Solution& sol, const std::string& path);
Solution read_solution_file(const std::string& path);

// Header: N,n,m,q,solver,trial,seed,status,wall_ms,iterations,kkt_resid.
// include_timing=false zeroes wall_ms, giving byte-identical reruns.
std::string bench_csv(const std::vector<BenchRow>& rows, bool include_timing = true);

// First line is a sidecar comment with the column counts, then
// step,status,wall_ms,iterations followed by the flattened x, u, y, r, eps
// columns.
std::string trace_csv(const ClosedLoopTrace& trace, bool include_timing = true);

void write_text_file(const std::string& text, const std::string& path);
std::string read_text_file(const std::string& path);

}  // namespace goldnash
