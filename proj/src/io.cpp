#include "goldnash/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace goldnash {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void append_vector(std::string& out, const Vector& v) {
  out += '[';
  for (int i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_number(v(i));
  }
  out += ']';
}

void append_matrix(std::string& out, const Matrix& m) {
  out += '[';
  for (int r = 0; r < m.rows(); ++r) {
    if (r) out += ", ";
    out += '[';
    for (int c = 0; c < m.cols(); ++c) {
      if (c) out += ", ";
      out += format_number(m(r, c));
    }
    out += ']';
  }
  out += ']';
}

Matrix parse_matrix(const nlohmann::json& j, int expect_cols, const std::string& what) {
  if (!j.is_array()) throw IOError("instance file: " + what + " must be an array of rows");
  const int rows = static_cast<int>(j.size());
  if (rows == 0) return Matrix(0, expect_cols);
  const int cols = static_cast<int>(j.at(0).size());
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const auto& row = j.at(r);
    if (static_cast<int>(row.size()) != cols) {
      throw IOError("instance file: ragged rows in " + what);
    }
    for (int c = 0; c < cols; ++c) m(r, c) = row.at(c).get<double>();
  }
  return m;
}

Vector parse_vector(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array()) throw IOError("instance file: " + what + " must be an array");
  Vector v(static_cast<int>(j.size()));
  for (int i = 0; i < v.size(); ++i) v(i) = j.at(i).get<double>();
  return v;
}

}  // namespace

std::string instance_to_json(const LQGame& game) {
  std::string out = "{\n  \"players\": [\n";
  for (int i = 0; i < game.player_count(); ++i) {
    const auto& p = game.players[i];
    out += "    {\"block_size\": " + std::to_string(p.block_size) + ", \"Q\": ";
    append_matrix(out, p.Q);
    out += ", \"c\": ";
    append_vector(out, p.c);
    out += i + 1 < game.player_count() ? "},\n" : "}\n";
  }
  out += "  ],\n  \"A\": ";
  append_matrix(out, game.constraints.A);
  out += ",\n  \"b\": ";
  append_vector(out, game.constraints.b);
  if (game.constraints.q() > 0) {
    out += ",\n  \"E\": ";
    append_matrix(out, game.constraints.E);
    out += ",\n  \"f\": ";
    append_vector(out, game.constraints.f);
  }
  out += "\n}\n";
  return out;
}

LQGame instance_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IOError(std::string("instance file: invalid JSON: ") + e.what());
  }
  if (!j.contains("players") || !j["players"].is_array() || j["players"].empty()) {
    throw IOError("instance file: missing or empty 'players'");
  }

  std::vector<PlayerCost> players;
  int n = 0;
  for (const auto& pj : j["players"]) {
    PlayerCost p;
    if (!pj.contains("block_size") || !pj.contains("Q") || !pj.contains("c")) {
      throw IOError("instance file: each player needs block_size, Q, c");
    }
    p.block_size = pj["block_size"].get<int>();
    if (p.block_size <= 0) throw IOError("instance file: block_size must be positive");
    n += p.block_size;
    players.push_back(std::move(p));
  }
  for (std::size_t i = 0; i < players.size(); ++i) {
    const auto& pj = j["players"][i];
    players[i].Q = parse_matrix(pj["Q"], n, "player Q");
    players[i].c = parse_vector(pj["c"], "player c");
    if (players[i].Q.rows() != n || players[i].Q.cols() != n || players[i].c.size() != n) {
      throw IOError("instance file: player cost data must be sized by the joint dimension");
    }
  }

  SharedConstraints C;
  C.A = j.contains("A") ? parse_matrix(j["A"], n, "A") : Matrix(0, n);
  C.b = j.contains("b") ? parse_vector(j["b"], "b") : Vector(0);
  C.E = j.contains("E") ? parse_matrix(j["E"], n, "E") : Matrix(0, n);
  C.f = j.contains("f") ? parse_vector(j["f"], "f") : Vector(0);
  if (C.A.rows() != C.b.size() || C.E.rows() != C.f.size()) {
    throw IOError("instance file: constraint row counts disagree with right-hand sides");
  }
  if ((C.A.rows() > 0 && C.A.cols() != n) || (C.E.rows() > 0 && C.E.cols() != n)) {
    throw IOError("instance file: constraint column counts disagree with the joint dimension");
  }
  return make_game(std::move(players), std::move(C));
}

std::string solution_to_json(const Solution& sol) {
  std::string out = "{\n  \"x\": ";
  append_vector(out, sol.x);
  out += ",\n  \"lambda\": ";
  append_vector(out, sol.lambda);
  out += ",\n  \"nu\": ";
  append_vector(out, sol.nu);
  out += "\n}\n";
  return out;
}

Solution solution_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IOError(std::string("solution file: invalid JSON: ") + e.what());
  }
  Solution sol;
  if (!j.contains("x")) throw IOError("solution file: missing 'x'");
  sol.x = parse_vector(j["x"], "x");
  sol.lambda = j.contains("lambda") ? parse_vector(j["lambda"], "lambda") : Vector(0);
  sol.nu = j.contains("nu") ? parse_vector(j["nu"], "nu") : Vector(0);
  return sol;
}

std::string bench_csv(const std::vector<BenchRow>& rows, bool include_timing) {
  std::string out = "N,n,m,q,solver,trial,seed,status,wall_ms,iterations,kkt_resid\n";
  for (const auto& r : rows) {
    out += std::to_string(r.N) + ',' + std::to_string(r.n) + ',' + std::to_string(r.m) + ',' +
           std::to_string(r.q) + ',' + r.solver + ',' + std::to_string(r.trial) + ',' +
           std::to_string(r.seed) + ',' + r.status + ',' +
           format_number(include_timing ? r.wall_ms : 0.0) + ',' +
           std::to_string(r.iterations) + ',' + format_number(r.kkt_resid) + '\n';
  }
  return out;
}

std::string trace_csv(const ClosedLoopTrace& trace, bool include_timing) {
  std::string out = "# nx=" + std::to_string(trace.nx) + " nu=" + std::to_string(trace.nu) +
                    " ny=" + std::to_string(trace.ny) + " neps=" + std::to_string(trace.neps) +
                    "\n";
  out += "step,status,wall_ms,iterations";
  auto cols = [&](const char* base, int count) {
    for (int i = 0; i < count; ++i) out += ',' + std::string(base) + std::to_string(i);
  };
  cols("x", trace.nx);
  cols("u", trace.nu);
  cols("y", trace.ny);
  cols("r", trace.ny);
  cols("eps", trace.neps);
  out += '\n';

  for (const auto& s : trace.steps) {
    out += std::to_string(s.step) + ',' + s.status + ',' +
           format_number(include_timing ? s.wall_ms : 0.0) + ',' + std::to_string(s.iterations);
    auto push = [&](const Vector& v) {
      for (int i = 0; i < v.size(); ++i) out += ',' + format_number(v(i));
    };
    push(s.x);
    push(s.u);
    push(s.y);
    push(s.r);
    push(s.eps);
    out += '\n';
  }
  return out;
}

void write_text_file(const std::string& text, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IOError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw IOError("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IOError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_instance_file(const LQGame& game, const std::string& path) {
  write_text_file(instance_to_json(game), path);
}

LQGame read_instance_file(const std::string& path) {
  return instance_from_json(read_text_file(path));
}

void write_solution_file(const Solution& sol, const std::string& path) {
  write_text_file(solution_to_json(sol), path);
}

Solution read_solution_file(const std::string& path) {
  return solution_from_json(read_text_file(path));
}

}  // namespace goldnash
