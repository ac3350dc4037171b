#include <doctest.h>

#include "goldnash/certify.hpp"
#include "goldnash/lcp.hpp"
#include "goldnash/rng.hpp"
#include "support.hpp"

using namespace goldnash;
using testsupport::gex_capped;
using testsupport::gex_game;
using testsupport::random_small_instance;

TEST_CASE("build_primal_lcp on the worked example") {
  const LQGame game = gex_capped();
  const Pseudogradient F = assemble_pseudogradient(game);
  const Vector lb = Vector::Constant(2, -10.0);
  const LCPInstance lcp = build_primal_lcp(game, F, lb);

  Matrix M_expected(3, 3);
  M_expected << 2, 1, 1, 0, 2, 1, -1, -1, 0;
  CHECK(lcp.M.isApprox(M_expected));
  CHECK(lcp.qv(0) == doctest::Approx(-31.0));
  CHECK(lcp.qv(1) == doctest::Approx(-21.0));
  CHECK(lcp.qv(2) == doctest::Approx(20.5));
}

TEST_CASE("build_primal_lcp rejects equality-constrained games") {
  const LQGame game = gex_game(Matrix(0, 2), Vector(0), (Matrix(1, 2) << 1, -1).finished(),
                               Vector::Zero(1));
  const Pseudogradient F = assemble_pseudogradient(game);
  CHECK_THROWS_AS(build_primal_lcp(game, F, Vector::Zero(2)), HasEqualities);
  CHECK_THROWS_AS(build_primal_lcp(gex_capped(), assemble_pseudogradient(gex_capped()),
                                   Vector::Zero(1)),
                  NoBounds);
}

TEST_CASE("build_dual_lcp on the worked example") {
  const LQGame game = gex_capped();
  const Pseudogradient F = assemble_pseudogradient(game);
  const LCPInstance lcp = build_dual_lcp(game, F);
  REQUIRE(lcp.dim() == 1);
  CHECK(lcp.M(0, 0) == doctest::Approx(0.75).epsilon(1e-13));
  CHECK(lcp.qv(0) == doctest::Approx(-0.25).epsilon(1e-13));

  const LemkeResult lr = lemke_solve(lcp);
  REQUIRE(lr.status == LemkeStatus::solved);
  CHECK(lr.z(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("dual reformulation respects a nonzero equality right-hand side") {
  // Equality x1 - x2 = 0.2 with a loose inequality: the LCP must sit at the
  // equality-constrained point, not its mirror image.
  const Matrix E = (Matrix(1, 2) << 1, -1).finished();
  const Vector f = Vector::Constant(1, 0.2);
  const LQGame game =
      testsupport::gex_game((Matrix(1, 2) << 1, 1).finished(), Vector::Constant(1, 5.0), E, f);
  const Pseudogradient F = assemble_pseudogradient(game);
  const KKTBlockSolve expected = solve_equality_kkt(lu_factor(F.G), E, F.g, f);

  const SolveResult res = solve_via_lemke(game, LemkeVariant::dual);
  REQUIRE(res.status == SolveStatus::optimal);
  CHECK(inf_norm(Vector(res.x - expected.x)) <= 1e-10);
  CHECK(inf_norm(Vector(E * res.x - f)) <= 1e-10);
  CHECK(kkt_residuals(game, F, res.x, res.lambda, res.nu).max() <= 1e-10);
}

TEST_CASE("dual recovery at an inactive constraint") {
  const LQGame game = gex_game((Matrix(1, 2) << 1, 1).finished(), Vector::Constant(1, 1.0),
                               (Matrix(1, 2) << 1, -1).finished(), Vector::Zero(1));
  const SolveResult res = solve_via_lemke(game, LemkeVariant::dual);
  REQUIRE(res.status == SolveStatus::optimal);
  CHECK(inf_norm(res.lambda) <= 1e-12);
  CHECK(res.x(0) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(res.x(1) == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("lemke_solve cases") {
  SUBCASE("nonnegative q solves with zero pivots") {
    LCPInstance lcp;
    lcp.M = Matrix::Identity(2, 2);
    lcp.qv = (Vector(2) << 0.5, 1.0).finished();
    const LemkeResult lr = lemke_solve(lcp);
    CHECK(lr.status == LemkeStatus::solved);
    CHECK(lr.pivots == 0);
    CHECK(inf_norm(lr.z) == 0.0);
    CHECK(lr.w.isApprox(lcp.qv));
  }
  SUBCASE("scalar pivot") {
    LCPInstance lcp;
    lcp.M = Matrix::Constant(1, 1, 0.75);
    lcp.qv = Vector::Constant(1, -0.25);
    const LemkeResult lr = lemke_solve(lcp);
    REQUIRE(lr.status == LemkeStatus::solved);
    CHECK(lr.z(0) == doctest::Approx(1.0 / 3.0));
    CHECK(std::abs(lr.w(0)) <= 1e-12);
  }
  SUBCASE("ray termination on an infeasible problem") {
    LCPInstance lcp;
    lcp.M = (Matrix(2, 2) << 0, -1, 0, 0).finished();
    lcp.qv = Vector::Constant(2, -1.0);
    CHECK(lemke_solve(lcp).status == LemkeStatus::ray_termination);
  }
}

TEST_CASE("lemke solutions satisfy the complementarity certificate") {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = 2 + static_cast<int>(rng.next_u64() % 6);
    Matrix B(k, k);
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) B(r, c) = rng.normal();
    LCPInstance lcp;
    lcp.M = B.transpose() * B + 0.1 * Matrix::Identity(k, k);
    lcp.qv = Vector(k);
    for (int i = 0; i < k; ++i) lcp.qv(i) = rng.normal();

    const LemkeResult lr = lemke_solve(lcp);
    REQUIRE(lr.status == LemkeStatus::solved);
    const double tol = 1e-9 * std::max(1.0, max_abs(lcp.M)) *
                       std::max(1.0, inf_norm(lr.z));
    CHECK(lr.z.minCoeff() >= -tol);
    CHECK(lr.w.minCoeff() >= -tol);
    for (int i = 0; i < k; ++i) CHECK(std::min(lr.z(i), lr.w(i)) <= tol);
    CHECK(inf_norm(Vector(lr.w - (lcp.M * lr.z + lcp.qv))) <= 1e-7 * std::max(1.0, max_abs(lcp.M)));
  }
}

TEST_CASE("dual LCP matrix has nonnegative quadratic form under monotonicity") {
  SplitMix64 rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = random_small_instance(15000 + trial, /*with_equality_choice=*/false);
    const Pseudogradient F = assemble_pseudogradient(inst.game);
    const LCPInstance lcp = build_dual_lcp(inst.game, F);
    for (int rep = 0; rep < 10; ++rep) {
      Vector v(lcp.dim());
      for (int i = 0; i < v.size(); ++i) v(i) = rng.normal();
      CHECK(v.dot(lcp.M * v) >= -1e-10 * max_abs(lcp.M) * v.squaredNorm());
    }
  }
}

TEST_CASE("primal and dual reformulations recover the same equilibrium") {
  int with_bounds = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = random_small_instance(16000 + trial, /*with_equality_choice=*/false);
    if (!inst.has_bounds) continue;
    ++with_bounds;
    const SolveResult primal = solve_via_lemke(inst.game, LemkeVariant::primal, inst.lower);
    const SolveResult dual = solve_via_lemke(inst.game, LemkeVariant::dual);
    REQUIRE(primal.status == SolveStatus::optimal);
    REQUIRE(dual.status == SolveStatus::optimal);
    CHECK(inf_norm(Vector(primal.x - dual.x)) <= 1e-6);
  }
  CHECK(with_bounds >= 50);
}

TEST_CASE("solve_via_lemke matches the dual active-set on the worked instance") {
  const LQGame game = gex_capped();
  const SolveResult primal =
      solve_via_lemke(game, LemkeVariant::primal, Vector::Constant(2, -10.0));
  const SolveResult dual = solve_via_lemke(game, LemkeVariant::dual);
  for (const auto* res : {&primal, &dual}) {
    REQUIRE(res->status == SolveStatus::optimal);
    CHECK(res->x(0) == doctest::Approx(1.0 / 6.0).epsilon(1e-9));
    CHECK(res->x(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  }
}

TEST_CASE("dual variant handles games without inequality rows") {
  const LQGame game = testsupport::gex_game(Matrix(0, 2), Vector(0),
                                            (Matrix(1, 2) << 1, -1).finished(), Vector::Zero(1));
  const SolveResult res = solve_via_lemke(game, LemkeVariant::dual);
  REQUIRE(res.status == SolveStatus::optimal);
  CHECK(res.x(0) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(res.x(1) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(res.nu(0) == doctest::Approx(-0.2).epsilon(1e-12));
}

TEST_CASE("solve_via_lemke flags infeasible games through ray termination") {
  Matrix A(2, 2);
  A << 1, 0, -1, 0;
  const LQGame game = gex_game(A, Vector::Constant(2, -1.0));
  CHECK(solve_via_lemke(game, LemkeVariant::dual).status == SolveStatus::infeasible);
  CHECK(solve_via_lemke(game, LemkeVariant::primal, Vector::Constant(2, -10.0)).status ==
        SolveStatus::infeasible);
}

TEST_CASE("primal lemke certifies when bounds are active rows of A") {
  for (int trial = 0; trial < 30; ++trial) {
    const auto inst = random_small_instance(17000 + trial, /*with_equality_choice=*/false);
    if (!inst.has_bounds) continue;
    const Pseudogradient F = assemble_pseudogradient(inst.game);
    const SolveResult res = solve_via_lemke(inst.game, LemkeVariant::primal, inst.lower);
    REQUIRE(res.status == SolveStatus::optimal);
    CHECK(kkt_residuals(inst.game, F, res.x, res.lambda, res.nu).max() <= 1e-8);
  }
}
