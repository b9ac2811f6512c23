#include "fixtures.hpp"

#include "ptgne/bench.hpp"
#include "ptgne/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace ptgne;

namespace {

/// dJ_i/dx_i by central differences on the cost functions alone.
Vec cost_gradient(const GameProblem& p, const Vec& x) {
  Vec out(p.dims.n());
  for (int i = 0; i < p.dims.agents(); ++i)
    for (int c = 0; c < p.dims.primal_dims[i]; ++c) {
      const int k = p.dims.primal_offset(i) + c;
      const double h = 1e-5 * std::max(1.0, std::abs(x(k)));
      Vec xp = x, xm = x;
      xp(k) += h;
      xm(k) -= h;
      out(k) = (p.costs[i](xp) - p.costs[i](xm)) / (2 * h);
    }
  return out;
}

}  // namespace

TEST_CASE("Cournot pseudo-gradient and its Jacobian from the stated costs") {
  const CournotInstance inst = build_cournot({});
  const GameProblem& p = inst.problem;
  const CournotConfig& c = inst.config;
  REQUIRE(p.dims.n() == 20);
  CHECK(p.dims.ineq_count == 1);
  CHECK(p.dims.eq_count == 1);
  for (int i = 0; i < 20; ++i) {
    CHECK(inst.alpha(i) >= 1.0);
    CHECK(inst.alpha(i) <= 2.0);
    CHECK(inst.beta(i) >= 5.0);
    CHECK(inst.beta(i) <= 10.0);
    CHECK(inst.r(i) >= 0.8);
    CHECK(inst.r(i) <= 1.2);
  }
  Rng rng(8);
  for (int k = 0; k < 10; ++k) {
    Vec x(20);
    for (int j = 0; j < 20; ++j) x(j) = rng.uniform(0.0, 5.0);
    CHECK(relative_matrix_error(cost_gradient(p, x), p.pseudo_gradient(x)) < 1e-8);
  }
  const Mat expected = Mat(inst.alpha.asDiagonal()) * 2.0 +
                       c.elasticity * (Mat::Ones(20, 20) + Mat::Identity(20, 20));
  CHECK(relative_matrix_error(p.pseudo_gradient_jacobian(Vec::Zero(20)), expected) < 1e-15);
  const Mat sym = 0.5 * (expected + expected.transpose());
  CHECK(Eigen::SelfAdjointEigenSolver<Mat>(sym).eigenvalues().minCoeff() > 0.0);
  CHECK(p.eq_matrix == inst.r.transpose());
  CHECK(p.eq_rhs(0) == 40.0);
  CHECK(p.ineq.value(Vec::Ones(20))(0) == doctest::Approx(-20.0));
}

TEST_CASE("Cournot draws are seeded and explicit coefficients replay exactly") {
  CournotConfig cfg;
  cfg.seed = 11;
  const CournotInstance a = build_cournot(cfg);
  const CournotInstance b = build_cournot(cfg);
  CHECK(a.alpha == b.alpha);
  const CournotInstance c = build_cournot(cfg, a.alpha, a.beta, a.r);
  const Vec x = Vec::LinSpaced(20, 0.5, 3.0);
  CHECK(c.problem.pseudo_gradient(x) == a.problem.pseudo_gradient(x));
  cfg.seed = 12;
  CHECK(build_cournot(cfg).alpha != a.alpha);
}

TEST_CASE("sensor game from the stated costs") {
  const CommGraph graph = benchmark_tree(20, 1);
  const SensorInstance inst = build_sensor({}, graph);
  const GameProblem& p = inst.problem;
  REQUIRE(p.dims.n() == 40);
  CHECK(p.dims.eq_count == 0);
  CHECK(inst.config.power_budget() == 2000.0);
  for (int i = 0; i < 20; ++i) {
    CHECK(inst.targets.col(i).norm() == doctest::Approx(15.0));
    const double angle = std::atan2(inst.targets(1, i), inst.targets(0, i));
    const double expected = 2 * std::numbers::pi * i / 20;
    CHECK(std::remainder(angle - expected, 2 * std::numbers::pi) == doctest::Approx(0.0).epsilon(1e-12));
  }
  Rng rng(9);
  for (int k = 0; k < 10; ++k) {
    Vec x(40);
    for (int j = 0; j < 40; ++j) x(j) = rng.uniform(-12.0, 12.0);
    CHECK(relative_matrix_error(cost_gradient(p, x), p.pseudo_gradient(x)) < 1e-8);
    const Mat fd = finite_difference_jacobian(p.pseudo_gradient, x);
    CHECK(relative_matrix_error(fd, p.pseudo_gradient_jacobian(x)) < 1e-6);
    CHECK(p.ineq.value(x)(0) == doctest::Approx(x.squaredNorm() - 2000.0));
  }
  // pairwise coupling follows the graph: I + L (x) I_2
  Mat expected = Mat::Identity(40, 40);
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j)
      expected.block(2 * i, 2 * j, 2, 2) += graph.laplacian()(i, j) * Mat::Identity(2, 2);
  CHECK(relative_matrix_error(p.pseudo_gradient_jacobian(Vec::Zero(40)), expected) < 1e-15);
  CHECK(p.ineq.hessians(Vec::Zero(40))[0] == 2.0 * Mat::Identity(40, 40));
  CHECK((*p.ineq.known_min)(0) == -2000.0);
}

TEST_CASE("sensor unconstrained optimum violates the power budget") {
  const SensorInstance inst = build_sensor({}, benchmark_tree(20, 1));
  const GameProblem& p = inst.problem;
  // F is affine: F(x) = J x + F(0)
  const Mat jac = p.pseudo_gradient_jacobian(Vec::Zero(40));
  const Vec x_free = jac.fullPivLu().solve(-p.pseudo_gradient(Vec::Zero(40)));
  CHECK(p.ineq.value(x_free)(0) > 0.0);
}

TEST_CASE("Newton oracle: linear problem in one step") {
  const GameProblem p = fixtures::free_problem(Vec::Zero(3));
  AugmentedState z0{Vec::Constant(3, 7.0), Vec(0), Vec(0)};
  const NewtonResult r = newton_oracle(p, 1e-8, z0);
  CHECK(r.iterations == 1);
  CHECK(r.root.x.norm() < 1e-14);
}

TEST_CASE("Newton oracle: Cournot root with both constraints active") {
  const CournotInstance inst = build_cournot({});
  const auto local = cournot_initial_states(inst, 2);
  const NewtonResult r = newton_oracle(inst.problem, 1e-8, consensual_point(inst.problem.dims, local));
  CHECK(r.residual <= 1e-12);
  CHECK(std::abs(r.root.x.sum() - 40.0) <= 1e-8);
  CHECK(std::abs(inst.r.dot(r.root.x) - 40.0) <= 1e-10);
  CHECK(r.root.lambda(0) > 0.0);
  CHECK(r.root.x.minCoeff() > 0.0);
}

TEST_CASE("Newton oracle: sensor root sits on the relaxed complementarity curve") {
  const SensorInstance inst = build_sensor({}, benchmark_tree(20, 1));
  const auto local = sensor_initial_states(inst, 2);
  const double eps = 1e-8;
  const NewtonResult r = newton_oracle(inst.problem, eps, consensual_point(inst.problem.dims, local));
  CHECK(r.residual <= 1e-10);
  const double g = inst.problem.ineq.value(r.root.x)(0);
  CHECK(r.root.lambda(0) > 0.0);
  CHECK(std::abs(r.root.lambda(0) * g + 0.5 * eps * eps) <= 1e-10);
  CHECK(std::abs(g) <= 1e-8);
}

TEST_CASE("Newton oracle failure modes") {
  // F(x) = x^2 + 1 has no real root
  GameProblem p = fixtures::free_problem(Vec::Zero(1));
  p.pseudo_gradient = [](const Vec& x) -> Vec { return x.cwiseProduct(x).array() + 1.0; };
  p.pseudo_gradient_jacobian = [](const Vec& x) -> Mat { return Mat(2.0 * x.asDiagonal()); };
  AugmentedState z0{Vec::Constant(1, 1.0), Vec(0), Vec(0)};
  CHECK_THROWS_AS(newton_oracle(p, 1e-8, z0), Error);
}

TEST_CASE("initial states") {
  const CournotInstance c = build_cournot({});
  const auto zc = cournot_initial_states(c, 4);
  REQUIRE(zc.size() == 20);
  for (const Vec& z : zc) {
    CHECK(z(0) == 5.0);
    CHECK(z(1) >= 0.5);
    CHECK(z(1) <= 1.5);
    CHECK(z(2) >= 10.0);
    CHECK(z(2) <= 15.0);
  }
  const SensorInstance s = build_sensor({}, benchmark_tree(20, 1));
  const auto zs = sensor_initial_states(s, 4, 5.0);
  for (const Vec& z : zs) {
    CHECK(z.size() == 3);
    CHECK(z.head(2).norm() <= 5.0);
  }
  const AugmentedState avg = consensual_point(c.problem.dims, zc);
  double lam = 0.0;
  for (const Vec& z : zc) lam += z(1);
  CHECK(avg.lambda(0) == doctest::Approx(lam / 20));
  CHECK(avg.x == Vec::Constant(20, 5.0));
}

TEST_CASE("best-response and variational probes at the Cournot root") {
  const CournotInstance inst = build_cournot({});
  const auto local = cournot_initial_states(inst, 2);
  const NewtonResult r = newton_oracle(inst.problem, 1e-8, consensual_point(inst.problem.dims, local));
  const BestResponseReport br = best_response_check(inst.problem, r.root.x, 10, {1e-3, 1e-2}, 3);
  CHECK(br.agents_checked == 10);
  CHECK(br.worst_improvement <= 1e-8);
  // a scalar decision under a shared equality admits no unilateral move
  CHECK(br.agents_without_feasible_direction == 10);
  CHECK(variational_check(inst.problem, r.root.x, 200, 3) >= -1e-8);

  // a point off the equilibrium fails the variational probe
  Vec x_bad = r.root.x;
  x_bad(0) += 1.0;
  x_bad(1) -= inst.r(0) / inst.r(1);
  CHECK(variational_check(inst.problem, x_bad, 200, 3) < -1e-6);
}

TEST_CASE("best-response probe finds an improvement away from equilibrium") {
  // two agents in the plane with no coupling constraints: J_i = 0.5 ||x_i - c_i||^2
  GameProblem p = fixtures::free_problem(Vec::Zero(4));
  p.dims = Dimensions({2, 2}, 0, 0);
  p.costs = {[](const Vec& x) { return 0.5 * x.head(2).squaredNorm(); },
             [](const Vec& x) { return 0.5 * x.tail(2).squaredNorm(); }};
  const BestResponseReport at_root = best_response_check(p, Vec::Zero(4), 2, {1e-3, 1e-2}, 1);
  CHECK(at_root.worst_improvement <= 1e-12);
  const BestResponseReport off = best_response_check(p, Vec::Ones(4), 2, {1e-3, 1e-2}, 1);
  CHECK(off.worst_improvement > 1e-4);
}
