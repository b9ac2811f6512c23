#include "fixtures.hpp"

#include "ptgne/bench.hpp"
#include "ptgne/errors.hpp"
#include "ptgne/game.hpp"

#include <doctest.h>

using namespace ptgne;

TEST_CASE("dimension bookkeeping") {
  const Dimensions d({2, 1, 3}, 2, 1);
  CHECK(d.agents() == 3);
  CHECK(d.n() == 6);
  CHECK(d.augmented() == 9);
  CHECK(d.primal_offset(0) == 0);
  CHECK(d.primal_offset(2) == 3);
  CHECK(d.local_dim(1) == 4);
  CHECK_NOTHROW(d.validate());
  CHECK_THROWS_AS(Dimensions({}, 0, 0).validate(), StructuralError);
  CHECK_THROWS_AS(Dimensions({1, 0}, 0, 0).validate(), StructuralError);
  CHECK_THROWS_AS(Dimensions({1}, -1, 0).validate(), StructuralError);
}

TEST_CASE("structure checks catch inconsistent fields") {
  GameProblem p = fixtures::toy_problem();
  CHECK_NOTHROW(p.check_structure());
  p.eq_rhs = Vec::Zero(2);
  CHECK_THROWS_AS(p.check_structure(), StructuralError);
  p = fixtures::toy_problem();
  p.eq_matrix = Mat::Ones(1, 3);
  CHECK_THROWS_AS(p.check_structure(), StructuralError);
  p = fixtures::toy_problem();
  p.ineq.count = 2;
  CHECK_THROWS_AS(p.check_structure(), StructuralError);
}

TEST_CASE("linear and empty constraint bundles") {
  Mat c(2, 3);
  c << 1, 0, 1, 0, 2, 0;
  const ConstraintBundle lin = ConstraintBundle::linear(c, Vec::Ones(2));
  const Vec x = Vec::LinSpaced(3, 1.0, 3.0);
  CHECK(lin.value(x)(0) == doctest::Approx(3.0));
  CHECK(lin.value(x)(1) == doctest::Approx(3.0));
  CHECK(lin.jacobian(x) == c);
  CHECK(lin.affine);
  for (const Mat& h : lin.hessians(x)) CHECK(h.cwiseAbs().maxCoeff() == 0.0);
  const ConstraintBundle none = ConstraintBundle::none(3);
  CHECK(none.count == 0);
  CHECK(none.value(x).size() == 0);
}

TEST_CASE("finite-difference helper reproduces a known Jacobian") {
  const VectorMap f = [](const Vec& x) {
    Vec y(2);
    y << x(0) * x(1), std::sin(x(0)) + x(1) * x(1) * x(1);
    return y;
  };
  Vec x(2);
  x << 0.3, -1.2;
  Mat exact(2, 2);
  exact << x(1), x(0), std::cos(x(0)), 3 * x(1) * x(1);
  CHECK(relative_matrix_error(finite_difference_jacobian(f, x), exact) < 1e-9);
}

TEST_CASE("assumption probes on the benchmarks") {
  const CournotInstance c = build_cournot({});
  const ValidationReport rc = validate_problem(c.problem, 20, 3);
  CHECK(rc.ok());
  CHECK(rc.monotonicity_estimate > 0.0);
  CHECK(rc.full_row_rank);
  CHECK(rc.pseudo_jacobian_rel_error < 1e-6);

  const SensorInstance s = build_sensor({}, benchmark_tree(20, 1));
  const ValidationReport rs = validate_problem(s.problem, 20, 3, Vec::Zero(40));
  CHECK(rs.ok());
  CHECK(rs.ineq_jacobian_rel_error < 1e-6);
  CHECK(rs.hessian_asymmetry == 0.0);
  REQUIRE(rs.slater_strict.has_value());
  CHECK(*rs.slater_strict);
}

TEST_CASE("Slater witness") {
  const GameProblem p = fixtures::disc_problem(Vec::Zero(2));
  CHECK(strictly_feasible(p, Vec::Zero(2)));
  CHECK_FALSE(strictly_feasible(p, Vec::Constant(2, 1.0)));
  CHECK(slater_margin(p, Vec::Zero(2)) == doctest::Approx(-1.0));
  const GameProblem t = fixtures::toy_problem();
  Vec x(2);
  x << 0.1, 0.9;
  CHECK(strictly_feasible(t, x));
  x << 0.5, 0.5;
  CHECK_FALSE(strictly_feasible(t, x));
}
