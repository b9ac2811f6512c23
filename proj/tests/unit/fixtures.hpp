#pragma once

#include "ptgne/game.hpp"

// Small games with hand-checkable structure.
namespace fixtures {

using ptgne::Mat;
using ptgne::Vec;

inline Mat toy_q() {
  Mat q(2, 2);
  q << 2.0, 1.0, 1.0, 3.0;
  return q;
}

inline Vec toy_offset() { return Vec::Constant(2, -1.0); }

/// Two scalar agents, F(x) = Qx + q, x1 + x2 = 1, x1 - 0.2 <= 0.
inline ptgne::GameProblem toy_problem() {
  ptgne::GameProblem p;
  p.dims = ptgne::Dimensions({1, 1}, 1, 1);
  const Mat q = toy_q();
  const Vec off = toy_offset();
  p.pseudo_gradient = [q, off](const Vec& x) -> Vec { return q * x + off; };
  p.pseudo_gradient_jacobian = [q](const Vec&) -> Mat { return q; };
  p.eq_matrix = Mat::Ones(1, 2);
  p.eq_rhs = Vec::Ones(1);
  Mat c(1, 2);
  c << 1.0, 0.0;
  p.ineq = ptgne::ConstraintBundle::linear(c, Vec::Constant(1, 0.2));
  return p;
}

/// Two scalar agents, F(x) = x - c, x1^2 + x2^2 - 1 <= 0, no equalities.
inline ptgne::GameProblem disc_problem(const Vec& c) {
  ptgne::GameProblem p;
  p.dims = ptgne::Dimensions({1, 1}, 1, 0);
  p.pseudo_gradient = [c](const Vec& x) -> Vec { return x - c; };
  p.pseudo_gradient_jacobian = [](const Vec& x) -> Mat { return Mat::Identity(x.size(), x.size()); };
  p.eq_matrix = Mat::Zero(0, 2);
  p.eq_rhs = Vec::Zero(0);
  p.ineq.count = 1;
  p.ineq.value = [](const Vec& x) -> Vec { return Vec::Constant(1, x.squaredNorm() - 1.0); };
  p.ineq.jacobian = [](const Vec& x) -> Mat { return 2.0 * x.transpose(); };
  p.ineq.hessians = [](const Vec& x) { return std::vector<Mat>{2.0 * Mat::Identity(x.size(), x.size())}; };
  p.ineq.known_min = Vec::Constant(1, -1.0);
  return p;
}

/// Unconstrained F(x) = x - c with scalar agents.
inline ptgne::GameProblem free_problem(const Vec& c) {
  ptgne::GameProblem p;
  const int n = static_cast<int>(c.size());
  p.dims = ptgne::Dimensions(std::vector<int>(n, 1), 0, 0);
  p.pseudo_gradient = [c](const Vec& x) -> Vec { return x - c; };
  p.pseudo_gradient_jacobian = [](const Vec& x) -> Mat { return Mat::Identity(x.size(), x.size()); };
  p.eq_matrix = Mat::Zero(0, n);
  p.eq_rhs = Vec::Zero(0);
  p.ineq = ptgne::ConstraintBundle::none(n);
  return p;
}

}  // namespace fixtures
