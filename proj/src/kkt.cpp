#include "ptgne/kkt.hpp"

#include "ptgne/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace ptgne {

AugmentedState AugmentedState::zeros(const Dimensions& d) {
  return {Vec::Zero(d.n()), Vec::Zero(d.ineq_count), Vec::Zero(d.eq_count)};
}

AugmentedState AugmentedState::from_flat(const Dimensions& d, const Vec& flat) {
  if (flat.size() != d.augmented())
    throw StructuralError("augmented vector has wrong size");
  const int n = d.n();
  return {flat.head(n), flat.segment(n, d.ineq_count), flat.tail(d.eq_count)};
}

Vec AugmentedState::flat() const {
  Vec out(x.size() + lambda.size() + mu.size());
  out << x, lambda, mu;
  return out;
}

void AugmentedState::check(const Dimensions& d) const {
  if (x.size() != d.n() || lambda.size() != d.ineq_count || mu.size() != d.eq_count)
    throw StructuralError("augmented state blocks do not match problem dimensions");
}

double StationarityValue::norm() const { return std::sqrt(2.0 * olf); }

Vec StationarityValue::flat() const {
  Vec out(s1.size() + s2.size() + s3.size());
  out << s1, s2, s3;
  return out;
}

void SmoothingParams::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("smoothing epsilon must be positive");
  if (!(epsilon_bar > 0.0)) throw std::invalid_argument("gain regularization must be positive");
}

double fb(double a, double b, double eps) {
  return std::sqrt(a * a + b * b + eps * eps) - (a + b);
}

FbPartials fb_partials(double a, double b, double eps) {
  const double r = std::sqrt(a * a + b * b + eps * eps);
  return {a / r - 1.0, b / r - 1.0};
}

namespace {

struct ProblemEval {
  Vec f;
  Vec g;
  Mat dg;
};

ProblemEval eval_first_order(const GameProblem& p, const AugmentedState& z) {
  z.check(p.dims);
  ProblemEval e;
  e.f = p.pseudo_gradient(z.x);
  if (p.dims.ineq_count > 0) {
    e.g = p.ineq.value(z.x);
    e.dg = p.ineq.jacobian(z.x);
  } else {
    e.g = Vec(0);
    e.dg = Mat(0, p.dims.n());
  }
  return e;
}

StationarityValue assemble_s(const GameProblem& p, const AugmentedState& z, double eps,
                             const ProblemEval& e) {
  StationarityValue s;
  s.s1 = e.f;
  if (p.dims.ineq_count > 0) s.s1.noalias() += e.dg.transpose() * z.lambda;
  if (p.dims.eq_count > 0) {
    s.s1.noalias() += p.eq_matrix.transpose() * z.mu;
    s.s2 = p.eq_matrix * z.x - p.eq_rhs;
  } else {
    s.s2 = Vec(0);
  }
  s.s3.resize(p.dims.ineq_count);
  for (int j = 0; j < p.dims.ineq_count; ++j) s.s3(j) = fb(z.lambda(j), -e.g(j), eps);
  s.olf = 0.5 * (s.s1.squaredNorm() + s.s2.squaredNorm() + s.s3.squaredNorm());
  return s;
}

Mat assemble_jacobian(const GameProblem& p, const AugmentedState& z, double eps,
                      const ProblemEval& e) {
  const int n = p.dims.n();
  const int np = p.dims.ineq_count;
  const int m = p.dims.eq_count;
  // Row blocks: s1 (n), s2 (m), s3 (p). Column blocks: x (n), lambda (p), mu (m).
  Mat jac = Mat::Zero(n + m + np, n + np + m);
  jac.topLeftCorner(n, n) = p.pseudo_gradient_jacobian(z.x);
  if (np > 0) {
    if (!p.ineq.affine) {
      const std::vector<Mat> hess = p.ineq.hessians(z.x);
      for (int j = 0; j < np; ++j) jac.topLeftCorner(n, n) += z.lambda(j) * hess[j];
    }
    jac.block(0, n, n, np) = e.dg.transpose();
    for (int j = 0; j < np; ++j) {
      const FbPartials d = fb_partials(z.lambda(j), -e.g(j), eps);
      // d/dx Phi(lambda_j, -g_j(x)) = -db * dg_j
      jac.block(n + m + j, 0, 1, n) = -d.db * e.dg.row(j);
      jac(n + m + j, n + j) = d.da;
    }
  }
  if (m > 0) {
    jac.block(0, n + np, n, m) = p.eq_matrix.transpose();
    jac.block(n, 0, m, n) = p.eq_matrix;
  }
  return jac;
}

OlfGradient make_gradient(const Dimensions& d, const Mat& jac, const StationarityValue& s) {
  OlfGradient g;
  g.n = d.n();
  g.p = d.ineq_count;
  g.m = d.eq_count;
  g.full.noalias() = jac.transpose() * s.flat();
  return g;
}

}  // namespace

StationarityValue stationarity(const GameProblem& p, const AugmentedState& z, double eps) {
  return assemble_s(p, z, eps, eval_first_order(p, z));
}

Mat stationarity_jacobian(const GameProblem& p, const AugmentedState& z, double eps) {
  return assemble_jacobian(p, z, eps, eval_first_order(p, z));
}

KktPoint evaluate_kkt(const GameProblem& p, const AugmentedState& z, double eps) {
  const ProblemEval e = eval_first_order(p, z);
  KktPoint k;
  k.s = assemble_s(p, z, eps, e);
  k.jacobian = assemble_jacobian(p, z, eps, e);
  k.gradient = make_gradient(p.dims, k.jacobian, k.s);
  return k;
}

OlfGradient olf_gradient(const GameProblem& p, const AugmentedState& z, double eps) {
  return evaluate_kkt(p, z, eps).gradient;
}

double compactness_threshold(const GameProblem& p) {
  const int np = p.dims.ineq_count;
  if (np == 0) return kInf;
  if (p.ineq.affine) {
    const Mat c = p.ineq.jacobian(Vec::Zero(p.dims.n()));
    if (np <= p.dims.n()) {
      Eigen::JacobiSVD<Mat> svd(c);
      const Vec& sv = svd.singularValues();
      if (sv(sv.size() - 1) > 1e-10 * sv(0)) return kInf;
    }
    throw UnsupportedConfiguration(
        "compactness threshold: affine inequality matrix is not full row rank");
  }
  if (!p.ineq.known_min)
    throw UnsupportedConfiguration(
        "compactness threshold needs known_min for nonlinear inequality constraints");
  const Vec& mins = *p.ineq.known_min;
  double worst = kInf;
  for (int j = 0; j < np; ++j) worst = std::min(worst, mins(j) * mins(j));
  return 0.5 * worst;
}

}  // namespace ptgne
