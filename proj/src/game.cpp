#include "ptgne/game.hpp"

#include "ptgne/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ptgne {

Dimensions::Dimensions(std::vector<int> primal, int p, int m)
    : primal_dims(std::move(primal)), ineq_count(p), eq_count(m) {}

int Dimensions::n() const { return std::accumulate(primal_dims.begin(), primal_dims.end(), 0); }

int Dimensions::primal_offset(int i) const {
  return std::accumulate(primal_dims.begin(), primal_dims.begin() + i, 0);
}

void Dimensions::validate() const {
  if (primal_dims.empty()) throw StructuralError("game needs at least one agent");
  for (int ni : primal_dims)
    if (ni <= 0) throw StructuralError("every agent needs a positive decision dimension");
  if (ineq_count < 0 || eq_count < 0) throw StructuralError("negative constraint count");
}

ConstraintBundle ConstraintBundle::none(int n) {
  ConstraintBundle b;
  b.count = 0;
  b.affine = true;
  b.value = [](const Vec&) { return Vec(0); };
  b.jacobian = [n](const Vec&) { return Mat(0, n); };
  b.hessians = [](const Vec&) { return std::vector<Mat>{}; };
  return b;
}

ConstraintBundle ConstraintBundle::linear(Mat c, Vec d) {
  if (c.rows() != d.size()) throw StructuralError("linear constraint: rows(C) != size(d)");
  ConstraintBundle b;
  b.count = static_cast<int>(c.rows());
  b.affine = true;
  const auto n = c.cols();
  b.value = [c, d](const Vec& x) -> Vec { return c * x - d; };
  b.jacobian = [c](const Vec&) -> Mat { return c; };
  b.hessians = [p = b.count, n](const Vec&) {
    return std::vector<Mat>(static_cast<size_t>(p), Mat::Zero(n, n));
  };
  return b;
}

void GameProblem::check_structure() const {
  dims.validate();
  const int n = dims.n();
  const int m = dims.eq_count;
  const int p = dims.ineq_count;
  auto fail = [](const std::string& what) { throw StructuralError(what); };
  if (!pseudo_gradient || !pseudo_gradient_jacobian) fail("pseudo-gradient maps are required");
  if (eq_matrix.rows() != m || (m > 0 && eq_matrix.cols() != n))
    fail("equality matrix must be m x n");
  if (eq_rhs.size() != m) fail("equality rhs must have m entries");
  if (ineq.count != p) fail("inequality bundle count differs from dims.ineq_count");
  if (p > 0 && (!ineq.value || !ineq.jacobian || !ineq.hessians))
    fail("inequality bundle needs value, jacobian and hessians");
  if (ineq.known_min && ineq.known_min->size() != p) fail("known_min must have p entries");
  if (!costs.empty() && static_cast<int>(costs.size()) != dims.agents())
    fail("costs must be empty or one per agent");
}

Mat finite_difference_jacobian(const VectorMap& f, const Vec& x, double rel_step) {
  const Vec f0 = f(x);
  Mat jac(f0.size(), x.size());
  Vec xp = x;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double h = rel_step * std::max(1.0, std::abs(x(k)));
    xp(k) = x(k) + h;
    const Vec fp = f(xp);
    xp(k) = x(k) - h;
    const Vec fm = f(xp);
    xp(k) = x(k);
    jac.col(k) = (fp - fm) / (2.0 * h);
  }
  return jac;
}

double relative_matrix_error(const Mat& approx, const Mat& exact) {
  if (exact.size() == 0) return 0.0;
  const double scale = std::max(1.0, exact.cwiseAbs().maxCoeff());
  return (approx - exact).cwiseAbs().maxCoeff() / scale;
}

double slater_margin(const GameProblem& p, const Vec& x_bar) {
  if (x_bar.size() != p.dims.n()) throw StructuralError("slater_margin: x_bar has wrong size");
  double margin = -kInf;
  if (p.dims.eq_count > 0)
    margin = std::max(margin, (p.eq_matrix * x_bar - p.eq_rhs).cwiseAbs().maxCoeff());
  if (p.dims.ineq_count > 0) margin = std::max(margin, p.ineq.value(x_bar).maxCoeff());
  return margin;
}

bool strictly_feasible(const GameProblem& p, const Vec& x_bar, double eq_tol) {
  if (x_bar.size() != p.dims.n()) throw StructuralError("strictly_feasible: x_bar has wrong size");
  if (p.dims.eq_count > 0 &&
      (p.eq_matrix * x_bar - p.eq_rhs).cwiseAbs().maxCoeff() > eq_tol)
    return false;
  if (p.dims.ineq_count > 0 && p.ineq.value(x_bar).maxCoeff() >= 0.0) return false;
  return true;
}

ValidationReport validate_problem(const GameProblem& p, int samples, std::uint64_t seed,
                                  const std::optional<Vec>& slater_witness,
                                  const ValidationOptions& opts) {
  if (samples < 2) throw std::invalid_argument("validate_problem: samples must be >= 2");
  p.check_structure();

  ValidationReport rep;
  const int n = p.dims.n();
  Rng rng(seed);
  auto draw = [&] {
    Vec x(n);
    for (int k = 0; k < n; ++k) x(k) = rng.uniform(-opts.sample_radius, opts.sample_radius);
    return x;
  };

  double mf = kInf;
  for (int s = 0; s < samples; ++s) {
    const Vec x = draw();
    const Vec y = draw();
    const Vec d = x - y;
    const double dd = d.squaredNorm();
    if (dd == 0.0) continue;
    mf = std::min(mf, (p.pseudo_gradient(x) - p.pseudo_gradient(y)).dot(d) / dd);

    rep.pseudo_jacobian_rel_error =
        std::max(rep.pseudo_jacobian_rel_error,
                 relative_matrix_error(finite_difference_jacobian(p.pseudo_gradient, x),
                                       p.pseudo_gradient_jacobian(x)));
    if (p.dims.ineq_count > 0) {
      rep.ineq_jacobian_rel_error =
          std::max(rep.ineq_jacobian_rel_error,
                   relative_matrix_error(finite_difference_jacobian(p.ineq.value, x),
                                         p.ineq.jacobian(x)));
      for (const Mat& h : p.ineq.hessians(x)) {
        rep.hessian_asymmetry =
            std::max(rep.hessian_asymmetry, (h - h.transpose()).cwiseAbs().maxCoeff());
        if (p.ineq.affine)
          rep.affine_hessian_max = std::max(rep.affine_hessian_max, h.cwiseAbs().maxCoeff());
      }
    }
  }
  rep.monotonicity_estimate = mf;

  if (p.dims.eq_count > 0) {
    Eigen::JacobiSVD<Mat> svd(p.eq_matrix);
    const Vec& sv = svd.singularValues();
    rep.eq_sigma_max = sv(0);
    rep.eq_sigma_min = sv(sv.size() - 1);
    const double rank_tol = opts.rank_rel_tol * rep.eq_sigma_max;
    rep.full_row_rank = p.dims.eq_count <= n && rep.eq_sigma_min > rank_tol;
  }

  if (slater_witness) {
    rep.slater_margin = slater_margin(p, *slater_witness);
    rep.slater_strict = strictly_feasible(p, *slater_witness, opts.feasibility_tol);
  }

  auto flag = [&](bool bad, const std::string& msg, double value) {
    if (!bad) return;
    std::ostringstream os;
    os.precision(6);
    os << msg << " (" << value << ")";
    rep.violations.push_back(os.str());
  };
  flag(!(rep.monotonicity_estimate > 0.0), "pseudo-gradient not strongly monotone on samples",
       rep.monotonicity_estimate);
  flag(!rep.full_row_rank, "equality matrix is not full row rank", rep.eq_sigma_min);
  flag(rep.pseudo_jacobian_rel_error > opts.derivative_tol,
       "pseudo-gradient Jacobian disagrees with finite differences",
       rep.pseudo_jacobian_rel_error);
  flag(rep.ineq_jacobian_rel_error > opts.derivative_tol,
       "constraint Jacobian disagrees with finite differences", rep.ineq_jacobian_rel_error);
  flag(rep.hessian_asymmetry > 1e-12, "constraint Hessian not symmetric", rep.hessian_asymmetry);
  flag(rep.affine_hessian_max != 0.0, "affine bundle has nonzero Hessian", rep.affine_hessian_max);
  if (rep.slater_strict) flag(!*rep.slater_strict, "Slater witness not strictly feasible",
                              *rep.slater_margin);
  return rep;
}

}  // namespace ptgne
