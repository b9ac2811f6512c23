#pragma once

#include "ptgne/linalg.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ptgne {

/// Agent count and block sizes of a game. The augmented primal-dual vector
/// has n + p + m entries, ordered col(x, lambda, mu).
struct Dimensions {
  std::vector<int> primal_dims;  // n_i per agent
  int ineq_count = 0;            // p
  int eq_count = 0;              // m

  Dimensions() = default;
  Dimensions(std::vector<int> primal, int p, int m);

  int agents() const { return static_cast<int>(primal_dims.size()); }
  int n() const;
  int augmented() const { return n() + ineq_count + eq_count; }
  /// Offset of agent i's decision block inside x.
  int primal_offset(int i) const;
  /// Size of an agent's local augmented state z_i = col(x_i, lambda_i, mu_i).
  int local_dim(int i) const { return primal_dims.at(i) + ineq_count + eq_count; }

  /// Throws StructuralError when the invariants do not hold.
  void validate() const;
};

using VectorMap = std::function<Vec(const Vec&)>;
using MatrixMap = std::function<Mat(const Vec&)>;

/// Shared inequality constraints g(x) <= 0 with analytic derivatives.
struct ConstraintBundle {
  int count = 0;
  VectorMap value;
  MatrixMap jacobian;                                   // p x n
  std::function<std::vector<Mat>(const Vec&)> hessians;  // p symmetric n x n
  /// Per-component global infimum of g_j when known in closed form.
  std::optional<Vec> known_min;
  /// Declares g(x) = Cx - d; hessians are then identically zero.
  bool affine = false;

  static ConstraintBundle none(int n);
  static ConstraintBundle linear(Mat c, Vec d);
};

/// A constrained game described by its pseudo-gradient, shared affine
/// equalities A x = b, and shared convex inequalities g(x) <= 0.
/// Evaluation maps must be pure; a problem is safe to share read-only.
struct GameProblem {
  Dimensions dims;
  VectorMap pseudo_gradient;           // F(x)
  MatrixMap pseudo_gradient_jacobian;  // dF/dx
  Mat eq_matrix;                       // A, m x n
  Vec eq_rhs;                          // b
  ConstraintBundle ineq;
  /// Per-agent costs J_i(x), for reporting only.
  std::vector<std::function<double(const Vec&)>> costs;

  /// Throws StructuralError on inconsistent field sizes.
  void check_structure() const;
};

struct ValidationReport {
  double monotonicity_estimate = 0.0;     // sampled m_F
  double eq_sigma_min = 0.0;              // sigma_min(A), 0 when m = 0
  double eq_sigma_max = 0.0;
  bool full_row_rank = true;
  double pseudo_jacobian_rel_error = 0.0;  // max over samples
  double ineq_jacobian_rel_error = 0.0;
  double hessian_asymmetry = 0.0;          // max |H - H^T|
  double affine_hessian_max = 0.0;         // max |H| for declared-affine bundles
  std::optional<double> slater_margin;
  std::optional<bool> slater_strict;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

struct ValidationOptions {
  double sample_radius = 10.0;
  double derivative_tol = 1e-6;
  double rank_rel_tol = 1e-10;
  double feasibility_tol = 1e-10;
};

/// Runs the assumption probes on random samples in a box of the configured
/// radius. `slater_witness`, when given, is checked for strict feasibility.
ValidationReport validate_problem(const GameProblem& p, int samples, std::uint64_t seed,
                                  const std::optional<Vec>& slater_witness = std::nullopt,
                                  const ValidationOptions& opts = {});

/// max(||A x - b||_inf, max_j g_j(x)); absent blocks do not contribute.
double slater_margin(const GameProblem& p, const Vec& x_bar);

bool strictly_feasible(const GameProblem& p, const Vec& x_bar, double eq_tol = 1e-10);

/// Central-difference Jacobian of a vector map, used as a test oracle.
Mat finite_difference_jacobian(const VectorMap& f, const Vec& x, double rel_step = 1e-6);

/// max |J_a - J_b| / max(1, max |J_b|).
double relative_matrix_error(const Mat& approx, const Mat& exact);

}  // namespace ptgne
