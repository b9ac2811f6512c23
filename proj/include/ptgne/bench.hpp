#pragma once

#include "ptgne/graph.hpp"
#include "ptgne/kkt.hpp"

#include <cstdint>
#include <optional>

namespace ptgne {

/// Networked Cournot competition with a capacity cap and a regulatory quota.
struct CournotConfig {
  int agents = 20;
  double base_price = 50.0;  // P0
  double elasticity = 0.2;   // d
  double alpha_lo = 1.0, alpha_hi = 2.0;
  double beta_lo = 5.0, beta_hi = 10.0;
  double r_lo = 0.8, r_hi = 1.2;
  double capacity = 40.0;      // C_max
  double quota_target = 40.0;  // R_target
  std::uint64_t seed = 1;
};

struct CournotInstance {
  CournotConfig config;
  Vec alpha;
  Vec beta;
  Vec r;
  GameProblem problem;
};

/// Draws (alpha, beta, r) from the seed and builds the game.
CournotInstance build_cournot(const CournotConfig& cfg);
/// Builds the game from explicit coefficients (manifest replay).
CournotInstance build_cournot(const CournotConfig& cfg, Vec alpha, Vec beta, Vec r);

/// Planar sensor deployment under a shared quadratic power budget.
struct SensorConfig {
  int agents = 20;
  double target_radius = 15.0;  // R
  double max_radius = 10.0;     // R_max; P_total = N R_max^2
  std::uint64_t seed = 1;       // initial positions

  double power_budget() const { return agents * max_radius * max_radius; }
};

struct SensorInstance {
  SensorConfig config;
  Mat targets;  // 2 x N, equally spaced on the target circle
  GameProblem problem;
};

/// Pairwise coupling uses the adjacency of `graph`; every pair term is
/// materialized (no aggregate reformulation).
SensorInstance build_sensor(const SensorConfig& cfg, const CommGraph& graph);

struct NewtonOptions {
  double tol = 1e-12;
  int max_iterations = 200;
  /// Residual at which stagnation (no backtracking progress) counts as converged.
  double stagnation_tol = 1e-10;
};

struct NewtonResult {
  AugmentedState root;
  double residual = 0.0;
  int iterations = 0;
};

/// Damped Newton on S(z) = 0 with backtracking on ||S||. Throws
/// ConvergenceFailure on non-convergence and Error on a singular Jacobian.
NewtonResult newton_oracle(const GameProblem& p, double eps, const AugmentedState& z0,
                           const NewtonOptions& opts = {});

/// Initial primal-dual draws shared by both benchmarks.
struct InitialDuals {
  double lambda_lo = 0.5, lambda_hi = 1.5;
  double mu_lo = 10.0, mu_hi = 15.0;
};

/// Per-agent initial local states z_i(0) = col(x_i, lambda_i, mu_i).
std::vector<Vec> cournot_initial_states(const CournotInstance& inst, std::uint64_t seed,
                                        double x0 = 5.0, const InitialDuals& duals = {});
/// Positions uniform in a disc of radius `disc_radius` about the origin.
std::vector<Vec> sensor_initial_states(const SensorInstance& inst, std::uint64_t seed,
                                       double disc_radius = 5.0, const InitialDuals& duals = {});

/// Centralized point matching a set of local states: x stacked, duals averaged.
AugmentedState consensual_point(const Dimensions& d, const std::vector<Vec>& local_states);

/// Outcome of a unilateral-deviation probe at a candidate equilibrium.
struct BestResponseReport {
  int agents_checked = 0;
  int directions_tested = 0;
  int agents_without_feasible_direction = 0;
  double worst_improvement = 0.0;  // max J_i(x*) - J_i(x* + h d)
};

/// For sampled agents, perturbs x_i by +-h along directions that keep the
/// shared equalities and active inequalities satisfied to first order, and
/// records the largest cost decrease.
BestResponseReport best_response_check(const GameProblem& p, const Vec& x_star, int agents,
                                       const std::vector<double>& steps, std::uint64_t seed,
                                       double active_tol = 1e-6);

/// Variational-inequality probe: min over sampled feasible joint directions d
/// of F(x*)^T d / ||d||. Non-negative at a v-GNE.
double variational_check(const GameProblem& p, const Vec& x_star, int samples,
                         std::uint64_t seed, double active_tol = 1e-6);

}  // namespace ptgne
