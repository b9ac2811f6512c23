#include "ptgne/bench.hpp"

#include "ptgne/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ptgne {

CournotInstance build_cournot(const CournotConfig& cfg) {
  if (cfg.agents < 1) throw std::invalid_argument("cournot: need at least one firm");
  Rng rng(cfg.seed);
  const int n = cfg.agents;
  Vec alpha(n), beta(n), r(n);
  for (int i = 0; i < n; ++i) alpha(i) = rng.uniform(cfg.alpha_lo, cfg.alpha_hi);
  for (int i = 0; i < n; ++i) beta(i) = rng.uniform(cfg.beta_lo, cfg.beta_hi);
  for (int i = 0; i < n; ++i) r(i) = rng.uniform(cfg.r_lo, cfg.r_hi);
  return build_cournot(cfg, std::move(alpha), std::move(beta), std::move(r));
}

CournotInstance build_cournot(const CournotConfig& cfg, Vec alpha, Vec beta, Vec r) {
  const int n = cfg.agents;
  if (alpha.size() != n || beta.size() != n || r.size() != n)
    throw StructuralError("cournot: coefficient vectors must have one entry per firm");
  CournotInstance inst{cfg, std::move(alpha), std::move(beta), std::move(r), {}};
  GameProblem& p = inst.problem;
  p.dims = Dimensions(std::vector<int>(static_cast<size_t>(n), 1), 1, 1);

  const double p0 = cfg.base_price;
  const double d = cfg.elasticity;
  const Vec a = inst.alpha;
  const Vec b = inst.beta;
  // F_i = dJ_i/dx_i = 2 alpha_i x_i + beta_i - P0 + d sum_j x_j + d x_i
  p.pseudo_gradient = [a, b, p0, d](const Vec& x) -> Vec {
    const double total = x.sum();
    return (2.0 * a.array() * x.array() + b.array() - p0 + d * total + d * x.array()).matrix();
  };
  Mat jac = Mat::Constant(n, n, d);
  jac.diagonal() += (2.0 * a.array() + d).matrix();
  p.pseudo_gradient_jacobian = [jac](const Vec&) -> Mat { return jac; };

  p.eq_matrix = inst.r.transpose();
  p.eq_rhs = Vec::Constant(1, cfg.quota_target);
  p.ineq = ConstraintBundle::linear(Mat::Ones(1, n), Vec::Constant(1, cfg.capacity));

  for (int i = 0; i < n; ++i) {
    p.costs.push_back([i, a, b, p0, d](const Vec& x) {
      return a(i) * x(i) * x(i) + b(i) * x(i) - x(i) * (p0 - d * x.sum());
    });
  }
  return inst;
}

SensorInstance build_sensor(const SensorConfig& cfg, const CommGraph& graph) {
  const int n_agents = cfg.agents;
  if (graph.size() != n_agents)
    throw StructuralError("sensor: graph size differs from agent count");
  SensorInstance inst;
  inst.config = cfg;
  inst.targets.resize(2, n_agents);
  for (int i = 0; i < n_agents; ++i) {
    const double angle = 2.0 * std::numbers::pi * i / n_agents;
    inst.targets(0, i) = cfg.target_radius * std::cos(angle);
    inst.targets(1, i) = cfg.target_radius * std::sin(angle);
  }

  GameProblem& p = inst.problem;
  p.dims = Dimensions(std::vector<int>(static_cast<size_t>(n_agents), 2), 1, 0);
  const Mat targets = inst.targets;
  const Mat adj = graph.adjacency();
  std::vector<std::vector<int>> nbrs;
  for (int i = 0; i < n_agents; ++i) nbrs.push_back(graph.neighbors(i));

  // F_i = (x_i - b_i) + sum_j a_ij (x_i - x_j), pair terms evaluated one by one
  p.pseudo_gradient = [targets, adj, nbrs](const Vec& x) -> Vec {
    const auto count = targets.cols();
    Vec f(2 * count);
    for (Eigen::Index i = 0; i < count; ++i) {
      Eigen::Vector2d fi = x.segment<2>(2 * i) - targets.col(i);
      for (int j : nbrs[i]) fi += adj(i, j) * (x.segment<2>(2 * i) - x.segment<2>(2 * j));
      f.segment<2>(2 * i) = fi;
    }
    return f;
  };
  Mat jac = Mat::Identity(2 * n_agents, 2 * n_agents);
  for (int i = 0; i < n_agents; ++i)
    for (int j : nbrs[i])
      for (int c = 0; c < 2; ++c) {
        jac(2 * i + c, 2 * i + c) += adj(i, j);
        jac(2 * i + c, 2 * j + c) -= adj(i, j);
      }
  p.pseudo_gradient_jacobian = [jac](const Vec&) -> Mat { return jac; };

  p.eq_matrix = Mat(0, 2 * n_agents);
  p.eq_rhs = Vec(0);

  const double budget = cfg.power_budget();
  ConstraintBundle& g = p.ineq;
  g.count = 1;
  g.affine = false;
  g.value = [budget](const Vec& x) -> Vec { return Vec::Constant(1, x.squaredNorm() - budget); };
  g.jacobian = [](const Vec& x) -> Mat { return 2.0 * x.transpose(); };
  g.hessians = [dim = 2 * n_agents](const Vec&) {
    return std::vector<Mat>{2.0 * Mat::Identity(dim, dim)};
  };
  g.known_min = Vec::Constant(1, -budget);

  for (int i = 0; i < n_agents; ++i) {
    p.costs.push_back([i, targets, adj, nbrs](const Vec& x) {
      double c = 0.5 * (x.segment<2>(2 * i) - targets.col(i)).squaredNorm();
      for (int j : nbrs[i])
        c += 0.5 * adj(i, j) * (x.segment<2>(2 * i) - x.segment<2>(2 * j)).squaredNorm();
      return c;
    });
  }
  return inst;
}

NewtonResult newton_oracle(const GameProblem& p, double eps, const AugmentedState& z0,
                           const NewtonOptions& opts) {
  p.check_structure();
  z0.check(p.dims);
  Vec z = z0.flat();
  auto residual_at = [&](const Vec& v) {
    return stationarity(p, AugmentedState::from_flat(p.dims, v), eps).norm();
  };
  double res = residual_at(z);
  int it = 0;
  for (; it < opts.max_iterations && res > opts.tol; ++it) {
    const AugmentedState cur = AugmentedState::from_flat(p.dims, z);
    const KktPoint k = evaluate_kkt(p, cur, eps);
    Eigen::FullPivLU<Mat> lu(k.jacobian);
    if (!lu.isInvertible()) {
      std::ostringstream os;
      os << "newton oracle: singular Jacobian at iteration " << it << " (||z|| = " << z.norm()
         << ", ||S|| = " << res << ")";
      throw Error(os.str());
    }
    const Vec step = lu.solve(k.s.flat());
    double alpha = 1.0;
    Vec trial = z - step;
    double trial_res = residual_at(trial);
    while (trial_res > (1.0 - 1e-4 * alpha) * res && alpha > 1e-12) {
      alpha *= 0.5;
      trial = z - alpha * step;
      trial_res = residual_at(trial);
    }
    if (trial_res >= res) {
      if (res <= opts.stagnation_tol) break;  // round-off floor
      throw ConvergenceFailure("newton oracle ||S|| (stalled)", res, opts.tol);
    }
    z = trial;
    res = trial_res;
  }
  if (res > opts.tol && res > opts.stagnation_tol)
    throw ConvergenceFailure("newton oracle ||S||", res, opts.tol);
  return {AugmentedState::from_flat(p.dims, z), res, it};
}

std::vector<Vec> cournot_initial_states(const CournotInstance& inst, std::uint64_t seed,
                                        double x0, const InitialDuals& duals) {
  Rng rng(seed);
  std::vector<Vec> states;
  for (int i = 0; i < inst.config.agents; ++i) {
    Vec z(3);
    z(0) = x0;
    z(1) = rng.uniform(duals.lambda_lo, duals.lambda_hi);
    z(2) = rng.uniform(duals.mu_lo, duals.mu_hi);
    states.push_back(z);
  }
  return states;
}

std::vector<Vec> sensor_initial_states(const SensorInstance& inst, std::uint64_t seed,
                                       double disc_radius, const InitialDuals& duals) {
  Rng rng(seed);
  std::vector<Vec> states;
  for (int i = 0; i < inst.config.agents; ++i) {
    const double rad = disc_radius * std::sqrt(rng.uniform());
    const double ang = 2.0 * std::numbers::pi * rng.uniform();
    Vec z(3);
    z(0) = rad * std::cos(ang);
    z(1) = rad * std::sin(ang);
    z(2) = rng.uniform(duals.lambda_lo, duals.lambda_hi);
    states.push_back(z);
  }
  return states;
}

AugmentedState consensual_point(const Dimensions& d, const std::vector<Vec>& local_states) {
  if (static_cast<int>(local_states.size()) != d.agents())
    throw StructuralError("consensual_point: one local state per agent required");
  AugmentedState z = AugmentedState::zeros(d);
  const int np = d.ineq_count;
  const int m = d.eq_count;
  for (int i = 0; i < d.agents(); ++i) {
    const Vec& zi = local_states[i];
    const int ni = d.primal_dims[i];
    if (zi.size() != d.local_dim(i)) throw StructuralError("consensual_point: bad local size");
    z.x.segment(d.primal_offset(i), ni) = zi.head(ni);
    z.lambda += zi.segment(ni, np);
    z.mu += zi.tail(m);
  }
  z.lambda /= d.agents();
  z.mu /= d.agents();
  return z;
}

namespace {

/// Orthonormal basis of the null space of `rows` (columns of the result).
Mat null_space(const Mat& rows, int dim) {
  if (rows.rows() == 0) return Mat::Identity(dim, dim);
  Eigen::FullPivLU<Mat> lu(rows);
  lu.setThreshold(1e-12);
  Mat k = lu.kernel();
  if (k.cols() == 1 && k.norm() == 0.0) return Mat(dim, 0);
  Eigen::HouseholderQR<Mat> qr(k);
  return qr.householderQ() * Mat::Identity(dim, k.cols());
}

std::vector<int> active_set(const GameProblem& p, const Vec& x, double tol) {
  std::vector<int> act;
  if (p.dims.ineq_count == 0) return act;
  const Vec g = p.ineq.value(x);
  for (int j = 0; j < g.size(); ++j)
    if (g(j) >= -tol) act.push_back(j);
  return act;
}

}  // namespace

BestResponseReport best_response_check(const GameProblem& p, const Vec& x_star, int agents,
                                       const std::vector<double>& steps, std::uint64_t seed,
                                       double active_tol) {
  if (p.costs.empty()) throw std::invalid_argument("best_response_check needs cost evaluators");
  BestResponseReport rep;
  Rng rng(seed);
  const int n_agents = p.dims.agents();
  const std::vector<int> act = active_set(p, x_star, active_tol);
  const Mat dg = p.dims.ineq_count > 0 ? p.ineq.jacobian(x_star) : Mat(0, p.dims.n());

  for (int s = 0; s < agents; ++s) {
    const int i = static_cast<int>(rng.index(static_cast<std::uint64_t>(n_agents)));
    const int off = p.dims.primal_offset(i);
    const int ni = p.dims.primal_dims[i];
    ++rep.agents_checked;
    // equality-preserving directions for x_i alone
    const Mat basis =
        null_space(p.dims.eq_count > 0 ? Mat(p.eq_matrix.middleCols(off, ni)) : Mat(0, ni), ni);
    if (basis.cols() == 0) {
      ++rep.agents_without_feasible_direction;
      continue;
    }
    const double j0 = p.costs[i](x_star);
    for (int trial = 0; trial < 4; ++trial) {
      Vec coeff(basis.cols());
      for (Eigen::Index c = 0; c < coeff.size(); ++c) coeff(c) = rng.normal();
      Vec dir = basis * coeff;
      dir.normalize();
      for (double sign : {1.0, -1.0}) {
        bool feasible = true;
        for (int j : act)
          if (sign * dg.row(j).segment(off, ni).dot(dir) > 0.0) feasible = false;
        if (!feasible) continue;
        for (double h : steps) {
          Vec x = x_star;
          x.segment(off, ni) += sign * h * dir;
          ++rep.directions_tested;
          rep.worst_improvement = std::max(rep.worst_improvement, j0 - p.costs[i](x));
        }
      }
    }
  }
  return rep;
}

double variational_check(const GameProblem& p, const Vec& x_star, int samples,
                         std::uint64_t seed, double active_tol) {
  const int n = p.dims.n();
  Rng rng(seed);
  const Mat basis = null_space(p.eq_matrix, n);
  const std::vector<int> act = active_set(p, x_star, active_tol);
  const Mat dg = p.dims.ineq_count > 0 ? p.ineq.jacobian(x_star) : Mat(0, n);
  const Vec f = p.pseudo_gradient(x_star);
  double worst = kInf;
  for (int s = 0; s < samples; ++s) {
    Vec coeff(basis.cols());
    for (Eigen::Index c = 0; c < coeff.size(); ++c) coeff(c) = rng.normal();
    Vec d = basis * coeff;
    for (int j : act) {
      // move the direction into the half-space dg_j d <= 0 while staying in ker(A)
      const Vec cj = basis * (basis.transpose() * dg.row(j).transpose());
      const double viol = dg.row(j).dot(d);
      if (viol > 0.0 && cj.squaredNorm() > 0.0) d -= (viol / dg.row(j).dot(cj)) * cj;
    }
    const double nd = d.norm();
    if (nd == 0.0) continue;
    worst = std::min(worst, f.dot(d) / nd);
  }
  return worst;
}

}  // namespace ptgne
