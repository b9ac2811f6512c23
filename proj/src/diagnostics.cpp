#include "ptgne/diagnostics.hpp"

#include "ptgne/centralized.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ptgne {

TraceRecord LyapunovSnapshot::record() const {
  TraceRecord r;
  r.t = t;
  r.V = W_o;
  r.S_norm = stationarity_norm;
  r.s1_norm = s1_norm;
  r.s2_norm = s2_norm;
  r.s3_norm = s3_norm;
  r.W_c = W_c;
  r.W_o = W_o;
  r.W_delta = W_delta;
  r.V_net = V_net;
  r.W = W;
  r.sigma_min = sigma_min;
  r.dual_disagreement = dual_disagreement;
  r.consensus_error = consensus_error;
  return r;
}

double consensus_energy(const NetworkState& ns, const CommGraph& graph) {
  const int n_agents = ns.layout.agents();
  const std::vector<Edge> edges = graph.edges();
  double total = 0.0;
  for (int j = 0; j < n_agents; ++j) {
    // E_j^T (L x I) E_j = sum over edges of a_ik ||e_ij - e_kj||^2
    std::vector<Vec> e(static_cast<size_t>(n_agents));
    for (int i = 0; i < n_agents; ++i) e[i] = ns.y(i, j) - ns.z(j);
    for (const Edge& ed : edges) total += ed.weight * (e[ed.i] - e[ed.j]).squaredNorm();
  }
  return 0.5 * total;
}

double dual_energy(const NetworkState& ns, const CommGraph& graph) {
  const int n_agents = ns.layout.agents();
  const Dimensions& d = ns.layout.dims();
  const int nd = d.ineq_count + d.eq_count;
  Vec mean(nd);
  mean << ns.lambda_bar(), ns.mu_bar();
  std::vector<Vec> delta(static_cast<size_t>(n_agents));
  for (int i = 0; i < n_agents; ++i) delta[i] = ns.z(i).tail(nd) - mean;
  double total = 0.0;
  for (const Edge& ed : graph.edges()) total += ed.weight * (delta[ed.i] - delta[ed.j]).squaredNorm();
  return 0.5 * total;
}

double max_consensus_error(const NetworkState& ns) {
  double worst = 0.0;
  for (int i = 0; i < ns.layout.agents(); ++i)
    for (int j = 0; j < ns.layout.agents(); ++j)
      worst = std::max(worst, (ns.y(i, j) - ns.z(j)).norm());
  return worst;
}

double max_dual_disagreement(const NetworkState& ns) {
  double worst = 0.0;
  const int n_agents = ns.layout.agents();
  for (int i = 0; i < n_agents; ++i)
    for (int j = i + 1; j < n_agents; ++j)
      worst = std::max(worst, (ns.lambda(i) - ns.lambda(j)).norm() + (ns.mu(i) - ns.mu(j)).norm());
  return worst;
}

LyapunovSnapshot snapshot(const NetworkState& ns, const CommGraph& graph, const GameProblem& p,
                          const GainSchedule& g, double eps, double t) {
  LyapunovSnapshot s;
  s.t = t;
  const AugmentedState avg = ns.network_average();
  const KktPoint k = evaluate_kkt(p, avg, eps);
  s.W_c = consensus_energy(ns, graph);
  s.W_o = k.s.olf;
  s.W_delta = dual_energy(ns, graph);
  s.V_net = s.W_o + g.k_d * s.W_delta;
  s.W = s.W_c + s.V_net;
  s.dual_disagreement = max_dual_disagreement(ns);
  s.consensus_error = max_consensus_error(ns);
  s.sigma_min = sigma_min(k.jacobian);
  s.stationarity_norm = k.s.norm();
  s.s1_norm = k.s.s1.norm();
  s.s2_norm = k.s.s2.norm();
  s.s3_norm = k.s.s3.norm();
  s.x = avg.x;
  s.lambda_bar = avg.lambda;
  s.mu_bar = avg.mu;
  return s;
}

DissipationReport check_dissipation(const std::vector<LyapunovSnapshot>& trace,
                                    const GainSchedule& g, const DissipationOptions& opts) {
  if (trace.size() < 10) throw std::invalid_argument("check_dissipation needs at least 10 snapshots");
  DissipationReport rep;
  rep.W0 = trace.front().W;
  rep.additivity_ok = true;
  rep.nonnegative_ok = true;
  std::vector<double> tau, w;
  for (const LyapunovSnapshot& s : trace) {
    rep.max_W = std::max(rep.max_W, s.W);
    rep.additivity_ok = rep.additivity_ok && (s.W == s.W_c + (s.W_o + g.k_d * s.W_delta));
    rep.nonnegative_ok = rep.nonnegative_ok && s.W_c >= 0.0 && s.W_o >= 0.0 && s.W_delta >= 0.0;
    tau.push_back(g.time_to_go(s.t) / g.horizon);
    w.push_back(s.W);
  }
  rep.confinement_ok = rep.max_W <= rep.W0 * (1.0 + opts.confinement_tol);

  const ExponentFit fit = fit_decay_exponent(tau, w, opts.noise_floor, opts.fit_decades);
  rep.gamma_emp = fit.slope;
  rep.fit_points = fit.points;

  rep.band_ok = true;
  const double exponent = opts.band_exponent_factor * rep.gamma_emp;
  for (size_t k = 0; k < trace.size(); ++k) {
    if (w[k] <= opts.noise_floor) continue;
    const double env = std::max(rep.W0 * std::pow(tau[k], exponent), opts.noise_floor);
    rep.worst_band_ratio = std::max(rep.worst_band_ratio, w[k] / env);
    if (w[k] > (1.0 + opts.band_slack) * env) rep.band_ok = false;
  }
  return rep;
}

HessianConditionReport check_sensor_hessian_condition(const std::vector<LyapunovSnapshot>& trace,
                                                      const GameProblem& p) {
  HessianConditionReport rep;
  const int n = p.dims.n();
  const int np = p.dims.ineq_count;
  if (np == 0 || p.ineq.affine || !p.ineq.hessians) return rep;

  // Identity-multiple structure is checked at the origin and at each snapshot.
  auto identity_scales = [&](const Vec& x, Vec& scales) {
    const std::vector<Mat> h = p.ineq.hessians(x);
    scales.resize(np);
    for (int j = 0; j < np; ++j) {
      scales(j) = h[j](0, 0);
      const Mat diff = h[j] - scales(j) * Mat::Identity(n, n);
      if (diff.cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, std::abs(scales(j)))) return false;
    }
    return true;
  };
  Vec scales;
  if (!identity_scales(Vec::Zero(n), scales)) return rep;
  rep.applicable = true;

  for (const LyapunovSnapshot& s : trace) {
    if (!identity_scales(s.x, scales)) {
      rep.applicable = false;
      return rep;
    }
    const Mat jf = p.pseudo_gradient_jacobian(s.x);
    const Mat sym = 0.5 * (jf + jf.transpose());
    rep.lambda_min_F = Eigen::SelfAdjointEigenSolver<Mat>(sym, Eigen::EigenvaluesOnly).eigenvalues()(0);
    const double margin = rep.lambda_min_F + scales.dot(s.lambda_bar);
    rep.worst_margin = std::min(rep.worst_margin, margin);
    if (!(margin > 0.0)) ++rep.violations;
  }
  rep.ok = rep.violations == 0;
  return rep;
}

double dual_gain_threshold(double sigma_lb, const CommGraph& graph) {
  if (!(graph.lambda2() > 0.0)) throw std::invalid_argument("k_d threshold needs a connected graph");
  return sigma_lb * sigma_lb / graph.lambda2();
}

}  // namespace ptgne
