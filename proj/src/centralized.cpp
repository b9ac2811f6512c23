#include "ptgne/centralized.hpp"

#include "ptgne/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ptgne {

double CentralizedRun::sampled_sigma_lb() const {
  double lb = kInf;
  for (const TraceRecord& r : trace) lb = std::min(lb, r.sigma_min);
  return lb;
}

void CentralizedRun::require_convergence(double target) const {
  if (!(final_residual <= target)) throw ConvergenceFailure("||S(z(T))||", final_residual, target);
}

TraceRecord centralized_record(const GameProblem& p, const AugmentedState& z, double t,
                               double eps) {
  const KktPoint k = evaluate_kkt(p, z, eps);
  TraceRecord r;
  r.t = t;
  r.V = k.s.olf;
  r.S_norm = k.s.norm();
  r.s1_norm = k.s.s1.norm();
  r.s2_norm = k.s.s2.norm();
  r.s3_norm = k.s.s3.norm();
  r.W_o = r.V;
  r.V_net = r.V;
  r.W = r.V;
  r.sigma_min = sigma_min(k.jacobian);
  return r;
}

CentralizedRun run_centralized(const GameProblem& p, const GainSchedule& g,
                               const IntegratorConfig& cfg, const AugmentedState& z0,
                               const CentralizedOptions& opts) {
  p.check_structure();
  z0.check(p.dims);
  g.validate();

  CentralizedRun run;
  run.gains = g;
  run.initial_state = z0;
  run.compactness = compactness_threshold(p);
  const double v0 = stationarity(p, z0, opts.epsilon).olf;
  if (std::isfinite(run.compactness) && !(v0 < run.compactness)) {
    std::ostringstream os;
    os << "centralized flow requires V(z(0)) < c*: V(z(0)) = " << v0
       << ", c* = " << run.compactness;
    throw PreconditionError(os.str());
  }

  const Dimensions& d = p.dims;
  const double eps = opts.epsilon;
  VectorField field = [&](double t, const Vec& y, Vec& dy) {
    const AugmentedState z = AugmentedState::from_flat(d, y);
    dy = -g.sigma_opt(t) * olf_gradient(p, z, eps).full;
  };
  StepObserver observe = [&](double t, const Vec& y) {
    run.trace.push_back(centralized_record(p, AugmentedState::from_flat(d, y), t, eps));
    if (opts.keep_states) run.states.push_back(y);
  };
  run.flow = integrate_flow(field, z0.flat(), g, cfg, observe);
  run.final_state = AugmentedState::from_flat(d, run.flow.final_state);
  run.final_residual = run.trace.back().S_norm;
  run.converged = run.final_residual <= opts.convergence_target;
  return run;
}

ExponentFit fit_decay_exponent(const std::vector<double>& tau, const std::vector<double>& value,
                               double noise_floor, double decades) {
  double tau_lo = kInf;
  for (size_t k = 0; k < tau.size(); ++k)
    if (value[k] > noise_floor) tau_lo = std::min(tau_lo, tau[k]);
  ExponentFit fit;
  if (!std::isfinite(tau_lo)) return fit;
  const double tau_hi = tau_lo * std::pow(10.0, decades);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t k = 0; k < tau.size(); ++k) {
    if (!(value[k] > noise_floor) || tau[k] > tau_hi) continue;
    const double lx = std::log(tau[k]);
    const double ly = std::log(value[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++fit.points;
  }
  if (fit.points < 2) return fit;
  const double nn = fit.points;
  const double den = nn * sxx - sx * sx;
  fit.slope = den > 0.0 ? (nn * sxy - sx * sy) / den : 0.0;
  return fit;
}

EnvelopeReport check_decay_envelope(const std::vector<TraceRecord>& trace, const GainSchedule& g,
                                    double sigma_lb, const EnvelopeOptions& opts) {
  if (!(sigma_lb > 0.0)) throw std::invalid_argument("decay envelope needs sigma_lb > 0");
  if (trace.empty()) throw std::invalid_argument("decay envelope: empty trace");
  EnvelopeReport rep;
  rep.gamma_bound = 2.0 * sigma_lb * sigma_lb * g.mu_c;

  std::vector<double> tau, v;
  for (const TraceRecord& r : trace) {
    tau.push_back(g.time_to_go(r.t) / g.horizon);
    v.push_back(r.V);
  }
  const ExponentFit fit = fit_decay_exponent(tau, v, opts.noise_floor, opts.fit_decades);
  if (fit.points < opts.min_fit_points) {
    std::ostringstream os;
    os << "decay envelope: only " << fit.points << " trace points in the fit window";
    throw std::invalid_argument(os.str());
  }
  rep.gamma_emp = fit.slope;
  rep.fit_points = fit.points;

  const double v0 = trace.front().V;
  rep.pointwise_ok = true;
  for (size_t k = 0; k < trace.size(); ++k) {
    const double env = v0 * std::pow(tau[k], rep.gamma_bound);
    if (v[k] <= opts.noise_floor && env <= opts.noise_floor) continue;
    ++rep.checked_points;
    const double bound = std::max(env, opts.noise_floor);
    rep.worst_ratio = std::max(rep.worst_ratio, v[k] / bound);
    if (v[k] > (1.0 + opts.slack) * bound) rep.pointwise_ok = false;
  }
  return rep;
}

EnvelopeReport check_decay_envelope(const CentralizedRun& run, double sigma_lb,
                                    const EnvelopeOptions& opts) {
  return check_decay_envelope(run.trace, run.gains, sigma_lb, opts);
}

}  // namespace ptgne
