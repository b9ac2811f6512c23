#pragma once

#include "ptgne/integrate.hpp"
#include "ptgne/kkt.hpp"
#include "ptgne/trace.hpp"

#include <vector>

namespace ptgne {

struct CentralizedOptions {
  double epsilon = kDefaultSmoothing;
  /// Required final ||S(z(T))||.
  double convergence_target = 1e-8;
  /// Keep the full augmented state at each trace point.
  bool keep_states = false;
};

struct CentralizedRun {
  std::vector<TraceRecord> trace;
  std::vector<Vec> states;  // only with keep_states
  AugmentedState initial_state;
  AugmentedState final_state;
  FlowResult flow;
  GainSchedule gains;
  double compactness = kInf;  // c*
  double final_residual = 0.0;
  bool converged = false;

  /// Smallest sigma_min(dS) over the trace.
  double sampled_sigma_lb() const;
  /// Throws ConvergenceFailure unless the final residual met the target.
  void require_convergence(double target) const;
};

/// Integrates dz/dt = -sigma_opt(t) dS(z)^T S(z) on [0, T]. Throws
/// PreconditionError when c* is finite and V(z0) >= c*.
CentralizedRun run_centralized(const GameProblem& p, const GainSchedule& g,
                               const IntegratorConfig& cfg, const AugmentedState& z0,
                               const CentralizedOptions& opts = {});

/// Builds a trace row at z.
TraceRecord centralized_record(const GameProblem& p, const AugmentedState& z, double t,
                               double eps);

struct EnvelopeOptions {
  double slack = 0.05;
  /// Values below this are treated as converged to round-off and excluded
  /// from the pointwise check and the exponent fit.
  double noise_floor = 1e-24;
  /// Width of the fit window in decades of (T - t + epsilon_bar) / T.
  double fit_decades = 2.0;
  int min_fit_points = 10;
};

struct EnvelopeReport {
  double gamma_bound = 0.0;  // 2 sigma_lb^2 mu_c
  double gamma_emp = 0.0;    // least-squares slope of log V vs log tau
  int fit_points = 0;
  bool pointwise_ok = false;
  double worst_ratio = 0.0;  // max V / envelope over checked points
  int checked_points = 0;
};

/// Checks V(t) <= (1 + slack) V(0) tau^gamma_bound with tau = (T - t + eps_bar)/T.
/// Throws std::invalid_argument when fewer than min_fit_points rows fall in
/// the fit window.
EnvelopeReport check_decay_envelope(const std::vector<TraceRecord>& trace, const GainSchedule& g,
                                    double sigma_lb, const EnvelopeOptions& opts = {});
EnvelopeReport check_decay_envelope(const CentralizedRun& run, double sigma_lb,
                                    const EnvelopeOptions& opts = {});

/// Least-squares slope of log(value) against log(tau) over the last
/// `decades` decades of tau above the noise floor. Shared by the envelope and
/// dissipation checks.
struct ExponentFit {
  double slope = 0.0;
  int points = 0;
};
ExponentFit fit_decay_exponent(const std::vector<double>& tau, const std::vector<double>& value,
                               double noise_floor, double decades);

}  // namespace ptgne
