#pragma once

#include "ptgne/distributed.hpp"

#include <optional>
#include <vector>

namespace ptgne {

/// Computed from scratch with no caching.
LyapunovSnapshot snapshot(const NetworkState& ns, const CommGraph& graph, const GameProblem& p,
                          const GainSchedule& g, double eps, double t = 0.0);

double consensus_energy(const NetworkState& ns, const CommGraph& graph);
double dual_energy(const NetworkState& ns, const CommGraph& graph);
double max_consensus_error(const NetworkState& ns);
double max_dual_disagreement(const NetworkState& ns);

struct DissipationOptions {
  double confinement_tol = 1e-6;
  double band_slack = 0.05;
  double band_exponent_factor = 0.9;
  double noise_floor = 1e-24;
  double fit_decades = 2.0;
};

struct DissipationReport {
  double W0 = 0.0;
  double max_W = 0.0;
  bool confinement_ok = false;
  double gamma_emp = 0.0;
  int fit_points = 0;
  bool band_ok = false;
  double worst_band_ratio = 0.0;
  bool additivity_ok = false;
  bool nonnegative_ok = false;
};

/// Confinement max W <= W(0)(1 + tol), an empirical exponent fitted on log W
/// against log((T - t + eps_bar) / T), and the self-consistency band
/// W <= (1 + slack) W(0) tau^(0.9 gamma_emp). Throws std::invalid_argument
/// for fewer than 10 snapshots.
DissipationReport check_dissipation(const std::vector<LyapunovSnapshot>& trace,
                                    const GainSchedule& g, const DissipationOptions& opts = {});

/// Curvature condition for bundles whose Hessians are multiples of the
/// identity, d2g_j = h_j I: lambda_min(sym dF(x)) + sum_j h_j lambda_bar_j > 0.
/// For the sensor game (h = 2) this reads lambda_bar > -lambda_min(dF) / 2.
struct HessianConditionReport {
  bool applicable = false;
  bool ok = true;
  int violations = 0;
  double worst_margin = kInf;
  double lambda_min_F = 0.0;  // at the last snapshot checked
};

HessianConditionReport check_sensor_hessian_condition(const std::vector<LyapunovSnapshot>& trace,
                                                      const GameProblem& p);

/// Advisory dual-consensus threshold k_d* = sigma_lb^2 / lambda_2(L).
double dual_gain_threshold(double sigma_lb, const CommGraph& graph);

}  // namespace ptgne
