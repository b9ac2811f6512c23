#pragma once

#include "ptgne/linalg.hpp"

#include <functional>
#include <string>

namespace ptgne {

/// Prescribed-time gain schedule. Every (T - t)^-1 singularity is regularized
/// to (T - t + epsilon_bar)^-1 so the gains stay finite at t = T.
struct GainSchedule {
  double horizon = 10.0;  // T
  double mu_c = 20.0;
  double k_o = 50.0;
  double c_o = 100.0;
  double gamma_c = 2.0;
  double k_d = 5.0;
  double epsilon_bar = 1e-10;

  /// Throws std::invalid_argument naming the offending gain.
  void validate() const;

  double time_to_go(double t) const { return horizon - t + epsilon_bar; }
  double sigma_opt(double t) const { return mu_c / time_to_go(t); }
  /// Observer gain k_o + c_o * gamma_c / (T - t + epsilon_bar).
  double xi(double t) const { return k_o + c_o * gamma_c / time_to_go(t); }
  /// Dual consensus gain, synchronized with sigma_opt.
  double kappa(double t) const { return k_d * sigma_opt(t); }
  /// Observer time scaling 1 / (T - t + epsilon_bar)^gamma_c.
  double mu_o(double t) const;
};

double sigma_opt(const GainSchedule& g, double t);
double xi_consensus(const GainSchedule& g, double t);

enum class Method { AdaptiveRK45, FixedRK4 };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct IntegratorConfig {
  Method method = Method::AdaptiveRK45;
  double rel_tol = 1e-11;
  double abs_tol = 1e-12;
  /// Every step is capped at eta * (T - t + epsilon_bar). For FixedRK4 the
  /// step equals this cap, so eta must be small enough for stability.
  double max_step_fraction = 0.5;
  int trace_stride = 1;

  void validate() const;
};

/// dy/dt = f(t, y); the field writes into `dydt` (pre-sized).
using VectorField = std::function<void(double t, const Vec& y, Vec& dydt)>;
/// Called at t = 0, every trace_stride accepted steps, and at t = T.
using StepObserver = std::function<void(double t, const Vec& y)>;

struct FlowResult {
  Vec final_state;
  double t_final = 0.0;
  long accepted_steps = 0;
  long rejected_steps = 0;
  long rhs_evaluations = 0;
};

/// Integrates from t = 0 to exactly t = T. Deterministic for identical inputs.
/// Throws IntegrationFailure when the error-controlled step drops below
/// 1e-14 T and DivergenceError on a non-finite state.
FlowResult integrate_flow(const VectorField& f, const Vec& y0, const GainSchedule& g,
                          const IntegratorConfig& cfg, const StepObserver& observer = {});

}  // namespace ptgne
