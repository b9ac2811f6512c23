#include "ptgne/integrate.hpp"

#include "ptgne/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ptgne {

void GainSchedule::validate() const {
  auto bad = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (!(horizon > 0.0)) bad("prescribed time T must be positive");
  if (!(mu_c > 0.0)) bad("mu_c must be positive");
  if (!(k_o >= 0.0)) bad("k_o must be non-negative");
  if (!(c_o > 0.0)) bad("c_o must be positive");
  if (!(gamma_c >= 2.0)) bad("gamma_c must satisfy gamma_c >= 2");
  if (!(k_d > 0.0)) bad("k_d must be positive");
  if (!(epsilon_bar > 0.0)) bad("epsilon_bar must be positive");
}

double GainSchedule::mu_o(double t) const { return std::pow(time_to_go(t), -gamma_c); }

double sigma_opt(const GainSchedule& g, double t) { return g.sigma_opt(t); }
double xi_consensus(const GainSchedule& g, double t) { return g.xi(t); }

std::string to_string(Method m) {
  return m == Method::AdaptiveRK45 ? "adaptive-rk45" : "fixed-rk4";
}

Method method_from_string(const std::string& s) {
  if (s == "adaptive-rk45") return Method::AdaptiveRK45;
  if (s == "fixed-rk4") return Method::FixedRK4;
  throw std::invalid_argument("unknown integration method: " + s);
}

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
    throw std::invalid_argument("integrator tolerances must be positive");
  if (!(max_step_fraction > 0.0 && max_step_fraction < 1.0))
    throw std::invalid_argument("max_step_fraction must lie in (0, 1)");
  if (trace_stride < 1) throw std::invalid_argument("trace_stride must be >= 1");
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

void check_finite(const Vec& y, double t) {
  if (!y.allFinite()) {
    std::ostringstream os;
    os << "non-finite state at t = " << t;
    throw DivergenceError(os.str(), t);
  }
}

class Stepper {
 public:
  Stepper(const VectorField& f, const GainSchedule& g, const IntegratorConfig& cfg,
          const StepObserver& obs, FlowResult& res)
      : f_(f), g_(g), cfg_(cfg), obs_(obs), res_(res) {}

  void notify(double t, const Vec& y, bool force) {
    if (!obs_) return;
    if (force || res_.accepted_steps % cfg_.trace_stride == 0) obs_(t, y);
  }

  double cap(double t) const {
    return std::min(cfg_.max_step_fraction * g_.time_to_go(t), g_.horizon - t);
  }

  void eval(double t, const Vec& y, Vec& dy) {
    f_(t, y, dy);
    ++res_.rhs_evaluations;
  }

  void run_rk4(Vec& y) {
    const double T = g_.horizon;
    const auto d = y.size();
    Vec k1(d), k2(d), k3(d), k4(d), tmp(d);
    double t = 0.0;
    while (t < T) {
      const double h = cap(t);
      eval(t, y, k1);
      tmp = y + 0.5 * h * k1;
      eval(t + 0.5 * h, tmp, k2);
      tmp = y + 0.5 * h * k2;
      eval(t + 0.5 * h, tmp, k3);
      tmp = y + h * k3;
      eval(t + h, tmp, k4);
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t = (h == T - t) ? T : t + h;
      check_finite(y, t);
      ++res_.accepted_steps;
      if (t < T) notify(t, y, false);
    }
    res_.t_final = T;
  }

  double error_norm(const Vec& y, const Vec& ynew, const Vec& err) const {
    double acc = 0.0;
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      const double sc = cfg_.abs_tol + cfg_.rel_tol * std::max(std::abs(y(k)), std::abs(ynew(k)));
      const double r = err(k) / sc;
      acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(std::max<Eigen::Index>(1, y.size())));
  }

  double initial_step(const Vec& y, const Vec& dy) {
    // Hairer-Wanner starting step heuristic.
    Vec sc = (cfg_.abs_tol + cfg_.rel_tol * y.cwiseAbs().array()).matrix();
    const double d0 = std::sqrt((y.array() / sc.array()).square().mean());
    const double d1 = std::sqrt((dy.array() / sc.array()).square().mean());
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, cap(0.0));
    Vec y1 = y + h0 * dy;
    Vec dy1(y.size());
    eval(h0, y1, dy1);
    const double d2 = std::sqrt(((dy1 - dy).array() / sc.array()).square().mean()) / h0;
    const double h1 = std::max(d1, d2) <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                                  : std::pow(0.01 / std::max(d1, d2), 0.2);
    return std::min({100.0 * h0, h1, cap(0.0)});
  }

  void run_dopri(Vec& y) {
    const double T = g_.horizon;
    const auto d = y.size();
    Vec k1(d), k2(d), k3(d), k4(d), k5(d), k6(d), k7(d), tmp(d), ynew(d), err(d);
    double t = 0.0;
    eval(t, y, k1);
    double h = initial_step(y, k1);
    const double h_floor = 1e-14 * T;
    bool last_rejected = false;
    while (t < T) {
      if (h < h_floor && h < T - t) {
        std::ostringstream os;
        os << "step size underflow (h = " << h << ") at t = " << t;
        throw IntegrationFailure(os.str(), t);
      }
      const double hc = std::min(h, cap(t));
      const bool final_step = hc >= T - t;
      tmp = y + hc * (a21 * k1);
      eval(t + c2 * hc, tmp, k2);
      tmp = y + hc * (a31 * k1 + a32 * k2);
      eval(t + c3 * hc, tmp, k3);
      tmp = y + hc * (a41 * k1 + a42 * k2 + a43 * k3);
      eval(t + c4 * hc, tmp, k4);
      tmp = y + hc * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      eval(t + c5 * hc, tmp, k5);
      tmp = y + hc * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      eval(t + hc, tmp, k6);
      ynew = y + hc * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      const double tnew = final_step ? T : t + hc;
      eval(tnew, ynew, k7);
      err = hc * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      double en = error_norm(y, ynew, err);
      if (!std::isfinite(en)) en = 1e10;

      if (en <= 1.0) {
        y.swap(ynew);
        k1.swap(k7);
        t = tnew;
        check_finite(y, t);
        ++res_.accepted_steps;
        if (t < T) notify(t, y, false);
        double fac = en == 0.0 ? 5.0 : 0.9 * std::pow(en, -0.2);
        fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 5.0);
        h = hc * fac;
        last_rejected = false;
      } else {
        ++res_.rejected_steps;
        h = hc * std::max(0.2, 0.9 * std::pow(en, -0.2));
        last_rejected = true;
      }
    }
    res_.t_final = T;
  }

 private:
  const VectorField& f_;
  const GainSchedule& g_;
  const IntegratorConfig& cfg_;
  const StepObserver& obs_;
  FlowResult& res_;
};

}  // namespace

FlowResult integrate_flow(const VectorField& f, const Vec& y0, const GainSchedule& g,
                          const IntegratorConfig& cfg, const StepObserver& observer) {
  g.validate();
  cfg.validate();
  check_finite(y0, 0.0);
  FlowResult res;
  Vec y = y0;
  Stepper stepper(f, g, cfg, observer, res);
  stepper.notify(0.0, y, true);
  if (cfg.method == Method::FixedRK4)
    stepper.run_rk4(y);
  else
    stepper.run_dopri(y);
  stepper.notify(g.horizon, y, true);
  res.final_state = std::move(y);
  return res;
}

}  // namespace ptgne
