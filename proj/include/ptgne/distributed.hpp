#pragma once

#include "ptgne/graph.hpp"
#include "ptgne/integrate.hpp"
#include "ptgne/kkt.hpp"
#include "ptgne/trace.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ptgne {

/// Index arithmetic for the flat simulation state. Agent blocks z_j come first
/// (agent-major), followed by the off-diagonal estimates y_ij in lexicographic
/// (i, j) order. The diagonal y_jj has no storage: it is z_j.
class NetworkLayout {
 public:
  explicit NetworkLayout(const Dimensions& dims);

  const Dimensions& dims() const { return dims_; }
  int agents() const { return dims_.agents(); }
  /// m_j = n_j + p + m.
  int local_dim(int j) const { return local_dim_[j]; }
  int state_offset(int j) const { return state_offset_[j]; }
  /// Offset of y_ij; resolves to state_offset(j) when i == j.
  int estimate_offset(int i, int j) const;
  /// N * sum_j m_j.
  int size() const { return size_; }

 private:
  Dimensions dims_;
  std::vector<int> local_dim_;
  std::vector<int> state_offset_;
  std::vector<int> row_offset_;  // start of row i's off-diagonal estimates
  int local_total_ = 0;
  int size_ = 0;
};

/// Owning distributed state (agent states plus estimate bank) over the flat
/// vector the integrator advances.
struct NetworkState {
  NetworkLayout layout;
  Vec flat;

  explicit NetworkState(const Dimensions& dims);
  NetworkState(const Dimensions& dims, Vec data);

  auto z(int j) { return flat.segment(layout.state_offset(j), layout.local_dim(j)); }
  auto z(int j) const { return flat.segment(layout.state_offset(j), layout.local_dim(j)); }
  auto y(int i, int j) { return flat.segment(layout.estimate_offset(i, j), layout.local_dim(j)); }
  auto y(int i, int j) const {
    return flat.segment(layout.estimate_offset(i, j), layout.local_dim(j));
  }

  Vec x(int j) const;
  Vec lambda(int j) const;
  Vec mu(int j) const;
  /// Stacked true primal x = col(x_1, ..., x_N).
  Vec primal() const;
  Vec lambda_bar() const;
  Vec mu_bar() const;
  /// (x, lambda_bar, mu_bar).
  AugmentedState network_average() const;
  /// Agent i's consensus point: x-hat from its estimates, duals averaged over
  /// its estimated dual blocks (estimate-average convention).
  AugmentedState agent_estimate(int i) const;
  /// Every estimate set to the true state it tracks.
  void synchronize_estimates();
};

/// Estimates start at z_j(0) plus a seeded uniform perturbation in
/// [-radius, radius] per component.
NetworkState make_initial_network(const Dimensions& dims, const std::vector<Vec>& local_states,
                                  std::uint64_t seed, double perturbation_radius = 1.0);

/// Everything agent i may read when computing u_i: its own estimate row
/// (which includes its own state through pinning) and the dual blocks of its
/// graph neighbors.
struct AgentView {
  int agent = 0;
  std::vector<Vec> estimates;  // y_ij for j = 0..N-1; estimates[agent] == z_i
  std::vector<int> neighbors;
  std::vector<double> weights;          // a_ik for each neighbor
  std::vector<Vec> neighbor_duals;      // col(lambda_k, mu_k) for each neighbor
};

/// Copies exactly the inputs agent i is entitled to.
AgentView make_agent_view(const NetworkState& ns, const CommGraph& graph, int i);

/// u_i = col(u^x, u^lambda, u^mu):
///   u^x      = -sigma grad_{x_i} V(y_i)
///   u^lambda = -N sigma grad_{lambda_i} V(y_i) - kappa sum_k a_ik (lambda_i - lambda_k)
///   u^mu     analogous, with grad_{lambda_i} V = (1/N) grad_{lambda_bar} V.
Vec agent_control(const GameProblem& p, const AgentView& view, double t, const GainSchedule& g,
                  double eps);

/// Writes dy_ij/dt = -xi(t) sum_k a_ik (y_ij - y_kj) for all i != j into the
/// estimate part of `dflat`. Agent blocks of `dflat` are left untouched.
void observer_rhs(const NetworkState& ns, const CommGraph& graph, double t, const GainSchedule& g,
                  Vec& dflat);

/// Full stacked field: agent controls into the z blocks, observer into the rest.
void network_rhs(const GameProblem& p, const CommGraph& graph, const GainSchedule& g, double eps,
                 double t, const NetworkState& ns, Vec& dflat);

struct DistributedOptions {
  double epsilon = kDefaultSmoothing;
  double tol_consensus = 1e-7;  // max ||y_ij(T) - z_j(T)||
  double tol_olf = 1e-14;       // V at every agent's consensus point
  double tol_dual = 1e-8;       // max ||lambda_i - lambda_j|| + ||mu_i - mu_j||
  /// Throw ConvergenceFailure when a terminal assertion fails. When false the
  /// outcome is only recorded in DistributedRun::assertions.
  bool enforce = true;
  /// Keep the agent blocks (not the estimates) at every trace point.
  bool keep_agent_states = false;
};

struct Assertion {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

/// Composite Lyapunov components of a network state.
struct LyapunovSnapshot {
  double t = 0.0;
  double W_c = 0.0;      // 0.5 sum_j E_j^T (L x I) E_j
  double W_o = 0.0;      // V(x, lambda_bar, mu_bar)
  double W_delta = 0.0;  // 0.5 delta^T (L x I) delta
  double V_net = 0.0;    // W_o + k_d W_delta
  double W = 0.0;        // W_c + V_net
  double dual_disagreement = 0.0;
  double consensus_error = 0.0;
  double sigma_min = 0.0;  // of dS at (x, lambda_bar, mu_bar)
  double stationarity_norm = 0.0;
  double s1_norm = 0.0;
  double s2_norm = 0.0;
  double s3_norm = 0.0;
  Vec x;
  Vec lambda_bar;
  Vec mu_bar;

  TraceRecord record() const;
};

struct DistributedRun {
  std::vector<LyapunovSnapshot> snapshots;
  std::vector<TraceRecord> trace;
  std::vector<double> state_times;   // only with keep_agent_states
  std::vector<Vec> agent_states;     // flat agent blocks, only with keep_agent_states
  NetworkState final_state;
  FlowResult flow;
  GainSchedule gains;
  double compactness = kInf;
  double W0 = 0.0;
  std::vector<double> agent_olf;  // V(y_i(T)) per agent
  double consensus_error = 0.0;
  double dual_disagreement = 0.0;
  bool all_finite = true;
  std::vector<Assertion> assertions;

  explicit DistributedRun(const Dimensions& dims);
  bool passed() const;
};

/// Integrates the observer and all agent controls on [0, T]. Throws
/// PreconditionError for a disconnected graph or W(0) >= c* (finite c*).
DistributedRun run_distributed(const GameProblem& p, const CommGraph& graph, const GainSchedule& g,
                               const IntegratorConfig& cfg, const NetworkState& initial,
                               const DistributedOptions& opts = {});

}  // namespace ptgne
