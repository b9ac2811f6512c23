#include "ptgne/distributed.hpp"

#include "ptgne/diagnostics.hpp"
#include "ptgne/errors.hpp"

#include <cmath>
#include <sstream>

namespace ptgne {

NetworkLayout::NetworkLayout(const Dimensions& dims) : dims_(dims) {
  dims_.validate();
  const int n_agents = dims_.agents();
  for (int j = 0; j < n_agents; ++j) {
    local_dim_.push_back(dims_.local_dim(j));
    state_offset_.push_back(local_total_);
    local_total_ += local_dim_.back();
  }
  int off = local_total_;
  for (int i = 0; i < n_agents; ++i) {
    row_offset_.push_back(off);
    off += local_total_ - local_dim_[i];
  }
  size_ = off;
}

int NetworkLayout::estimate_offset(int i, int j) const {
  if (i == j) return state_offset_[j];
  // skip the missing diagonal block when j lies past i
  return row_offset_[i] + state_offset_[j] - (j > i ? local_dim_[i] : 0);
}

NetworkState::NetworkState(const Dimensions& dims)
    : layout(dims), flat(Vec::Zero(layout.size())) {}

NetworkState::NetworkState(const Dimensions& dims, Vec data) : layout(dims), flat(std::move(data)) {
  if (flat.size() != layout.size())
    throw StructuralError("network state: flat vector has the wrong size");
}

Vec NetworkState::x(int j) const { return z(j).head(layout.dims().primal_dims[j]); }

Vec NetworkState::lambda(int j) const {
  return z(j).segment(layout.dims().primal_dims[j], layout.dims().ineq_count);
}

Vec NetworkState::mu(int j) const { return z(j).tail(layout.dims().eq_count); }

Vec NetworkState::primal() const {
  const Dimensions& d = layout.dims();
  Vec out(d.n());
  for (int j = 0; j < d.agents(); ++j) out.segment(d.primal_offset(j), d.primal_dims[j]) = x(j);
  return out;
}

Vec NetworkState::lambda_bar() const {
  Vec acc = Vec::Zero(layout.dims().ineq_count);
  for (int j = 0; j < layout.agents(); ++j) acc += lambda(j);
  return acc / layout.agents();
}

Vec NetworkState::mu_bar() const {
  Vec acc = Vec::Zero(layout.dims().eq_count);
  for (int j = 0; j < layout.agents(); ++j) acc += mu(j);
  return acc / layout.agents();
}

AugmentedState NetworkState::network_average() const {
  return {primal(), lambda_bar(), mu_bar()};
}

namespace {

/// Consensus point from one agent's estimate row, given as block(j) -> y_ij.
template <class Block>
AugmentedState estimate_point(const Dimensions& d, Block&& block) {
  AugmentedState z = AugmentedState::zeros(d);
  const int n_agents = d.agents();
  for (int j = 0; j < n_agents; ++j) {
    auto&& yj = block(j);
    const int nj = d.primal_dims[j];
    z.x.segment(d.primal_offset(j), nj) = yj.head(nj);
    z.lambda += yj.segment(nj, d.ineq_count);
    z.mu += yj.tail(d.eq_count);
  }
  z.lambda /= n_agents;
  z.mu /= n_agents;
  return z;
}

}  // namespace

AugmentedState NetworkState::agent_estimate(int i) const {
  return estimate_point(layout.dims(), [&](int j) { return y(i, j); });
}

void NetworkState::synchronize_estimates() {
  for (int i = 0; i < layout.agents(); ++i)
    for (int j = 0; j < layout.agents(); ++j)
      if (i != j) y(i, j) = z(j);
}

NetworkState make_initial_network(const Dimensions& dims, const std::vector<Vec>& local_states,
                                  std::uint64_t seed, double perturbation_radius) {
  NetworkState ns(dims);
  if (static_cast<int>(local_states.size()) != dims.agents())
    throw StructuralError("initial network: one local state per agent required");
  for (int j = 0; j < dims.agents(); ++j) {
    if (local_states[j].size() != ns.layout.local_dim(j))
      throw StructuralError("initial network: local state size mismatch");
    ns.z(j) = local_states[j];
  }
  Rng rng(seed);
  for (int i = 0; i < dims.agents(); ++i)
    for (int j = 0; j < dims.agents(); ++j) {
      if (i == j) continue;
      auto yij = ns.y(i, j);
      for (Eigen::Index c = 0; c < yij.size(); ++c)
        yij(c) = ns.z(j)(c) + rng.uniform(-perturbation_radius, perturbation_radius);
    }
  return ns;
}

AgentView make_agent_view(const NetworkState& ns, const CommGraph& graph, int i) {
  const Dimensions& d = ns.layout.dims();
  AgentView v;
  v.agent = i;
  for (int j = 0; j < d.agents(); ++j) v.estimates.emplace_back(ns.y(i, j));
  for (int k : graph.neighbors(i)) {
    v.neighbors.push_back(k);
    v.weights.push_back(graph.adjacency()(i, k));
    v.neighbor_duals.emplace_back(ns.z(k).tail(d.ineq_count + d.eq_count));
  }
  return v;
}

Vec agent_control(const GameProblem& p, const AgentView& view, double t, const GainSchedule& g,
                  double eps) {
  const Dimensions& d = p.dims;
  const int i = view.agent;
  const int n_agents = d.agents();
  const int ni = d.primal_dims[i];
  const int nd = d.ineq_count + d.eq_count;

  const AugmentedState yhat =
      estimate_point(d, [&](int j) -> const Vec& { return view.estimates[j]; });
  const OlfGradient grad = olf_gradient(p, yhat, eps);

  const double sigma = g.sigma_opt(t);
  const double kappa = g.kappa(t);
  Vec u(ni + nd);
  u.head(ni) = -sigma * grad.x().segment(d.primal_offset(i), ni);

  // grad wrt the agent's own dual copy is (1/N) of the averaged-dual gradient
  Vec own_dual_grad(nd);
  own_dual_grad << grad.lambda(), grad.mu();
  own_dual_grad /= n_agents;
  const Vec own_dual = view.estimates[i].tail(nd);
  Vec laplacian_term = Vec::Zero(nd);
  for (size_t k = 0; k < view.neighbors.size(); ++k)
    laplacian_term += view.weights[k] * (own_dual - view.neighbor_duals[k]);
  u.tail(nd) = -n_agents * sigma * own_dual_grad - kappa * laplacian_term;
  return u;
}

void observer_rhs(const NetworkState& ns, const CommGraph& graph, double t, const GainSchedule& g,
                  Vec& dflat) {
  const int n_agents = ns.layout.agents();
  const double xi = g.xi(t);
  const Mat& adj = graph.adjacency();
  for (int i = 0; i < n_agents; ++i) {
    const std::vector<int>& nbrs = graph.neighbors(i);
    for (int j = 0; j < n_agents; ++j) {
      if (i == j) continue;
      auto out = dflat.segment(ns.layout.estimate_offset(i, j), ns.layout.local_dim(j));
      out.setZero();
      for (int k : nbrs) out -= adj(i, k) * (ns.y(i, j) - ns.y(k, j));  // y_jj is z_j
      out *= xi;
    }
  }
}

void network_rhs(const GameProblem& p, const CommGraph& graph, const GainSchedule& g, double eps,
                 double t, const NetworkState& ns, Vec& dflat) {
  if (dflat.size() != ns.flat.size()) dflat.resize(ns.flat.size());
  for (int i = 0; i < ns.layout.agents(); ++i)
    dflat.segment(ns.layout.state_offset(i), ns.layout.local_dim(i)) =
        agent_control(p, make_agent_view(ns, graph, i), t, g, eps);
  observer_rhs(ns, graph, t, g, dflat);
}

DistributedRun::DistributedRun(const Dimensions& dims) : final_state(dims) {}

bool DistributedRun::passed() const {
  for (const Assertion& a : assertions)
    if (!a.pass) return false;
  return true;
}

DistributedRun run_distributed(const GameProblem& p, const CommGraph& graph, const GainSchedule& g,
                               const IntegratorConfig& cfg, const NetworkState& initial,
                               const DistributedOptions& opts) {
  p.check_structure();
  g.validate();
  const Dimensions& d = p.dims;
  if (graph.size() != d.agents())
    throw StructuralError("distributed run: graph size differs from agent count");
  if (initial.flat.size() != NetworkLayout(d).size())
    throw StructuralError("distributed run: initial state does not match the problem");
  if (!graph.connected()) {
    std::ostringstream os;
    os << "distributed run requires a connected graph (lambda_2 = " << graph.lambda2() << ")";
    throw PreconditionError(os.str());
  }

  DistributedRun run(d);
  run.gains = g;
  run.compactness = compactness_threshold(p);
  const double eps = opts.epsilon;
  const LyapunovSnapshot s0 = snapshot(initial, graph, p, g, eps, 0.0);
  run.W0 = s0.W;
  if (std::isfinite(run.compactness) && !(run.W0 < run.compactness)) {
    std::ostringstream os;
    os << "distributed run requires W(0) < c*: W(0) = " << run.W0 << ", c* = " << run.compactness;
    throw PreconditionError(os.str());
  }

  NetworkState work = initial;
  const int local_total = work.layout.state_offset(d.agents() - 1) + work.layout.local_dim(d.agents() - 1);
  VectorField field = [&](double t, const Vec& y, Vec& dy) {
    work.flat = y;
    network_rhs(p, graph, g, eps, t, work, dy);
  };
  StepObserver observe = [&](double t, const Vec& y) {
    NetworkState view(d, y);
    LyapunovSnapshot s = snapshot(view, graph, p, g, eps, t);
    run.all_finite = run.all_finite && y.allFinite() && std::isfinite(s.W);
    run.trace.push_back(s.record());
    run.snapshots.push_back(std::move(s));
    if (opts.keep_agent_states) {
      run.state_times.push_back(t);
      run.agent_states.emplace_back(y.head(local_total));
    }
  };
  run.flow = integrate_flow(field, initial.flat, g, cfg, observe);
  run.final_state.flat = run.flow.final_state;

  const NetworkState& fin = run.final_state;
  double worst_olf = 0.0;
  for (int i = 0; i < d.agents(); ++i) {
    run.agent_olf.push_back(stationarity(p, fin.agent_estimate(i), eps).olf);
    worst_olf = std::max(worst_olf, run.agent_olf.back());
  }
  run.consensus_error = max_consensus_error(fin);
  run.dual_disagreement = max_dual_disagreement(fin);

  auto check = [&](const std::string& name, double value, double threshold) {
    run.assertions.push_back({name, value, threshold, value <= threshold});
  };
  check("consensus_error", run.consensus_error, opts.tol_consensus);
  check("max_agent_V", worst_olf, opts.tol_olf);
  check("dual_disagreement", run.dual_disagreement, opts.tol_dual);
  run.assertions.push_back({"signals_finite", run.all_finite ? 0.0 : 1.0, 0.0, run.all_finite});

  if (opts.enforce)
    for (const Assertion& a : run.assertions)
      if (!a.pass) throw ConvergenceFailure(a.name, a.value, a.threshold);
  return run;
}

}  // namespace ptgne
