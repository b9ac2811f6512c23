#include "ptgne/graph.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace ptgne {

CommGraph::CommGraph(int agents, const std::vector<Edge>& edges) {
  if (agents < 1) throw std::invalid_argument("graph needs at least one node");
  adjacency_ = Mat::Zero(agents, agents);
  for (const Edge& e : edges) {
    if (e.i < 0 || e.j < 0 || e.i >= agents || e.j >= agents)
      throw std::invalid_argument("edge endpoint out of range");
    if (e.i == e.j) throw std::invalid_argument("self-loops are not allowed");
    if (!(e.weight > 0.0)) throw std::invalid_argument("edge weights must be positive");
    adjacency_(e.i, e.j) += e.weight;
    adjacency_(e.j, e.i) += e.weight;
  }
  laplacian_ = -adjacency_;
  for (int i = 0; i < agents; ++i) {
    // row sum computed from the same entries keeps L 1 = 0 exact
    double deg = 0.0;
    for (int k = 0; k < agents; ++k) deg += adjacency_(i, k);
    laplacian_(i, i) = deg;
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(laplacian_, Eigen::EigenvaluesOnly);
  spectrum_ = eig.eigenvalues();
  lambda2_ = agents >= 2 ? spectrum_(1) : 0.0;

  neighbors_.resize(agents);
  for (int i = 0; i < agents; ++i)
    for (int k = 0; k < agents; ++k)
      if (adjacency_(i, k) > 0.0) neighbors_[i].push_back(k);
}

std::vector<Edge> CommGraph::edges() const {
  std::vector<Edge> out;
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j)
      if (adjacency_(i, j) > 0.0) out.push_back({i, j, adjacency_(i, j)});
  return out;
}

double CommGraph::quadratic_form(const Vec& x) const { return x.dot(laplacian_ * x); }

CommGraph build_graph(const std::vector<Edge>& edges) {
  int top = 0;
  for (const Edge& e : edges) top = std::max({top, e.i, e.j});
  return CommGraph(top + 1, edges);
}

CommGraph random_spanning_tree(int agents, std::uint64_t seed) {
  if (agents < 2) throw std::invalid_argument("spanning tree needs at least two nodes");
  Rng rng(seed);
  std::vector<int> code(static_cast<size_t>(agents - 2));
  for (int& c : code) c = static_cast<int>(rng.index(static_cast<std::uint64_t>(agents)));

  std::vector<int> degree(static_cast<size_t>(agents), 1);
  for (int c : code) ++degree[c];
  std::priority_queue<int, std::vector<int>, std::greater<>> leaves;
  for (int v = 0; v < agents; ++v)
    if (degree[v] == 1) leaves.push(v);

  std::vector<Edge> edges;
  for (int c : code) {
    const int leaf = leaves.top();
    leaves.pop();
    edges.push_back({std::min(leaf, c), std::max(leaf, c), 1.0});
    if (--degree[c] == 1) leaves.push(c);
  }
  const int u = leaves.top();
  leaves.pop();
  const int v = leaves.top();
  edges.push_back({std::min(u, v), std::max(u, v), 1.0});
  return CommGraph(agents, edges);
}

CommGraph depth_first_relabel(const CommGraph& g, int root) {
  const int n = g.size();
  if (root < 0 || root >= n) throw std::invalid_argument("relabel root out of range");
  std::vector<int> label(static_cast<size_t>(n), -1);
  std::vector<int> stack{root};
  int next = 0;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    if (label[v] >= 0) continue;
    label[v] = next++;
    const std::vector<int>& nb = g.neighbors(v);
    for (auto it = nb.rbegin(); it != nb.rend(); ++it)  // ascending visit order
      if (label[*it] < 0) stack.push_back(*it);
  }
  for (int v = 0; v < n; ++v)  // unreachable nodes keep their relative order
    if (label[v] < 0) label[v] = next++;
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    const int a = label[e.i], b = label[e.j];
    edges.push_back({std::min(a, b), std::max(a, b), e.weight});
  }
  return CommGraph(n, edges);
}

CommGraph benchmark_tree(int agents, std::uint64_t seed) {
  return depth_first_relabel(random_spanning_tree(agents, seed), 0);
}

CommGraph path_graph(int agents) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < agents; ++i) edges.push_back({i, i + 1, 1.0});
  return CommGraph(agents, edges);
}

CommGraph complete_graph(int agents) {
  std::vector<Edge> edges;
  for (int i = 0; i < agents; ++i)
    for (int j = i + 1; j < agents; ++j) edges.push_back({i, j, 1.0});
  return CommGraph(agents, edges);
}

CommGraph read_edge_list(std::istream& in, int agents) {
  std::vector<Edge> edges;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    Edge e;
    if (!(ls >> e.i >> e.j >> e.weight))
      throw std::invalid_argument("edge list line " + std::to_string(lineno) +
                                  ": expected `i j weight`");
    std::string rest;
    if (ls >> rest)
      throw std::invalid_argument("edge list line " + std::to_string(lineno) +
                                  ": trailing content");
    edges.push_back(e);
  }
  if (agents < 0) return build_graph(edges);
  return CommGraph(agents, edges);
}

CommGraph read_edge_list_file(const std::string& path, int agents) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open edge list: " + path);
  return read_edge_list(in, agents);
}

void write_edge_list(std::ostream& out, const CommGraph& g) {
  out << std::setprecision(17);
  for (const Edge& e : g.edges()) out << e.i << ' ' << e.j << ' ' << e.weight << '\n';
}

CommGraph parse_graph_spec(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string tok; std::getline(ss, tok, ':');) parts.push_back(tok);
  auto to_int = [&](const std::string& s) {
    size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad integer in graph spec: " + spec);
    return v;
  };
  if (!parts.empty()) {
    if (parts[0] == "tree" && parts.size() == 3)
      return random_spanning_tree(static_cast<int>(to_int(parts[1])),
                                  static_cast<std::uint64_t>(to_int(parts[2])));
    if (parts[0] == "dfstree" && parts.size() == 3)
      return benchmark_tree(static_cast<int>(to_int(parts[1])),
                            static_cast<std::uint64_t>(to_int(parts[2])));
    if (parts[0] == "path" && parts.size() == 2)
      return path_graph(static_cast<int>(to_int(parts[1])));
    if (parts[0] == "complete" && parts.size() == 2)
      return complete_graph(static_cast<int>(to_int(parts[1])));
  }
  return read_edge_list_file(spec);
}

}  // namespace ptgne
