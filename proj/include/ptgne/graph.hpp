#pragma once

#include "ptgne/linalg.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ptgne {

struct Edge {
  int i = 0;
  int j = 0;
  double weight = 1.0;
};

inline constexpr double kConnectivityTol = 1e-10;

/// Undirected weighted communication graph with its Laplacian L = D - A and
/// algebraic connectivity. Immutable after construction.
class CommGraph {
 public:
  /// Builds from an edge list on `agents` nodes. Duplicate edges accumulate.
  /// Throws std::invalid_argument for self-loops, out-of-range endpoints or
  /// non-positive weights. Disconnected graphs are accepted and flagged.
  CommGraph(int agents, const std::vector<Edge>& edges);

  int size() const { return static_cast<int>(adjacency_.rows()); }
  const Mat& adjacency() const { return adjacency_; }
  const Mat& laplacian() const { return laplacian_; }
  double lambda2() const { return lambda2_; }
  const Vec& spectrum() const { return spectrum_; }
  bool connected(double tol = kConnectivityTol) const { return lambda2_ > tol; }

  /// Neighbors of i (a_ik > 0), ascending.
  const std::vector<int>& neighbors(int i) const { return neighbors_.at(i); }
  /// Each undirected edge once, with i < j.
  std::vector<Edge> edges() const;

  /// x^T L x for a node-indexed vector.
  double quadratic_form(const Vec& x) const;

 private:
  Mat adjacency_;
  Mat laplacian_;
  Vec spectrum_;
  double lambda2_ = 0.0;
  std::vector<std::vector<int>> neighbors_;
};

/// Node count inferred as 1 + the largest endpoint.
CommGraph build_graph(const std::vector<Edge>& edges);

/// Uniform random labelled tree via Pruefer-sequence decoding; unit weights.
CommGraph random_spanning_tree(int agents, std::uint64_t seed);
/// Renumbers nodes in depth-first preorder from `root` (neighbors visited in
/// ascending order), so tree neighbors receive nearby labels.
CommGraph depth_first_relabel(const CommGraph& g, int root = 0);
/// Canonical benchmark topology: the seeded Pruefer tree in depth-first labels.
CommGraph benchmark_tree(int agents, std::uint64_t seed);
CommGraph path_graph(int agents);
CommGraph complete_graph(int agents);

/// Edge-list text: one `i j weight` triple per line, 0-indexed. Blank lines
/// and lines starting with '#' are ignored.
CommGraph read_edge_list(std::istream& in, int agents = -1);
CommGraph read_edge_list_file(const std::string& path, int agents = -1);
void write_edge_list(std::ostream& out, const CommGraph& g);

/// Resolves "tree:N:SEED", "dfstree:N:SEED", "path:N", "complete:N", or a path to an edge-list file.
CommGraph parse_graph_spec(const std::string& spec);

}  // namespace ptgne
