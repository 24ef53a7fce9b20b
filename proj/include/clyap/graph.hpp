#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace clyap {

/// Directed edge `from -> to`. In a drift matrix it is the entry M(to, from).
struct Edge {
  int from = 0;
  int to = 0;

  bool is_loop() const noexcept { return from == to; }
  auto operator<=>(const Edge&) const = default;
};

/// Directed graph on nodes 0..d-1, self-loops allowed, no duplicate edges.
class DirectedGraph {
 public:
  DirectedGraph() = default;
  explicit DirectedGraph(int d);
  DirectedGraph(int d, const std::vector<Edge>& edges);

  static DirectedGraph complete(int d);
  /// Self-loops on every node plus the given non-loop edges.
  static DirectedGraph with_self_loops(int d, const std::vector<Edge>& edges);

  int num_nodes() const noexcept { return d_; }
  void add_edge(int from, int to);
  bool has_edge(int from, int to) const { return edges_.contains({from, to}); }
  const std::set<Edge>& edges() const noexcept { return edges_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  std::vector<Edge> non_loop_edges() const;
  bool has_all_self_loops() const;

  /// Parents of `node` along non-loop edges.
  std::vector<int> parents(int node) const;
  std::vector<int> children(int node) const;

  auto operator<=>(const DirectedGraph&) const = default;

 private:
  int d_ = 0;
  std::set<Edge> edges_;
};

/// Zero every M(i, j) whose edge j -> i is absent.
Eigen::MatrixXd sparsity_project(const Eigen::MatrixXd& m, const DirectedGraph& g);

/// Components of the underlying undirected graph (weak connectivity).
std::vector<std::vector<int>> connected_components(const DirectedGraph& g);

bool is_connected(const DirectedGraph& g);

/// Topological order of the non-loop part; throws NotAcyclic on a cycle.
std::vector<int> topological_order(const DirectedGraph& g);

bool is_acyclic(const DirectedGraph& g);

/// True if the non-loop part's underlying undirected graph is a spanning tree.
bool is_polytree(const DirectedGraph& g);

/// Deterministic BFS spanning tree of the undirected skeleton, started at
/// node 0 with neighbours visited in increasing label order. Each tree edge
/// keeps an orientation present in `g` (forward preferred). The result also
/// carries every self-loop. Throws DisconnectedGraph.
DirectedGraph spanning_polytree(const DirectedGraph& g);

/// A trek: common top node and one self-loop-free directed walk from the top
/// to each target. `walks[j]` lists the nodes from top to targets[j].
struct Trek {
  int top = 0;
  std::vector<std::vector<int>> walks;

  int length(std::size_t j) const { return static_cast<int>(walks[j].size()) - 1; }
  int total_length() const;
};

/// All treks between `targets` in the non-loop part of `g`, which must be
/// acyclic (throws NotAcyclic otherwise).
std::vector<Trek> enumerate_treks(const DirectedGraph& g, const std::vector<int>& targets);

/// Parse "1->2,2->3" (one-based labels) into edges.
std::vector<Edge> parse_edge_list(const std::string& text);

}  // namespace clyap
