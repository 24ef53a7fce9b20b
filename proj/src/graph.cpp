#include "clyap/graph.hpp"

#include <algorithm>
#include <charconv>
#include <queue>
#include <sstream>

#include "clyap/error.hpp"

namespace clyap {

DirectedGraph::DirectedGraph(int d) : d_(d) {
  if (d < 1) throw InvalidArgument("graph needs at least one node");
}

DirectedGraph::DirectedGraph(int d, const std::vector<Edge>& edges) : DirectedGraph(d) {
  for (const auto& e : edges) add_edge(e.from, e.to);
}

DirectedGraph DirectedGraph::complete(int d) {
  DirectedGraph g(d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) g.add_edge(a, b);
  }
  return g;
}

DirectedGraph DirectedGraph::with_self_loops(int d, const std::vector<Edge>& edges) {
  DirectedGraph g(d, edges);
  for (int i = 0; i < d; ++i) g.add_edge(i, i);
  return g;
}

void DirectedGraph::add_edge(int from, int to) {
  if (from < 0 || from >= d_ || to < 0 || to >= d_) {
    throw InvalidArgument("edge endpoint out of range");
  }
  edges_.insert({from, to});
}

std::vector<Edge> DirectedGraph::non_loop_edges() const {
  std::vector<Edge> out;
  for (const auto& e : edges_) {
    if (!e.is_loop()) out.push_back(e);
  }
  return out;
}

bool DirectedGraph::has_all_self_loops() const {
  for (int i = 0; i < d_; ++i) {
    if (!has_edge(i, i)) return false;
  }
  return true;
}

std::vector<int> DirectedGraph::parents(int node) const {
  std::vector<int> out;
  for (const auto& e : edges_) {
    if (e.to == node && !e.is_loop()) out.push_back(e.from);
  }
  return out;
}

std::vector<int> DirectedGraph::children(int node) const {
  std::vector<int> out;
  for (const auto& e : edges_) {
    if (e.from == node && !e.is_loop()) out.push_back(e.to);
  }
  return out;
}

Eigen::MatrixXd sparsity_project(const Eigen::MatrixXd& m, const DirectedGraph& g) {
  if (m.rows() != g.num_nodes() || m.cols() != g.num_nodes()) {
    throw InvalidArgument("sparsity_project: shape mismatch");
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m.rows(), m.cols());
  for (const auto& e : g.edges()) out(e.to, e.from) = m(e.to, e.from);
  return out;
}

namespace {

std::vector<std::vector<int>> undirected_adjacency(const DirectedGraph& g) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.num_nodes()));
  for (const auto& e : g.edges()) {
    if (e.is_loop()) continue;
    adj[static_cast<std::size_t>(e.from)].push_back(e.to);
    adj[static_cast<std::size_t>(e.to)].push_back(e.from);
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  return adj;
}

}  // namespace

std::vector<std::vector<int>> connected_components(const DirectedGraph& g) {
  const auto adj = undirected_adjacency(g);
  std::vector<int> comp(static_cast<std::size_t>(g.num_nodes()), -1);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < g.num_nodes(); ++s) {
    if (comp[static_cast<std::size_t>(s)] >= 0) continue;
    const int id = static_cast<int>(out.size());
    out.emplace_back();
    std::queue<int> q;
    q.push(s);
    comp[static_cast<std::size_t>(s)] = id;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      out.back().push_back(u);
      for (int v : adj[static_cast<std::size_t>(u)]) {
        if (comp[static_cast<std::size_t>(v)] < 0) {
          comp[static_cast<std::size_t>(v)] = id;
          q.push(v);
        }
      }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

bool is_connected(const DirectedGraph& g) { return connected_components(g).size() == 1; }

std::vector<int> topological_order(const DirectedGraph& g) {
  const int d = g.num_nodes();
  std::vector<int> indeg(static_cast<std::size_t>(d), 0);
  for (const auto& e : g.non_loop_edges()) ++indeg[static_cast<std::size_t>(e.to)];
  // Kahn's algorithm, smallest label first for a deterministic order
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int i = 0; i < d; ++i) {
    if (indeg[static_cast<std::size_t>(i)] == 0) ready.push(i);
  }
  std::vector<int> order;
  while (!ready.empty()) {
    const int u = ready.top();
    ready.pop();
    order.push_back(u);
    for (int v : g.children(u)) {
      if (--indeg[static_cast<std::size_t>(v)] == 0) ready.push(v);
    }
  }
  if (static_cast<int>(order.size()) != d) throw NotAcyclic("graph has a directed cycle");
  return order;
}

bool is_acyclic(const DirectedGraph& g) {
  try {
    topological_order(g);
    return true;
  } catch (const NotAcyclic&) {
    return false;
  }
}

bool is_polytree(const DirectedGraph& g) {
  const auto adj = undirected_adjacency(g);
  std::size_t undirected_edges = 0;
  for (const auto& a : adj) undirected_edges += a.size();
  undirected_edges /= 2;
  return undirected_edges == g.non_loop_edges().size() &&
         undirected_edges + 1 == static_cast<std::size_t>(g.num_nodes()) && is_connected(g);
}

DirectedGraph spanning_polytree(const DirectedGraph& g) {
  if (!is_connected(g)) throw DisconnectedGraph("spanning_polytree: graph is not connected");
  const int d = g.num_nodes();
  const auto adj = undirected_adjacency(g);
  DirectedGraph tree(d);
  for (int i = 0; i < d; ++i) tree.add_edge(i, i);
  std::vector<bool> seen(static_cast<std::size_t>(d), false);
  std::queue<int> q;
  q.push(0);
  seen[0] = true;
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int v : adj[static_cast<std::size_t>(u)]) {
      if (seen[static_cast<std::size_t>(v)]) continue;
      seen[static_cast<std::size_t>(v)] = true;
      if (g.has_edge(u, v)) {
        tree.add_edge(u, v);
      } else {
        tree.add_edge(v, u);
      }
      q.push(v);
    }
  }
  return tree;
}

int Trek::total_length() const {
  int total = 0;
  for (std::size_t j = 0; j < walks.size(); ++j) total += length(j);
  return total;
}

namespace {

void collect_paths(const DirectedGraph& g, int node, int target, std::vector<int>& cur,
                   std::vector<std::vector<int>>& out) {
  cur.push_back(node);
  if (node == target) out.push_back(cur);
  for (int c : g.children(node)) collect_paths(g, c, target, cur, out);
  cur.pop_back();
}

}  // namespace

std::vector<Trek> enumerate_treks(const DirectedGraph& g, const std::vector<int>& targets) {
  if (!is_acyclic(g)) throw NotAcyclic("enumerate_treks: non-loop part must be acyclic");
  for (int t : targets) {
    if (t < 0 || t >= g.num_nodes()) throw InvalidArgument("enumerate_treks: target out of range");
  }
  std::vector<Trek> out;
  for (int top = 0; top < g.num_nodes(); ++top) {
    std::vector<std::vector<std::vector<int>>> per_target;
    bool reachable = true;
    for (int t : targets) {
      std::vector<std::vector<int>> paths;
      std::vector<int> cur;
      collect_paths(g, top, t, cur, paths);
      if (paths.empty()) {
        reachable = false;
        break;
      }
      per_target.push_back(std::move(paths));
    }
    if (!reachable) continue;
    // cartesian product of path choices
    std::vector<std::size_t> choice(targets.size(), 0);
    while (true) {
      Trek trek{top, {}};
      for (std::size_t j = 0; j < targets.size(); ++j) trek.walks.push_back(per_target[j][choice[j]]);
      out.push_back(std::move(trek));
      std::size_t j = 0;
      while (j < choice.size() && ++choice[j] == per_target[j].size()) choice[j++] = 0;
      if (j == choice.size()) break;
    }
  }
  return out;
}

std::vector<Edge> parse_edge_list(const std::string& text) {
  std::vector<Edge> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item.empty()) continue;
    const auto arrow = item.find("->");
    if (arrow == std::string::npos) throw InvalidArgument("edge '" + item + "' must look like a->b");
    int a = 0;
    int b = 0;
    const auto lhs = item.substr(0, arrow);
    const auto rhs = item.substr(arrow + 2);
    auto [pa, ea] = std::from_chars(lhs.data(), lhs.data() + lhs.size(), a);
    auto [pb, eb] = std::from_chars(rhs.data(), rhs.data() + rhs.size(), b);
    if (ea != std::errc() || eb != std::errc() || pa != lhs.data() + lhs.size() ||
        pb != rhs.data() + rhs.size() || a < 1 || b < 1) {
      throw InvalidArgument("edge '" + item + "' must use positive integer labels");
    }
    out.push_back({a - 1, b - 1});
  }
  return out;
}

}  // namespace clyap
