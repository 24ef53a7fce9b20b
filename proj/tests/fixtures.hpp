#pragma once

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "clyap/graph.hpp"
#include "clyap/lyapunov.hpp"

namespace fixtures {

using clyap::DirectedGraph;
using clyap::Edge;

// Zero-based labels throughout.

inline DirectedGraph fig1() { return DirectedGraph::with_self_loops(4, {{0, 2}, {3, 1}, {2, 3}, {1, 2}, {2, 1}}); }

inline DirectedGraph fig2() {
  return DirectedGraph::with_self_loops(4, {{1, 0}, {2, 0}, {1, 3}, {2, 3}, {1, 2}, {2, 1}});
}

inline DirectedGraph fig4_left() { return DirectedGraph(3, {{2, 2}, {1, 1}, {0, 1}, {1, 0}, {1, 2}}); }
inline DirectedGraph fig4_right() { return DirectedGraph(3, {{2, 2}, {0, 1}, {1, 0}, {1, 2}, {2, 0}}); }

inline DirectedGraph two_cycles() { return DirectedGraph::with_self_loops(4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}}); }

inline DirectedGraph path(int d) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < d; ++i) edges.push_back({i, i + 1});
  return DirectedGraph::with_self_loops(d, edges);
}

/// Random stable drift supported on `g` with positive c2 and nonzero cr.
inline clyap::ModelParameters random_theta(const DirectedGraph& g, int r, std::mt19937_64& rng) {
  const int d = g.num_nodes();
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> mag(0.5, 2.0);
  std::bernoulli_distribution sign;
  while (true) {
    Eigen::MatrixXd m(d, d);
    for (auto& x : m.reshaped()) x = u(rng);
    m = clyap::sparsity_project(m, g);
    for (int i = 0; i < d; ++i) {
      if (g.has_edge(i, i)) m(i, i) -= 2.0 * d;
    }
    if (!clyap::is_stable(m)) continue;
    Eigen::VectorXd c2(d), cr(d);
    for (int i = 0; i < d; ++i) {
      c2(i) = mag(rng);
      cr(i) = (sign(rng) ? 1.0 : -1.0) * mag(rng);
    }
    return {m, c2, cr, r};
  }
}

}  // namespace fixtures
