#pragma once

#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hoprank/graph.hpp"
#include "hoprank/transitions.hpp"

namespace fixtures {

using hoprank::Graph;
using hoprank::NavigationType;
using hoprank::NodeId;
using hoprank::TransitionSet;

inline Graph from_text(const std::string& edges) {
  std::istringstream in(edges);
  return hoprank::load_edge_list(in);
}

/// Seven concepts a..g with six subclass edges: a(b(d, e), c(f, g)).
inline Graph toy_tree() { return from_text("a b\na c\nb d\nb e\nc f\nc g\n"); }

inline Graph path(int n) {
  std::string s;
  for (int i = 0; i + 1 < n; ++i) s += "p" + std::to_string(i) + " p" + std::to_string(i + 1) + "\n";
  return from_text(s);
}

inline Graph star(int leaves) {
  std::string s;
  for (int i = 0; i < leaves; ++i) s += "hub leaf" + std::to_string(i) + "\n";
  return from_text(s);
}

inline void add(TransitionSet& t, const Graph& g, const std::string& from, const std::string& to, std::uint64_t n,
                NavigationType type = NavigationType::DirectClick) {
  t.add(*g.find(from), *g.find(to), type, n);
}

/// Toy counts: every transition lands 2 or 4 hops away from its source.
inline TransitionSet toy_transitions(const Graph& g) {
  TransitionSet t(g);
  add(t, g, "a", "d", 20);  // 2 hops
  add(t, g, "b", "c", 20);  // 2
  add(t, g, "c", "b", 20);  // 2
  add(t, g, "d", "e", 15);  // 2
  add(t, g, "d", "g", 15);  // 4
  add(t, g, "e", "f", 15);  // 4
  add(t, g, "f", "g", 15);  // 2
  add(t, g, "g", "d", 15);  // 4
  return t;
}

/// `cells` random (source, target) cells with counts 1..max_count; roughly a third land on
/// edges, and self-loops appear with probability `self_loop`.
inline TransitionSet random_transitions(const Graph& g, std::mt19937_64& rng, int cells, int max_count = 5,
                                        double self_loop = 0.1) {
  TransitionSet t(g);
  const auto n = static_cast<NodeId>(g.node_count());
  std::uniform_int_distribution<NodeId> node(0, n - 1);
  std::uniform_int_distribution<int> count(1, max_count);
  std::uniform_real_distribution<double> u(0, 1);
  for (int c = 0; c < cells; ++c) {
    const NodeId i = node(rng);
    NodeId j = node(rng);
    const double r = u(rng);
    if (r < self_loop) {
      j = i;
    } else if (r < self_loop + 0.33 && g.degree(i) > 0) {
      const auto nb = g.neighbors(i);
      j = nb[std::uniform_int_distribution<std::size_t>(0, nb.size() - 1)(rng)];
    }
    const auto type = hoprank::kNavigationTypes[std::uniform_int_distribution<std::size_t>(0, 6)(rng)];
    t.add(i, j, type, static_cast<std::uint64_t>(count(rng)));
  }
  return t;
}

}  // namespace fixtures
