#include <algorithm>
#include <vector>

#include "hoprank/error.hpp"
#include "hoprank/graph.hpp"

namespace hoprank {

namespace {

constexpr std::uint32_t kUnseen = std::numeric_limits<std::uint32_t>::max();

// BFS scratch space reused across sweeps from one thread.
struct Sweep {
  std::vector<std::uint32_t> dist;
  std::vector<NodeId> parent;
  std::vector<NodeId> queue;

  explicit Sweep(std::size_t n) : dist(n, kUnseen), parent(n, kNoNode) { queue.reserve(n); }

  // Returns the eccentricity of `source`; queue.back() is a farthest node afterwards.
  std::uint32_t run(const Graph& g, NodeId source, bool track_parent = false) {
    std::fill(dist.begin(), dist.end(), kUnseen);
    queue.clear();
    dist[source] = 0;
    queue.push_back(source);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const NodeId u = queue[head];
      for (NodeId v : g.neighbors(u)) {
        if (dist[v] == kUnseen) {
          dist[v] = dist[u] + 1;
          if (track_parent) parent[v] = u;
          queue.push_back(v);
        }
      }
    }
    return dist[queue.back()];
  }

  bool reached_all() const { return queue.size() == dist.size(); }
};

}  // namespace

HopCount eccentricity(const Graph& g, NodeId source) {
  Sweep sweep(g.node_count());
  const auto ecc = sweep.run(g, source);
  return sweep.reached_all() ? static_cast<HopCount>(ecc) : kUnreachable;
}

HopCount exact_diameter(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n == 0) throw DataError("diameter of an empty graph is undefined");
  if (n == 1) return 0;

  Sweep sweep(n);

  NodeId start = 0;
  for (NodeId v = 1; v < n; ++v) {
    if (g.degree(v) > g.degree(start)) start = v;
  }
  sweep.run(g, start);
  if (!sweep.reached_all()) throw DataError("diameter requires a connected graph");

  // Double sweep: a is peripheral, the a-b path's midpoint is a good central start.
  const NodeId a = sweep.queue.back();
  std::uint32_t lower = sweep.run(g, a, true);
  NodeId mid = sweep.queue.back();
  for (std::uint32_t step = 0; step < lower / 2; ++step) mid = sweep.parent[mid];

  const std::uint32_t ecc_mid = sweep.run(g, mid);
  lower = std::max(lower, ecc_mid);
  if (ecc_mid >= kUnreachable / 2) throw DataError("graph diameter exceeds the 16-bit hop range");

  std::vector<std::vector<NodeId>> fringes(ecc_mid + 1);
  for (NodeId v : sweep.queue) fringes[sweep.dist[v]].push_back(v);

  // Every node at level < i has eccentricity <= 2i, so once the lower bound exceeds
  // 2(i-1) no deeper fringe can raise it.
  for (std::uint32_t level = ecc_mid; level >= 1; --level) {
    if (lower >= 2 * level) break;
    const auto& fringe = fringes[level];
    std::uint32_t fringe_max = 0;
#pragma omp parallel
    {
      Sweep local(n);
      std::uint32_t local_max = 0;
#pragma omp for schedule(dynamic, 4) nowait
      for (std::ptrdiff_t idx = 0; idx < static_cast<std::ptrdiff_t>(fringe.size()); ++idx) {
        local_max = std::max(local_max, local.run(g, fringe[static_cast<std::size_t>(idx)]));
      }
#pragma omp critical
      fringe_max = std::max(fringe_max, local_max);
    }
    lower = std::max(lower, fringe_max);
    if (lower > 2 * (level - 1)) break;
  }
  return static_cast<HopCount>(lower);
}

}  // namespace hoprank
