#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "hoprank/graph.hpp"
#include "hoprank/types.hpp"

namespace hoprank {

/// Everything the likelihood kernels need about one source apart from the distance vector.
struct ProfileSummary {
  NodeId source = kNoNode;
  /// hop_histogram[k] = |N_k(source)| for k = 0..diameter.
  std::vector<std::uint32_t> hop_histogram;
  /// Sum over all nodes l of degree(l) / S(source, l), the Gravitational row normalizer.
  double grav_normalizer = 0.0;
};

/**
 * Single-source BFS result: the data behind row `source` of every k-hop matrix M_k
 * and of the Gravitational distance matrix S.
 */
struct SourceProfile : ProfileSummary {
  /// dist[j] = shortest-path hops from source to j, kUnreachable if disconnected.
  std::vector<HopCount> dist;

  HopCount diameter() const noexcept { return static_cast<HopCount>(hop_histogram.size() - 1); }
  std::uint32_t neighborhood_size(HopCount k) const {
    return k < hop_histogram.size() ? hop_histogram[k] : 0;
  }
};

/// Gravitational squared distance S(i, j): sp^2 for reachable pairs, (d'+2)^2 on the
/// diagonal, (d'+1)^2 when j is unreachable.
double grav_distance_sq(HopCount hop, HopCount diameter);

/// BFS from `source`. Throws DataError when a reachable node lies beyond `diameter`,
/// std::out_of_range on an invalid source.
SourceProfile bfs_profile(const Graph& g, NodeId source, HopCount diameter);

/// Entry (i, j) of M_k for i = profile.source: 1/|N_k(i)| when dist(i, j) = k, else 0.
/// Throws std::out_of_range unless 1 <= k <= diameter.
double mk_row_mass(const SourceProfile& profile, HopCount k, NodeId j);

/**
 * Profiles for a set of sources, bounded by a memory budget.
 *
 * Profiles that do not fit the budget are not stored; get() recomputes them on demand,
 * so callers see identical values either way. Read-only after construction and safe to
 * share across threads.
 */
class ProfileCache {
 public:
  static constexpr std::size_t kDefaultBudgetBytes = std::size_t{512} << 20;

  ProfileCache(const Graph& g, HopCount diameter, std::size_t budget_bytes = kDefaultBudgetBytes);

  const Graph& graph() const noexcept { return *graph_; }
  HopCount diameter() const noexcept { return diameter_; }
  std::size_t size() const noexcept { return profiles_.size(); }
  bool empty() const noexcept { return profiles_.empty(); }
  bool contains(NodeId source) const { return profiles_.count(source) != 0; }
  std::size_t budget_bytes() const noexcept { return budget_; }
  std::size_t used_bytes() const noexcept { return used_; }

  /// Stored profile or nullptr.
  const SourceProfile* find(NodeId source) const;

  /// Stored profile, or a freshly computed one if it was never stored.
  std::shared_ptr<const SourceProfile> get(NodeId source) const;

  /// Stores a profile if the budget allows. Returns false when it was not kept.
  bool insert(SourceProfile profile);

  /// Sources held, ascending.
  std::vector<NodeId> sources() const;

  /// Binary cache file: "HRPC" magic, u32 version, u64 graph hash, u32 N, u16 d',
  /// u32 count, then per profile u32 source and N u16 distances. Little-endian.
  void save(std::ostream& out) const;

  /// Loads a cache written by save(). Returns an empty cache when the file belongs to a
  /// different graph or diameter; throws DataError on a corrupt file.
  static ProfileCache load(std::istream& in, const Graph& g, HopCount diameter,
                           std::size_t budget_bytes = kDefaultBudgetBytes);

  static std::size_t profile_bytes(std::size_t node_count, HopCount diameter);

 private:
  const Graph* graph_;
  HopCount diameter_;
  std::size_t budget_;
  std::size_t used_ = 0;
  std::unordered_map<NodeId, std::shared_ptr<const SourceProfile>> profiles_;
};

/// Profiles every distinct source in parallel. Stored profiles do not depend on the
/// thread schedule. Throws std::out_of_range on an invalid source.
ProfileCache profile_sources(const Graph& g, std::span<const NodeId> sources, HopCount diameter,
                             std::size_t budget_bytes = ProfileCache::kDefaultBudgetBytes);

}  // namespace hoprank
