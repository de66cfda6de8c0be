#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "hoprank/graph.hpp"
#include "hoprank/navigation.hpp"

namespace hoprank {

/// One aggregated cell t_ij of a transition matrix.
struct Transition {
  NodeId source;
  NodeId target;
  std::uint64_t count;

  friend bool operator==(const Transition&, const Transition&) = default;
};

struct TransitionKey {
  NodeId source;
  NodeId target;
  NavigationType type;

  friend auto operator<=>(const TransitionKey&, const TransitionKey&) = default;
};

/**
 * Sparse multiset of (source, target, navigation type) counts over the ids of one graph.
 *
 * Counts are always >= 1. The set remembers the node count and content hash of the
 * graph it was built for so that consumers can reject mismatched inputs.
 */
class TransitionSet {
 public:
  TransitionSet() = default;
  explicit TransitionSet(const Graph& g) : node_count_(g.node_count()), graph_hash_(g.content_hash()) {}

  /// Throws std::out_of_range for ids outside the graph; a zero count is a no-op.
  void add(NodeId source, NodeId target, NavigationType type, std::uint64_t count = 1);

  /// Adds every count of `other`. Throws DataError if it belongs to another graph.
  void merge(const TransitionSet& other);

  std::uint64_t count(NodeId source, NodeId target, NavigationType type) const;

  /// Total number of observed transitions under the filter.
  std::uint64_t nobs(NavFilter filter) const;

  /// Cells under the filter, types summed, ordered by (source, target).
  std::vector<Transition> view(NavFilter filter) const;

  /// Distinct sources under the filter, ascending.
  std::vector<NodeId> sources(NavFilter filter) const;

  const std::map<TransitionKey, std::uint64_t>& entries() const noexcept { return counts_; }
  bool empty() const noexcept { return counts_.empty(); }
  std::size_t node_count() const noexcept { return node_count_; }
  std::uint64_t graph_hash() const noexcept { return graph_hash_; }

  /// True when the set was built for `g`.
  bool compatible_with(const Graph& g) const {
    return node_count_ == g.node_count() && graph_hash_ == g.content_hash();
  }

  friend bool operator==(const TransitionSet&, const TransitionSet&) = default;

 private:
  std::size_t node_count_ = 0;
  std::uint64_t graph_hash_ = 0;
  std::map<TransitionKey, std::uint64_t> counts_;
  std::array<std::uint64_t, kNavigationTypeCount> totals_{};
};

/// Writes "src_label<TAB>dst_label<TAB>type<TAB>count" lines in key order.
void write_transitions(std::ostream& out, const TransitionSet& t, const Graph& g);

/// Reads the format written by write_transitions. Unknown labels or types are ParseErrors.
TransitionSet read_transitions(std::istream& in, const Graph& g);

}  // namespace hoprank
