#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hoprank/types.hpp"

namespace hoprank {

/**
 * Immutable undirected simple graph.
 *
 * Nodes carry external string labels and dense internal ids 0..N-1. Adjacency is
 * stored in CSR form with each neighbor list sorted ascending. Self-edges and
 * parallel edges are removed at construction, and the label to id mapping is a
 * bijection.
 */
class Graph {
 public:
  Graph() = default;

  /// Builds a graph from labels and undirected edges given as id pairs into `labels`.
  /// Duplicate edges (in either orientation) and self-edges are dropped.
  static Graph from_edges(std::vector<std::string> labels,
                          std::span<const std::pair<NodeId, NodeId>> edges);

  std::size_t node_count() const noexcept { return labels_.size(); }
  std::size_t edge_count() const noexcept { return adjacency_.size() / 2; }
  bool empty() const noexcept { return labels_.empty(); }

  std::span<const NodeId> neighbors(NodeId node) const;

  /// Undirected degree. Throws std::out_of_range for an invalid id.
  std::size_t degree(NodeId node) const;

  bool has_edge(NodeId a, NodeId b) const;

  const std::string& label(NodeId node) const;
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::optional<NodeId> find(std::string_view label) const;

  /// 64-bit FNV-1a over labels and adjacency; identifies the graph in cache files and manifests.
  std::uint64_t content_hash() const noexcept { return hash_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adjacency_;
  std::uint64_t hash_ = 0;
};

/// Connected components of a graph.
struct ComponentMap {
  std::vector<std::uint32_t> component_of;  ///< component id per node
  std::vector<std::size_t> sizes;           ///< node count per component
  std::uint32_t largest = 0;                ///< index of the largest component

  std::size_t count() const noexcept { return sizes.size(); }
};

/// Components are numbered in order of their smallest node id, so ties on size go to
/// the component containing the smallest id.
ComponentMap connected_components(const Graph& g);

struct Subgraph {
  Graph graph;
  /// Old id -> new id, or kNoNode for nodes outside the subgraph.
  std::vector<NodeId> old_to_new;
};

/// Extracts the largest connected component. New ids follow the original id order.
/// Throws DataError on an empty graph.
Subgraph largest_connected_component(const Graph& g);

bool is_connected(const Graph& g);

/// Exact diameter (max eccentricity) of a connected graph. Uses a double sweep to pick
/// a central start node, then refines bounds fringe by fringe (iFUB). Throws DataError
/// if the graph is disconnected or empty.
HopCount exact_diameter(const Graph& g);

/// Eccentricity of one node by plain BFS. Returns kUnreachable on a disconnected graph.
HopCount eccentricity(const Graph& g, NodeId source);

struct EdgeListFormat {
  /// Field separator; std::nullopt splits on any run of spaces or tabs.
  std::optional<char> delimiter;
  bool header = false;
  char comment = '#';
};

/// Reads one edge per line, two label fields each. Ids are assigned in first-seen order.
/// Throws ParseError on malformed records and DataError on empty input.
Graph load_edge_list(std::istream& in, const EdgeListFormat& format = {});
Graph load_edge_list_file(const std::string& path, const EdgeListFormat& format = {});

/// Writes edges as "u<TAB>v" lines with u < v lexicographically, sorted lexicographically.
void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace hoprank
