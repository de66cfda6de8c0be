#include "hoprank/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <tuple>

#include "hoprank/error.hpp"
#include "hoprank/text.hpp"

namespace hoprank {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void fnv_bytes(std::uint64_t& h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
}

void fnv_u64(std::uint64_t& h, std::uint64_t v) {
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(v >> (8 * i));
  fnv_bytes(h, bytes, 8);
}

}  // namespace

Graph Graph::from_edges(std::vector<std::string> labels,
                        std::span<const std::pair<NodeId, NodeId>> edges) {
  Graph g;
  const std::size_t n = labels.size();
  g.index_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!g.index_.emplace(labels[i], static_cast<NodeId>(i)).second) {
      throw DataError("duplicate node label '" + labels[i] + "'");
    }
  }
  g.labels_ = std::move(labels);

  std::vector<std::pair<NodeId, NodeId>> arcs;
  arcs.reserve(edges.size() * 2);
  for (const auto& [a, b] : edges) {
    if (a >= n || b >= n) throw DataError("edge endpoint out of range");
    if (a == b) continue;
    arcs.emplace_back(a, b);
    arcs.emplace_back(b, a);
  }
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

  g.offsets_.assign(n + 1, 0);
  for (const auto& arc : arcs) ++g.offsets_[arc.first + 1];
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
  g.adjacency_.reserve(arcs.size());
  for (const auto& arc : arcs) g.adjacency_.push_back(arc.second);

  std::uint64_t h = kFnvOffset;
  fnv_u64(h, n);
  for (const auto& label : g.labels_) {
    fnv_u64(h, label.size());
    fnv_bytes(h, label.data(), label.size());
  }
  for (std::size_t i = 0; i <= n; ++i) fnv_u64(h, g.offsets_[i]);
  for (NodeId v : g.adjacency_) fnv_u64(h, v);
  g.hash_ = h;
  return g;
}

std::span<const NodeId> Graph::neighbors(NodeId node) const {
  if (node >= node_count()) throw std::out_of_range("node id out of range");
  return {adjacency_.data() + offsets_[node], offsets_[node + 1] - offsets_[node]};
}

std::size_t Graph::degree(NodeId node) const {
  if (node >= node_count()) throw std::out_of_range("node id out of range");
  return offsets_[node + 1] - offsets_[node];
}

bool Graph::has_edge(NodeId a, NodeId b) const {
  const auto nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

const std::string& Graph::label(NodeId node) const {
  if (node >= node_count()) throw std::out_of_range("node id out of range");
  return labels_[node];
}

std::optional<NodeId> Graph::find(std::string_view label) const {
  const auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ComponentMap connected_components(const Graph& g) {
  const std::size_t n = g.node_count();
  ComponentMap cm;
  cm.component_of.assign(n, std::numeric_limits<std::uint32_t>::max());
  std::vector<NodeId> stack;
  for (NodeId root = 0; root < n; ++root) {
    if (cm.component_of[root] != std::numeric_limits<std::uint32_t>::max()) continue;
    const auto cid = static_cast<std::uint32_t>(cm.sizes.size());
    std::size_t size = 0;
    cm.component_of[root] = cid;
    stack.push_back(root);
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      ++size;
      for (NodeId v : g.neighbors(u)) {
        if (cm.component_of[v] == std::numeric_limits<std::uint32_t>::max()) {
          cm.component_of[v] = cid;
          stack.push_back(v);
        }
      }
    }
    cm.sizes.push_back(size);
    if (size > cm.sizes[cm.largest]) cm.largest = cid;
  }
  return cm;
}

bool is_connected(const Graph& g) {
  return g.node_count() > 0 && connected_components(g).count() == 1;
}

Subgraph largest_connected_component(const Graph& g) {
  if (g.empty()) throw DataError("cannot extract the largest component of an empty graph");
  const ComponentMap cm = connected_components(g);
  Subgraph sub;
  sub.old_to_new.assign(g.node_count(), kNoNode);
  std::vector<std::string> labels;
  labels.reserve(cm.sizes[cm.largest]);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (cm.component_of[v] == cm.largest) {
      sub.old_to_new[v] = static_cast<NodeId>(labels.size());
      labels.push_back(g.label(v));
    }
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (sub.old_to_new[v] == kNoNode) continue;
    for (NodeId w : g.neighbors(v)) {
      if (v < w) edges.emplace_back(sub.old_to_new[v], sub.old_to_new[w]);
    }
  }
  sub.graph = Graph::from_edges(std::move(labels), edges);
  return sub;
}

Graph load_edge_list(std::istream& in, const EdgeListFormat& format) {
  std::vector<std::string> labels;
  std::unordered_map<std::string, NodeId> ids;
  std::vector<std::pair<NodeId, NodeId>> edges;
  const auto intern = [&](std::string_view label) {
    auto [it, inserted] = ids.emplace(std::string(label), static_cast<NodeId>(labels.size()));
    if (inserted) labels.emplace_back(label);
    return it->second;
  };

  std::string line;
  std::size_t lineno = 0;
  bool header_pending = format.header;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = text::trim(line);
    if (body.empty() || body.front() == format.comment) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    std::vector<std::string_view> fields =
        format.delimiter ? text::split(body, *format.delimiter) : text::split_ws(body);
    for (auto& f : fields) f = text::trim(f);
    if (fields.size() != 2) {
      throw ParseError(lineno, "expected 2 fields, found " + std::to_string(fields.size()));
    }
    if (fields[0].empty() || fields[1].empty()) throw ParseError(lineno, "empty node label");
    const NodeId a = intern(fields[0]);
    const NodeId b = intern(fields[1]);
    edges.emplace_back(a, b);
  }
  if (labels.empty()) throw DataError("edge list is empty");
  return Graph::from_edges(std::move(labels), edges);
}

Graph load_edge_list_file(const std::string& path, const EdgeListFormat& format) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open edge list '" + path + "'");
  return load_edge_list(in, format);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  std::vector<std::pair<std::string_view, std::string_view>> rows;
  rows.reserve(g.edge_count());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    for (NodeId w : g.neighbors(v)) {
      std::string_view a = g.label(v);
      std::string_view b = g.label(w);
      if (a < b) rows.emplace_back(a, b);
    }
  }
  std::sort(rows.begin(), rows.end());
  for (const auto& [a, b] : rows) out << a << '\t' << b << '\n';
}

}  // namespace hoprank
