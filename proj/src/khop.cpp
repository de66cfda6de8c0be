#include "hoprank/khop.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "hoprank/error.hpp"

namespace hoprank {

double grav_distance_sq(HopCount hop, HopCount diameter) {
  double s;
  if (hop == 0) {
    s = static_cast<double>(diameter) + 2.0;
  } else if (hop == kUnreachable) {
    s = static_cast<double>(diameter) + 1.0;
  } else {
    s = static_cast<double>(hop);
  }
  return s * s;
}

SourceProfile bfs_profile(const Graph& g, NodeId source, HopCount diameter) {
  const std::size_t n = g.node_count();
  if (source >= n) throw std::out_of_range("profile source out of range");
  if (diameter == kUnreachable) throw DataError("diameter exceeds the 16-bit hop range");

  SourceProfile p;
  p.source = source;
  p.dist.assign(n, kUnreachable);
  p.hop_histogram.assign(static_cast<std::size_t>(diameter) + 1, 0);
  // Degree mass per hop; integer sums keep the normalizer independent of visit order.
  std::vector<std::uint64_t> degree_mass(static_cast<std::size_t>(diameter) + 1, 0);
  std::uint64_t reached_degree = 0;
  std::uint64_t total_degree = 2 * static_cast<std::uint64_t>(g.edge_count());

  std::vector<NodeId> queue;
  queue.reserve(n);
  p.dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    const HopCount du = p.dist[u];
    if (du > diameter) {
      throw DataError("node " + g.label(u) + " lies " + std::to_string(du) +
                      " hops from the source, beyond the diameter " + std::to_string(diameter));
    }
    ++p.hop_histogram[du];
    degree_mass[du] += g.degree(u);
    reached_degree += g.degree(u);
    for (NodeId v : g.neighbors(u)) {
      if (p.dist[v] == kUnreachable) {
        p.dist[v] = static_cast<HopCount>(du + 1);
        queue.push_back(v);
      }
    }
  }

  double norm = static_cast<double>(degree_mass[0]) / grav_distance_sq(0, diameter);
  for (std::size_t k = 1; k < degree_mass.size(); ++k) {
    norm += static_cast<double>(degree_mass[k]) / static_cast<double>(k * k);
  }
  norm += static_cast<double>(total_degree - reached_degree) /
          grav_distance_sq(kUnreachable, diameter);
  p.grav_normalizer = norm;
  return p;
}

double mk_row_mass(const SourceProfile& profile, HopCount k, NodeId j) {
  if (k < 1 || k > profile.diameter()) throw std::out_of_range("hop index out of range");
  if (j >= profile.dist.size()) throw std::out_of_range("node id out of range");
  if (profile.dist[j] != k) return 0.0;
  const auto size = profile.hop_histogram[k];
  return size > 0 ? 1.0 / static_cast<double>(size) : 0.0;
}

ProfileCache::ProfileCache(const Graph& g, HopCount diameter, std::size_t budget_bytes)
    : graph_(&g), diameter_(diameter), budget_(budget_bytes) {}

std::size_t ProfileCache::profile_bytes(std::size_t node_count, HopCount diameter) {
  return node_count * sizeof(HopCount) + (static_cast<std::size_t>(diameter) + 1) * 4 +
         sizeof(SourceProfile);
}

const SourceProfile* ProfileCache::find(NodeId source) const {
  const auto it = profiles_.find(source);
  return it == profiles_.end() ? nullptr : it->second.get();
}

std::shared_ptr<const SourceProfile> ProfileCache::get(NodeId source) const {
  const auto it = profiles_.find(source);
  if (it != profiles_.end()) return it->second;
  return std::make_shared<const SourceProfile>(bfs_profile(*graph_, source, diameter_));
}

bool ProfileCache::insert(SourceProfile profile) {
  if (profile.dist.size() != graph_->node_count() || profile.diameter() != diameter_) {
    throw DataError("profile does not match the cache's graph");
  }
  if (profiles_.count(profile.source)) return true;
  const auto bytes = profile_bytes(graph_->node_count(), diameter_);
  if (used_ + bytes > budget_) return false;
  used_ += bytes;
  const NodeId source = profile.source;
  profiles_.emplace(source, std::make_shared<const SourceProfile>(std::move(profile)));
  return true;
}

std::vector<NodeId> ProfileCache::sources() const {
  std::vector<NodeId> out;
  out.reserve(profiles_.size());
  for (const auto& kv : profiles_) out.push_back(kv.first);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

constexpr std::array<char, 4> kMagic{'H', 'R', 'P', 'C'};
constexpr std::uint32_t kCacheVersion = 1;

template <typename T>
void put_le(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<unsigned char>(static_cast<std::uint64_t>(value) >> (8 * i));
  }
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw DataError("profile cache file is truncated");
  }
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return static_cast<T>(v);
}

}  // namespace

void ProfileCache::save(std::ostream& out) const {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, kCacheVersion);
  put_le<std::uint64_t>(out, graph_->content_hash());
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(graph_->node_count()));
  put_le<std::uint16_t>(out, diameter_);
  const auto ids = sources();
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(ids.size()));
  for (NodeId s : ids) {
    put_le<std::uint32_t>(out, s);
    for (HopCount d : find(s)->dist) put_le<std::uint16_t>(out, d);
  }
}

ProfileCache ProfileCache::load(std::istream& in, const Graph& g, HopCount diameter,
                                std::size_t budget_bytes) {
  ProfileCache cache(g, diameter, budget_bytes);
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw DataError("not a profile cache file");
  }
  if (get_le<std::uint32_t>(in) != kCacheVersion) throw DataError("unsupported cache version");
  const auto hash = get_le<std::uint64_t>(in);
  const auto n = get_le<std::uint32_t>(in);
  const auto d = get_le<std::uint16_t>(in);
  if (hash != g.content_hash() || n != g.node_count() || d != diameter) return cache;

  const auto count = get_le<std::uint32_t>(in);
  for (std::uint32_t c = 0; c < count; ++c) {
    const auto source = get_le<std::uint32_t>(in);
    if (source >= n) throw DataError("profile cache source out of range");
    std::vector<HopCount> dist(n);
    for (auto& v : dist) v = get_le<std::uint16_t>(in);
    // Histogram and normalizer are recomputed; a fresh BFS is the reference, and a file
    // whose distances disagree with it is rejected.
    SourceProfile p = bfs_profile(g, source, diameter);
    if (p.dist != dist) throw DataError("profile cache does not match the graph");
    if (!cache.insert(std::move(p))) break;
  }
  return cache;
}

ProfileCache profile_sources(const Graph& g, std::span<const NodeId> sources, HopCount diameter,
                             std::size_t budget_bytes) {
  std::vector<NodeId> distinct(sources.begin(), sources.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  for (NodeId s : distinct) {
    if (s >= g.node_count()) throw std::out_of_range("profile source out of range");
  }

  ProfileCache cache(g, diameter, budget_bytes);
  const std::size_t per = ProfileCache::profile_bytes(g.node_count(), diameter);
  const std::size_t fit = std::min(distinct.size(), per == 0 ? distinct.size() : budget_bytes / per);

  std::vector<SourceProfile> computed(fit);
  bool failed = false;
  std::string failure;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(fit); ++i) {
    try {
      computed[static_cast<std::size_t>(i)] =
          bfs_profile(g, distinct[static_cast<std::size_t>(i)], diameter);
    } catch (const std::exception& e) {
#pragma omp critical
      {
        failed = true;
        failure = e.what();
      }
    }
  }
  if (failed) throw DataError(failure);
  for (auto& p : computed) cache.insert(std::move(p));
  return cache;
}

}  // namespace hoprank
