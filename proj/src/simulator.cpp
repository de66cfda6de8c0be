#include "hoprank/simulator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <set>
#include <stdexcept>

#include "hoprank/error.hpp"
#include "hoprank/text.hpp"

namespace hoprank {

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index needs n > 0");
  // Rejection keeps the draw unbiased for any n.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % n;
}

std::size_t Rng::categorical(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) return weights.size();
  const double u = uniform01() * total;
  double acc = 0.0;
  std::size_t last_positive = weights.size();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (u < acc) return i;
  }
  return last_positive;  // rounding left u just past the final sum
}

std::optional<GraphKind> parse_graph_kind(std::string_view s) {
  const auto v = text::lower(text::trim(s));
  if (v == "binary-tree" || v == "balanced-binary-tree") return GraphKind::BalancedBinaryTree;
  if (v == "random-tree") return GraphKind::RandomTree;
  if (v == "connected" || v == "connected-random" || v == "erdos-renyi") return GraphKind::ConnectedRandom;
  return std::nullopt;
}

std::string synth_label(std::size_t index) {
  std::string s;
  std::size_t v = index + 1;
  while (v > 0) {
    --v;
    s.push_back(static_cast<char>('a' + v % 26));
    v /= 26;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

Graph synth_graph(const SynthSpec& spec) {
  const std::size_t n = spec.nodes;
  if (n < 2) throw DataError("synthetic graphs need at least 2 nodes");
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back(synth_label(i));
  std::vector<std::pair<NodeId, NodeId>> edges;
  Rng rng(spec.seed);

  switch (spec.kind) {
    case GraphKind::BalancedBinaryTree: {
      if (((n + 1) & n) != 0) throw DataError("a balanced binary tree needs N = 2^h - 1 nodes");
      for (std::size_t i = 1; i < n; ++i) edges.emplace_back(static_cast<NodeId>((i - 1) / 2), static_cast<NodeId>(i));
      break;
    }
    case GraphKind::RandomTree: {
      for (std::size_t i = 1; i < n; ++i) {
        edges.emplace_back(static_cast<NodeId>(rng.uniform_index(i)), static_cast<NodeId>(i));
      }
      break;
    }
    case GraphKind::ConnectedRandom: {
      const std::size_t max_edges = n * (n - 1) / 2;
      std::size_t target = spec.edges;
      if (target == 0) target = std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(1.387 * static_cast<double>(n))), n - 1, max_edges);
      if (target < n - 1 || target > max_edges) throw DataError("edge count must lie in [N-1, N(N-1)/2]");
      std::set<std::pair<NodeId, NodeId>> seen;
      for (std::size_t i = 1; i < n; ++i) {
        const auto parent = static_cast<NodeId>(rng.uniform_index(i));
        edges.emplace_back(parent, static_cast<NodeId>(i));
        seen.emplace(parent, static_cast<NodeId>(i));
      }
      while (edges.size() < target) {
        auto a = static_cast<NodeId>(rng.uniform_index(n));
        auto b = static_cast<NodeId>(rng.uniform_index(n));
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        if (seen.emplace(a, b).second) edges.emplace_back(a, b);
      }
      break;
    }
  }
  return Graph::from_edges(std::move(labels), edges);
}

namespace {

// Truncated BFS from one source with stamp-based reuse across calls.
class LevelScanner {
 public:
  explicit LevelScanner(const Graph& g) : g_(g), stamp_(g.node_count(), 0) {}

  /// Fills levels[k] with the nodes at distance k, for k = 1..max_hop.
  void scan(NodeId source, HopCount max_hop) {
    levels_.resize(static_cast<std::size_t>(max_hop) + 1);
    for (auto& l : levels_) l.clear();
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      epoch_ = 1;
    }
    stamp_[source] = epoch_;
    levels_[0].push_back(source);
    for (HopCount k = 1; k <= max_hop; ++k) {
      for (NodeId u : levels_[k - 1]) {
        for (NodeId v : g_.neighbors(u)) {
          if (stamp_[v] != epoch_) {
            stamp_[v] = epoch_;
            levels_[k].push_back(v);
          }
        }
      }
      if (levels_[k].empty()) break;
    }
  }

  const std::vector<NodeId>& level(HopCount k) const { return levels_[k]; }

 private:
  const Graph& g_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::vector<std::vector<NodeId>> levels_;
};

template <typename Step>
TransitionSet walk(const Graph& g, std::size_t n, Rng& rng, const WalkOptions& options, Step&& step) {
  TransitionSet t(g);
  const std::size_t session = std::max<std::size_t>(options.session_length, 1);
  auto current = static_cast<NodeId>(rng.uniform_index(g.node_count()));
  std::size_t in_session = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (in_session == session) {
      current = static_cast<NodeId>(rng.uniform_index(g.node_count()));
      in_session = 0;
    }
    const NodeId next = step(current);
    t.add(current, next, options.navtype);
    current = next;
    ++in_session;
  }
  return t;
}

}  // namespace

TransitionSet simulate_hoprank(const Graph& g, const HopPortationVector& beta, std::size_t n,
                               std::uint64_t seed, const WalkOptions& options) {
  if (g.empty()) throw DataError("cannot simulate on an empty graph");
  Rng rng(seed);
  const HopCount d = beta.diameter();
  HopCount max_hop = 0;
  for (HopCount k = 1; k <= d; ++k) {
    if (beta[k] > 0.0) max_hop = k;
  }
  LevelScanner scanner(g);
  std::vector<double> weights(static_cast<std::size_t>(d) + 1, 0.0);
  const auto uniform_node = [&] { return static_cast<NodeId>(rng.uniform_index(g.node_count())); };

  return walk(g, n, rng, options, [&](NodeId i) {
    scanner.scan(i, max_hop);
    weights[0] = beta.noise();
    for (HopCount k = 1; k <= max_hop; ++k) weights[k] = scanner.level(k).empty() ? 0.0 : beta[k];
    const auto k = rng.categorical(std::span<const double>(weights.data(), static_cast<std::size_t>(max_hop) + 1));
    if (k == 0 || k > max_hop) return uniform_node();
    const auto& level = scanner.level(static_cast<HopCount>(k));
    return level[rng.uniform_index(level.size())];
  });
}

TransitionSet simulate_baseline(const Graph& g, HopCount diameter, const FittedModel& model, std::size_t n,
                                std::uint64_t seed, const WalkOptions& options) {
  if (g.empty()) throw DataError("cannot simulate on an empty graph");
  if (model.id == ModelId::HopRank) return simulate_hoprank(g, *model.beta, n, seed, options);

  Rng rng(seed);
  const auto uniform_node = [&] { return static_cast<NodeId>(rng.uniform_index(g.node_count())); };
  const double eps = model.smoothing;
  const double smoothed_uniform_share = eps > 0.0 ? static_cast<double>(g.node_count()) * eps / (1.0 + static_cast<double>(g.node_count()) * eps) : 0.0;
  // Smoothing mixes the model row with a uniform row.
  const auto maybe_uniform = [&]() { return smoothed_uniform_share > 0.0 && rng.uniform01() < smoothed_uniform_share; };

  switch (model.id) {
    case ModelId::PreferentialAttachment: {
      std::vector<std::uint64_t> prefix(g.node_count() + 1, 0);
      for (NodeId v = 0; v < g.node_count(); ++v) prefix[v + 1] = prefix[v] + g.degree(v);
      return walk(g, n, rng, options, [&](NodeId) {
        if (maybe_uniform() || prefix.back() == 0) return uniform_node();
        const auto x = rng.uniform_index(prefix.back());
        return static_cast<NodeId>(std::upper_bound(prefix.begin(), prefix.end(), x) - prefix.begin() - 1);
      });
    }
    case ModelId::Gravitational: {
      std::vector<double> weights(g.node_count());
      return walk(g, n, rng, options, [&](NodeId i) {
        if (maybe_uniform()) return uniform_node();
        const SourceProfile p = bfs_profile(g, i, diameter);
        for (NodeId j = 0; j < g.node_count(); ++j) {
          weights[j] = static_cast<double>(g.degree(j)) / grav_distance_sq(p.dist[j], diameter);
        }
        const auto j = rng.categorical(weights);
        return j < weights.size() ? static_cast<NodeId>(j) : uniform_node();
      });
    }
    case ModelId::MarkovChain: {
      if (model.rows.rows() != static_cast<Eigen::Index>(g.node_count())) {
        throw DataError("Markov chain was fitted on a different graph");
      }
      std::vector<double> weights;
      std::vector<NodeId> targets;
      return walk(g, n, rng, options, [&](NodeId i) {
        if (maybe_uniform()) return uniform_node();
        weights.clear();
        targets.clear();
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(model.rows, i); it; ++it) {
          targets.push_back(static_cast<NodeId>(it.col()));
          weights.push_back(it.value());
        }
        const auto k = rng.categorical(weights);
        return k < targets.size() ? targets[k] : uniform_node();
      });
    }
    default: {
      const double alpha = model.alpha;
      return walk(g, n, rng, options, [&](NodeId i) {
        if (maybe_uniform()) return uniform_node();
        const auto nb = g.neighbors(i);
        if (!nb.empty() && rng.uniform01() < alpha) return nb[rng.uniform_index(nb.size())];
        return uniform_node();
      });
    }
  }
}

namespace {

std::size_t parse_size(std::string_view v, std::size_t lineno) {
  std::size_t out = 0;
  v = text::trim(v);
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) throw ParseError(lineno, "expected a non-negative integer");
  return out;
}

}  // namespace

SynthSpec parse_synth_spec(std::istream& in) {
  SynthSpec spec;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = text::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ParseError(lineno, "expected key = value");
    const auto key = text::lower(text::trim(body.substr(0, eq)));
    const auto value = text::trim(body.substr(eq + 1));
    if (key == "kind") {
      const auto kind = parse_graph_kind(value);
      if (!kind) throw ParseError(lineno, "unknown graph kind");
      spec.kind = *kind;
    } else if (key == "nodes") {
      spec.nodes = parse_size(value, lineno);
    } else if (key == "edges") {
      spec.edges = parse_size(value, lineno);
    } else if (key == "transitions") {
      spec.transitions = parse_size(value, lineno);
    } else if (key == "seed") {
      spec.seed = parse_size(value, lineno);
    } else if (key == "session_length") {
      spec.session_length = parse_size(value, lineno);
    } else if (key == "alpha") {
      if (!text::parse_double(value, spec.alpha)) throw ParseError(lineno, "bad alpha");
    } else if (key == "model") {
      const auto id = parse_model_id(value);
      if (!id) throw ParseError(lineno, "unknown model");
      spec.model = *id;
    } else if (key == "navtype") {
      const auto t = parse_navigation_type(value);
      if (!t) throw ParseError(lineno, "unknown navigation type");
      spec.navtype = *t;
    } else if (key == "beta") {
      std::string_view list = value;
      if (list.size() >= 2 && list.front() == '[' && list.back() == ']') list = list.substr(1, list.size() - 2);
      const auto items = text::split(list, ',');
      Eigen::VectorXd beta(static_cast<Eigen::Index>(items.size()));
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (!text::parse_double(items[i], beta[static_cast<Eigen::Index>(i)])) throw ParseError(lineno, "bad beta entry");
      }
      spec.beta = beta;
    } else {
      throw ParseError(lineno, "unknown synth key '" + key + "'");
    }
  }
  return spec;
}

SynthData synthesize(const SynthSpec& spec) {
  SynthData data;
  data.graph = synth_graph(spec);
  data.diameter = exact_diameter(data.graph);
  const WalkOptions walk_options{spec.session_length, spec.navtype};
  // Transitions use a seed stream distinct from the graph's.
  const std::uint64_t walk_seed = spec.seed ^ 0x9e3779b97f4a7c15ULL;

  if (spec.beta) {
    const Eigen::Index len = spec.beta->size();
    if (len > static_cast<Eigen::Index>(data.diameter) + 1) {
      throw DataError("planted beta is longer than the graph diameter allows");
    }
    Eigen::VectorXd padded = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(data.diameter) + 1);
    padded.head(len) = *spec.beta;
    HopPortationVector beta = [&] {
      try {
        return HopPortationVector(padded);
      } catch (const std::invalid_argument& e) {
        throw DataError(std::string("planted beta: ") + e.what());
      }
    }();
    data.transitions = simulate_hoprank(data.graph, beta, spec.transitions, walk_seed, walk_options);
    return data;
  }

  const ModelId id = spec.model.value_or(ModelId::RandomJumps);
  FittedModel model;
  model.id = id;
  switch (id) {
    case ModelId::HopRank:
      throw DataError("a planted HopRank model needs a beta vector");
    case ModelId::MarkovChain:
      throw DataError("a planted Markov chain cannot be described by a synth spec");
    case ModelId::RandomJumps:
      model.alpha = 0.0;
      break;
    case ModelId::LinksOnly:
      model.alpha = ModelOptions{}.links_only_alpha;
      break;
    case ModelId::PageRank:
      model.alpha = ModelOptions{}.pagerank_alpha;
      break;
    default:
      model.alpha = spec.alpha;
  }
  data.transitions = simulate_baseline(data.graph, data.diameter, model, spec.transitions, walk_seed, walk_options);
  return data;
}

}  // namespace hoprank
