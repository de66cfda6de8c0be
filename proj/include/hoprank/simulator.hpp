#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "hoprank/graph.hpp"
#include "hoprank/models.hpp"
#include "hoprank/transitions.hpp"

namespace hoprank {

/**
 * Seedable generator with portable draws.
 *
 * Wraps std::mt19937_64, whose output sequence is fixed by the standard, and implements
 * the integer, real, and categorical draws itself so results do not depend on the
 * standard library's distribution implementations.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Index drawn proportionally to non-negative weights; returns weights.size() when
  /// every weight is zero.
  std::size_t categorical(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
};

enum class GraphKind { BalancedBinaryTree, RandomTree, ConnectedRandom };

std::optional<GraphKind> parse_graph_kind(std::string_view s);

/// Description of a synthetic dataset. The seed fully determines graph and transitions.
struct SynthSpec {
  GraphKind kind = GraphKind::BalancedBinaryTree;
  std::size_t nodes = 7;
  /// Total undirected edges for ConnectedRandom; 0 picks about 1.39 N.
  std::size_t edges = 0;
  /// Planted HopPortation weights beta_0..beta_m. Padded with zeros up to the generated
  /// graph's diameter; an error if longer.
  std::optional<Eigen::VectorXd> beta;
  /// Planted baseline model when no beta is given.
  std::optional<ModelId> model;
  double alpha = 0.85;  ///< used by random-walker models
  std::size_t transitions = 1000;
  std::uint64_t seed = 1;
  std::size_t session_length = 10;
  NavigationType navtype = NavigationType::DirectClick;
};

/// Reads `key = value` lines: kind, nodes, edges, beta (comma list), model, alpha,
/// transitions, seed, session_length, navtype. Unknown keys are ParseErrors.
SynthSpec parse_synth_spec(std::istream& in);

/// Bijective base-26 labels: a..z, aa, ab, ...
std::string synth_label(std::size_t index);

/// Generates the spec's graph. Balanced binary trees are labeled in level order, so the
/// 7-node tree is a(b(d, e), c(f, g)). Throws DataError for N < 2, for a balanced tree
/// with N not of the form 2^h - 1, or for an edge count outside [N-1, N(N-1)/2].
Graph synth_graph(const SynthSpec& spec);

struct WalkOptions {
  /// The walker restarts at a uniform node after this many steps.
  std::size_t session_length = 10;
  NavigationType navtype = NavigationType::DirectClick;
};

/// HopRank's generative walk: draw a hop k from the row-renormalized beta, then a node
/// uniformly from N_k(i), or from all of V when k = 0.
TransitionSet simulate_hoprank(const Graph& g, const HopPortationVector& beta, std::size_t n,
                               std::uint64_t seed, const WalkOptions& options = {});

/// Walk whose steps are drawn row-wise from a parameterized baseline model (or HopRank).
TransitionSet simulate_baseline(const Graph& g, HopCount diameter, const FittedModel& model, std::size_t n,
                                std::uint64_t seed, const WalkOptions& options = {});

struct SynthData {
  Graph graph;
  HopCount diameter = 0;
  TransitionSet transitions;
};

/// Graph plus transitions from the planted beta or model.
SynthData synthesize(const SynthSpec& spec);

}  // namespace hoprank
