#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "hoprank/graph.hpp"
#include "hoprank/khop.hpp"
#include "hoprank/navigation.hpp"
#include "hoprank/transitions.hpp"

namespace hoprank {

/// The eight transition models. Enumeration order is the fixed tie-break order.
enum class ModelId : std::uint8_t {
  HopRank,
  PreferentialAttachment,
  Gravitational,
  RandomJumps,      ///< random walker, alpha = 0
  LinksOnly,        ///< random walker, alpha ~ 1
  PageRank,         ///< random walker, alpha = 0.85
  EmpiricalAlpha,   ///< random walker, alpha fitted
  MarkovChain,
};

inline constexpr std::array<ModelId, 8> kAllModels{
    ModelId::HopRank,    ModelId::PreferentialAttachment, ModelId::Gravitational,
    ModelId::RandomJumps, ModelId::LinksOnly,             ModelId::PageRank,
    ModelId::EmpiricalAlpha, ModelId::MarkovChain};

/// CLI/report names: hoprank, pa, gravitational, rw-0, rw-1, rw-0.85, rw-empirical, mc.
std::string_view model_name(ModelId id);
std::optional<ModelId> parse_model_id(std::string_view name);

/// Number of free parameters: HopRank d'+1, empirical RW 1, Markov chain N(N-2), others 0.
std::uint64_t nparams(ModelId id, const Graph& g, HopCount diameter);

/**
 * HopPortation vector (beta_0, ..., beta_d'): the probability of jumping to each k-hop
 * neighborhood, with beta_0 the uniform-noise share. Always on the probability simplex.
 */
class HopPortationVector {
 public:
  static constexpr double kSumTolerance = 1e-12;

  /// Throws std::invalid_argument unless all entries are >= 0, the vector is non-empty,
  /// and the entries sum to 1 within kSumTolerance.
  explicit HopPortationVector(Eigen::VectorXd beta);

  /// beta_1..beta_d' given; beta_0 = 1 - sum.
  static HopPortationVector from_hop_weights(const Eigen::VectorXd& hops);

  HopCount diameter() const noexcept { return static_cast<HopCount>(beta_.size() - 1); }
  double operator[](std::size_t k) const { return beta_[static_cast<Eigen::Index>(k)]; }
  double noise() const noexcept { return beta_[0]; }
  const Eigen::VectorXd& values() const noexcept { return beta_; }

 private:
  Eigen::VectorXd beta_;
};

/// Fixed parameters of the non-fitted models.
struct ModelOptions {
  double links_only_alpha = 1.0 - 1e-6;
  double pagerank_alpha = 0.85;
  /// Additive smoothing of every probability, p -> (p + eps) / (1 + N eps). Off at 0.
  double smoothing = 0.0;
};

/// A model with its parameters bound, ready to score transitions.
struct FittedModel {
  ModelId id = ModelId::HopRank;
  NavFilter navtype = NavFilter::all();
  std::uint64_t nobs = 0;
  std::uint64_t nparams = 0;
  std::optional<HopPortationVector> beta;  ///< HopRank
  double alpha = 0.0;                      ///< random-walker variants
  /// Markov chain: row-normalized counts. Rows with no entries are uniform.
  Eigen::SparseMatrix<double, Eigen::RowMajor> rows;
  double smoothing = 0.0;
};

// Per-entry probabilities ---------------------------------------------------------------

/// HopRank mass of a target `hop` hops away, given the source's hop histogram.
/// Row-renormalized over the hops the source actually has; uniform if none carry mass.
double hoprank_mass(HopCount hop, std::span<const std::uint32_t> hop_histogram,
                    const HopPortationVector& beta, std::size_t node_count);

double hoprank_prob(NodeId i, NodeId j, const HopPortationVector& beta, const SourceProfile& profile);

/// degree(j) / 2|E|, independent of i.
double pa_prob(NodeId i, NodeId j, const Graph& g);

/// degree(j) / S(i, j) normalized over the row, with S from grav_distance_sq.
double grav_prob(NodeId i, NodeId j, const Graph& g, const SourceProfile& profile);

/// alpha [j in adj(i)] / deg(i) + (1 - alpha) / N.
double rw_prob(NodeId i, NodeId j, const Graph& g, double alpha);

double probability(const FittedModel& model, NodeId i, NodeId j, const ProfileCache& profiles);

/// Row i of the model's transition matrix.
Eigen::VectorXd dense_row(const FittedModel& model, NodeId i, const ProfileCache& profiles);

/// Full N x N transition matrix. Intended for small graphs.
Eigen::MatrixXd dense_matrix(const FittedModel& model, const ProfileCache& profiles);

// Precomputed transition geometry -------------------------------------------------------

/**
 * Hop distance of every observed (source, target) pair plus each source's histogram and
 * Gravitational normalizer. Built with one BFS per distinct source, reusing profiles the
 * cache holds, so likelihood evaluation never needs full distance vectors.
 */
class HopGeometry {
 public:
  HopGeometry(const TransitionSet& transitions, const ProfileCache& profiles);

  const Graph& graph() const noexcept { return *graph_; }
  HopCount diameter() const noexcept { return diameter_; }

  /// Throws std::out_of_range for a pair not present in the transition set.
  HopCount hop(NodeId source, NodeId target) const;
  const ProfileSummary& summary(NodeId source) const;

 private:
  static std::uint64_t key(NodeId s, NodeId t) { return (std::uint64_t{s} << 32) | t; }

  const Graph* graph_;
  HopCount diameter_;
  std::unordered_map<std::uint64_t, HopCount> hops_;
  std::unordered_map<NodeId, ProfileSummary> summaries_;
};

// Fitting -------------------------------------------------------------------------------

/// beta_k = (transitions at distance k) / nobs. Self-loops (and unreachable targets)
/// feed beta_0. Throws DataError when the filter selects no transitions.
HopPortationVector fit_hopportation(const TransitionSet& t, NavFilter navtype, const HopGeometry& geometry);
HopPortationVector fit_hopportation(const TransitionSet& t, NavFilter navtype, const ProfileCache& profiles);

/// Maximum-likelihood damping factor by golden-section search (absolute tolerance 1e-6).
/// Boundary optima are returned exactly: 0, or kMaxAlpha when the likelihood keeps
/// increasing. Throws DataError on an empty selection.
inline constexpr double kMaxAlpha = 1.0 - 1e-9;
double fit_alpha(const TransitionSet& t, NavFilter navtype, const Graph& g);

/// Empirical random-walker log-likelihood as a function of alpha.
double rw_loglik(const TransitionSet& t, NavFilter navtype, const Graph& g, double alpha);

FittedModel mc_fit(const TransitionSet& t, NavFilter navtype, const Graph& g);

/// Fits (or parameterizes) any of the eight models.
FittedModel fit_model(ModelId id, const TransitionSet& t, NavFilter navtype, const HopGeometry& geometry,
                      const ModelOptions& options = {});

/// Natural-log likelihood sum t_ij log p_ij over observed cells; -inf if any observed
/// cell has probability 0. Throws DataError if the transitions belong to another graph.
double loglik(const FittedModel& model, const TransitionSet& t, NavFilter navtype, const HopGeometry& geometry);
double loglik(const FittedModel& model, const TransitionSet& t, NavFilter navtype, const ProfileCache& profiles);

// Export --------------------------------------------------------------------------------

/// JSON document with model id, navtype, nobs, nparams, graph hash, diameter, parameters.
void write_model_json(std::ostream& out, const FittedModel& model, const Graph& g, HopCount diameter);
FittedModel read_model_json(std::istream& in, const Graph& g);

/// Rows "navtype<TAB>k<TAB>beta_k" for heatmap plotting.
void write_beta_rows(std::ostream& out, std::span<const std::pair<NavFilter, HopPortationVector>> betas);

}  // namespace hoprank
