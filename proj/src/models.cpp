#include "hoprank/models.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <json.hpp>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "hoprank/error.hpp"
#include "hoprank/text.hpp"

namespace hoprank {

namespace {

constexpr std::array<std::string_view, 8> kModelNames{
    "hoprank", "pa", "gravitational", "rw-0", "rw-1", "rw-0.85", "rw-empirical", "mc"};

double uniform(std::size_t n) { return 1.0 / static_cast<double>(n); }

double smooth(double p, double eps, std::size_t n) {
  if (eps <= 0.0) return p;
  return (p + eps) / (1.0 + static_cast<double>(n) * eps);
}

bool row_observed(const Eigen::SparseMatrix<double, Eigen::RowMajor>& rows, NodeId i) {
  return rows.outerIndexPtr()[i + 1] > rows.outerIndexPtr()[i];
}

double mc_prob(const FittedModel& m, NodeId i, NodeId j) {
  if (!row_observed(m.rows, i)) return uniform(static_cast<std::size_t>(m.rows.rows()));
  return m.rows.coeff(i, j);
}

}  // namespace

std::string_view model_name(ModelId id) { return kModelNames[static_cast<std::size_t>(id)]; }

std::optional<ModelId> parse_model_id(std::string_view name) {
  const auto lowered = text::lower(text::trim(name));
  for (std::size_t i = 0; i < kModelNames.size(); ++i) {
    if (lowered == kModelNames[i]) return static_cast<ModelId>(i);
  }
  return std::nullopt;
}

std::uint64_t nparams(ModelId id, const Graph& g, HopCount diameter) {
  switch (id) {
    case ModelId::HopRank:
      return std::uint64_t{diameter} + 1;
    case ModelId::EmpiricalAlpha:
      return 1;
    case ModelId::MarkovChain: {
      const std::uint64_t n = g.node_count();
      return n >= 2 ? n * (n - 2) : 0;
    }
    default:
      return 0;
  }
}

HopPortationVector::HopPortationVector(Eigen::VectorXd beta) : beta_(std::move(beta)) {
  if (beta_.size() == 0) throw std::invalid_argument("HopPortation vector is empty");
  if (beta_.size() - 1 >= kUnreachable) throw std::invalid_argument("HopPortation vector too long");
  if ((beta_.array() < 0.0).any() || !beta_.allFinite()) {
    throw std::invalid_argument("HopPortation entries must be finite and non-negative");
  }
  if (std::abs(beta_.sum() - 1.0) > kSumTolerance) {
    throw std::invalid_argument("HopPortation vector must sum to 1");
  }
}

HopPortationVector HopPortationVector::from_hop_weights(const Eigen::VectorXd& hops) {
  Eigen::VectorXd beta(hops.size() + 1);
  beta.tail(hops.size()) = hops;
  beta[0] = 1.0 - hops.sum();
  if (beta[0] < 0.0 && beta[0] > -kSumTolerance) beta[0] = 0.0;
  return HopPortationVector(std::move(beta));
}

double hoprank_mass(HopCount hop, std::span<const std::uint32_t> hop_histogram,
                    const HopPortationVector& beta, std::size_t node_count) {
  const HopCount d = beta.diameter();
  if (hop_histogram.size() != static_cast<std::size_t>(d) + 1) {
    throw std::invalid_argument("HopPortation length does not match the profile diameter");
  }
  double z = beta.noise();
  for (HopCount k = 1; k <= d; ++k) {
    if (hop_histogram[k] > 0) z += beta[k];
  }
  if (z <= 0.0) return uniform(node_count);
  double raw = beta.noise() / static_cast<double>(node_count);
  if (hop >= 1 && hop <= d && hop_histogram[hop] > 0) {
    raw += beta[hop] / static_cast<double>(hop_histogram[hop]);
  }
  return raw / z;
}

double hoprank_prob(NodeId i, NodeId j, const HopPortationVector& beta, const SourceProfile& profile) {
  if (profile.source != i) throw std::invalid_argument("profile belongs to another source");
  if (j >= profile.dist.size()) throw std::out_of_range("node id out of range");
  return hoprank_mass(profile.dist[j], profile.hop_histogram, beta, profile.dist.size());
}

double pa_prob(NodeId /*i*/, NodeId j, const Graph& g) {
  const double total = 2.0 * static_cast<double>(g.edge_count());
  if (total == 0.0) return uniform(g.node_count());
  return static_cast<double>(g.degree(j)) / total;
}

double grav_prob(NodeId i, NodeId j, const Graph& g, const SourceProfile& profile) {
  if (profile.source != i) throw std::invalid_argument("profile belongs to another source");
  if (profile.grav_normalizer <= 0.0) return uniform(g.node_count());
  const double w = static_cast<double>(g.degree(j)) / grav_distance_sq(profile.dist[j], profile.diameter());
  return w / profile.grav_normalizer;
}

double rw_prob(NodeId i, NodeId j, const Graph& g, double alpha) {
  const auto deg = g.degree(i);
  const double n = static_cast<double>(g.node_count());
  if (deg == 0) return 1.0 / n;
  const double link = g.has_edge(i, j) ? 1.0 / static_cast<double>(deg) : 0.0;
  return alpha * link + (1.0 - alpha) / n;
}

double probability(const FittedModel& model, NodeId i, NodeId j, const ProfileCache& profiles) {
  const Graph& g = profiles.graph();
  if (i >= g.node_count() || j >= g.node_count()) throw std::out_of_range("node id out of range");
  double p = 0.0;
  switch (model.id) {
    case ModelId::HopRank:
      p = hoprank_prob(i, j, *model.beta, *profiles.get(i));
      break;
    case ModelId::PreferentialAttachment:
      p = pa_prob(i, j, g);
      break;
    case ModelId::Gravitational:
      p = grav_prob(i, j, g, *profiles.get(i));
      break;
    case ModelId::MarkovChain:
      p = mc_prob(model, i, j);
      break;
    default:
      p = rw_prob(i, j, g, model.alpha);
  }
  return smooth(p, model.smoothing, g.node_count());
}

Eigen::VectorXd dense_row(const FittedModel& model, NodeId i, const ProfileCache& profiles) {
  const Graph& g = profiles.graph();
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Eigen::VectorXd row(n);
  std::shared_ptr<const SourceProfile> profile;
  if (model.id == ModelId::HopRank || model.id == ModelId::Gravitational) profile = profiles.get(i);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto jj = static_cast<NodeId>(j);
    double p;
    switch (model.id) {
      case ModelId::HopRank:
        p = hoprank_prob(i, jj, *model.beta, *profile);
        break;
      case ModelId::PreferentialAttachment:
        p = pa_prob(i, jj, g);
        break;
      case ModelId::Gravitational:
        p = grav_prob(i, jj, g, *profile);
        break;
      case ModelId::MarkovChain:
        p = mc_prob(model, i, jj);
        break;
      default:
        p = rw_prob(i, jj, g, model.alpha);
    }
    row[j] = smooth(p, model.smoothing, g.node_count());
  }
  return row;
}

Eigen::MatrixXd dense_matrix(const FittedModel& model, const ProfileCache& profiles) {
  const auto n = static_cast<Eigen::Index>(profiles.graph().node_count());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m.row(i) = dense_row(model, static_cast<NodeId>(i), profiles).transpose();
  return m;
}

HopPortationVector fit_hopportation(const TransitionSet& t, NavFilter navtype, const HopGeometry& geometry) {
  const HopCount d = geometry.diameter();
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(d) + 1, 0);
  std::uint64_t n = 0;
  for (const auto& cell : t.view(navtype)) {
    const HopCount hop = geometry.hop(cell.source, cell.target);
    if (hop == kUnreachable) {
      counts[0] += cell.count;
    } else if (hop > d) {
      throw DataError("transition distance exceeds the diameter");
    } else {
      counts[hop] += cell.count;
    }
    n += cell.count;
  }
  if (n == 0) throw DataError("no transitions for type " + navtype.name());
  Eigen::VectorXd beta(static_cast<Eigen::Index>(d) + 1);
  for (std::size_t k = 0; k < counts.size(); ++k) {
    beta[static_cast<Eigen::Index>(k)] = static_cast<double>(counts[k]) / static_cast<double>(n);
  }
  return HopPortationVector(std::move(beta));
}

HopPortationVector fit_hopportation(const TransitionSet& t, NavFilter navtype, const ProfileCache& profiles) {
  return fit_hopportation(t, navtype, HopGeometry(t, profiles));
}

namespace {

// The random-walker likelihood depends on a cell only through whether it follows an
// edge and, if so, the source degree.
struct AlphaGroups {
  std::uint64_t off_edge = 0;
  std::map<std::size_t, std::uint64_t> on_edge_by_degree;
  double n = 0.0;

  double loglik(double alpha) const {
    double ll = 0.0;
    if (off_edge > 0) ll += static_cast<double>(off_edge) * std::log((1.0 - alpha) / n);
    for (const auto& [deg, c] : on_edge_by_degree) {
      ll += static_cast<double>(c) * std::log(alpha / static_cast<double>(deg) + (1.0 - alpha) / n);
    }
    return ll;
  }

  double derivative(double alpha) const {
    double d = -static_cast<double>(off_edge) / (1.0 - alpha);
    for (const auto& [deg, c] : on_edge_by_degree) {
      const double x = 1.0 / static_cast<double>(deg);
      d += static_cast<double>(c) * (x - 1.0 / n) / (alpha * x + (1.0 - alpha) / n);
    }
    return d;
  }
};

AlphaGroups group_for_alpha(const TransitionSet& t, NavFilter navtype, const Graph& g) {
  if (!t.compatible_with(g)) throw DataError("transitions were recorded on a different graph");
  AlphaGroups groups;
  groups.n = static_cast<double>(g.node_count());
  for (const auto& cell : t.view(navtype)) {
    if (g.has_edge(cell.source, cell.target)) {
      groups.on_edge_by_degree[g.degree(cell.source)] += cell.count;
    } else {
      groups.off_edge += cell.count;
    }
  }
  return groups;
}

}  // namespace

double rw_loglik(const TransitionSet& t, NavFilter navtype, const Graph& g, double alpha) {
  return group_for_alpha(t, navtype, g).loglik(alpha);
}

double fit_alpha(const TransitionSet& t, NavFilter navtype, const Graph& g) {
  const AlphaGroups groups = group_for_alpha(t, navtype, g);
  if (groups.off_edge == 0 && groups.on_edge_by_degree.empty()) {
    throw DataError("no transitions for type " + navtype.name());
  }
  if (groups.derivative(0.0) <= 0.0) return 0.0;
  if (groups.derivative(kMaxAlpha) >= 0.0) return kMaxAlpha;

  // Golden-section search on the concave log-likelihood.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0;
  double b = kMaxAlpha;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = groups.loglik(c);
  double fd = groups.loglik(d);
  while (b - a > 1e-7) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = groups.loglik(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = groups.loglik(d);
    }
  }
  return 0.5 * (a + b);
}

FittedModel mc_fit(const TransitionSet& t, NavFilter navtype, const Graph& g) {
  if (!t.compatible_with(g)) throw DataError("transitions were recorded on a different graph");
  const auto cells = t.view(navtype);
  std::vector<double> row_total(g.node_count(), 0.0);
  for (const auto& cell : cells) row_total[cell.source] += static_cast<double>(cell.count);

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(cells.size());
  for (const auto& cell : cells) {
    triplets.emplace_back(cell.source, cell.target, static_cast<double>(cell.count) / row_total[cell.source]);
  }
  FittedModel m;
  m.id = ModelId::MarkovChain;
  m.navtype = navtype;
  m.nobs = t.nobs(navtype);
  m.nparams = nparams(ModelId::MarkovChain, g, 0);
  const auto n = static_cast<Eigen::Index>(g.node_count());
  m.rows.resize(n, n);
  m.rows.setFromTriplets(triplets.begin(), triplets.end());
  m.rows.makeCompressed();
  return m;
}

FittedModel fit_model(ModelId id, const TransitionSet& t, NavFilter navtype, const HopGeometry& geometry,
                      const ModelOptions& options) {
  const Graph& g = geometry.graph();
  FittedModel m;
  switch (id) {
    case ModelId::HopRank:
      m.beta = fit_hopportation(t, navtype, geometry);
      break;
    case ModelId::RandomJumps:
      m.alpha = 0.0;
      break;
    case ModelId::LinksOnly:
      m.alpha = options.links_only_alpha;
      break;
    case ModelId::PageRank:
      m.alpha = options.pagerank_alpha;
      break;
    case ModelId::EmpiricalAlpha:
      m.alpha = fit_alpha(t, navtype, g);
      break;
    case ModelId::MarkovChain:
      m = mc_fit(t, navtype, g);
      break;
    default:
      break;
  }
  m.id = id;
  m.navtype = navtype;
  m.nobs = t.nobs(navtype);
  m.nparams = nparams(id, g, geometry.diameter());
  m.smoothing = options.smoothing;
  return m;
}

double loglik(const FittedModel& model, const TransitionSet& t, NavFilter navtype, const HopGeometry& geometry) {
  const Graph& g = geometry.graph();
  if (!t.compatible_with(g)) throw DataError("transitions were recorded on a different graph");
  if (model.id == ModelId::MarkovChain && model.rows.rows() != static_cast<Eigen::Index>(g.node_count())) {
    throw DataError("Markov chain was fitted on a different graph");
  }
  if (model.id == ModelId::HopRank && (!model.beta || model.beta->diameter() != geometry.diameter())) {
    throw DataError("HopPortation vector does not match the graph diameter");
  }
  const std::size_t n = g.node_count();
  double ll = 0.0;
  for (const auto& cell : t.view(navtype)) {
    double p;
    switch (model.id) {
      case ModelId::HopRank:
        p = hoprank_mass(geometry.hop(cell.source, cell.target), geometry.summary(cell.source).hop_histogram,
                         *model.beta, n);
        break;
      case ModelId::PreferentialAttachment:
        p = pa_prob(cell.source, cell.target, g);
        break;
      case ModelId::Gravitational: {
        const auto& s = geometry.summary(cell.source);
        p = s.grav_normalizer > 0.0
                ? static_cast<double>(g.degree(cell.target)) /
                      grav_distance_sq(geometry.hop(cell.source, cell.target), geometry.diameter()) /
                      s.grav_normalizer
                : uniform(n);
        break;
      }
      case ModelId::MarkovChain:
        p = mc_prob(model, cell.source, cell.target);
        break;
      default:
        p = rw_prob(cell.source, cell.target, g, model.alpha);
    }
    p = smooth(p, model.smoothing, n);
    if (!(p > 0.0)) return -std::numeric_limits<double>::infinity();
    ll += static_cast<double>(cell.count) * std::log(p);
  }
  return ll;
}

double loglik(const FittedModel& model, const TransitionSet& t, NavFilter navtype, const ProfileCache& profiles) {
  return loglik(model, t, navtype, HopGeometry(t, profiles));
}

namespace {

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

}  // namespace

void write_model_json(std::ostream& out, const FittedModel& model, const Graph& g, HopCount diameter) {
  nlohmann::ordered_json doc;
  doc["model"] = model_name(model.id);
  doc["navtype"] = model.navtype.name();
  doc["nobs"] = model.nobs;
  doc["nparams"] = model.nparams;
  doc["graph_hash"] = hex64(g.content_hash());
  doc["diameter"] = diameter;
  doc["smoothing"] = model.smoothing;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  switch (model.id) {
    case ModelId::HopRank: {
      auto beta = nlohmann::ordered_json::array();
      for (Eigen::Index k = 0; k < model.beta->values().size(); ++k) beta.push_back(model.beta->values()[k]);
      params["beta"] = beta;
      break;
    }
    case ModelId::MarkovChain: {
      auto rows = nlohmann::ordered_json::array();
      for (Eigen::Index i = 0; i < model.rows.outerSize(); ++i) {
        if (!row_observed(model.rows, static_cast<NodeId>(i))) continue;
        auto targets = nlohmann::ordered_json::array();
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(model.rows, i); it; ++it) {
          targets.push_back({g.label(static_cast<NodeId>(it.col())), it.value()});
        }
        rows.push_back({{"source", g.label(static_cast<NodeId>(i))}, {"targets", targets}});
      }
      params["rows"] = rows;
      break;
    }
    case ModelId::PreferentialAttachment:
    case ModelId::Gravitational:
      break;
    default:
      params["alpha"] = model.alpha;
  }
  doc["params"] = params;
  out << doc.dump(2) << '\n';
}

FittedModel read_model_json(std::istream& in, const Graph& g) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
  try {
    FittedModel m;
    const auto id = parse_model_id(doc.at("model").get<std::string>());
    if (!id) throw DataError("unknown model '" + doc.at("model").get<std::string>() + "'");
    const auto nav = NavFilter::parse(doc.at("navtype").get<std::string>());
    if (!nav) throw DataError("unknown navtype in model file");
    if (doc.at("graph_hash").get<std::string>() != hex64(g.content_hash())) {
      throw DataError("model file was fitted on a different graph");
    }
    m.id = *id;
    m.navtype = *nav;
    m.nobs = doc.at("nobs").get<std::uint64_t>();
    m.nparams = doc.at("nparams").get<std::uint64_t>();
    m.smoothing = doc.value("smoothing", 0.0);
    const auto& params = doc.at("params");
    switch (m.id) {
      case ModelId::HopRank: {
        const auto values = params.at("beta").get<std::vector<double>>();
        m.beta = HopPortationVector(Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size())));
        break;
      }
      case ModelId::MarkovChain: {
        std::vector<Eigen::Triplet<double>> triplets;
        for (const auto& row : params.at("rows")) {
          const auto src = g.find(row.at("source").get<std::string>());
          if (!src) throw DataError("model file references an unknown node");
          for (const auto& target : row.at("targets")) {
            const auto dst = g.find(target.at(0).get<std::string>());
            if (!dst) throw DataError("model file references an unknown node");
            triplets.emplace_back(*src, *dst, target.at(1).get<double>());
          }
        }
        const auto n = static_cast<Eigen::Index>(g.node_count());
        m.rows.resize(n, n);
        m.rows.setFromTriplets(triplets.begin(), triplets.end());
        m.rows.makeCompressed();
        break;
      }
      case ModelId::PreferentialAttachment:
      case ModelId::Gravitational:
        break;
      default:
        m.alpha = params.at("alpha").get<double>();
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
}

void write_beta_rows(std::ostream& out, std::span<const std::pair<NavFilter, HopPortationVector>> betas) {
  out << "navtype\tk\tbeta\n";
  for (const auto& [nav, beta] : betas) {
    for (Eigen::Index k = 0; k < beta.values().size(); ++k) {
      out << nav.name() << '\t' << k << '\t' << text::format_double(beta.values()[k]) << '\n';
    }
  }
}

}  // namespace hoprank
