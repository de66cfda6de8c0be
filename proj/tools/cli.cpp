#include "cli.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <json.hpp>

#include "hoprank/clickstream.hpp"
#include "hoprank/error.hpp"
#include "hoprank/graph.hpp"
#include "hoprank/khop.hpp"
#include "hoprank/models.hpp"
#include "hoprank/selection.hpp"
#include "hoprank/simulator.hpp"
#include "hoprank/text.hpp"

namespace hoprank::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";
constexpr const char* kGraphFile = "graph.tsv";
constexpr const char* kTransitionsFile = "transitions.tsv";
constexpr const char* kFitIndex = "fit.json";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const EdgeListFormat kTsv{'\t', false, '#'};

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  return in;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << content;
  if (!out) throw DataError("write failed: " + path.string());
}

std::string slurp(const fs::path& path) {
  auto in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Creates the output directory and refuses to clobber existing outputs without --force.
void prepare_output(const fs::path& dir, const std::vector<std::string>& names, bool force) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create " + dir.string() + ": " + ec.message());
  if (force) return;
  for (const auto& name : names) {
    if (fs::exists(dir / name)) {
      throw UsageError((dir / name).string() + " exists; pass --force to overwrite");
    }
  }
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Round-trips a graph through its canonical edge-list text so ids match a later reload.
std::pair<Graph, std::string> canonicalize(const Graph& g) {
  std::ostringstream os;
  write_edge_list(os, g);
  std::istringstream is(os.str());
  return {load_edge_list(is, kTsv), os.str()};
}

TransitionSet relabel(const TransitionSet& t, const Graph& from, const Graph& to) {
  std::ostringstream os;
  write_transitions(os, t, from);
  std::istringstream is(os.str());
  return read_transitions(is, to);
}

TransitionSet only_type(const TransitionSet& t, const Graph& g, NavigationType type) {
  TransitionSet out(g);
  for (const auto& [key, count] : t.entries()) {
    if (key.type == type) out.add(key.source, key.target, key.type, count);
  }
  return out;
}

std::string transitions_text(const TransitionSet& t, const Graph& g) {
  std::ostringstream os;
  write_transitions(os, t, g);
  return os.str();
}

struct Dataset {
  Graph graph;
  TransitionSet transitions;
};

Dataset load_dataset(const fs::path& dir) {
  Dataset d;
  d.graph = load_edge_list_file((dir / kGraphFile).string(), kTsv);
  auto in = open_in(dir / kTransitionsFile);
  d.transitions = read_transitions(in, d.graph);
  return d;
}

std::vector<ModelId> parse_models(const std::vector<std::string>& names) {
  std::vector<ModelId> out;
  for (const auto& raw : names) {
    const auto name = text::trim(raw);
    if (name.empty()) continue;
    const auto id = parse_model_id(name);
    if (!id) throw UsageError("unknown model '" + std::string(name) + "'");
    if (std::find(out.begin(), out.end(), *id) == out.end()) out.push_back(*id);
  }
  if (out.empty()) throw UsageError("the model list is empty");
  return out;
}

std::vector<NavFilter> parse_navtypes(const std::vector<std::string>& names) {
  std::vector<NavFilter> out;
  for (const auto& raw : names) {
    const auto name = text::trim(raw);
    if (name.empty()) continue;
    const auto nav = NavFilter::parse(name);
    if (!nav) throw UsageError("unknown navigation type '" + std::string(name) + "'");
    if (std::find(out.begin(), out.end(), *nav) == out.end()) out.push_back(*nav);
  }
  if (out.empty()) throw UsageError("the navigation type list is empty");
  std::sort(out.begin(), out.end());
  return out;
}

std::string model_file(NavFilter nav, ModelId id) {
  return "model." + nav.name() + "." + std::string(model_name(id)) + ".json";
}

// ingest --------------------------------------------------------------------------------

struct IngestArgs {
  std::string graph;
  std::string log;
  std::string rules;
  bool default_rules = false;
  std::string log_format = "tsv";
  std::string graph_delimiter;
  bool graph_header = false;
  double session_gap = 3600.0;
  std::size_t min_session = 2;
  bool drop_self_loops = false;
  std::string ontology;
  std::uint64_t min_ontology_transitions = 0;
  bool strict = false;
};

void cmd_ingest(const IngestArgs& a, const fs::path& out_dir, bool force, std::ostream& out, std::ostream& err) {
  std::vector<std::string> outputs{kGraphFile, "idmap.tsv", kTransitionsFile, "summary.json"};
  for (const auto t : kNavigationTypes) outputs.push_back("transitions." + std::string(code(t)) + ".tsv");
  prepare_output(out_dir, outputs, force);

  EdgeListFormat gfmt;
  gfmt.header = a.graph_header;
  if (!a.graph_delimiter.empty()) {
    if (a.graph_delimiter == "\\t" || a.graph_delimiter == "tab") gfmt.delimiter = '\t';
    else if (a.graph_delimiter.size() == 1) gfmt.delimiter = a.graph_delimiter[0];
    else throw UsageError("--graph-delimiter must be a single character");
  }
  const Graph input = load_edge_list_file(a.graph, gfmt);
  const ComponentMap components = connected_components(input);
  const Subgraph lcc = largest_connected_component(input);
  if (lcc.graph.node_count() < 2) throw DataError("the largest connected component has no edges");
  auto [g, graph_text] = canonicalize(lcc.graph);

  LogSchema schema;
  if (a.log_format == "tsv") {
    schema.delimiter = '\t';
  } else if (a.log_format == "csv") {
    schema.delimiter = ',';
  } else if (a.log_format == "jsonl") {
    schema.format = LogFormat::JsonLines;
  } else {
    throw UsageError("--log-format must be tsv, csv or jsonl");
  }
  auto log_in = open_in(a.log);
  ParsedLog parsed = parse_log(log_in, schema, a.strict);
  if (parsed.skipped > 0) err << "ingest: skipped " << parsed.skipped << " unparseable log lines\n";
  const std::size_t record_count = parsed.records.size();

  ClassificationRules rules;
  if (!a.rules.empty()) {
    auto rules_in = open_in(a.rules);
    rules = parse_rules(rules_in);
  } else {
    const bool has_referrers = std::any_of(parsed.records.begin(), parsed.records.end(),
                                           [](const RequestRecord& r) { return r.referrer.has_value(); });
    if (has_referrers && !a.default_rules) {
      throw DataError("the log has referrers but no rules file was given (use --rules or --default-rules)");
    }
    rules = ClassificationRules::defaults();
  }

  auto sessions = sessionize(std::move(parsed.records), SessionOptions{a.session_gap, a.min_session});
  classify_sessions(sessions, rules);
  ExtractOptions eopts;
  eopts.drop_self_loops = a.drop_self_loops;
  if (!a.ontology.empty()) eopts.ontology = a.ontology;
  ExtractResult extracted = extract_transitions(sessions, g, eopts);
  const auto total = extracted.transitions.nobs(NavFilter::all());
  if (total == 0) throw DataError("no transitions fall inside the largest connected component");
  if (total < a.min_ontology_transitions) {
    throw DataError("only " + std::to_string(total) + " transitions; the minimum is " +
                    std::to_string(a.min_ontology_transitions));
  }

  write_file(out_dir / kGraphFile, graph_text);
  std::ostringstream idmap;
  idmap << "label\tid\tinput_id\n";
  for (NodeId v = 0; v < g.node_count(); ++v) {
    idmap << g.label(v) << '\t' << v << '\t' << *input.find(g.label(v)) << '\n';
  }
  write_file(out_dir / "idmap.tsv", idmap.str());
  write_file(out_dir / kTransitionsFile, transitions_text(extracted.transitions, g));

  Json totals = Json::object();
  for (const auto t : kNavigationTypes) {
    const auto subset = only_type(extracted.transitions, g, t);
    write_file(out_dir / ("transitions." + std::string(code(t)) + ".tsv"), transitions_text(subset, g));
    totals[std::string(code(t))] = extracted.transitions.nobs(NavFilter::only(t));
  }
  totals["ALL"] = total;

  Json summary;
  summary["input_graph"] = {{"nodes", input.node_count()}, {"edges", input.edge_count()}, {"components", components.count()}};
  summary["lcc"] = {{"nodes", g.node_count()}, {"edges", g.edge_count()}, {"graph_hash", hex64(g.content_hash())}};
  summary["log"] = {{"records", record_count}, {"skipped_lines", parsed.skipped}};
  summary["sessions"] = sessions.size();
  summary["unknown_requests"] = extracted.unknown_requests;
  summary["dropped_pairs"] = extracted.dropped_pairs;
  summary["dropped_self_loops"] = extracted.dropped_self_loops;
  summary["transitions"] = totals;
  write_file(out_dir / "summary.json", summary.dump(2) + "\n");
  out << "ingest: " << g.node_count() << " nodes, " << g.edge_count() << " edges, " << total << " transitions\n";
}

// fit -----------------------------------------------------------------------------------

struct FitArgs {
  std::string data;
  std::vector<std::string> models;
  std::vector<std::string> navtypes;
  std::uint64_t min_transitions = 2;
  double smoothing = 0.0;
  double links_only_alpha = 1.0 - 1e-6;
  double pagerank_alpha = 0.85;
  std::size_t cache_budget_mb = 512;
  std::string profile_cache;
};

void cmd_fit(const FitArgs& a, const fs::path& out_dir, bool force, std::ostream& out, std::ostream& err) {
  const auto models = a.models.empty() ? std::vector<ModelId>(kAllModels.begin(), kAllModels.end()) : parse_models(a.models);
  const auto navtypes = a.navtypes.empty() ? [] {
    const auto all = all_nav_filters();
    return std::vector<NavFilter>(all.begin(), all.end());
  }() : parse_navtypes(a.navtypes);
  if (a.smoothing < 0.0) throw UsageError("--smoothing must be non-negative");

  prepare_output(out_dir, {kFitIndex, "beta.tsv", "beta_heatmap.tsv"}, force);
  for (const auto& entry : fs::directory_iterator(out_dir)) {
    const auto name = entry.path().filename().string();
    if (name.rfind("model.", 0) == 0 && entry.path().extension() == ".json") fs::remove(entry.path());
  }

  const Dataset data = load_dataset(a.data);
  const Graph& g = data.graph;
  if (!is_connected(g)) throw DataError("the graph in " + a.data + " is not connected");
  const HopCount d = exact_diameter(g);
  const std::size_t budget = a.cache_budget_mb << 20;
  const auto sources = data.transitions.sources(NavFilter::all());

  std::optional<ProfileCache> cache;
  if (!a.profile_cache.empty() && fs::exists(a.profile_cache)) {
    auto in = open_in(a.profile_cache);
    cache.emplace(ProfileCache::load(in, g, d, budget));
    if (cache->empty()) cache.reset();
  }
  if (!cache) {
    cache.emplace(profile_sources(g, sources, d, budget));
    if (!a.profile_cache.empty()) {
      std::ofstream pc(a.profile_cache, std::ios::binary | std::ios::trunc);
      if (!pc) throw DataError("cannot write " + a.profile_cache);
      cache->save(pc);
    }
  }
  const HopGeometry geometry(data.transitions, *cache);

  ModelOptions mopts;
  mopts.smoothing = a.smoothing;
  mopts.links_only_alpha = a.links_only_alpha;
  mopts.pagerank_alpha = a.pagerank_alpha;

  Json index;
  index["graph_hash"] = hex64(g.content_hash());
  index["diameter"] = d;
  Json fitted = Json::array();
  Json skipped = Json::array();
  std::vector<std::pair<NavFilter, HopPortationVector>> betas;
  for (const NavFilter nav : navtypes) {
    const auto nobs = data.transitions.nobs(nav);
    if (nobs < std::max<std::uint64_t>(a.min_transitions, 1)) {
      err << "fit: skipping " << nav.name() << " (" << nobs << " transitions)\n";
      skipped.push_back({{"navtype", nav.name()}, {"nobs", nobs}});
      continue;
    }
    Json files = Json::array();
    for (const ModelId id : models) {
      const FittedModel m = fit_model(id, data.transitions, nav, geometry, mopts);
      std::ostringstream os;
      write_model_json(os, m, g, d);
      write_file(out_dir / model_file(nav, id), os.str());
      files.push_back(model_file(nav, id));
      if (m.beta) betas.emplace_back(nav, *m.beta);
    }
    fitted.push_back({{"navtype", nav.name()}, {"nobs", nobs}, {"files", files}});
  }
  index["fitted"] = fitted;
  index["skipped"] = skipped;

  std::ostringstream beta_rows;
  write_beta_rows(beta_rows, betas);
  write_file(out_dir / "beta.tsv", beta_rows.str());
  std::ostringstream heat;
  heat << "navtype";
  for (HopCount k = 0; k <= d; ++k) heat << "\tk" << k;
  heat << '\n';
  for (const auto& [nav, beta] : betas) {
    heat << nav.name();
    for (HopCount k = 0; k <= d; ++k) heat << '\t' << text::format_double(beta[k]);
    heat << '\n';
  }
  write_file(out_dir / "beta_heatmap.tsv", heat.str());
  write_file(out_dir / kFitIndex, index.dump(2) + "\n");
  out << "fit: " << fitted.size() << " navigation types, " << skipped.size() << " skipped, diameter " << d << '\n';
}

// rank ----------------------------------------------------------------------------------

struct RankArgs {
  std::string data;
  std::string fit;
  std::string dataset;
  std::vector<std::string> models;
};

void cmd_rank(const RankArgs& a, const fs::path& out_dir, bool force, const std::vector<std::string>& argv,
              std::ostream& out) {
  std::optional<std::vector<ModelId>> subset;
  if (!a.models.empty()) subset = parse_models(a.models);
  prepare_output(out_dir, {"evaluations.tsv", "winners.tsv", "manifest.json"}, force);

  const Dataset data = load_dataset(a.data);
  const Graph& g = data.graph;
  Json index;
  try {
    index = Json::parse(slurp(fs::path(a.fit) / kFitIndex));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed fit index: ") + e.what());
  }
  if (index.value("graph_hash", std::string()) != hex64(g.content_hash())) {
    throw DataError("the fitted models belong to a different graph");
  }
  const auto d = index.at("diameter").get<HopCount>();
  const ProfileCache cache(g, d, 0);
  const HopGeometry geometry(data.transitions, cache);

  DatasetRankings result;
  result.dataset = a.dataset.empty() ? fs::path(a.data).filename().string() : a.dataset;
  if (result.dataset.empty()) result.dataset = "dataset";
  for (const auto& entry : index.at("fitted")) {
    const auto nav = NavFilter::parse(entry.at("navtype").get<std::string>());
    if (!nav) throw DataError("malformed fit index: bad navtype");
    std::vector<Evaluation> evals;
    for (const auto& file : entry.at("files")) {
      auto in = open_in(fs::path(a.fit) / file.get<std::string>());
      const FittedModel m = read_model_json(in, g);
      if (subset && std::find(subset->begin(), subset->end(), m.id) == subset->end()) continue;
      evals.push_back(evaluate(m, data.transitions, geometry));
    }
    if (!evals.empty()) result.rankings.push_back(make_ranking(*nav, std::move(evals)));
  }
  if (subset && result.rankings.empty()) throw UsageError("none of the requested models were fitted");

  const std::vector<DatasetRankings> results{result};
  std::ostringstream evals;
  write_evaluations(evals, results);
  write_file(out_dir / "evaluations.tsv", evals.str());
  std::ostringstream winners;
  write_winner_matrix(winners, winner_matrix(results));
  write_file(out_dir / "winners.tsv", winners.str());

  Json manifest;
  manifest["tool"] = "hoprank";
  manifest["version"] = kVersion;
  manifest["created"] = utc_now();
  manifest["command"] = argv;
  manifest["dataset"] = result.dataset;
  manifest["inputs"] = {{"data", a.data}, {"fit", a.fit}};
  manifest["graph_hash"] = hex64(g.content_hash());
  manifest["diameter"] = d;
  manifest["nodes"] = g.node_count();
  manifest["edges"] = g.edge_count();
  Json models = Json::array();
  if (subset) {
    for (const auto id : *subset) models.push_back(model_name(id));
  }
  manifest["config"] = {{"models", models}};
  manifest["versions"] = {{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                        std::to_string(EIGEN_MINOR_VERSION)},
                          {"compiler", __VERSION__}};
  write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");

  for (const auto& r : result.rankings) {
    out << r.navtype.name() << ": " << model_name(r.winner()) << '\n';
  }
}

// synth ---------------------------------------------------------------------------------

struct SynthArgs {
  std::string spec_file;
  std::string kind;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::vector<double> beta;
  std::string model;
  double alpha = 0.85;
  std::size_t transitions = 0;
  std::uint64_t seed = 0;
  std::size_t session_length = 0;
  std::string navtype;
};

void cmd_synth(const SynthArgs& a, const CLI::App& sub, const fs::path& out_dir, bool force, std::ostream& out) {
  SynthSpec spec;
  if (!a.spec_file.empty()) {
    auto in = open_in(a.spec_file);
    spec = parse_synth_spec(in);
  }
  const auto given = [&](const char* name) { return sub.get_option(name)->count() > 0; };
  if (given("--kind")) {
    const auto kind = parse_graph_kind(a.kind);
    if (!kind) throw UsageError("unknown graph kind '" + a.kind + "'");
    spec.kind = *kind;
  }
  if (given("--nodes")) spec.nodes = a.nodes;
  if (given("--edges")) spec.edges = a.edges;
  if (given("--beta")) spec.beta = Eigen::Map<const Eigen::VectorXd>(a.beta.data(), static_cast<Eigen::Index>(a.beta.size()));
  if (given("--model")) {
    const auto id = parse_model_id(a.model);
    if (!id) throw UsageError("unknown model '" + a.model + "'");
    spec.model = *id;
  }
  if (given("--alpha")) spec.alpha = a.alpha;
  if (given("--transitions")) spec.transitions = a.transitions;
  if (given("--seed")) spec.seed = a.seed;
  if (given("--session-length")) spec.session_length = a.session_length;
  if (given("--navtype")) {
    const auto t = parse_navigation_type(a.navtype);
    if (!t) throw UsageError("unknown navigation type '" + a.navtype + "'");
    spec.navtype = *t;
  }

  prepare_output(out_dir, {kGraphFile, kTransitionsFile, "synth.json"}, force);
  const SynthData data = synthesize(spec);
  auto [g, graph_text] = canonicalize(data.graph);
  const TransitionSet t = relabel(data.transitions, data.graph, g);
  write_file(out_dir / kGraphFile, graph_text);
  write_file(out_dir / kTransitionsFile, transitions_text(t, g));

  Json info;
  info["nodes"] = g.node_count();
  info["edges"] = g.edge_count();
  info["diameter"] = data.diameter;
  info["graph_hash"] = hex64(g.content_hash());
  info["seed"] = spec.seed;
  info["transitions"] = t.nobs(NavFilter::all());
  info["navtype"] = std::string(code(spec.navtype));
  if (spec.beta) {
    info["beta"] = std::vector<double>(spec.beta->data(), spec.beta->data() + spec.beta->size());
  } else {
    info["model"] = model_name(spec.model.value_or(ModelId::RandomJumps));
  }
  write_file(out_dir / "synth.json", info.dump(2) + "\n");
  out << "synth: " << g.node_count() << " nodes, " << g.edge_count() << " edges, diameter " << data.diameter << ", "
      << t.nobs(NavFilter::all()) << " transitions\n";
}

// report --------------------------------------------------------------------------------

std::vector<DatasetRankings> read_evaluations(const fs::path& path) {
  auto in = open_in(path);
  std::vector<DatasetRankings> results;
  std::map<std::pair<std::string, int>, std::vector<Evaluation>> cells;
  std::map<std::string, std::size_t> order;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 || text::trim(line).empty()) continue;
    const auto f = text::split(line, '\t');
    if (f.size() != 7) throw ParseError(lineno, "expected 7 fields in " + path.string());
    const auto nav = NavFilter::parse(f[1]);
    const auto id = parse_model_id(f[2]);
    Evaluation e{};
    if (!nav || !id || !text::parse_double(f[3], e.loglik) || !text::parse_double(f[6], e.bic)) {
      throw ParseError(lineno, "bad evaluation row in " + path.string());
    }
    e.model = *id;
    e.nparams = std::stoull(std::string(f[4]));
    e.nobs = std::stoull(std::string(f[5]));
    const std::string dataset(f[0]);
    if (!order.count(dataset)) {
      order[dataset] = results.size();
      results.push_back(DatasetRankings{dataset, {}});
    }
    cells[{dataset, nav->order()}].push_back(e);
  }
  for (auto& [key, evals] : cells) {
    const auto nav = all_nav_filters()[static_cast<std::size_t>(key.second)];
    results[order[key.first]].rankings.push_back(make_ranking(nav, std::move(evals)));
  }
  return results;
}

void cmd_report(const std::vector<std::string>& runs, const fs::path& out_dir, bool force, std::ostream& out) {
  if (runs.empty()) throw UsageError("report needs at least one --run directory");
  prepare_output(out_dir, {"evaluations.tsv", "winners.tsv", "navtype_totals.tsv"}, force);
  std::vector<DatasetRankings> all;
  for (const auto& run : runs) {
    auto part = read_evaluations(fs::path(run) / "evaluations.tsv");
    for (auto& r : part) {
      const auto dup = std::find_if(all.begin(), all.end(), [&](const DatasetRankings& x) { return x.dataset == r.dataset; });
      if (dup != all.end()) throw DataError("dataset '" + r.dataset + "' appears in more than one run");
      all.push_back(std::move(r));
    }
  }
  std::ostringstream evals;
  write_evaluations(evals, all);
  write_file(out_dir / "evaluations.tsv", evals.str());
  const WinnerMatrix matrix = winner_matrix(all);
  std::ostringstream winners;
  write_winner_matrix(winners, matrix);
  write_file(out_dir / "winners.tsv", winners.str());
  std::ostringstream totals;
  totals << "dataset\tnavtype\tnobs\n";
  for (const auto& r : all) {
    for (const auto& ranking : r.rankings) {
      totals << r.dataset << '\t' << ranking.navtype.name() << '\t' << ranking.evaluations.front().nobs << '\n';
    }
  }
  write_file(out_dir / "navtype_totals.tsv", totals.str());
  out << "report: " << all.size() << " datasets\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hop-biased random walk models of navigation: ingest, fit, rank, synth, report.", "hoprank"};
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.set_config("--config", "", "TOML or INI file with option values");
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  int threads = 0;
  bool force = false;
  std::string out_dir;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)")->envname("HOPRANK_THREADS")->check(CLI::NonNegativeNumber);

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("-o,--out", out_dir, "Output directory")->required();
    sub->add_flag("--force", force, "Overwrite existing outputs");
  };

  IngestArgs ia;
  auto* ingest = app.add_subcommand("ingest", "Build the LCC graph and per-type transitions from a log");
  ingest->add_option("--graph", ia.graph, "Edge-list file")->required();
  ingest->add_option("--log", ia.log, "Request log")->required();
  ingest->add_option("--rules", ia.rules, "Classification rules file");
  ingest->add_flag("--default-rules", ia.default_rules, "Use built-in classification rules");
  ingest->add_option("--log-format", ia.log_format, "tsv, csv or jsonl")->capture_default_str();
  ingest->add_option("--graph-delimiter", ia.graph_delimiter, "Edge-list delimiter (default: whitespace)");
  ingest->add_flag("--graph-header", ia.graph_header, "Edge list has a header row");
  ingest->add_option("--session-gap", ia.session_gap, "Seconds of inactivity that split a session")->capture_default_str()->check(CLI::PositiveNumber);
  ingest->add_option("--min-session", ia.min_session, "Shortest session kept")->capture_default_str();
  ingest->add_flag("--drop-self-loops", ia.drop_self_loops, "Do not count repeated requests");
  ingest->add_option("--ontology", ia.ontology, "Keep only requests for this ontology");
  ingest->add_option("--min-ontology-transitions", ia.min_ontology_transitions, "Fail below this many transitions")->capture_default_str();
  ingest->add_flag("--strict", ia.strict, "Fail on the first malformed log line");
  add_common(ingest);

  FitArgs fa;
  auto* fit = app.add_subcommand("fit", "Fit models per navigation type");
  fit->add_option("--data", fa.data, "Directory with graph.tsv and transitions.tsv")->required();
  fit->add_option("--models", fa.models, "Comma-separated model names (default: all)")->delimiter(',');
  fit->add_option("--navtypes", fa.navtypes, "Comma-separated navigation types (default: all and ALL)")->delimiter(',');
  fit->add_option("--min-transitions", fa.min_transitions, "Skip navigation types with fewer transitions")->capture_default_str();
  fit->add_option("--smoothing", fa.smoothing, "Additive probability smoothing")->capture_default_str();
  fit->add_option("--links-only-alpha", fa.links_only_alpha, "Alpha of the rw-1 model")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  fit->add_option("--pagerank-alpha", fa.pagerank_alpha, "Alpha of the rw-0.85 model")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  fit->add_option("--cache-budget-mb", fa.cache_budget_mb, "Memory budget for stored BFS profiles")->capture_default_str();
  fit->add_option("--profile-cache", fa.profile_cache, "Binary profile cache file, reused when it matches the graph");
  add_common(fit);

  RankArgs ra;
  auto* rank = app.add_subcommand("rank", "Score fitted models by BIC");
  rank->add_option("--data", ra.data, "Directory with graph.tsv and transitions.tsv")->required();
  rank->add_option("--fit", ra.fit, "Output directory of fit")->required();
  rank->add_option("--dataset", ra.dataset, "Dataset name in reports (default: data directory name)");
  rank->add_option("--models", ra.models, "Restrict to these models")->delimiter(',');
  add_common(rank);

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic graph and transitions");
  synth->add_option("--spec", sa.spec_file, "key = value spec file; flags override it");
  synth->add_option("--kind", sa.kind, "binary-tree, random-tree or connected");
  synth->add_option("--nodes", sa.nodes, "Node count");
  synth->add_option("--edges", sa.edges, "Edge count for connected graphs");
  synth->add_option("--beta", sa.beta, "Planted beta_0..beta_m")->delimiter(',');
  synth->add_option("--model", sa.model, "Planted baseline model");
  synth->add_option("--alpha", sa.alpha, "Alpha of a planted rw-empirical model");
  synth->add_option("--transitions", sa.transitions, "Number of transitions");
  synth->add_option("--seed", sa.seed, "Random seed");
  synth->add_option("--session-length", sa.session_length, "Steps between walker restarts");
  synth->add_option("--navtype", sa.navtype, "Navigation type of the generated transitions");
  add_common(synth);

  std::vector<std::string> runs;
  auto* report = app.add_subcommand("report", "Combine rank outputs into plot-ready tables");
  report->add_option("--run", runs, "Output directory of rank (repeatable)")->required();
  add_common(report);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  if (threads > 0) omp_set_num_threads(threads);
  try {
    if (app.got_subcommand(ingest)) cmd_ingest(ia, out_dir, force, out, err);
    else if (app.got_subcommand(fit)) cmd_fit(fa, out_dir, force, out, err);
    else if (app.got_subcommand(rank)) cmd_rank(ra, out_dir, force, args, out);
    else if (app.got_subcommand(synth)) cmd_synth(sa, *synth, out_dir, force, out);
    else cmd_report(runs, out_dir, force, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kOk;
}

}  // namespace hoprank::cli
