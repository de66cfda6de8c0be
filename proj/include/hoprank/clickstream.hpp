#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hoprank/graph.hpp"
#include "hoprank/navigation.hpp"
#include "hoprank/transitions.hpp"

namespace hoprank {

/// One normalized request from a web log.
struct RequestRecord {
  double timestamp = 0.0;  ///< seconds since epoch
  std::string client;      ///< opaque client key, e.g. a hashed IP
  std::string ontology;
  std::string concept_label;
  std::optional<std::string> referrer;
  std::optional<std::string> action;

  friend bool operator==(const RequestRecord&, const RequestRecord&) = default;
};

enum class LogFormat { Delimited, JsonLines };

/// Maps log columns (or JSON keys) onto RequestRecord fields.
struct LogSchema {
  LogFormat format = LogFormat::Delimited;
  char delimiter = '\t';
  std::string timestamp_field = "ts";
  std::string client_field = "client";
  std::string ontology_field = "ontology";
  std::string concept_field = "concept";
  std::string referrer_field = "referrer";
  /// Optional column; logs without it carry no action tags.
  std::string action_field = "action";
};

struct ParsedLog {
  std::vector<RequestRecord> records;
  std::size_t skipped = 0;
  std::vector<std::size_t> skipped_lines;  ///< 1-based, header included in the numbering
};

/**
 * Parses a delimited log with a header row, or line-delimited JSON.
 *
 * Lines that cannot be turned into a record (missing fields, bad timestamp, empty
 * concept) are skipped and counted. With `strict` the first such line throws a
 * ParseError instead. A header lacking one of ts/client/ontology/concept/referrer is
 * a DataError regardless of mode.
 */
ParsedLog parse_log(std::istream& in, const LogSchema& schema = {}, bool strict = false);

struct SessionStep {
  RequestRecord request;
  NavigationType type = NavigationType::DirectClick;
};

struct Session {
  std::string client;
  std::vector<SessionStep> steps;
};

struct SessionOptions {
  double break_threshold = 3600.0;  ///< a gap >= this splits a session
  std::size_t min_length = 2;
};

/**
 * Groups records by client, orders each client's records by timestamp, and splits at
 * gaps of at least the break threshold. Sessions shorter than min_length are dropped.
 *
 * Ties on timestamp are ordered by the remaining record fields, so the output does not
 * depend on input order. Clients are emitted in lexicographic order.
 */
std::vector<Session> sessionize(std::vector<RequestRecord> records, const SessionOptions& options = {});

/// Rule set for navigation-type inference.
struct ClassificationRules {
  std::vector<std::string> search_engines;
  std::vector<std::string> local_hosts;
  std::map<std::string, NavigationType> action_map;  ///< lower-case tag -> type

  /// Popular web search engines, no local hosts, and the tags expand/details/click/search.
  static ClassificationRules defaults();
};

/// Reads `key = value` lines: search_engines=[h1, h2], local_hosts=[...],
/// action_map={tag: TYPE, ...}. Unknown keys and malformed values are ParseErrors.
ClassificationRules parse_rules(std::istream& in);

/// Lower-cased host of a referrer URL ("https://www.Google.com/x" -> "www.google.com").
std::string referrer_host(const std::string& referrer);

/// Precedence: mapped action tag, then no referrer -> DU, search-engine host -> ES,
/// non-local host -> EL, otherwise DC. Host lists match exactly or on a subdomain.
NavigationType classify(const RequestRecord& record, const ClassificationRules& rules);

/// Classifies every step in place.
void classify_sessions(std::vector<Session>& sessions, const ClassificationRules& rules);

struct ExtractOptions {
  bool drop_self_loops = false;
  /// When set, steps from other ontologies count as outside the graph.
  std::optional<std::string> ontology;
};

struct ExtractResult {
  TransitionSet transitions;
  std::size_t dropped_pairs = 0;      ///< consecutive pairs with an endpoint outside the graph
  std::size_t dropped_self_loops = 0;
  std::size_t unknown_requests = 0;   ///< steps whose concept is not in the graph
};

/// Counts consecutive session pairs (u, v) with both endpoints in `lcc` as transitions
/// of the type of v's request.
ExtractResult extract_transitions(const std::vector<Session>& sessions, const Graph& lcc,
                                  const ExtractOptions& options = {});

}  // namespace hoprank
