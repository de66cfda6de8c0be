#include "hoprank/clickstream.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <json.hpp>
#include <tuple>

#include "hoprank/error.hpp"
#include "hoprank/text.hpp"

namespace hoprank {

namespace {

std::optional<std::string> non_empty(std::string_view s) {
  s = text::trim(s);
  if (s.empty()) return std::nullopt;
  return std::string(s);
}

struct ColumnIndex {
  std::size_t ts, client, ontology, concept_col, referrer;
  std::optional<std::size_t> action;
  std::size_t required_width;
};

ColumnIndex index_header(std::string_view header, const LogSchema& schema) {
  const auto names = text::split(header, schema.delimiter);
  const auto locate = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (text::trim(names[i]) == name) return i;
    }
    return std::nullopt;
  };
  const auto require = [&](const std::string& name) {
    auto idx = locate(name);
    if (!idx) throw DataError("log header is missing required column '" + name + "'");
    return *idx;
  };
  ColumnIndex c{require(schema.timestamp_field), require(schema.client_field),
                require(schema.ontology_field), require(schema.concept_field),
                require(schema.referrer_field), locate(schema.action_field), 0};
  c.required_width = 1 + std::max({c.ts, c.client, c.ontology, c.concept_col, c.referrer});
  return c;
}

// Returns an error message, or nothing when `out` was filled.
std::optional<std::string> parse_delimited(std::string_view line, const ColumnIndex& cols,
                                           const LogSchema& schema, RequestRecord& out) {
  const auto fields = text::split(line, schema.delimiter);
  if (fields.size() < cols.required_width) return "too few fields";
  if (!text::parse_double(fields[cols.ts], out.timestamp) || !std::isfinite(out.timestamp)) {
    return "bad timestamp '" + std::string(fields[cols.ts]) + "'";
  }
  out.client = std::string(text::trim(fields[cols.client]));
  out.ontology = std::string(text::trim(fields[cols.ontology]));
  out.concept_label = std::string(text::trim(fields[cols.concept_col]));
  out.referrer = non_empty(fields[cols.referrer]);
  out.action = (cols.action && *cols.action < fields.size()) ? non_empty(fields[*cols.action])
                                                             : std::nullopt;
  if (out.client.empty()) return "empty client";
  if (out.ontology.empty()) return "empty ontology";
  if (out.concept_label.empty()) return "empty concept";
  return std::nullopt;
}

std::optional<std::string> json_string(const nlohmann::json& obj, const std::string& key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (it->is_string()) return non_empty(it->get<std::string>());
  if (it->is_number()) return it->dump();
  return std::nullopt;
}

std::optional<std::string> parse_json_line(std::string_view line, const LogSchema& schema,
                                           RequestRecord& out) {
  const auto obj = nlohmann::json::parse(line, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) return "not a JSON object";
  const auto ts = obj.find(schema.timestamp_field);
  if (ts == obj.end()) return "missing timestamp";
  if (ts->is_number()) {
    out.timestamp = ts->get<double>();
  } else if (!ts->is_string() || !text::parse_double(ts->get<std::string>(), out.timestamp)) {
    return "bad timestamp";
  }
  if (!std::isfinite(out.timestamp)) return "bad timestamp";
  auto client = json_string(obj, schema.client_field);
  auto ontology = json_string(obj, schema.ontology_field);
  auto concept_value = json_string(obj, schema.concept_field);
  if (!client) return "missing client";
  if (!ontology) return "missing ontology";
  if (!concept_value) return "missing concept";
  out.client = std::move(*client);
  out.ontology = std::move(*ontology);
  out.concept_label = std::move(*concept_value);
  out.referrer = json_string(obj, schema.referrer_field);
  out.action = json_string(obj, schema.action_field);
  return std::nullopt;
}

}  // namespace

ParsedLog parse_log(std::istream& in, const LogSchema& schema, bool strict) {
  ParsedLog log;
  std::optional<ColumnIndex> cols;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    if (schema.format == LogFormat::Delimited && !cols) {
      cols = index_header(line, schema);
      continue;
    }
    RequestRecord rec;
    const auto err = schema.format == LogFormat::Delimited
                         ? parse_delimited(line, *cols, schema, rec)
                         : parse_json_line(line, schema, rec);
    if (err) {
      if (strict) throw ParseError(lineno, *err);
      ++log.skipped;
      log.skipped_lines.push_back(lineno);
      continue;
    }
    log.records.push_back(std::move(rec));
  }
  if (schema.format == LogFormat::Delimited && !cols) throw DataError("log is empty (no header row)");
  return log;
}

std::vector<Session> sessionize(std::vector<RequestRecord> records, const SessionOptions& options) {
  const auto key = [](const RequestRecord& r) {
    return std::tie(r.client, r.timestamp, r.ontology, r.concept_label, r.referrer, r.action);
  };
  std::sort(records.begin(), records.end(),
            [&](const RequestRecord& a, const RequestRecord& b) { return key(a) < key(b); });

  std::vector<Session> sessions;
  Session current;
  const auto flush = [&] {
    if (current.steps.size() >= options.min_length && !current.steps.empty()) {
      sessions.push_back(std::move(current));
    }
    current = Session{};
  };
  for (auto& rec : records) {
    const bool same_client = !current.steps.empty() && current.client == rec.client;
    if (!same_client ||
        rec.timestamp - current.steps.back().request.timestamp >= options.break_threshold) {
      flush();
      current.client = rec.client;
    }
    current.steps.push_back(SessionStep{std::move(rec), NavigationType::DirectClick});
  }
  flush();
  return sessions;
}

ClassificationRules ClassificationRules::defaults() {
  ClassificationRules r;
  r.search_engines = {"google.com", "bing.com",  "yahoo.com", "baidu.com", "yandex.ru",
                      "duckduckgo.com", "ask.com", "aol.com", "ecosia.org", "naver.com"};
  r.action_map = {{"expand", NavigationType::Expand},
                  {"details", NavigationType::Details},
                  {"click", NavigationType::DirectClick},
                  {"search", NavigationType::LocalSearch}};
  return r;
}

namespace {

std::vector<std::string> parse_list(std::string_view value, std::size_t lineno) {
  value = text::trim(value);
  if (value.size() < 2 || value.front() != '[' || value.back() != ']') {
    throw ParseError(lineno, "expected a [list]");
  }
  std::vector<std::string> out;
  for (auto item : text::split(value.substr(1, value.size() - 2), ',')) {
    item = text::trim(item);
    if (item.size() >= 2 && (item.front() == '"' || item.front() == '\'') && item.back() == item.front()) {
      item = item.substr(1, item.size() - 2);
    }
    if (!item.empty()) out.push_back(text::lower(item));
  }
  return out;
}

}  // namespace

ClassificationRules parse_rules(std::istream& in) {
  ClassificationRules rules;
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
    if (key == "search_engines") {
      rules.search_engines = parse_list(value, lineno);
    } else if (key == "local_hosts") {
      rules.local_hosts = parse_list(value, lineno);
    } else if (key == "action_map") {
      if (value.size() < 2 || value.front() != '{' || value.back() != '}') {
        throw ParseError(lineno, "expected a {map}");
      }
      rules.action_map.clear();
      for (auto item : text::split(value.substr(1, value.size() - 2), ',')) {
        if (text::trim(item).empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string_view::npos) throw ParseError(lineno, "expected tag: TYPE");
        const auto tag = text::lower(text::trim(item.substr(0, colon)));
        const auto type = parse_navigation_type(item.substr(colon + 1));
        if (tag.empty() || !type) throw ParseError(lineno, "bad action mapping");
        rules.action_map[tag] = *type;
      }
    } else {
      throw ParseError(lineno, "unknown rules key '" + key + "'");
    }
  }
  return rules;
}

std::string referrer_host(const std::string& referrer) {
  std::string_view s = text::trim(referrer);
  const auto scheme = s.find("://");
  if (scheme != std::string_view::npos) {
    s.remove_prefix(scheme + 3);
  } else if (s.substr(0, 2) == "//") {
    s.remove_prefix(2);
  } else if (!s.empty() && s.front() == '/') {
    return {};  // relative URL: same site
  }
  s = s.substr(0, s.find_first_of("/?#"));
  if (const auto at = s.rfind('@'); at != std::string_view::npos) s.remove_prefix(at + 1);
  s = s.substr(0, s.find(':'));
  return text::lower(s);
}

namespace {

bool host_matches(const std::string& host, const std::vector<std::string>& list) {
  for (const auto& h : list) {
    if (host == h) return true;
    if (host.size() > h.size() && host.ends_with(h) && host[host.size() - h.size() - 1] == '.') {
      return true;
    }
  }
  return false;
}

}  // namespace

NavigationType classify(const RequestRecord& record, const ClassificationRules& rules) {
  if (record.action) {
    const auto it = rules.action_map.find(text::lower(text::trim(*record.action)));
    if (it != rules.action_map.end()) return it->second;
  }
  if (!record.referrer || text::trim(*record.referrer).empty()) return NavigationType::DirectUrl;
  const auto host = referrer_host(*record.referrer);
  if (!host.empty() && host_matches(host, rules.search_engines)) return NavigationType::ExternalSearch;
  if (!host.empty() && !host_matches(host, rules.local_hosts)) return NavigationType::ExternalLink;
  return NavigationType::DirectClick;
}

void classify_sessions(std::vector<Session>& sessions, const ClassificationRules& rules) {
  for (auto& s : sessions) {
    for (auto& step : s.steps) step.type = classify(step.request, rules);
  }
}

ExtractResult extract_transitions(const std::vector<Session>& sessions, const Graph& lcc,
                                  const ExtractOptions& options) {
  ExtractResult result{TransitionSet(lcc)};
  const auto resolve = [&](const RequestRecord& r) -> std::optional<NodeId> {
    if (options.ontology && r.ontology != *options.ontology) return std::nullopt;
    return lcc.find(r.concept_label);
  };
  for (const auto& s : sessions) {
    std::optional<NodeId> prev;
    for (std::size_t i = 0; i < s.steps.size(); ++i) {
      const auto cur = resolve(s.steps[i].request);
      if (!cur) ++result.unknown_requests;
      if (i > 0) {
        if (!prev || !cur) {
          ++result.dropped_pairs;
        } else if (*prev == *cur && options.drop_self_loops) {
          ++result.dropped_self_loops;
        } else {
          result.transitions.add(*prev, *cur, s.steps[i].type);
        }
      }
      prev = cur;
    }
  }
  return result;
}

}  // namespace hoprank
