#include "hoprank/transitions.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "hoprank/error.hpp"
#include "hoprank/text.hpp"

namespace hoprank {

void TransitionSet::add(NodeId source, NodeId target, NavigationType type, std::uint64_t count) {
  if (source >= node_count_ || target >= node_count_) {
    throw std::out_of_range("transition endpoint out of range");
  }
  if (count == 0) return;
  counts_[TransitionKey{source, target, type}] += count;
  totals_[static_cast<std::size_t>(type)] += count;
}

void TransitionSet::merge(const TransitionSet& other) {
  if (other.node_count_ != node_count_ || other.graph_hash_ != graph_hash_) {
    throw DataError("cannot merge transitions recorded on different graphs");
  }
  for (const auto& [key, c] : other.counts_) add(key.source, key.target, key.type, c);
}

std::uint64_t TransitionSet::count(NodeId source, NodeId target, NavigationType type) const {
  const auto it = counts_.find(TransitionKey{source, target, type});
  return it == counts_.end() ? 0 : it->second;
}

std::uint64_t TransitionSet::nobs(NavFilter filter) const {
  if (auto t = filter.type()) return totals_[static_cast<std::size_t>(*t)];
  std::uint64_t total = 0;
  for (auto v : totals_) total += v;
  return total;
}

std::vector<Transition> TransitionSet::view(NavFilter filter) const {
  std::vector<Transition> out;
  // Map order is (source, target, type), so equal cells are adjacent.
  for (const auto& [key, c] : counts_) {
    if (!filter.matches(key.type)) continue;
    if (!out.empty() && out.back().source == key.source && out.back().target == key.target) {
      out.back().count += c;
    } else {
      out.push_back(Transition{key.source, key.target, c});
    }
  }
  return out;
}

std::vector<NodeId> TransitionSet::sources(NavFilter filter) const {
  std::vector<NodeId> out;
  for (const auto& [key, c] : counts_) {
    if (filter.matches(key.type) && (out.empty() || out.back() != key.source)) {
      out.push_back(key.source);
    }
  }
  return out;
}

void write_transitions(std::ostream& out, const TransitionSet& t, const Graph& g) {
  if (!t.compatible_with(g)) throw DataError("transition set does not belong to this graph");
  for (const auto& [key, c] : t.entries()) {
    out << g.label(key.source) << '\t' << g.label(key.target) << '\t' << code(key.type) << '\t' << c
        << '\n';
  }
}

TransitionSet read_transitions(std::istream& in, const Graph& g) {
  TransitionSet set(g);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = text::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto fields = text::split_ws(body);
    if (fields.size() != 4) throw ParseError(lineno, "expected 4 fields: src dst type count");
    const auto src = g.find(fields[0]);
    const auto dst = g.find(fields[1]);
    if (!src || !dst) throw ParseError(lineno, "unknown node label");
    const auto type = parse_navigation_type(fields[2]);
    if (!type) throw ParseError(lineno, "unknown navigation type '" + std::string(fields[2]) + "'");
    std::uint64_t c = 0;
    const auto res = std::from_chars(fields[3].data(), fields[3].data() + fields[3].size(), c);
    if (res.ec != std::errc{} || res.ptr != fields[3].data() + fields[3].size() || c == 0) {
      throw ParseError(lineno, "count must be a positive integer");
    }
    set.add(*src, *dst, *type, c);
  }
  return set;
}

}  // namespace hoprank
