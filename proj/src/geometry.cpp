#include <stdexcept>
#include <string>

#include "hoprank/error.hpp"
#include "hoprank/models.hpp"

namespace hoprank {

HopGeometry::HopGeometry(const TransitionSet& transitions, const ProfileCache& profiles)
    : graph_(&profiles.graph()), diameter_(profiles.diameter()) {
  if (!transitions.compatible_with(*graph_)) {
    throw DataError("transitions were recorded on a different graph");
  }
  const auto cells = transitions.view(NavFilter::all());

  // Cells are ordered by source; split them into per-source runs.
  std::vector<std::size_t> run_start;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (c == 0 || cells[c].source != cells[c - 1].source) run_start.push_back(c);
  }
  run_start.push_back(cells.size());
  const std::size_t runs = run_start.size() - 1;

  std::vector<ProfileSummary> summaries(runs);
  std::vector<HopCount> hops(cells.size());
  bool failed = false;
  std::string failure;
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(runs); ++r) {
    const auto ru = static_cast<std::size_t>(r);
    try {
      const auto profile = profiles.get(cells[run_start[ru]].source);
      summaries[ru] = static_cast<const ProfileSummary&>(*profile);
      for (std::size_t c = run_start[ru]; c < run_start[ru + 1]; ++c) {
        hops[c] = profile->dist[cells[c].target];
      }
    } catch (const std::exception& e) {
#pragma omp critical
      {
        failed = true;
        failure = e.what();
      }
    }
  }
  if (failed) throw DataError(failure);

  hops_.reserve(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) hops_.emplace(key(cells[c].source, cells[c].target), hops[c]);
  summaries_.reserve(runs);
  for (auto& s : summaries) {
    const NodeId src = s.source;
    summaries_.emplace(src, std::move(s));
  }
}

HopCount HopGeometry::hop(NodeId source, NodeId target) const {
  const auto it = hops_.find(key(source, target));
  if (it == hops_.end()) throw std::out_of_range("pair not present in the transition geometry");
  return it->second;
}

const ProfileSummary& HopGeometry::summary(NodeId source) const {
  const auto it = summaries_.find(source);
  if (it == summaries_.end()) throw std::out_of_range("source not present in the transition geometry");
  return it->second;
}

}  // namespace hoprank
