#include "hoprank/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "hoprank/error.hpp"
#include "hoprank/text.hpp"

namespace hoprank {

double bic(double loglik, std::uint64_t nparams, std::uint64_t nobs) {
  if (nobs == 0) throw DataError("BIC needs at least one observation");
  if (std::isinf(loglik) && loglik < 0) return std::numeric_limits<double>::infinity();
  return -2.0 * loglik + static_cast<double>(nparams) * std::log(static_cast<double>(nobs));
}

Evaluation evaluate(const FittedModel& model, const TransitionSet& t, const HopGeometry& geometry) {
  const auto nobs = t.nobs(model.navtype);
  const double ll = loglik(model, t, model.navtype, geometry);
  return Evaluation{model.id, ll, model.nparams, nobs, bic(ll, model.nparams, nobs)};
}

const Evaluation* Ranking::find(ModelId id) const {
  for (const auto& e : evaluations) {
    if (e.model == id) return &e;
  }
  return nullptr;
}

Ranking make_ranking(NavFilter navtype, std::vector<Evaluation> evaluations) {
  std::sort(evaluations.begin(), evaluations.end(), [](const Evaluation& a, const Evaluation& b) {
    if (a.bic != b.bic) return a.bic < b.bic;
    if (a.nparams != b.nparams) return a.nparams < b.nparams;
    return a.model < b.model;
  });
  return Ranking{navtype, std::move(evaluations)};
}

SelectionReport evaluate_all(const TransitionSet& t, std::span<const NavFilter> navtypes,
                             std::span<const ModelId> models, const HopGeometry& geometry,
                             const SelectionOptions& options) {
  SelectionReport report;
  const auto threshold = std::max<std::uint64_t>(options.min_transitions, 1);
  for (const NavFilter nav : navtypes) {
    const auto nobs = t.nobs(nav);
    if (nobs < threshold) {
      report.skipped.push_back(SkippedNavtype{nav, nobs});
      continue;
    }
    std::vector<Evaluation> evals;
    for (const ModelId id : models) {
      FittedModel m = fit_model(id, t, nav, geometry, options.model);
      evals.push_back(evaluate(m, t, geometry));
      report.fitted.push_back(std::move(m));
    }
    report.rankings.push_back(make_ranking(nav, std::move(evals)));
  }
  return report;
}

std::string WinnerMatrix::cell_text(std::size_t dataset, std::size_t navtype) const {
  const auto& cell = cells.at(dataset).at(navtype);
  return cell ? std::string(model_name(*cell)) : "-";
}

WinnerMatrix winner_matrix(std::span<const DatasetRankings> results) {
  WinnerMatrix m;
  const auto filters = all_nav_filters();
  m.navtypes.assign(filters.begin(), filters.end());
  for (const auto& r : results) {
    m.datasets.push_back(r.dataset);
    std::vector<std::optional<ModelId>> row(m.navtypes.size());
    for (const auto& ranking : r.rankings) {
      if (ranking.evaluations.empty()) continue;
      row[static_cast<std::size_t>(ranking.navtype.order())] = ranking.winner();
    }
    m.cells.push_back(std::move(row));
  }
  return m;
}

void write_evaluations(std::ostream& out, std::span<const DatasetRankings> results) {
  out << "dataset\tnavtype\tmodel\tloglik\tnparams\tnobs\tbic\n";
  for (const auto& r : results) {
    for (const auto& ranking : r.rankings) {
      for (const auto& e : ranking.evaluations) {
        out << r.dataset << '\t' << ranking.navtype.name() << '\t' << model_name(e.model) << '\t'
            << text::format_double(e.loglik) << '\t' << e.nparams << '\t' << e.nobs << '\t'
            << text::format_double(e.bic) << '\n';
      }
    }
  }
}

void write_winner_matrix(std::ostream& out, const WinnerMatrix& matrix) {
  out << "dataset";
  for (const auto& nav : matrix.navtypes) out << '\t' << nav.name();
  out << '\n';
  for (std::size_t d = 0; d < matrix.datasets.size(); ++d) {
    out << matrix.datasets[d];
    for (std::size_t c = 0; c < matrix.navtypes.size(); ++c) out << '\t' << matrix.cell_text(d, c);
    out << '\n';
  }
}

}  // namespace hoprank
