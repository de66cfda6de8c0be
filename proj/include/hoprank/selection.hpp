#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hoprank/models.hpp"

namespace hoprank {

/// -2 LL + nparams ln(nobs). An LL of -inf maps to +inf. Throws DataError when nobs = 0.
double bic(double loglik, std::uint64_t nparams, std::uint64_t nobs);

struct Evaluation {
  ModelId model;
  double loglik;
  std::uint64_t nparams;
  std::uint64_t nobs;
  double bic;
};

Evaluation evaluate(const FittedModel& model, const TransitionSet& t, const HopGeometry& geometry);

/// Evaluations of one navigation type, ascending by BIC; ties go to fewer parameters,
/// then to the fixed model order.
struct Ranking {
  NavFilter navtype = NavFilter::all();
  std::vector<Evaluation> evaluations;

  ModelId winner() const { return evaluations.front().model; }
  const Evaluation* find(ModelId id) const;
};

Ranking make_ranking(NavFilter navtype, std::vector<Evaluation> evaluations);

struct SelectionOptions {
  /// Navigation types with fewer transitions are skipped.
  std::uint64_t min_transitions = 2;
  ModelOptions model;
};

struct SkippedNavtype {
  NavFilter navtype;
  std::uint64_t nobs;
};

struct SelectionReport {
  std::vector<Ranking> rankings;
  std::vector<SkippedNavtype> skipped;
  std::vector<FittedModel> fitted;  ///< in ranking order, models in request order
};

/// Fits every requested model for every requested navigation type and ranks them.
SelectionReport evaluate_all(const TransitionSet& t, std::span<const NavFilter> navtypes,
                             std::span<const ModelId> models, const HopGeometry& geometry,
                             const SelectionOptions& options = {});

struct DatasetRankings {
  std::string dataset;
  std::vector<Ranking> rankings;
};

/// Dataset x navigation-type table of winning models; empty cells were not evaluated.
struct WinnerMatrix {
  std::vector<std::string> datasets;
  std::vector<NavFilter> navtypes;
  std::vector<std::vector<std::optional<ModelId>>> cells;

  /// Model name, or "-" for a skipped cell.
  std::string cell_text(std::size_t dataset, std::size_t navtype) const;
};

/// Columns are the seven navigation types followed by ALL.
WinnerMatrix winner_matrix(std::span<const DatasetRankings> results);

/// Header "dataset navtype model loglik nparams nobs bic", tab-separated, ranking order.
void write_evaluations(std::ostream& out, std::span<const DatasetRankings> results);
void write_winner_matrix(std::ostream& out, const WinnerMatrix& matrix);

}  // namespace hoprank
