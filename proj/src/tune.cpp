#include "gamspline/tune.hpp"

#include <cmath>
#include <string>

#include "gamspline/error.hpp"
#include "gamspline/log.hpp"
#include "gamspline/metrics.hpp"

namespace gamspline {

TuneResult grid_search(const ModelSpec& base_spec, const Dataset& train, const Dataset& valid,
                       const std::vector<double>& grid, const FitOptions& fit_options) {
  require(!grid.empty(), ErrorKind::kInvalidInput, "lambda grid is empty");
  for (const double lambda : grid) {
    require(lambda >= 0.0 && std::isfinite(lambda), ErrorKind::kInvalidInput,
            "lambda grid values must be finite and >= 0");
  }
  valid.validate();
  check_conforms(base_spec, valid);

  TuneResult result;
  result.grid = grid;
  std::optional<std::size_t> best;
  for (const double lambda : grid) {
    ModelSpec spec = base_spec;
    spec.lambda = lambda;
    TuneEntry entry;
    entry.lambda = lambda;
    try {
      FittedModel model = fit_model(spec, train, fit_options);
      entry.diagnostics = model.diagnostics;
      entry.validation_auroc = auroc(predict_proba(model, valid), valid.labels);
      const bool better =
          !best || *entry.validation_auroc > result.best_auroc ||
          (*entry.validation_auroc == result.best_auroc && lambda > result.best_lambda);
      if (better) {
        best = result.selection_log.size();
        result.best_lambda = lambda;
        result.best_auroc = *entry.validation_auroc;
        result.best_model = std::move(model);
      }
    } catch (const NumericalFailure& e) {
      entry.diagnostics = e.diagnostics();
      entry.error = e.what();
      log_warning("lambda " + std::to_string(lambda) + " excluded: " + e.what());
    }
    result.selection_log.push_back(std::move(entry));
  }
  require(best.has_value(), ErrorKind::kTuningFailure, "every lambda in the grid failed to fit");
  return result;
}

TuneResult grid_search(const SpecOptions& spec_options, const Dataset& train,
                       const Dataset& valid, const std::vector<double>& grid,
                       const FitOptions& fit_options) {
  return grid_search(make_spec(train, spec_options), train, valid, grid, fit_options);
}

}  // namespace gamspline
