#ifndef GAMSPLINE_TUNE_HPP_
#define GAMSPLINE_TUNE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "gamspline/dataset.hpp"
#include "gamspline/design.hpp"
#include "gamspline/fit.hpp"

namespace gamspline {

// Candidate penalties shared by the GAM and the linear baseline.
inline const std::vector<double>& default_lambda_grid() {
  static const std::vector<double> grid{0.001, 0.01, 1.0, 10.0, 100.0, 1000.0};
  return grid;
}

struct TuneEntry {
  double lambda = 0.0;
  std::optional<double> validation_auroc;  // empty when the fit failed
  FitDiagnostics diagnostics;
  std::optional<std::string> error;
};

struct TuneResult {
  std::vector<double> grid;
  std::vector<TuneEntry> selection_log;  // one entry per grid value, in grid order
  double best_lambda = 0.0;
  double best_auroc = 0.0;
  FittedModel best_model;
};

// Fits one model per penalty on `train` with the bases of `base_spec`
// (which must come from the training rows) and keeps the highest validation
// AUROC; ties go to the larger penalty. Numerical failures are logged and
// excluded; if every candidate fails, throws kTuningFailure.
TuneResult grid_search(const ModelSpec& base_spec, const Dataset& train, const Dataset& valid,
                       const std::vector<double>& grid, const FitOptions& fit_options = {});

// Builds the base spec from the training rows (K from the training size,
// computed once) and delegates.
TuneResult grid_search(const SpecOptions& spec_options, const Dataset& train,
                       const Dataset& valid, const std::vector<double>& grid,
                       const FitOptions& fit_options = {});

}  // namespace gamspline

#endif  // GAMSPLINE_TUNE_HPP_
