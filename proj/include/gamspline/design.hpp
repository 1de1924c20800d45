#ifndef GAMSPLINE_DESIGN_HPP_
#define GAMSPLINE_DESIGN_HPP_

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "gamspline/dataset.hpp"
#include "gamspline/splines.hpp"

namespace gamspline {

// z-score parameters for one covariate. Constant columns are flagged and
// passed through unchanged.
struct ColumnScaling {
  double mean = 0.0;
  double stddev = 1.0;
  bool constant = false;

  friend bool operator==(const ColumnScaling&, const ColumnScaling&) = default;
};

struct Standardization {
  std::vector<ColumnScaling> columns;

  Eigen::MatrixXd apply(const Eigen::MatrixXd& covariates) const;
  double apply(Eigen::Index column, double value) const;

  friend bool operator==(const Standardization&, const Standardization&) = default;
};

// Column means and population standard deviations; requires n >= 2.
Standardization standardize_fit(const Eigen::MatrixXd& covariates);

// Five-number summary of a predictor's training values.
struct SupportSummary {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;

  friend bool operator==(const SupportSummary&, const SupportSummary&) = default;
};

SupportSummary summarize_support(const Eigen::VectorXd& values);

// Complete description of the identifiable design
//   [1 | standardized z | b_{j,k}(p_j), k != dropped_j, j = 1..J]
// and of the penalty. With spline_enabled == false the spline blocks are
// replaced by the raw predictor values (penalized linear-logistic baseline).
struct ModelSpec {
  std::vector<std::string> covariate_names;
  std::vector<std::string> predictor_names;
  std::vector<SplineBasisd> bases;
  std::vector<Eigen::Index> dropped_index;
  double lambda = 1.0;
  Standardization standardization;
  bool spline_enabled = true;
  int order = kDefaultSplineOrder;
  std::vector<SupportSummary> support;

  Eigen::Index num_covariates() const { return static_cast<Eigen::Index>(covariate_names.size()); }
  Eigen::Index num_predictors() const { return static_cast<Eigen::Index>(predictor_names.size()); }
  // Retained columns for predictor j (K_j - 1, or 1 for the linear baseline).
  Eigen::Index block_width(Eigen::Index j) const;
  // First design column of predictor j's block.
  Eigen::Index block_offset(Eigen::Index j) const;
  Eigen::Index design_width() const;

  void validate() const;
};

struct SpecOptions {
  int order = kDefaultSplineOrder;
  std::optional<int> num_basis;  // default: choose_num_basis(n_train)
  double lambda = 1.0;
  bool spline_enabled = true;
};

// Derives standardization, quantile-knot bases and support summaries from
// the training rows only.
ModelSpec make_spec(const Dataset& train, const SpecOptions& options = {});

enum class BasisDropping { kDropOne, kKeepAll };

// n x d design matrix. kKeepAll retains every basis column and exists to
// demonstrate the rank deficiency that dropping removes.
Eigen::MatrixXd build_design(const ModelSpec& spec, const Dataset& data,
                             BasisDropping dropping = BasisDropping::kDropOne);

// Throws kInvalidInput unless the dataset's columns match the model's columns.
void check_conforms(const ModelSpec& spec, const Dataset& data);

}  // namespace gamspline

#endif  // GAMSPLINE_DESIGN_HPP_
