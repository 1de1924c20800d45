#ifndef GAMSPLINE_DATASET_HPP_
#define GAMSPLINE_DATASET_HPP_

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gamspline {

// Row-aligned modelling table: binary labels, linear clinical covariates,
// bounded latent predictors in [0, 1], patient group ids and categorical
// subgroup tags. Column names travel with the data so that a dataset can be
// written back out and matched against a fitted model's schema.
struct Dataset {
  Eigen::VectorXd labels;
  Eigen::MatrixXd covariates;  // n x p
  Eigen::MatrixXd predictors;  // n x J
  std::vector<std::string> group_ids;
  std::optional<Eigen::VectorXd> timestamps;
  std::map<std::string, std::vector<std::string>> tags;

  std::string label_name = "label";
  std::vector<std::string> covariate_names;
  std::vector<std::string> predictor_names;
  std::string group_name = "group_id";
  std::string timestamp_name = "timestamp";

  Eigen::Index rows() const { return labels.size(); }
  Eigen::Index num_covariates() const { return covariates.cols(); }
  Eigen::Index num_predictors() const { return predictors.cols(); }

  // Throws kInvalidInput when matrices are misaligned, labels are not 0/1,
  // predictors leave [0, 1], or any value is non-finite.
  void validate() const;

  // Rows in the given order; names and tag keys are preserved.
  Dataset subset(std::span<const Eigen::Index> rows) const;
};

}  // namespace gamspline

#endif  // GAMSPLINE_DATASET_HPP_
