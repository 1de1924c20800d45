#include "gamspline/dataset.hpp"

#include <cmath>
#include <string>

#include "gamspline/error.hpp"

namespace gamspline {

void Dataset::validate() const {
  const Eigen::Index n = rows();
  require(n >= 1, ErrorKind::kInvalidInput, "dataset has no rows");
  require(covariates.rows() == n && predictors.rows() == n, ErrorKind::kInvalidInput,
          "dataset matrices are not row-aligned with the labels");
  require(static_cast<Eigen::Index>(group_ids.size()) == n, ErrorKind::kInvalidInput,
          "group id count does not match row count");
  require(!timestamps || timestamps->size() == n, ErrorKind::kInvalidInput,
          "timestamp count does not match row count");
  require(static_cast<Eigen::Index>(covariate_names.size()) == covariates.cols(),
          ErrorKind::kInvalidInput, "covariate names do not match covariate columns");
  require(static_cast<Eigen::Index>(predictor_names.size()) == predictors.cols(),
          ErrorKind::kInvalidInput, "predictor names do not match predictor columns");
  for (const auto& [name, values] : tags) {
    require(static_cast<Eigen::Index>(values.size()) == n, ErrorKind::kInvalidInput,
            "tag '" + name + "' is not row-aligned");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    require(labels[i] == 0.0 || labels[i] == 1.0, ErrorKind::kInvalidInput,
            "row " + std::to_string(i + 1) + ": label must be 0 or 1");
  }
  require(covariates.allFinite(), ErrorKind::kInvalidInput, "covariates contain non-finite values");
  for (Eigen::Index j = 0; j < predictors.cols(); ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double v = predictors(i, j);
      require(v >= 0.0 && v <= 1.0, ErrorKind::kInvalidInput,
              "row " + std::to_string(i + 1) + ", column " + predictor_names[j] +
                  " out of [0,1]");
    }
  }
}

Dataset Dataset::subset(std::span<const Eigen::Index> idx) const {
  Dataset out;
  const auto m = static_cast<Eigen::Index>(idx.size());
  out.labels.resize(m);
  out.covariates.resize(m, covariates.cols());
  out.predictors.resize(m, predictors.cols());
  out.group_ids.reserve(idx.size());
  if (timestamps) out.timestamps = Eigen::VectorXd(m);
  for (const auto& [name, values] : tags) out.tags[name].reserve(idx.size());
  for (Eigen::Index r = 0; r < m; ++r) {
    const Eigen::Index i = idx[static_cast<std::size_t>(r)];
    out.labels[r] = labels[i];
    out.covariates.row(r) = covariates.row(i);
    out.predictors.row(r) = predictors.row(i);
    out.group_ids.push_back(group_ids[static_cast<std::size_t>(i)]);
    if (timestamps) (*out.timestamps)[r] = (*timestamps)[i];
    for (const auto& [name, values] : tags) {
      out.tags[name].push_back(values[static_cast<std::size_t>(i)]);
    }
  }
  out.label_name = label_name;
  out.covariate_names = covariate_names;
  out.predictor_names = predictor_names;
  out.group_name = group_name;
  out.timestamp_name = timestamp_name;
  return out;
}

}  // namespace gamspline
