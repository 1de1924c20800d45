#include "gamspline/design.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "gamspline/error.hpp"
#include "gamspline/log.hpp"

namespace gamspline {

Standardization standardize_fit(const Eigen::MatrixXd& covariates) {
  const Eigen::Index n = covariates.rows();
  require(n >= 2, ErrorKind::kInvalidInput, "standardize_fit: need at least 2 rows");
  Standardization out;
  out.columns.reserve(static_cast<std::size_t>(covariates.cols()));
  for (Eigen::Index c = 0; c < covariates.cols(); ++c) {
    const auto col = covariates.col(c);
    ColumnScaling s;
    s.mean = col.mean();
    s.stddev = std::sqrt((col.array() - s.mean).square().sum() / static_cast<double>(n));
    if (!(s.stddev > 0.0)) {
      s.constant = true;
      log_warning("covariate column " + std::to_string(c) +
                  " has zero variance; passed through unstandardized");
    }
    out.columns.push_back(s);
  }
  return out;
}

double Standardization::apply(Eigen::Index column, double value) const {
  const ColumnScaling& s = columns[static_cast<std::size_t>(column)];
  return s.constant ? value : (value - s.mean) / s.stddev;
}

Eigen::MatrixXd Standardization::apply(const Eigen::MatrixXd& covariates) const {
  require(static_cast<Eigen::Index>(columns.size()) == covariates.cols(), ErrorKind::kInvalidInput,
          "standardization width does not match covariates");
  Eigen::MatrixXd out = covariates;
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    const ColumnScaling& s = columns[static_cast<std::size_t>(c)];
    if (!s.constant) out.col(c) = (out.col(c).array() - s.mean) / s.stddev;
  }
  return out;
}

SupportSummary summarize_support(const Eigen::VectorXd& values) {
  std::vector<double> sorted(values.data(), values.data() + values.size());
  std::sort(sorted.begin(), sorted.end());
  const std::span<const double> view(sorted);
  return {sorted.front(), sorted_quantile(view, 0.25), sorted_quantile(view, 0.5),
          sorted_quantile(view, 0.75), sorted.back()};
}

Eigen::Index ModelSpec::block_width(Eigen::Index j) const {
  if (!spline_enabled) return 1;
  return bases[static_cast<std::size_t>(j)].num_basis() - 1;
}

Eigen::Index ModelSpec::block_offset(Eigen::Index j) const {
  Eigen::Index offset = 1 + num_covariates();
  for (Eigen::Index k = 0; k < j; ++k) offset += block_width(k);
  return offset;
}

Eigen::Index ModelSpec::design_width() const { return block_offset(num_predictors()); }

void ModelSpec::validate() const {
  require(lambda >= 0.0 && std::isfinite(lambda), ErrorKind::kInvalidInput,
          "penalty lambda must be finite and >= 0");
  require(static_cast<Eigen::Index>(standardization.columns.size()) == num_covariates(),
          ErrorKind::kInvalidInput, "standardization does not cover every covariate");
  for (const ColumnScaling& s : standardization.columns) {
    require(s.constant || s.stddev > 0.0, ErrorKind::kInvalidInput,
            "standardized covariate with non-positive stddev");
  }
  if (spline_enabled) {
    require(static_cast<Eigen::Index>(bases.size()) == num_predictors() &&
                static_cast<Eigen::Index>(dropped_index.size()) == num_predictors(),
            ErrorKind::kInvalidInput, "one basis and one dropped index per predictor required");
    for (std::size_t j = 0; j < bases.size(); ++j) {
      require(bases[j].num_basis() >= 2, ErrorKind::kInvalidInput,
              "spline basis needs at least two functions");
      require(dropped_index[j] >= 0 && dropped_index[j] < bases[j].num_basis(),
              ErrorKind::kInvalidInput, "dropped basis index out of range");
    }
  }
}

ModelSpec make_spec(const Dataset& train, const SpecOptions& options) {
  train.validate();
  ModelSpec spec;
  spec.covariate_names = train.covariate_names;
  spec.predictor_names = train.predictor_names;
  spec.lambda = options.lambda;
  spec.spline_enabled = options.spline_enabled;
  spec.order = options.order;
  if (train.num_covariates() > 0) {
    spec.standardization = standardize_fit(train.covariates);
  }
  const int k = options.num_basis ? *options.num_basis
                                  : choose_num_basis(train.rows(), options.order);
  for (Eigen::Index j = 0; j < train.num_predictors(); ++j) {
    const Eigen::VectorXd col = train.predictors.col(j);
    spec.support.push_back(summarize_support(col));
    if (!spec.spline_enabled) continue;
    SplineBasisd basis =
        build_basis(std::span<const double>(col.data(), static_cast<std::size_t>(col.size())), k,
                    options.order);
    spec.dropped_index.push_back(basis.num_basis() - 1);
    spec.bases.push_back(std::move(basis));
  }
  spec.validate();
  return spec;
}

void check_conforms(const ModelSpec& spec, const Dataset& data) {
  require(data.num_covariates() == spec.num_covariates() &&
              data.num_predictors() == spec.num_predictors(),
          ErrorKind::kInvalidInput,
          "dataset has " + std::to_string(data.num_covariates()) + " covariates and " +
              std::to_string(data.num_predictors()) + " predictors; model expects " +
              std::to_string(spec.num_covariates()) + " and " +
              std::to_string(spec.num_predictors()));
  if (!data.covariate_names.empty()) {
    require(data.covariate_names == spec.covariate_names, ErrorKind::kInvalidInput,
            "covariate columns do not match the model");
  }
  if (!data.predictor_names.empty()) {
    require(data.predictor_names == spec.predictor_names, ErrorKind::kInvalidInput,
            "predictor columns do not match the model");
  }
}

Eigen::MatrixXd build_design(const ModelSpec& spec, const Dataset& data, BasisDropping dropping) {
  check_conforms(spec, data);
  require(data.covariates.rows() == data.rows() && data.predictors.rows() == data.rows(),
          ErrorKind::kInvalidInput, "dataset matrices are not row-aligned");
  const Eigen::Index n = data.rows();
  const Eigen::Index p = spec.num_covariates();
  const bool keep_all = dropping == BasisDropping::kKeepAll && spec.spline_enabled;

  Eigen::Index width = 1 + p;
  for (Eigen::Index j = 0; j < spec.num_predictors(); ++j) {
    width += spec.block_width(j) + (keep_all ? 1 : 0);
  }
  Eigen::MatrixXd design = Eigen::MatrixXd::Zero(n, width);
  design.col(0).setOnes();
  if (p > 0) design.middleCols(1, p) = spec.standardization.apply(data.covariates);

  Eigen::Index offset = 1 + p;
  for (Eigen::Index j = 0; j < spec.num_predictors(); ++j) {
    if (!spec.spline_enabled) {
      design.col(offset++) = data.predictors.col(j);
      continue;
    }
    const SplineBasisd& basis = spec.bases[static_cast<std::size_t>(j)];
    const Eigen::MatrixXd full = basis_matrix(basis, data.predictors.col(j));
    const Eigen::Index k = basis.num_basis();
    if (keep_all) {
      design.middleCols(offset, k) = full;
      offset += k;
      continue;
    }
    const Eigen::Index drop = spec.dropped_index[static_cast<std::size_t>(j)];
    for (Eigen::Index c = 0; c < k; ++c) {
      if (c != drop) design.col(offset++) = full.col(c);
    }
  }
  return design;
}

}  // namespace gamspline
