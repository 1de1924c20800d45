#ifndef GAMSPLINE_DATA_IO_HPP_
#define GAMSPLINE_DATA_IO_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gamspline/dataset.hpp"

namespace gamspline {

// Column roles of a CSV data file.
struct SchemaManifest {
  std::string label;
  std::vector<std::string> covariates;
  std::vector<std::string> predictors;
  std::optional<std::string> group_id;   // default: every row is its own group
  std::optional<std::string> timestamp;
  std::map<std::string, std::string> tags;  // tag name -> column
  bool logits_input = false;  // predictors hold logits; apply the logistic map on load
};

SchemaManifest parse_manifest(std::string_view json_text);
SchemaManifest load_manifest(const std::filesystem::path& path);
std::string manifest_json(const SchemaManifest& manifest);

// Schema that write_dataset() output satisfies.
SchemaManifest manifest_for(const Dataset& data);

// Parses comma-delimited UTF-8 text with a header row. Load errors name the
// 1-based data row and the column, e.g. "row 2, column q_LVH out of [0,1]".
Dataset parse_dataset_csv(std::string_view text, const SchemaManifest& manifest);
Dataset load_dataset(const std::filesystem::path& path, const SchemaManifest& manifest);

std::string dataset_csv(const Dataset& data);
void write_dataset(const Dataset& data, const std::filesystem::path& path);

struct SplitPlan {
  double train = 0.6;
  double valid = 0.2;
  double test = 0.2;
  bool group_aware = true;
  // Validation and test keep a single row per group: the latest by timestamp,
  // or a seeded random row when the data carry no timestamps.
  bool latest_only = true;
  std::uint64_t seed = 0;

  void validate() const;
};

struct DatasetSplit {
  Dataset train;
  Dataset valid;
  Dataset test;
};

// Assigns whole groups to splits by a seeded shuffle; fractions apply to
// group counts (largest-remainder rounding, at least one group per split).
DatasetSplit grouped_split(const Dataset& data, const SplitPlan& plan);

// Centered shape functions on [0, 1] used by the synthetic generator.
enum class TrueFunction { kZero, kLinear, kQuadratic, kSine, kSmoothStep };

std::string_view to_string(TrueFunction f) noexcept;
TrueFunction parse_true_function(std::string_view name);
double evaluate(TrueFunction f, double x);

struct SyntheticSpec {
  Eigen::Index n = 1000;
  std::vector<TrueFunction> true_functions;  // one per predictor
  std::vector<double> amplitudes;            // per predictor; default 1
  std::vector<double> predictor_mu;          // logit-normal location; default 0
  std::vector<double> predictor_sigma;       // logit-normal scale; default 1
  std::vector<double> true_gamma;            // one per covariate
  double true_nu = 0.0;
  Eigen::Index rows_per_group = 1;
  std::uint64_t seed = 0;

  Eigen::Index num_predictors() const { return static_cast<Eigen::Index>(true_functions.size()); }
  Eigen::Index num_covariates() const { return static_cast<Eigen::Index>(true_gamma.size()); }
  double amplitude(Eigen::Index j) const;
  double mu(Eigen::Index j) const;
  double sigma(Eigen::Index j) const;
  void validate() const;
};

std::string synthetic_spec_json(const SyntheticSpec& spec);
SyntheticSpec parse_synthetic_spec(std::string_view json_text);

// amplitude_j * f_j(x): the generator's centered contribution of predictor j.
double true_effect(const SyntheticSpec& spec, Eigen::Index j, double x);

// nu + gamma^T z + sum_j true_effect(j, p_j) on raw (unstandardized) rows.
Eigen::VectorXd true_linear_predictor(const SyntheticSpec& spec, const Dataset& data);

// Rows with z ~ N(0, I), p_j ~ logit-normal(mu_j, sigma_j) clipped to
// [1e-6, 1 - 1e-6], y ~ Bernoulli(logistic(true linear predictor)), a
// random two-level "sex" tag and per-group integer timestamps.
Dataset generate_synthetic(const SyntheticSpec& spec);

}  // namespace gamspline

#endif  // GAMSPLINE_DATA_IO_HPP_
