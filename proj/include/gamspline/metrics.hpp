#ifndef GAMSPLINE_METRICS_HPP_
#define GAMSPLINE_METRICS_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gamspline {

using ScoreRef = Eigen::Ref<const Eigen::VectorXd>;

// Mann-Whitney estimate: fraction of (positive, negative) pairs ranked
// correctly, ties counted as one half. Throws kUndefinedMetric unless both
// classes are present.
double auroc(const ScoreRef& scores, const ScoreRef& labels);

// Average precision, sum_i (R_i - R_{i-1}) P_i over descending unique score
// thresholds. Throws kUndefinedMetric without positives.
double auprc(const ScoreRef& scores, const ScoreRef& labels);

// F1 of the rule `score >= threshold`; 0 when nothing is predicted positive.
double f1_at_threshold(const ScoreRef& scores, const ScoreRef& labels, double threshold);

// Unique score maximizing F1; ties resolve to the lowest such threshold.
double select_f1_threshold(const ScoreRef& scores, const ScoreRef& labels);

enum class Metric { kAuroc, kAuprc, kF1 };

std::string_view to_string(Metric metric) noexcept;

struct BootstrapOptions {
  int n_boot = 1000;
  std::uint64_t seed = 0;
  double level = 0.95;
  double threshold = 0.5;  // used by Metric::kF1
};

struct BootstrapInterval {
  double low = 0.0;
  double high = 0.0;
  int valid_replicates = 0;
  int skipped_replicates = 0;  // single-class resamples
};

// Percentile bootstrap over resampled rows. Replicate b draws from its own
// generator seeded by (seed, b), so the result does not depend on the order
// in which replicates are evaluated. Throws kUnstableCi if more than half of
// the replicates are undefined.
BootstrapInterval bootstrap_ci(const ScoreRef& scores, const ScoreRef& labels, Metric metric,
                               const BootstrapOptions& options = {});

struct MetricValue {
  double point = 0.0;
  std::optional<BootstrapInterval> ci;
};

struct MetricReport {
  std::optional<MetricValue> auroc;
  std::optional<MetricValue> auprc;
  std::optional<MetricValue> f1;
  int n_bootstrap = 0;
  double threshold_used = 0.5;
  std::string threshold_policy = "fixed";
  std::optional<std::string> subgroup_tag;
  std::optional<std::string> subgroup_value;
  Eigen::Index n_rows = 0;
  Eigen::Index n_positive = 0;
  std::vector<std::string> notes;
};

struct EvaluationOptions {
  BootstrapOptions bootstrap;
  std::string threshold_policy = "fixed";
};

// Point estimates and percentile intervals for all three metrics. Metrics
// that are undefined on the sample are left empty and explained in notes.
MetricReport evaluate_metrics(const ScoreRef& scores, const ScoreRef& labels,
                              const EvaluationOptions& options = {});

// One report per category of `tag` (sorted by category value).
std::vector<MetricReport> subgroup_report(const ScoreRef& scores, const ScoreRef& labels,
                                          const std::map<std::string, std::vector<std::string>>& tags,
                                          const std::string& tag,
                                          const EvaluationOptions& options = {});

}  // namespace gamspline

#endif  // GAMSPLINE_METRICS_HPP_
