#include "gamspline/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <span>

#include "gamspline/error.hpp"
#include "gamspline/numeric.hpp"

namespace gamspline {
namespace {

struct ClassCounts {
  Eigen::Index positives = 0;
  Eigen::Index negatives = 0;
};

ClassCounts count_classes(const ScoreRef& scores, const ScoreRef& labels) {
  require(scores.size() == labels.size(), ErrorKind::kInvalidInput,
          "scores and labels differ in length");
  ClassCounts c;
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    require(labels[i] == 0.0 || labels[i] == 1.0, ErrorKind::kInvalidInput,
            "labels must be 0 or 1");
    require(!std::isnan(scores[i]), ErrorKind::kInvalidInput, "scores must not be NaN");
    if (labels[i] == 1.0) ++c.positives; else ++c.negatives;
  }
  return c;
}

std::vector<Eigen::Index> descending_order(const ScoreRef& scores) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(scores.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return scores[a] > scores[b]; });
  return order;
}

// Visits each group of tied scores in descending order with the cumulative
// (true positive, false positive) counts of the rule `score >= group value`.
template <typename Visit>
void sweep_thresholds(const ScoreRef& scores, const ScoreRef& labels, Visit&& visit) {
  const auto order = descending_order(scores);
  Eigen::Index tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Eigen::Index r = order[i];
    if (labels[r] == 1.0) ++tp; else ++fp;
    if (i + 1 == order.size() || scores[order[i + 1]] != scores[r]) visit(scores[r], tp, fp);
  }
}

double f1_from_counts(Eigen::Index tp, Eigen::Index fp, Eigen::Index fn) {
  if (tp == 0) return 0.0;
  return static_cast<double>(2 * tp) / static_cast<double>(2 * tp + fp + fn);
}

double metric_value(Metric metric, const ScoreRef& scores, const ScoreRef& labels,
                    double threshold) {
  switch (metric) {
    case Metric::kAuroc: return auroc(scores, labels);
    case Metric::kAuprc: return auprc(scores, labels);
    case Metric::kF1: return f1_at_threshold(scores, labels, threshold);
  }
  return 0.0;
}

}  // namespace

std::string_view to_string(Metric metric) noexcept {
  switch (metric) {
    case Metric::kAuroc: return "auroc";
    case Metric::kAuprc: return "auprc";
    case Metric::kF1: return "f1";
  }
  return "unknown";
}

double auroc(const ScoreRef& scores, const ScoreRef& labels) {
  const ClassCounts c = count_classes(scores, labels);
  require(c.positives > 0 && c.negatives > 0, ErrorKind::kUndefinedMetric,
          "AUROC needs both positive and negative labels");
  // Sum of positive mid-ranks (ascending), then U = R_pos - n_pos (n_pos + 1) / 2.
  auto order = descending_order(scores);
  std::reverse(order.begin(), order.end());
  double rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + j + 2);
    for (std::size_t k = i; k <= j; ++k) {
      if (labels[order[k]] == 1.0) rank_sum += mid_rank;
    }
    i = j + 1;
  }
  const double np = static_cast<double>(c.positives);
  const double u = rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * static_cast<double>(c.negatives));
}

double auprc(const ScoreRef& scores, const ScoreRef& labels) {
  const ClassCounts c = count_classes(scores, labels);
  require(c.positives > 0, ErrorKind::kUndefinedMetric, "AUPRC needs at least one positive label");
  const double np = static_cast<double>(c.positives);
  double ap = 0.0;
  Eigen::Index prev_tp = 0;
  sweep_thresholds(scores, labels, [&](double, Eigen::Index tp, Eigen::Index fp) {
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    ap += static_cast<double>(tp - prev_tp) / np * precision;
    prev_tp = tp;
  });
  return ap;
}

double f1_at_threshold(const ScoreRef& scores, const ScoreRef& labels, double threshold) {
  const ClassCounts c = count_classes(scores, labels);
  require(c.positives > 0, ErrorKind::kUndefinedMetric, "F1 needs at least one positive label");
  Eigen::Index tp = 0, fp = 0;
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    if (scores[i] >= threshold) {
      if (labels[i] == 1.0) ++tp; else ++fp;
    }
  }
  return f1_from_counts(tp, fp, c.positives - tp);
}

double select_f1_threshold(const ScoreRef& scores, const ScoreRef& labels) {
  const ClassCounts c = count_classes(scores, labels);
  require(c.positives > 0, ErrorKind::kUndefinedMetric, "F1 needs at least one positive label");
  double best_f1 = -1.0;
  double best_threshold = 0.0;
  // Descending sweep; `>=` lets lower thresholds win ties.
  sweep_thresholds(scores, labels, [&](double value, Eigen::Index tp, Eigen::Index fp) {
    const double f1 = f1_from_counts(tp, fp, c.positives - tp);
    if (f1 >= best_f1) {
      best_f1 = f1;
      best_threshold = value;
    }
  });
  return best_threshold;
}

BootstrapInterval bootstrap_ci(const ScoreRef& scores, const ScoreRef& labels, Metric metric,
                               const BootstrapOptions& options) {
  require(options.n_boot >= 1, ErrorKind::kInvalidInput, "bootstrap needs >= 1 replicate");
  require(options.level > 0.0 && options.level < 1.0, ErrorKind::kInvalidInput,
          "confidence level must be in (0, 1)");
  // Evaluating on the full sample first surfaces undefined metrics directly.
  metric_value(metric, scores, labels, options.threshold);

  const Eigen::Index n = scores.size();
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(options.n_boot));
  BootstrapInterval out;
  Eigen::VectorXd s(n), y(n);
  for (int b = 0; b < options.n_boot; ++b) {
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed),
                      static_cast<std::uint32_t>(options.seed >> 32),
                      static_cast<std::uint32_t>(b)};
    std::mt19937_64 rng(seq);
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index r = pick(rng);
      s[i] = scores[r];
      y[i] = labels[r];
    }
    try {
      values.push_back(metric_value(metric, s, y, options.threshold));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kUndefinedMetric) throw;
      ++out.skipped_replicates;
    }
  }
  out.valid_replicates = static_cast<int>(values.size());
  require(2 * out.skipped_replicates <= options.n_boot, ErrorKind::kUnstableCi,
          std::string(to_string(metric)) + ": " + std::to_string(out.skipped_replicates) +
              " of " + std::to_string(options.n_boot) + " bootstrap replicates undefined");
  std::sort(values.begin(), values.end());
  const double alpha = (1.0 - options.level) / 2.0;
  const std::span<const double> view(values);
  out.low = sorted_quantile(view, alpha);
  out.high = sorted_quantile(view, 1.0 - alpha);
  return out;
}

MetricReport evaluate_metrics(const ScoreRef& scores, const ScoreRef& labels,
                              const EvaluationOptions& options) {
  const ClassCounts c = count_classes(scores, labels);
  MetricReport report;
  report.n_rows = scores.size();
  report.n_positive = c.positives;
  report.n_bootstrap = options.bootstrap.n_boot;
  report.threshold_used = options.bootstrap.threshold;
  report.threshold_policy = options.threshold_policy;

  auto compute = [&](Metric metric) -> std::optional<MetricValue> {
    MetricValue value;
    try {
      value.point = metric_value(metric, scores, labels, options.bootstrap.threshold);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kUndefinedMetric) throw;
      report.notes.push_back(std::string(to_string(metric)) + " undefined: " + e.what());
      return std::nullopt;
    }
    if (options.bootstrap.n_boot > 0) {
      try {
        BootstrapInterval ci = bootstrap_ci(scores, labels, metric, options.bootstrap);
        // Percentile intervals need not contain the point estimate on small or
        // skewed samples; widen so that low <= point <= high always holds.
        if (value.point < ci.low || value.point > ci.high) {
          report.notes.push_back(std::string(to_string(metric)) +
                                 " percentile interval widened to contain the point estimate");
          ci.low = std::min(ci.low, value.point);
          ci.high = std::max(ci.high, value.point);
        }
        value.ci = ci;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kUnstableCi) throw;
        report.notes.push_back(e.what());
      }
    }
    return value;
  };
  report.auroc = compute(Metric::kAuroc);
  report.auprc = compute(Metric::kAuprc);
  report.f1 = compute(Metric::kF1);
  return report;
}

std::vector<MetricReport> subgroup_report(const ScoreRef& scores, const ScoreRef& labels,
                                          const std::map<std::string, std::vector<std::string>>& tags,
                                          const std::string& tag,
                                          const EvaluationOptions& options) {
  const auto it = tags.find(tag);
  require(it != tags.end(), ErrorKind::kInvalidInput, "unknown subgroup tag '" + tag + "'");
  const std::vector<std::string>& categories = it->second;
  require(static_cast<Eigen::Index>(categories.size()) == scores.size(), ErrorKind::kInvalidInput,
          "subgroup tag is not row-aligned with the scores");

  std::map<std::string, std::vector<Eigen::Index>> rows_by_category;
  for (std::size_t i = 0; i < categories.size(); ++i) {
    rows_by_category[categories[i]].push_back(static_cast<Eigen::Index>(i));
  }
  std::vector<MetricReport> out;
  for (const auto& [category, rows] : rows_by_category) {
    const auto m = static_cast<Eigen::Index>(rows.size());
    Eigen::VectorXd s(m), y(m);
    for (Eigen::Index r = 0; r < m; ++r) {
      s[r] = scores[rows[static_cast<std::size_t>(r)]];
      y[r] = labels[rows[static_cast<std::size_t>(r)]];
    }
    MetricReport report;
    if (m < 2) {
      report.n_rows = m;
      report.n_positive = static_cast<Eigen::Index>(y.sum());
      report.n_bootstrap = options.bootstrap.n_boot;
      report.threshold_used = options.bootstrap.threshold;
      report.threshold_policy = options.threshold_policy;
      report.notes.push_back("fewer than 2 rows; metrics undefined");
    } else {
      report = evaluate_metrics(s, y, options);
    }
    report.subgroup_tag = tag;
    report.subgroup_value = category;
    out.push_back(std::move(report));
  }
  return out;
}

}  // namespace gamspline
