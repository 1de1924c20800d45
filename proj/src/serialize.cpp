#include "gamspline/serialize.hpp"

#include "gamspline/error.hpp"
#include "gamspline/text_io.hpp"

namespace gamspline {
namespace {

using nlohmann::json;

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json support_json(const SupportSummary& s) {
  return {{"min", s.min}, {"q1", s.q1}, {"median", s.median}, {"q3", s.q3}, {"max", s.max}};
}

SupportSummary support_from_json(const json& j) {
  return {j.at("min").get<double>(), j.at("q1").get<double>(), j.at("median").get<double>(),
          j.at("q3").get<double>(), j.at("max").get<double>()};
}

json interval_json(const std::optional<MetricValue>& value) {
  if (!value) return nullptr;
  json j{{"point", value->point}};
  if (value->ci) {
    j["ci_low"] = value->ci->low;
    j["ci_high"] = value->ci->high;
    j["valid_replicates"] = value->ci->valid_replicates;
    j["skipped_replicates"] = value->ci->skipped_replicates;
  } else {
    j["ci_low"] = nullptr;
    j["ci_high"] = nullptr;
  }
  return j;
}

}  // namespace

json to_json(const FitDiagnostics& d) {
  return {{"objective", d.objective},       {"gradient_norm", d.gradient_norm},
          {"iterations", d.iterations},     {"converged", d.converged},
          {"ridge_boosts", d.ridge_boosts}, {"objective_trace", d.objective_trace}};
}

json to_json(const FittedModel& model) {
  const ModelSpec& spec = model.spec;
  json doc;
  doc["format"] = "gamspline-model";
  doc["version"] = kModelFormatVersion;
  doc["lambda"] = spec.lambda;
  doc["order"] = spec.order;
  doc["spline_enabled"] = spec.spline_enabled;
  doc["design_width"] = spec.design_width();

  json covariates = json::array();
  for (Eigen::Index c = 0; c < spec.num_covariates(); ++c) {
    const ColumnScaling& s = spec.standardization.columns[static_cast<std::size_t>(c)];
    covariates.push_back({{"name", spec.covariate_names[static_cast<std::size_t>(c)]},
                          {"mean", s.mean},
                          {"stddev", s.stddev},
                          {"constant", s.constant},
                          {"gamma", model.gamma[c]}});
  }
  doc["covariates"] = covariates;

  json predictors = json::array();
  for (Eigen::Index j = 0; j < spec.num_predictors(); ++j) {
    const auto idx = static_cast<std::size_t>(j);
    json entry{{"name", spec.predictor_names[idx]}, {"alpha", to_std(model.alpha[idx])}};
    if (idx < spec.support.size()) entry["support"] = support_json(spec.support[idx]);
    if (spec.spline_enabled) {
      entry["knots"] = to_std(spec.bases[idx].knots());
      entry["requested_num_basis"] = spec.bases[idx].requested_num_basis();
      entry["dropped_index"] = spec.dropped_index[idx];
    }
    predictors.push_back(entry);
  }
  doc["predictors"] = predictors;
  doc["intercept"] = model.nu;
  doc["diagnostics"] = to_json(model.diagnostics);
  return doc;
}

FittedModel model_from_json(const json& doc) {
  try {
    require(doc.at("format").get<std::string>() == "gamspline-model", ErrorKind::kLoad,
            "not a gamspline model document");
    const int version = doc.at("version").get<int>();
    require(version == kModelFormatVersion, ErrorKind::kLoad,
            "unsupported model format version " + std::to_string(version));
    ModelSpec spec;
    spec.lambda = doc.at("lambda").get<double>();
    spec.order = doc.at("order").get<int>();
    spec.spline_enabled = doc.at("spline_enabled").get<bool>();
    std::vector<double> gamma;
    for (const json& c : doc.at("covariates")) {
      spec.covariate_names.push_back(c.at("name").get<std::string>());
      spec.standardization.columns.push_back(
          {c.at("mean").get<double>(), c.at("stddev").get<double>(), c.at("constant").get<bool>()});
      gamma.push_back(c.at("gamma").get<double>());
    }
    std::vector<Eigen::VectorXd> alpha;
    for (const json& p : doc.at("predictors")) {
      spec.predictor_names.push_back(p.at("name").get<std::string>());
      if (p.contains("support")) spec.support.push_back(support_from_json(p["support"]));
      alpha.push_back(to_eigen(p.at("alpha").get<std::vector<double>>()));
      if (!spec.spline_enabled) continue;
      const auto knots = p.at("knots").get<std::vector<double>>();
      const auto order = static_cast<std::size_t>(spec.order);
      require(knots.size() >= 2 * order, ErrorKind::kLoad, "knot vector too short");
      const std::vector<double> interior(knots.begin() + static_cast<std::ptrdiff_t>(order),
                                         knots.end() - static_cast<std::ptrdiff_t>(order));
      spec.bases.emplace_back(spec.order, interior, p.at("requested_num_basis").get<Eigen::Index>());
      require(spec.bases.back().knots() == to_eigen(knots), ErrorKind::kLoad,
              "knot vector is not clamped on [0, 1]");
      spec.dropped_index.push_back(p.at("dropped_index").get<Eigen::Index>());
    }
    spec.validate();

    FitDiagnostics diag;
    const json& d = doc.at("diagnostics");
    diag.objective = d.at("objective").get<double>();
    diag.gradient_norm = d.at("gradient_norm").get<double>();
    diag.iterations = d.at("iterations").get<int>();
    diag.converged = d.at("converged").get<bool>();
    diag.ridge_boosts = d.value("ridge_boosts", 0);
    diag.objective_trace = d.value("objective_trace", std::vector<double>{});

    FittedModel model;
    model.nu = doc.at("intercept").get<double>();
    model.gamma = to_eigen(gamma);
    model.alpha = std::move(alpha);
    for (Eigen::Index j = 0; j < spec.num_predictors(); ++j) {
      require(model.alpha[static_cast<std::size_t>(j)].size() == spec.block_width(j), ErrorKind::kLoad,
              "coefficient count for predictor '" + spec.predictor_names[static_cast<std::size_t>(j)] +
                  "' does not match its basis");
    }
    model.spec = std::move(spec);
    model.diagnostics = std::move(diag);
    require(model.theta().allFinite(), ErrorKind::kLoad, "model coefficients must be finite");
    return model;
  } catch (const json::exception& e) {
    fail(ErrorKind::kLoad, std::string("model document: ") + e.what());
  }
}

std::string model_json(const FittedModel& model) { return to_json(model).dump(2) + "\n"; }

FittedModel parse_model_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::kLoad, std::string("model file is not valid JSON: ") + e.what());
  }
  return model_from_json(doc);
}

void save_model(const FittedModel& model, const std::filesystem::path& path) {
  write_file_atomic(path, model_json(model));
}

FittedModel load_model(const std::filesystem::path& path) { return parse_model_json(read_file(path)); }

json to_json(const TuneResult& result) {
  json log = json::array();
  for (const TuneEntry& e : result.selection_log) {
    json entry{{"lambda", e.lambda}, {"diagnostics", to_json(e.diagnostics)}};
    entry["validation_auroc"] = e.validation_auroc ? json(*e.validation_auroc) : json(nullptr);
    entry["error"] = e.error ? json(*e.error) : json(nullptr);
    log.push_back(entry);
  }
  return {{"grid", result.grid},
          {"selection_log", log},
          {"best_lambda", result.best_lambda},
          {"best_validation_auroc", result.best_auroc},
          {"selection_rule", "max validation AUROC; ties to larger lambda"}};
}

json to_json(const MetricReport& r) {
  json j;
  j["auroc"] = interval_json(r.auroc);
  j["auprc"] = interval_json(r.auprc);
  j["f1"] = interval_json(r.f1);
  j["n_bootstrap"] = r.n_bootstrap;
  j["threshold_used"] = r.threshold_used;
  j["threshold_policy"] = r.threshold_policy;
  j["subgroup_tag"] = r.subgroup_tag ? json(*r.subgroup_tag) : json(nullptr);
  j["subgroup_value"] = r.subgroup_value ? json(*r.subgroup_value) : json(nullptr);
  j["n_rows"] = r.n_rows;
  j["n_positive"] = r.n_positive;
  j["notes"] = r.notes;
  return j;
}

}  // namespace gamspline
