#include "gamspline/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gamspline/data_io.hpp"
#include "gamspline/design.hpp"
#include "gamspline/error.hpp"
#include "gamspline/fit.hpp"
#include "gamspline/interpret.hpp"
#include "gamspline/metrics.hpp"
#include "gamspline/serialize.hpp"
#include "gamspline/text_io.hpp"
#include "gamspline/tune.hpp"

namespace gamspline {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& cell : split(text, ',')) {
    if (!trim(cell).empty()) out.push_back(parse_double(cell));
  }
  require(!out.empty(), ErrorKind::kInvalidInput, "empty number list '" + text + "'");
  return out;
}

std::vector<std::string> parse_word_list(const std::string& text) {
  std::vector<std::string> out;
  for (const std::string& cell : split(text, ',')) {
    if (!trim(cell).empty()) out.push_back(trim(cell));
  }
  return out;
}

std::array<double, 3> parse_split(const std::vector<double>& values) {
  require(values.size() == 3, ErrorKind::kInvalidInput, "--split needs three fractions");
  return {values[0], values[1], values[2]};
}

// Raw flag storage; a flag only takes effect when it appeared on the command line.
struct Flags {
  std::string train, valid, test, data, schema, model, config, grid, subgroup, out, format,
      threshold_policy, split, functions;
  double lambda = 0, threshold = 0, tol = 0, nu = 0;
  int order = 0, num_basis = 0, bootstrap = 0, max_iter = 0, covariates = 0;
  long n = 0, rows_per_group = 0;
  std::uint64_t seed = 0;
  bool no_splines = false;
  std::map<std::string, CLI::Option*> options;

  bool given(const std::string& name) const {
    const auto it = options.find(name);
    return it != options.end() && it->second->count() > 0;
  }
};

void add_flags(CLI::App& sub, Flags& f) {
  auto add = [&](const std::string& name, auto& target, const std::string& help) {
    f.options[name] = sub.add_option("--" + name, target, help);
  };
  add("train", f.train, "training CSV");
  add("valid", f.valid, "validation CSV");
  add("test", f.test, "test CSV");
  add("data", f.data, "single CSV split by patient group (see --split)");
  add("schema", f.schema, "JSON schema manifest naming column roles");
  add("model", f.model, "model JSON written by fit or tune");
  add("config", f.config, "JSON config file (flags override it)");
  add("lambda", f.lambda, "L2 penalty (default 1)");
  add("grid", f.grid, "comma-separated lambda grid (default 0.001,0.01,1,10,100,1000)");
  add("order", f.order, "B-spline order (default 4, cubic)");
  add("num-basis", f.num_basis, "basis functions per predictor (default round(2 n^0.2))");
  f.options["no-splines"] = sub.add_flag("--no-splines", f.no_splines,
                                         "linear-logistic baseline on raw predictors");
  add("seed", f.seed, "seed for splits, bootstrap and simulation (fallback: GAMSPLINE_SEED)");
  add("bootstrap", f.bootstrap, "bootstrap replicates (default 1000)");
  add("subgroup", f.subgroup, "tag for per-category reports");
  add("out", f.out, "output directory");
  add("format", f.format, "curve format: csv, svg or both");
  add("threshold-policy", f.threshold_policy, "F1 threshold: auto, validation-f1 or fixed");
  add("threshold", f.threshold, "fixed F1 threshold (default 0.5)");
  add("split", f.split, "train,valid,test group fractions for --data (default 0.6,0.2,0.2)");
  add("max-iter", f.max_iter, "Newton iteration cap (default 100)");
  add("tol", f.tol, "gradient sup-norm tolerance (default 1e-8)");
  add("n", f.n, "simulate: rows");
  add("functions", f.functions, "simulate: comma-separated function ids per predictor");
  add("covariates", f.covariates, "simulate: number of covariates");
  add("nu", f.nu, "simulate: true intercept");
  add("rows-per-group", f.rows_per_group, "simulate: rows per patient group");
}

void apply_json_config(RunConfig& cfg, const json& j) {
  auto path = [&](const char* key, std::optional<fs::path>& target) {
    if (j.contains(key)) target = fs::path(j[key].get<std::string>());
  };
  path("train", cfg.train);
  path("valid", cfg.valid);
  path("test", cfg.test);
  path("data", cfg.data);
  path("schema", cfg.schema);
  path("model", cfg.model);
  if (j.contains("lambda")) cfg.lambda = j["lambda"].get<double>();
  if (j.contains("grid")) {
    cfg.grid = j["grid"].is_string() ? parse_number_list(j["grid"].get<std::string>())
                                     : j["grid"].get<std::vector<double>>();
  }
  if (j.contains("order")) cfg.order = j["order"].get<int>();
  if (j.contains("num-basis")) cfg.num_basis = j["num-basis"].get<int>();
  if (j.contains("no-splines")) cfg.spline_enabled = !j["no-splines"].get<bool>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("bootstrap")) cfg.bootstrap = j["bootstrap"].get<int>();
  if (j.contains("subgroup")) cfg.subgroup = j["subgroup"].get<std::string>();
  if (j.contains("out")) cfg.out = j["out"].get<std::string>();
  if (j.contains("format")) cfg.format = j["format"].get<std::string>();
  if (j.contains("threshold-policy")) cfg.threshold_policy = j["threshold-policy"].get<std::string>();
  if (j.contains("threshold")) cfg.threshold = j["threshold"].get<double>();
  if (j.contains("split")) {
    cfg.split = parse_split(j["split"].is_string() ? parse_number_list(j["split"].get<std::string>())
                                                   : j["split"].get<std::vector<double>>());
  }
  if (j.contains("max-iter")) cfg.max_iter = j["max-iter"].get<int>();
  if (j.contains("tol")) cfg.tol = j["tol"].get<double>();
  if (j.contains("n")) cfg.n = j["n"].get<long>();
  if (j.contains("functions")) {
    cfg.functions = j["functions"].is_string() ? parse_word_list(j["functions"].get<std::string>())
                                               : j["functions"].get<std::vector<std::string>>();
  }
  if (j.contains("covariates")) cfg.covariates = j["covariates"].get<int>();
  if (j.contains("nu")) cfg.nu = j["nu"].get<double>();
  if (j.contains("rows-per-group")) cfg.rows_per_group = j["rows-per-group"].get<long>();
}

RunConfig resolve(const std::string& command, const Flags& f) {
  RunConfig cfg;
  cfg.command = command;
  if (const char* env = std::getenv("GAMSPLINE_SEED"); env != nullptr && *env != '\0') {
    try {
      cfg.seed = std::stoull(env);
    } catch (const std::exception&) {
      fail(ErrorKind::kInvalidInput, "GAMSPLINE_SEED must be a non-negative integer");
    }
  }
  if (f.given("config")) {
    try {
      apply_json_config(cfg, json::parse(read_file(f.config)));
    } catch (const json::exception& e) {
      fail(ErrorKind::kLoad, std::string("config file: ") + e.what());
    }
  }
  auto path = [&](const char* name, const std::string& value, std::optional<fs::path>& target) {
    if (f.given(name)) target = fs::path(value);
  };
  path("train", f.train, cfg.train);
  path("valid", f.valid, cfg.valid);
  path("test", f.test, cfg.test);
  path("data", f.data, cfg.data);
  path("schema", f.schema, cfg.schema);
  path("model", f.model, cfg.model);
  if (f.given("lambda")) cfg.lambda = f.lambda;
  if (f.given("grid")) cfg.grid = parse_number_list(f.grid);
  if (f.given("order")) cfg.order = f.order;
  if (f.given("num-basis")) cfg.num_basis = f.num_basis;
  if (f.given("no-splines")) cfg.spline_enabled = !f.no_splines;
  if (f.given("seed")) cfg.seed = f.seed;
  if (f.given("bootstrap")) cfg.bootstrap = f.bootstrap;
  if (f.given("subgroup")) cfg.subgroup = f.subgroup;
  if (f.given("out")) cfg.out = f.out;
  if (f.given("format")) cfg.format = f.format;
  if (f.given("threshold-policy")) cfg.threshold_policy = f.threshold_policy;
  if (f.given("threshold")) cfg.threshold = f.threshold;
  if (f.given("split")) cfg.split = parse_split(parse_number_list(f.split));
  if (f.given("max-iter")) cfg.max_iter = f.max_iter;
  if (f.given("tol")) cfg.tol = f.tol;
  if (f.given("n")) cfg.n = f.n;
  if (f.given("functions")) cfg.functions = parse_word_list(f.functions);
  if (f.given("covariates")) cfg.covariates = f.covariates;
  if (f.given("nu")) cfg.nu = f.nu;
  if (f.given("rows-per-group")) cfg.rows_per_group = f.rows_per_group;
  if (cfg.grid.empty()) cfg.grid = default_lambda_grid();

  require(cfg.order >= 1 && cfg.order <= SplineBasisd::kMaxOrder, ErrorKind::kInvalidInput,
          "--order out of range");
  require(!cfg.num_basis || *cfg.num_basis >= cfg.order, ErrorKind::kInvalidInput,
          "--num-basis must be >= --order");
  require(cfg.lambda >= 0.0 && std::isfinite(cfg.lambda), ErrorKind::kInvalidInput,
          "--lambda must be finite and >= 0");
  require(cfg.bootstrap >= 0, ErrorKind::kInvalidInput, "--bootstrap must be >= 0");
  require(cfg.format == "csv" || cfg.format == "svg" || cfg.format == "both",
          ErrorKind::kInvalidInput, "--format must be csv, svg or both");
  require(cfg.threshold_policy == "auto" || cfg.threshold_policy == "validation-f1" ||
              cfg.threshold_policy == "fixed",
          ErrorKind::kInvalidInput, "--threshold-policy must be auto, validation-f1 or fixed");
  for (const auto* p : {&cfg.train, &cfg.valid, &cfg.test, &cfg.data, &cfg.schema, &cfg.model}) {
    if (*p) require(fs::exists(**p), ErrorKind::kIo, "no such file: '" + (*p)->string() + "'");
  }
  return cfg;
}

// Collects every file a command writes and records them in manifest.json.
class OutputDir {
 public:
  explicit OutputDir(fs::path root) : root_(std::move(root)) {}

  void write(const std::string& name, std::string_view contents) {
    write_file_atomic(root_ / name, contents);
    files_.push_back(name);
  }
  void record(const fs::path& written) { files_.push_back(fs::relative(written, root_).generic_string()); }
  const fs::path& root() const { return root_; }

  void finish(const RunConfig& cfg, const json& extra = json::object()) {
    json m;
    m["command"] = cfg.command;
    m["outputs"] = files_;
    json settings{{"seed", cfg.seed},
                  {"order", cfg.order},
                  {"spline_enabled", cfg.spline_enabled},
                  {"lambda", cfg.lambda},
                  {"grid", cfg.grid},
                  {"bootstrap", cfg.bootstrap},
                  {"split", cfg.split},
                  {"max_iter", cfg.max_iter},
                  {"tol", cfg.tol}};
    settings["num_basis"] = cfg.num_basis ? json(*cfg.num_basis) : json(nullptr);
    json inputs = json::object();
    for (const auto& [key, p] : {std::pair{"train", &cfg.train}, std::pair{"valid", &cfg.valid},
                                 std::pair{"test", &cfg.test}, std::pair{"data", &cfg.data},
                                 std::pair{"schema", &cfg.schema}, std::pair{"model", &cfg.model}}) {
      if (*p) inputs[key] = (*p)->filename().string();
    }
    m["settings"] = settings;
    m["inputs"] = inputs;
    m["details"] = extra;
    write_file_atomic(root_ / "manifest.json", m.dump(2) + "\n");
  }

 private:
  fs::path root_;
  std::vector<std::string> files_;
};

struct Splits {
  std::optional<Dataset> train, valid, test;
};

Splits load_splits(const RunConfig& cfg) {
  require(cfg.schema.has_value(), ErrorKind::kInvalidInput, "--schema is required");
  const SchemaManifest manifest = load_manifest(*cfg.schema);
  Splits s;
  if (cfg.data) {
    SplitPlan plan;
    plan.train = cfg.split[0];
    plan.valid = cfg.split[1];
    plan.test = cfg.split[2];
    plan.seed = cfg.seed;
    DatasetSplit parts = grouped_split(load_dataset(*cfg.data, manifest), plan);
    s.train = std::move(parts.train);
    s.valid = std::move(parts.valid);
    s.test = std::move(parts.test);
  }
  if (cfg.train) s.train = load_dataset(*cfg.train, manifest);
  if (cfg.valid) s.valid = load_dataset(*cfg.valid, manifest);
  if (cfg.test) s.test = load_dataset(*cfg.test, manifest);
  return s;
}

SpecOptions spec_options(const RunConfig& cfg) {
  SpecOptions o;
  o.order = cfg.order;
  o.num_basis = cfg.num_basis;
  o.lambda = cfg.lambda;
  o.spline_enabled = cfg.spline_enabled;
  return o;
}

FitOptions fit_options(const RunConfig& cfg) {
  FitOptions o;
  o.max_iter = cfg.max_iter;
  o.tol = cfg.tol;
  return o;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string fit_report(const FittedModel& model, Eigen::Index n_rows) {
  const ModelSpec& spec = model.spec;
  std::ostringstream os;
  os << "rows: " << n_rows << '\n'
     << "covariates: " << spec.num_covariates() << '\n'
     << "predictors: " << spec.num_predictors() << '\n';
  Eigen::Index spline_cols = 0;
  for (Eigen::Index j = 0; j < spec.num_predictors(); ++j) spline_cols += spec.block_width(j);
  if (spec.spline_enabled && !spec.bases.empty()) {
    Eigen::Index kmin = spec.bases.front().num_basis(), kmax = kmin, collapsed = 0;
    for (const auto& b : spec.bases) {
      kmin = std::min(kmin, b.num_basis());
      kmax = std::max(kmax, b.num_basis());
      collapsed += b.collapsed_knots();
    }
    os << "spline basis: order " << spec.order << ", K " << kmin;
    if (kmax != kmin) os << ".." << kmax;
    os << " per predictor, last basis dropped";
    if (collapsed > 0) os << ", " << collapsed << " tied knot(s) collapsed";
    os << '\n';
  } else {
    os << "spline basis: none (linear baseline)\n";
  }
  os << "design width: " << spec.design_width() << " (1 intercept + " << spec.num_covariates()
     << " covariate + " << spline_cols << (spec.spline_enabled ? " spline" : " predictor")
     << " columns)\n"
     << "lambda: " << format_double(spec.lambda) << '\n'
     << "objective: " << format_double(model.diagnostics.objective) << '\n'
     << "iterations: " << model.diagnostics.iterations << '\n'
     << "gradient sup-norm: " << format_double(model.diagnostics.gradient_norm) << '\n'
     << "converged: " << (model.diagnostics.converged ? "yes" : "no") << '\n'
     << "intercept: " << format_double(model.nu) << '\n';
  double alpha_sq = 0.0;
  for (const auto& a : model.alpha) alpha_sq += a.squaredNorm();
  os << "covariate coefficient norm: " << format_double(model.gamma.norm()) << '\n'
     << (spec.spline_enabled ? "spline" : "predictor")
     << " coefficient norm: " << format_double(std::sqrt(alpha_sq)) << '\n';
  return os.str();
}

std::string interval_text(const std::optional<MetricValue>& v) {
  if (!v) return "undefined";
  std::string s = fixed(v->point, 3);
  if (v->ci) s += " (" + fixed(v->ci->low, 3) + "–" + fixed(v->ci->high, 3) + ")";
  return s;
}

std::string metrics_table(const std::vector<MetricReport>& reports) {
  std::ostringstream os;
  char line[512];
  std::snprintf(line, sizeof(line), "%-24s %8s  %-22s %-22s %-22s\n", "Group", "N", "AUROC",
                "AUPRC", "F1");
  os << line;
  for (const MetricReport& r : reports) {
    const std::string group =
        r.subgroup_tag ? *r.subgroup_tag + "=" + r.subgroup_value.value_or("") : "Overall";
    // Widths count bytes; the en dash takes three.
    std::snprintf(line, sizeof(line), "%-24s %8ld  %-24s %-24s %-24s\n", group.c_str(),
                  static_cast<long>(r.n_rows), interval_text(r.auroc).c_str(),
                  interval_text(r.auprc).c_str(), interval_text(r.f1).c_str());
    os << line;
  }
  if (!reports.empty()) {
    os << "F1 threshold: " << format_double(reports.front().threshold_used) << " ("
       << reports.front().threshold_policy << "); " << reports.front().n_bootstrap
       << " bootstrap replicates, 95% percentile intervals\n";
  }
  return os.str();
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  SyntheticSpec spec;
  spec.n = cfg.n;
  for (const std::string& id : cfg.functions) spec.true_functions.push_back(parse_true_function(id));
  require(cfg.covariates >= 0, ErrorKind::kInvalidInput, "--covariates must be >= 0");
  for (int c = 0; c < cfg.covariates; ++c) spec.true_gamma.push_back(c % 2 == 0 ? 0.5 : -0.5);
  spec.true_nu = cfg.nu;
  spec.rows_per_group = cfg.rows_per_group;
  spec.seed = cfg.seed;
  const Dataset data = generate_synthetic(spec);

  OutputDir dir(cfg.out);
  dir.write("data.csv", dataset_csv(data));
  dir.write("schema.json", manifest_json(manifest_for(data)));
  dir.write("ground_truth.json", synthetic_spec_json(spec));
  dir.finish(cfg);
  out << "wrote " << data.rows() << " rows to " << (cfg.out / "data.csv").string() << '\n';
  return kExitSuccess;
}

int cmd_fit(const RunConfig& cfg, std::ostream& out) {
  const Splits s = load_splits(cfg);
  require(s.train.has_value(), ErrorKind::kInvalidInput, "fit needs --train or --data");
  const ModelSpec spec = make_spec(*s.train, spec_options(cfg));
  const FittedModel model = fit_model(spec, *s.train, fit_options(cfg));
  const std::string report = fit_report(model, s.train->rows());

  OutputDir dir(cfg.out);
  dir.write("model.json", model_json(model));
  dir.write("fit_report.txt", report);
  dir.finish(cfg, {{"converged", model.diagnostics.converged}});
  out << report;
  return model.diagnostics.converged ? kExitSuccess : kExitNotConverged;
}

int cmd_tune(const RunConfig& cfg, std::ostream& out) {
  const Splits s = load_splits(cfg);
  require(s.train && s.valid, ErrorKind::kInvalidInput, "tune needs --train and --valid (or --data)");
  const TuneResult result = grid_search(spec_options(cfg), *s.train, *s.valid, cfg.grid, fit_options(cfg));

  OutputDir dir(cfg.out);
  dir.write("tune.json", to_json(result).dump(2) + "\n");
  dir.write("model.json", model_json(result.best_model));
  std::ostringstream table;
  table << "lambda        validation AUROC   iterations  converged\n";
  for (const TuneEntry& e : result.selection_log) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-13s %-18s %-11d %s\n", format_double(e.lambda).c_str(),
                  e.validation_auroc ? fixed(*e.validation_auroc, 6).c_str() : "failed",
                  e.diagnostics.iterations, e.diagnostics.converged ? "yes" : "no");
    table << line;
  }
  table << "selected lambda: " << format_double(result.best_lambda)
        << " (validation AUROC " << fixed(result.best_auroc, 6) << ")\n";
  dir.write("tune_report.txt", table.str());
  dir.finish(cfg, {{"best_lambda", result.best_lambda}});
  out << table.str();
  return result.best_model.diagnostics.converged ? kExitSuccess : kExitNotConverged;
}

int cmd_evaluate(const RunConfig& cfg, std::ostream& out) {
  require(cfg.model.has_value(), ErrorKind::kInvalidInput, "evaluate needs --model");
  const FittedModel model = load_model(*cfg.model);
  const Splits s = load_splits(cfg);
  require(s.test.has_value(), ErrorKind::kInvalidInput, "evaluate needs --test or --data");

  EvaluationOptions options;
  options.bootstrap.n_boot = cfg.bootstrap;
  options.bootstrap.seed = cfg.seed;
  std::string policy = cfg.threshold_policy;
  if (policy == "auto") policy = s.valid ? "validation-f1" : "fixed";
  if (policy == "validation-f1") {
    require(s.valid.has_value(), ErrorKind::kInvalidInput,
            "--threshold-policy validation-f1 needs --valid or --data");
    options.bootstrap.threshold = select_f1_threshold(predict_proba(model, *s.valid), s.valid->labels);
  } else {
    options.bootstrap.threshold = cfg.threshold;
  }
  options.threshold_policy = policy;

  const Eigen::VectorXd scores = predict_proba(model, *s.test);
  std::vector<MetricReport> reports{evaluate_metrics(scores, s.test->labels, options)};
  json doc{{"overall", to_json(reports.front())}, {"subgroups", json::array()}};
  if (cfg.subgroup) {
    for (MetricReport& r : subgroup_report(scores, s.test->labels, s.test->tags, *cfg.subgroup, options)) {
      doc["subgroups"].push_back(to_json(r));
      reports.push_back(std::move(r));
    }
  }
  const std::string table = metrics_table(reports);
  OutputDir dir(cfg.out);
  dir.write("metrics.json", doc.dump(2) + "\n");
  dir.write("metrics.txt", table);
  dir.finish(cfg);
  out << table;
  return kExitSuccess;
}

int cmd_curves(const RunConfig& cfg, std::ostream& out) {
  require(cfg.model.has_value(), ErrorKind::kInvalidInput, "curves needs --model");
  const FittedModel model = load_model(*cfg.model);
  require(model.spec.spline_enabled, ErrorKind::kUnsupportedOperation,
          "the model is a linear baseline (fitted with --no-splines); it has no partial-effect "
          "curves to export");
  const CurveFormat format = cfg.format == "svg"    ? CurveFormat::kSvg
                             : cfg.format == "both" ? CurveFormat::kBoth
                                                    : CurveFormat::kCsv;
  OutputDir dir(cfg.out);
  const auto written = export_curves(model, dir.root(), format);
  json index = json::array();
  std::size_t w = 0;
  const std::size_t per_predictor = format == CurveFormat::kBoth ? 2 : 1;
  for (Eigen::Index j = 0; j < model.spec.num_predictors(); ++j) {
    json files = json::array();
    for (std::size_t k = 0; k < per_predictor; ++k, ++w) {
      dir.record(written[w]);
      files.push_back(written[w].filename().string());
    }
    const SupportSummary& sup = model.spec.support[static_cast<std::size_t>(j)];
    index.push_back({{"predictor", model.spec.predictor_names[static_cast<std::size_t>(j)]},
                     {"files", files},
                     {"centering_constant", centering_constant(model, j)},
                     {"support", {{"min", sup.min}, {"q1", sup.q1}, {"median", sup.median},
                                  {"q3", sup.q3}, {"max", sup.max}}}});
  }
  dir.write("index.json", json{{"format", cfg.format},
                               {"x_axis", "Predictive Value"},
                               {"y_axis", "Partial Effect"},
                               {"centered_intercept", centered_intercept(model)},
                               {"curves", index}}
                              .dump(2) + "\n");
  dir.finish(cfg);
  out << "wrote " << written.size() << " curve file(s) to " << cfg.out.string() << '\n';
  return kExitSuccess;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNumericalFailure:
    case ErrorKind::kTuningFailure:
    case ErrorKind::kUnstableCi:
      return kExitNumerical;
    default:
      return kExitUsage;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spline-expanded additive logistic models over bounded predictors", "gamspline"};
  app.require_subcommand(1);
  struct Command {
    const char* name;
    const char* help;
    int (*run)(const RunConfig&, std::ostream&);
  };
  const Command commands[] = {
      {"simulate", "generate a synthetic dataset with known additive structure", cmd_simulate},
      {"fit", "fit one penalized model", cmd_fit},
      {"tune", "grid-search lambda by validation AUROC", cmd_tune},
      {"evaluate", "AUROC/AUPRC/F1 with bootstrap intervals", cmd_evaluate},
      {"curves", "export centered partial-effect curves", cmd_curves},
  };
  std::vector<Flags> flags(std::size(commands));
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    subs.push_back(app.add_subcommand(commands[i].name, commands[i].help));
    add_flags(*subs.back(), flags[i]);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitSuccess : kExitUsage;
  }

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    try {
      const RunConfig cfg = resolve(commands[i].name, flags[i]);
      return commands[i].run(cfg, out);
    } catch (const Error& e) {
      err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
      return exit_code_for(e.kind());
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kExitUsage;
    }
  }
  return kExitUsage;
}

int run_cli(int argc, const char* const* argv) {
  return run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

}  // namespace gamspline
