#include "gamspline/data_io.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "gamspline/error.hpp"
#include "gamspline/log.hpp"
#include "gamspline/numeric.hpp"
#include "gamspline/text_io.hpp"

namespace gamspline {
namespace {

using nlohmann::json;

// One CSV record; double quotes enclose fields and "" escapes a quote.
std::vector<std::string> parse_csv_record(std::string_view line) {
  std::vector<std::string> cells(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cells.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cells.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.emplace_back();
    } else if (c != '\r') {
      cells.back() += c;
    }
  }
  return cells;
}

std::string csv_cell(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) return value;
  std::string out = "\"";
  for (const char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string load_error(Eigen::Index row, const std::string& column, const std::string& what) {
  return "row " + std::to_string(row) + ", column " + column + " " + what;
}

}  // namespace

SchemaManifest parse_manifest(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(ErrorKind::kLoad, std::string("schema manifest is not valid JSON: ") + e.what());
  }
  try {
    SchemaManifest m;
    m.label = j.at("label").get<std::string>();
    m.covariates = j.value("covariates", std::vector<std::string>{});
    m.predictors = j.value("predictors", std::vector<std::string>{});
    if (j.contains("group_id") && !j["group_id"].is_null()) m.group_id = j["group_id"].get<std::string>();
    if (j.contains("timestamp") && !j["timestamp"].is_null()) m.timestamp = j["timestamp"].get<std::string>();
    if (j.contains("tags")) {
      const json& tags = j["tags"];
      if (tags.is_array()) {
        for (const auto& column : tags) m.tags[column.get<std::string>()] = column.get<std::string>();
      } else {
        m.tags = tags.get<std::map<std::string, std::string>>();
      }
    }
    m.logits_input = j.value("logits_input", false);
    return m;
  } catch (const json::exception& e) {
    fail(ErrorKind::kLoad, std::string("schema manifest: ") + e.what());
  }
}

SchemaManifest load_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_file(path));
}

std::string manifest_json(const SchemaManifest& m) {
  json j;
  j["label"] = m.label;
  j["covariates"] = m.covariates;
  j["predictors"] = m.predictors;
  j["group_id"] = m.group_id ? json(*m.group_id) : json(nullptr);
  j["timestamp"] = m.timestamp ? json(*m.timestamp) : json(nullptr);
  j["tags"] = m.tags;
  j["logits_input"] = m.logits_input;
  return j.dump(2) + "\n";
}

SchemaManifest manifest_for(const Dataset& data) {
  SchemaManifest m;
  m.label = data.label_name;
  m.covariates = data.covariate_names;
  m.predictors = data.predictor_names;
  m.group_id = data.group_name;
  if (data.timestamps) m.timestamp = data.timestamp_name;
  for (const auto& [name, values] : data.tags) m.tags[name] = name;
  return m;
}

Dataset parse_dataset_csv(std::string_view text, const SchemaManifest& manifest) {
  std::istringstream in{std::string(text)};
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorKind::kLoad, "data file is empty");
  std::vector<std::string> header = parse_csv_record(line);
  for (auto& h : header) h = trim(h);
  if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) header[0].erase(0, 3);

  auto column_index = [&](const std::string& name) -> std::size_t {
    const auto it = std::find(header.begin(), header.end(), name);
    require(it != header.end(), ErrorKind::kLoad, "missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t label_col = column_index(manifest.label);
  std::vector<std::size_t> cov_cols, pred_cols;
  for (const auto& c : manifest.covariates) cov_cols.push_back(column_index(c));
  for (const auto& c : manifest.predictors) pred_cols.push_back(column_index(c));
  constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);
  const std::size_t group_col = manifest.group_id ? column_index(*manifest.group_id) : kAbsent;
  const std::size_t time_col = manifest.timestamp ? column_index(*manifest.timestamp) : kAbsent;
  std::map<std::string, std::size_t> tag_cols;
  for (const auto& [tag, column] : manifest.tags) tag_cols[tag] = column_index(column);

  std::vector<double> labels, covs, preds, times;
  std::vector<std::string> groups;
  std::map<std::string, std::vector<std::string>> tags;
  Eigen::Index row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const std::vector<std::string> cells = parse_csv_record(line);
    require(cells.size() == header.size(), ErrorKind::kLoad,
            "row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                " cells; header has " + std::to_string(header.size()));
    auto number = [&](std::size_t col) {
      const std::string cell = trim(cells[col]);
      require(!cell.empty(), ErrorKind::kLoad, load_error(row, header[col], "is missing"));
      double v = 0.0;
      try {
        v = parse_double(cell);
      } catch (const Error&) {
        fail(ErrorKind::kLoad, load_error(row, header[col], "is not numeric ('" + cell + "')"));
      }
      require(std::isfinite(v), ErrorKind::kLoad, load_error(row, header[col], "is not finite"));
      return v;
    };
    const double y = number(label_col);
    require(y == 0.0 || y == 1.0, ErrorKind::kLoad, load_error(row, header[label_col], "label not in {0,1}"));
    labels.push_back(y);
    for (const std::size_t c : cov_cols) covs.push_back(number(c));
    for (const std::size_t c : pred_cols) {
      double v = number(c);
      if (manifest.logits_input) v = logistic(v);
      require(v >= 0.0 && v <= 1.0, ErrorKind::kLoad, load_error(row, header[c], "out of [0,1]"));
      preds.push_back(v);
    }
    if (group_col != kAbsent) {
      groups.push_back(trim(cells[group_col]));
      require(!groups.back().empty(), ErrorKind::kLoad,
              load_error(row, header[group_col], "has an empty group id"));
    } else {
      groups.push_back(std::to_string(row));
    }
    if (time_col != kAbsent) times.push_back(number(time_col));
    for (const auto& [tag, c] : tag_cols) tags[tag].push_back(trim(cells[c]));
  }
  require(row >= 1, ErrorKind::kLoad, "data file has no rows");

  Dataset data;
  const Eigen::Index p = static_cast<Eigen::Index>(cov_cols.size());
  const Eigen::Index J = static_cast<Eigen::Index>(pred_cols.size());
  data.labels = Eigen::Map<Eigen::VectorXd>(labels.data(), row);
  data.covariates = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      covs.data(), row, p);
  data.predictors = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      preds.data(), row, J);
  data.group_ids = std::move(groups);
  if (time_col != kAbsent) data.timestamps = Eigen::Map<Eigen::VectorXd>(times.data(), row);
  for (const auto& [tag, c] : tag_cols) data.tags[tag] = std::move(tags[tag]);
  data.label_name = manifest.label;
  data.covariate_names = manifest.covariates;
  data.predictor_names = manifest.predictors;
  data.group_name = manifest.group_id.value_or("group_id");
  data.timestamp_name = manifest.timestamp.value_or("timestamp");
  data.validate();
  log_info("loaded " + std::to_string(row) + " rows, " + std::to_string(p) + " covariates, " +
           std::to_string(J) + " predictors");
  return data;
}

Dataset load_dataset(const std::filesystem::path& path, const SchemaManifest& manifest) {
  return parse_dataset_csv(read_file(path), manifest);
}

std::string dataset_csv(const Dataset& data) {
  data.validate();
  std::vector<std::string> header{data.label_name};
  header.insert(header.end(), data.covariate_names.begin(), data.covariate_names.end());
  header.insert(header.end(), data.predictor_names.begin(), data.predictor_names.end());
  header.push_back(data.group_name);
  if (data.timestamps) header.push_back(data.timestamp_name);
  for (const auto& [name, values] : data.tags) header.push_back(name);

  std::string out;
  for (std::size_t c = 0; c < header.size(); ++c) out += (c ? "," : "") + csv_cell(header[c]);
  out += '\n';
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    out += data.labels[i] == 1.0 ? "1" : "0";
    for (Eigen::Index c = 0; c < data.num_covariates(); ++c) out += "," + format_double(data.covariates(i, c));
    for (Eigen::Index c = 0; c < data.num_predictors(); ++c) out += "," + format_double(data.predictors(i, c));
    out += "," + csv_cell(data.group_ids[static_cast<std::size_t>(i)]);
    if (data.timestamps) out += "," + format_double((*data.timestamps)[i]);
    for (const auto& [name, values] : data.tags) out += "," + csv_cell(values[static_cast<std::size_t>(i)]);
    out += '\n';
  }
  return out;
}

void write_dataset(const Dataset& data, const std::filesystem::path& path) {
  write_file_atomic(path, dataset_csv(data));
}

void SplitPlan::validate() const {
  require(train > 0.0 && valid > 0.0 && test > 0.0, ErrorKind::kInvalidInput,
          "split fractions must be positive");
  require(std::abs(train + valid + test - 1.0) <= 1e-12, ErrorKind::kInvalidInput,
          "split fractions must sum to 1");
}

DatasetSplit grouped_split(const Dataset& data, const SplitPlan& plan) {
  plan.validate();
  data.validate();
  const Eigen::Index n = data.rows();

  std::vector<std::string> row_groups = data.group_ids;
  if (!plan.group_aware) {
    for (Eigen::Index i = 0; i < n; ++i) row_groups[static_cast<std::size_t>(i)] = std::to_string(i);
  }
  const std::set<std::string> distinct(row_groups.begin(), row_groups.end());
  std::vector<std::string> groups(distinct.begin(), distinct.end());
  const auto num_groups = static_cast<Eigen::Index>(groups.size());
  require(num_groups >= 3, ErrorKind::kInvalidInput,
          "need at least 3 groups for a train/valid/test split; found " + std::to_string(num_groups));
  std::mt19937_64 rng(plan.seed);
  std::shuffle(groups.begin(), groups.end(), rng);

  // Largest-remainder allocation of group counts.
  const double fractions[3] = {plan.train, plan.valid, plan.test};
  Eigen::Index counts[3];
  double remainders[3];
  Eigen::Index assigned = 0;
  for (int s = 0; s < 3; ++s) {
    const double exact = fractions[s] * static_cast<double>(num_groups);
    counts[s] = static_cast<Eigen::Index>(std::floor(exact + 1e-9));
    remainders[s] = exact - static_cast<double>(counts[s]);
    assigned += counts[s];
  }
  while (assigned < num_groups) {
    const int s = static_cast<int>(std::max_element(remainders, remainders + 3) - remainders);
    ++counts[s];
    remainders[s] = -1.0;
    ++assigned;
  }
  for (int s = 0; s < 3; ++s) {
    if (counts[s] == 0) {
      --*std::max_element(counts, counts + 3);
      counts[s] = 1;
    }
  }

  std::unordered_map<std::string, int> split_of;
  Eigen::Index cursor = 0;
  for (int s = 0; s < 3; ++s) {
    for (Eigen::Index k = 0; k < counts[s]; ++k) split_of[groups[static_cast<std::size_t>(cursor++)]] = s;
  }

  std::vector<Eigen::Index> rows[3];
  for (Eigen::Index i = 0; i < n; ++i) rows[split_of.at(row_groups[static_cast<std::size_t>(i)])].push_back(i);

  if (plan.latest_only) {
    if (!data.timestamps) {
      bool repeated = false;
      for (int s = 1; s < 3 && !repeated; ++s) {
        std::set<std::string> seen;
        for (const Eigen::Index i : rows[s]) repeated |= !seen.insert(row_groups[static_cast<std::size_t>(i)]).second;
      }
      if (repeated) {
        log_warning("no timestamp column; validation/test keep one random row per group");
      }
    }
    for (int s = 1; s < 3; ++s) {
      // group -> (chosen row, number of candidates seen)
      std::map<std::string, std::pair<Eigen::Index, Eigen::Index>> chosen;
      for (const Eigen::Index i : rows[s]) {
        const std::string& g = row_groups[static_cast<std::size_t>(i)];
        auto [it, inserted] = chosen.try_emplace(g, i, 1);
        if (inserted) continue;
        auto& [best, seen] = it->second;
        ++seen;
        if (data.timestamps) {
          if ((*data.timestamps)[i] > (*data.timestamps)[best]) best = i;
        } else {
          // Reservoir sampling keeps each candidate with equal probability.
          std::uniform_int_distribution<Eigen::Index> pick(0, seen - 1);
          if (pick(rng) == 0) best = i;
        }
      }
      std::vector<Eigen::Index> kept;
      for (const auto& [g, choice] : chosen) kept.push_back(choice.first);
      std::sort(kept.begin(), kept.end());
      rows[s] = std::move(kept);
    }
  }
  return {data.subset(rows[0]), data.subset(rows[1]), data.subset(rows[2])};
}

std::string_view to_string(TrueFunction f) noexcept {
  switch (f) {
    case TrueFunction::kZero: return "zero";
    case TrueFunction::kLinear: return "linear";
    case TrueFunction::kQuadratic: return "quadratic";
    case TrueFunction::kSine: return "sine";
    case TrueFunction::kSmoothStep: return "smooth-step";
  }
  return "unknown";
}

TrueFunction parse_true_function(std::string_view name) {
  for (const TrueFunction f : {TrueFunction::kZero, TrueFunction::kLinear, TrueFunction::kQuadratic,
                               TrueFunction::kSine, TrueFunction::kSmoothStep}) {
    if (to_string(f) == name) return f;
  }
  fail(ErrorKind::kInvalidInput, "unknown function id '" + std::string(name) +
                                     "' (expected zero, linear, quadratic, sine, smooth-step)");
}

double evaluate(TrueFunction f, double x) {
  switch (f) {
    case TrueFunction::kZero: return 0.0;
    case TrueFunction::kLinear: return 2.0 * (x - 0.5);
    case TrueFunction::kQuadratic: return 12.0 * (x - 0.5) * (x - 0.5) - 1.0;
    case TrueFunction::kSine: return std::sin(2.0 * std::numbers::pi * x);
    // Odd about x = 1/2, hence centered.
    case TrueFunction::kSmoothStep: return 2.0 * logistic(12.0 * (x - 0.5)) - 1.0;
  }
  return 0.0;
}

double SyntheticSpec::amplitude(Eigen::Index j) const {
  return amplitudes.empty() ? 1.0 : amplitudes[static_cast<std::size_t>(j)];
}
double SyntheticSpec::mu(Eigen::Index j) const {
  return predictor_mu.empty() ? 0.0 : predictor_mu[static_cast<std::size_t>(j)];
}
double SyntheticSpec::sigma(Eigen::Index j) const {
  return predictor_sigma.empty() ? 1.0 : predictor_sigma[static_cast<std::size_t>(j)];
}

void SyntheticSpec::validate() const {
  require(n >= 1, ErrorKind::kInvalidInput, "synthetic spec: n must be >= 1");
  require(rows_per_group >= 1, ErrorKind::kInvalidInput, "synthetic spec: rows_per_group must be >= 1");
  const auto J = static_cast<std::size_t>(num_predictors());
  for (const auto* v : {&amplitudes, &predictor_mu, &predictor_sigma}) {
    require(v->empty() || v->size() == J, ErrorKind::kInvalidInput,
            "synthetic spec: per-predictor lists must match the function list");
  }
  for (Eigen::Index j = 0; j < num_predictors(); ++j) {
    require(sigma(j) > 0.0, ErrorKind::kInvalidInput, "synthetic spec: sigma must be > 0");
  }
}

std::string synthetic_spec_json(const SyntheticSpec& spec) {
  json j;
  j["n"] = spec.n;
  std::vector<std::string> ids;
  for (const TrueFunction f : spec.true_functions) ids.emplace_back(to_string(f));
  j["true_functions"] = ids;
  std::vector<double> amp, mu, sigma;
  for (Eigen::Index k = 0; k < spec.num_predictors(); ++k) {
    amp.push_back(spec.amplitude(k));
    mu.push_back(spec.mu(k));
    sigma.push_back(spec.sigma(k));
  }
  j["amplitudes"] = amp;
  j["predictor_distribution"] = {{"family", "logit-normal"}, {"mu", mu}, {"sigma", sigma}};
  j["true_gamma"] = spec.true_gamma;
  j["true_nu"] = spec.true_nu;
  j["rows_per_group"] = spec.rows_per_group;
  j["seed"] = spec.seed;
  return j.dump(2) + "\n";
}

SyntheticSpec parse_synthetic_spec(std::string_view json_text) {
  try {
    const json j = json::parse(json_text);
    SyntheticSpec spec;
    spec.n = j.at("n").get<Eigen::Index>();
    for (const auto& id : j.at("true_functions")) spec.true_functions.push_back(parse_true_function(id.get<std::string>()));
    spec.amplitudes = j.value("amplitudes", std::vector<double>{});
    if (j.contains("predictor_distribution")) {
      spec.predictor_mu = j["predictor_distribution"].value("mu", std::vector<double>{});
      spec.predictor_sigma = j["predictor_distribution"].value("sigma", std::vector<double>{});
    }
    spec.true_gamma = j.value("true_gamma", std::vector<double>{});
    spec.true_nu = j.value("true_nu", 0.0);
    spec.rows_per_group = j.value("rows_per_group", Eigen::Index{1});
    spec.seed = j.value("seed", std::uint64_t{0});
    spec.validate();
    return spec;
  } catch (const json::exception& e) {
    fail(ErrorKind::kLoad, std::string("synthetic spec: ") + e.what());
  }
}

double true_effect(const SyntheticSpec& spec, Eigen::Index j, double x) {
  return spec.amplitude(j) * evaluate(spec.true_functions[static_cast<std::size_t>(j)], x);
}

Eigen::VectorXd true_linear_predictor(const SyntheticSpec& spec, const Dataset& data) {
  require(data.num_covariates() == spec.num_covariates() &&
              data.num_predictors() == spec.num_predictors(),
          ErrorKind::kInvalidInput, "dataset does not match the synthetic spec");
  Eigen::VectorXd eta = Eigen::VectorXd::Constant(data.rows(), spec.true_nu);
  if (spec.num_covariates() > 0) {
    eta += data.covariates *
           Eigen::Map<const Eigen::VectorXd>(spec.true_gamma.data(), spec.num_covariates());
  }
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (Eigen::Index j = 0; j < spec.num_predictors(); ++j) eta[i] += true_effect(spec, j, data.predictors(i, j));
  }
  return eta;
}

Dataset generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const Eigen::Index n = spec.n, p = spec.num_covariates(), J = spec.num_predictors();
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  Dataset data;
  data.labels.resize(n);
  data.covariates.resize(n, p);
  data.predictors.resize(n, J);
  data.timestamps = Eigen::VectorXd(n);
  auto& sex = data.tags["sex"];
  for (Eigen::Index c = 0; c < p; ++c) data.covariate_names.push_back("z" + std::to_string(c + 1));
  for (Eigen::Index j = 0; j < J; ++j) data.predictor_names.push_back("p" + std::to_string(j + 1));

  constexpr double kClip = 1e-6;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < p; ++c) data.covariates(i, c) = normal(rng);
    for (Eigen::Index j = 0; j < J; ++j) {
      const double v = logistic(spec.mu(j) + spec.sigma(j) * normal(rng));
      data.predictors(i, j) = std::clamp(v, kClip, 1.0 - kClip);
    }
    sex.push_back(uniform(rng) < 0.5 ? "female" : "male");
    const Eigen::Index group = i / spec.rows_per_group;
    data.group_ids.push_back("g" + std::to_string(group));
    (*data.timestamps)[i] = static_cast<double>(i % spec.rows_per_group);
  }
  const Eigen::VectorXd eta = true_linear_predictor(spec, data);
  for (Eigen::Index i = 0; i < n; ++i) {
    data.labels[i] = uniform(rng) < logistic(eta[i]) ? 1.0 : 0.0;
  }
  return data;
}

}  // namespace gamspline
