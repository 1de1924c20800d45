#include <filesystem>
#include <set>

#include "doctest.h"
#include "gamspline/data_io.hpp"
#include "gamspline/error.hpp"
#include "test_util.hpp"

using namespace gamspline;

namespace {

SchemaManifest echo_schema() {
  SchemaManifest m;
  m.label = "y";
  m.covariates = {"age"};
  m.predictors = {"q_AS", "q_LVH"};
  m.group_id = "patient";
  m.timestamp = "t";
  m.tags["sex"] = "sex";
  return m;
}

std::string kind_of_failure(const std::string& csv, const SchemaManifest& m) {
  try {
    parse_dataset_csv(csv, m);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("loads a small well-formed file") {
  const std::string csv =
      "patient,t,y,age,q_AS,q_LVH,sex\n"
      "a,1,0,61,0.1,0.2,F\n"
      "a,2,1,62,0.3,0.9,F\n"
      "\"b\",1,0,70,0.5,0.25,M\n";
  const Dataset d = parse_dataset_csv(csv, echo_schema());
  CHECK(d.rows() == 3);
  CHECK(d.labels == Eigen::Vector3d(0, 1, 0));
  CHECK(d.predictors(2, 1) == 0.25);
  CHECK(d.group_ids == std::vector<std::string>{"a", "a", "b"});
  CHECK(d.tags.at("sex")[2] == "M");
  REQUIRE(d.timestamps);
  CHECK((*d.timestamps)[1] == 2);
}

TEST_CASE("logit inputs pass through the logistic map") {
  SchemaManifest m;
  m.label = "y";
  m.predictors = {"x"};
  m.logits_input = true;
  const Dataset d = parse_dataset_csv("y,x\n1,0\n0,-800\n0,3\n", m);
  CHECK(d.predictors(0, 0) == 0.5);
  CHECK(d.predictors(1, 0) == 0.0);
  CHECK(d.predictors(2, 0) == doctest::Approx(1.0 / (1.0 + std::exp(-3.0))));
  CHECK(d.group_ids[1] != d.group_ids[2]);
}

TEST_CASE("load errors name row and column") {
  const std::string head = "patient,t,y,age,q_AS,q_LVH,sex\n";
  const std::string good = "a,1,0,61,0.1,0.2,F\n";
  CHECK(kind_of_failure(head + good + "b,1,1,50,0.4,1.7,M\n", echo_schema()) ==
        "row 2, column q_LVH out of [0,1]");
  CHECK(kind_of_failure(head + good + "b,1,2,50,0.4,0.7,M\n", echo_schema()).find("row 2, column y") == 0);
  CHECK(kind_of_failure(head + "a,1,0,x,0.1,0.2,F\n", echo_schema()).find("row 1, column age") == 0);
  CHECK(kind_of_failure("patient,t,y,age,q_AS,sex\n" + good, echo_schema()).find("q_LVH") !=
        std::string::npos);
  try {
    parse_dataset_csv(head + "a,1,0,,0.1,0.2,F\n", echo_schema());
    FAIL("expected a load error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kLoad);
  }
}

TEST_CASE("manifest parsing") {
  const SchemaManifest m = parse_manifest(
      R"({"label":"y","covariates":["age"],"predictors":["q_AS","q_LVH"],"group_id":"patient",
          "timestamp":"t","tags":{"sex":"sex"},"logits_input":false})");
  CHECK(m.predictors.size() == 2);
  CHECK(*m.group_id == "patient");
  CHECK(parse_manifest(manifest_json(m)).tags == m.tags);
  CHECK_THROWS_AS(parse_manifest("{"), Error);
  CHECK_THROWS_AS(parse_manifest(R"({"covariates":[]})"), Error);
}

TEST_CASE("write then load is the identity") {
  SyntheticSpec spec;
  spec.n = 300;
  spec.true_functions = {TrueFunction::kSine, TrueFunction::kZero};
  spec.true_gamma = {0.5, -0.5};
  spec.rows_per_group = 3;
  spec.seed = 9;
  const Dataset d = generate_synthetic(spec);
  const auto path = std::filesystem::temp_directory_path() / "gamspline_io_test.csv";
  write_dataset(d, path);
  const Dataset back = load_dataset(path, manifest_for(d));
  std::filesystem::remove(path);
  CHECK(back.labels == d.labels);
  CHECK(back.covariates == d.covariates);
  CHECK(back.predictors == d.predictors);
  CHECK(back.group_ids == d.group_ids);
  CHECK(*back.timestamps == *d.timestamps);
  CHECK(back.tags == d.tags);
  CHECK(back.predictor_names == d.predictor_names);
  CHECK(dataset_csv(back) == dataset_csv(d));
}

TEST_CASE("grouped split examples") {
  testutil::QuietLog quiet;
  Dataset d = testutil::toy_dataset(1, 10, 0, 1);
  SplitPlan plan;
  plan.train = 0.8;
  plan.valid = 0.1;
  plan.test = 0.1;
  plan.seed = 3;
  const DatasetSplit s = grouped_split(d, plan);
  CHECK(s.train.rows() == 8);
  CHECK(s.valid.rows() == 1);
  CHECK(s.test.rows() == 1);
  const DatasetSplit again = grouped_split(d, plan);
  CHECK(again.train.group_ids == s.train.group_ids);
  CHECK(again.test.group_ids == s.test.group_ids);

  CHECK_THROWS_AS(grouped_split(d.subset(std::vector<Eigen::Index>{0, 1}), plan), Error);
  plan.train = 0.9;
  CHECK_THROWS_AS(grouped_split(d, plan), Error);
}

TEST_CASE("latest row per group survives in validation and test") {
  // every group has three rows with timestamps in scrambled order
  Dataset d = testutil::toy_dataset(2, 60, 1, 1);
  d.timestamps = Eigen::VectorXd(60);
  for (Eigen::Index i = 0; i < 60; ++i) {
    d.group_ids[i] = "g" + std::to_string(i / 3);
    (*d.timestamps)[i] = static_cast<double>((i * 7) % 3) + 10.0 * (i / 3);
  }
  SplitPlan plan;
  plan.seed = 1;
  const DatasetSplit s = grouped_split(d, plan);
  CHECK(s.train.rows() % 3 == 0);
  for (const Dataset* part : {&s.valid, &s.test}) {
    std::set<std::string> seen;
    for (Eigen::Index r = 0; r < part->rows(); ++r) {
      CHECK(seen.insert(part->group_ids[r]).second);
      const int g = std::stoi(part->group_ids[r].substr(1));
      CHECK((*part->timestamps)[r] == 10.0 * g + 2.0);
    }
  }
}

TEST_CASE("synthetic generator") {
  SyntheticSpec spec;
  spec.n = 10000;
  spec.true_functions = {TrueFunction::kZero, TrueFunction::kZero};
  spec.seed = 1;
  const Dataset flat = generate_synthetic(spec);
  CHECK(std::abs(flat.labels.mean() - 0.5) <= 3.0 / std::sqrt(10000.0));
  CHECK(flat.predictors.minCoeff() >= 1e-6);
  CHECK(flat.predictors.maxCoeff() <= 1 - 1e-6);

  spec.true_nu = -10;
  CHECK(generate_synthetic(spec).labels.mean() < 0.01);

  spec.true_nu = 0.3;
  spec.true_functions = {TrueFunction::kSine, TrueFunction::kSmoothStep};
  spec.true_gamma = {1.0};
  const Dataset a = generate_synthetic(spec), b = generate_synthetic(spec);
  CHECK(a.labels == b.labels);
  CHECK(a.predictors == b.predictors);
  CHECK(a.covariates == b.covariates);
  CHECK(dataset_csv(a) == dataset_csv(b));
  CHECK(parse_synthetic_spec(synthetic_spec_json(spec)).true_nu == 0.3);
}

TEST_CASE("catalog functions are centered") {
  for (TrueFunction f : {TrueFunction::kZero, TrueFunction::kLinear, TrueFunction::kQuadratic,
                         TrueFunction::kSine, TrueFunction::kSmoothStep}) {
    // composite Simpson, h = 1e-5
    const int m = 100000;
    double s = evaluate(f, 0) + evaluate(f, 1);
    for (int i = 1; i < m; ++i) s += (i % 2 ? 4 : 2) * evaluate(f, static_cast<double>(i) / m);
    CHECK(std::abs(s / (3.0 * m)) < 1e-10);
    CHECK(parse_true_function(to_string(f)) == f);
  }
  CHECK(evaluate(TrueFunction::kLinear, 1.0) == 1.0);
  CHECK(evaluate(TrueFunction::kQuadratic, 0.5) == -1.0);
  CHECK_THROWS_AS(parse_true_function("cubic"), Error);
}
