#include <Eigen/SVD>

#include "doctest.h"
#include "gamspline/design.hpp"
#include "test_util.hpp"

using namespace gamspline;

namespace {

Eigen::Index svd_rank(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const Eigen::VectorXd s = svd.singularValues();
  const double tol = s[0] * 1e-10;
  return (s.array() > tol).count();
}

}  // namespace

TEST_CASE("standardization uses population stddev") {
  Eigen::MatrixXd x(4, 2);
  x << 1, 5, 2, 5, 3, 5, 4, 5;
  testutil::QuietLog quiet;
  const Standardization s = standardize_fit(x);
  CHECK(s.columns[0].mean == doctest::Approx(2.5));
  CHECK(s.columns[0].stddev == doctest::Approx(std::sqrt(1.25)));
  CHECK(s.columns[1].constant);
  const Eigen::MatrixXd z = s.apply(x);
  CHECK(z.col(0).mean() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(z.col(0).squaredNorm() / 4 == doctest::Approx(1.0));
  CHECK(z.col(1) == x.col(1));
  CHECK_THROWS_AS(standardize_fit(x.topRows(1)), Error);
}

TEST_CASE("design column layout") {
  const Dataset d = testutil::toy_dataset(1, 300, 3, 2);
  SpecOptions opts;
  opts.num_basis = 6;
  const ModelSpec spec = make_spec(d, opts);
  const Eigen::MatrixXd x = build_design(spec, d);
  CHECK(x.cols() == 1 + 3 + 2 * 5);
  CHECK(spec.design_width() == x.cols());
  CHECK(spec.block_offset(1) == 1 + 3 + 5);
  CHECK(x.col(0).isOnes());
  // spline block of each row sums to 1 minus the dropped basis value
  for (Eigen::Index j = 0; j < 2; ++j) {
    const Eigen::MatrixXd full = basis_matrix(spec.bases[j], d.predictors.col(j));
    const Eigen::VectorXd block_sum = x.middleCols(spec.block_offset(j), 5).rowwise().sum();
    CHECK(((block_sum + full.col(5)).array() - 1.0).abs().maxCoeff() < 1e-12);
  }
  opts.spline_enabled = false;
  const ModelSpec lin = make_spec(d, opts);
  const Eigen::MatrixXd xl = build_design(lin, d);
  CHECK(xl.cols() == 1 + 3 + 2);
  CHECK(xl.rightCols(2) == d.predictors);
}

TEST_CASE("single predictor row at x = 0") {
  Dataset d;
  d.labels = Eigen::VectorXd::Zero(3);
  d.covariates.resize(3, 0);
  d.predictors = Eigen::Vector3d(0.0, 0.5, 1.0);
  d.predictor_names = {"x"};
  d.group_ids = {"a", "b", "c"};
  SpecOptions opts;
  opts.num_basis = 4;
  const ModelSpec spec = make_spec(d, opts);
  const Eigen::MatrixXd x = build_design(spec, d);
  REQUIRE(x.cols() == 4);
  CHECK(x.row(0) == Eigen::RowVector4d(1, 1, 0, 0));
  CHECK(x.row(2) == Eigen::RowVector4d(1, 0, 0, 0));
}

TEST_CASE("dropping one basis per predictor restores full rank") {
  for (Eigen::Index J : {1, 2, 4}) {
    const Dataset d = testutil::toy_dataset(7 + J, 400, 2, J);
    SpecOptions opts;
    opts.num_basis = 7;
    const ModelSpec spec = make_spec(d, opts);
    const Eigen::MatrixXd dropped = build_design(spec, d, BasisDropping::kDropOne);
    const Eigen::MatrixXd full = build_design(spec, d, BasisDropping::kKeepAll);
    CHECK(svd_rank(dropped) == dropped.cols());
    CHECK(full.cols() - svd_rank(full) == J);
  }
}

TEST_CASE("design is deterministic and checks conformance") {
  const Dataset d = testutil::toy_dataset(3, 200, 1, 2);
  const ModelSpec spec = make_spec(d, {});
  CHECK(build_design(spec, d) == build_design(spec, d));
  Dataset other = testutil::toy_dataset(3, 200, 2, 2);
  CHECK_THROWS_AS(build_design(spec, other), Error);
  Dataset renamed = d;
  renamed.predictor_names[0] = "other";
  CHECK_THROWS_AS(build_design(spec, renamed), Error);
}

TEST_CASE("basis count follows the training size") {
  const Dataset d = testutil::toy_dataset(4, 1000, 0, 1);
  const ModelSpec spec = make_spec(d, {});
  CHECK(spec.bases[0].num_basis() == choose_num_basis(1000));
  CHECK(spec.order == 4);
  CHECK(spec.support[0].min <= spec.support[0].q1);
  CHECK(spec.support[0].q3 <= spec.support[0].max);
}
