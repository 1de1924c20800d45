#ifndef GAMSPLINE_TEST_UTIL_HPP_
#define GAMSPLINE_TEST_UTIL_HPP_

#include <Eigen/Dense>
#include <random>
#include <string>
#include <vector>

#include "gamspline/dataset.hpp"
#include "gamspline/log.hpp"

namespace testutil {

// silences warnings for the scope
struct QuietLog {
  QuietLog() : prev(gamspline::set_log_sink([](gamspline::LogLevel, const std::string&) {})) {}
  ~QuietLog() { gamspline::set_log_sink(prev); }
  gamspline::LogSink prev;
};

inline Eigen::VectorXd uniform_vector(std::mt19937_64& rng, Eigen::Index n, double lo = 0.0,
                                      double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

inline Eigen::VectorXd bernoulli_labels(std::mt19937_64& rng, const Eigen::VectorXd& p) {
  Eigen::VectorXd y(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) y[i] = std::bernoulli_distribution(p[i])(rng) ? 1 : 0;
  return y;
}

// n rows, p normal covariates, J uniform predictors, labels from a fixed smooth truth
inline gamspline::Dataset toy_dataset(std::uint64_t seed, Eigen::Index n, Eigen::Index p,
                                      Eigen::Index J) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  gamspline::Dataset d;
  d.covariates.resize(n, p);
  for (auto& v : d.covariates.reshaped()) v = z(rng);
  d.predictors.resize(n, J);
  for (Eigen::Index j = 0; j < J; ++j) d.predictors.col(j) = uniform_vector(rng, n);
  Eigen::VectorXd eta = Eigen::VectorXd::Constant(n, -0.3);
  for (Eigen::Index c = 0; c < p; ++c) eta += 0.4 * d.covariates.col(c);
  for (Eigen::Index j = 0; j < J; ++j)
    eta += (2.0 * M_PI * d.predictors.col(j).array()).sin().matrix();
  d.labels = bernoulli_labels(rng, (1.0 / (1.0 + (-eta.array()).exp())).matrix());
  for (Eigen::Index c = 0; c < p; ++c) d.covariate_names.push_back("z" + std::to_string(c + 1));
  for (Eigen::Index j = 0; j < J; ++j) d.predictor_names.push_back("x" + std::to_string(j + 1));
  for (Eigen::Index i = 0; i < n; ++i) d.group_ids.push_back("g" + std::to_string(i));
  return d;
}

}  // namespace testutil

#endif  // GAMSPLINE_TEST_UTIL_HPP_
