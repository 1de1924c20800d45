#ifndef GAMSPLINE_FIT_HPP_
#define GAMSPLINE_FIT_HPP_

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "gamspline/dataset.hpp"
#include "gamspline/design.hpp"
#include "gamspline/error.hpp"

namespace gamspline {

// Penalized negative log-likelihood
//   -sum_i [y_i log yhat_i + (1 - y_i) log(1 - yhat_i)] + lambda * ||theta_{1:}||^2
// with yhat = logistic(B theta). The intercept theta_0 is not penalized.
double objective(const Eigen::MatrixXd& design, const Eigen::VectorXd& labels,
                 const Eigen::VectorXd& theta, double lambda);
Eigen::VectorXd gradient(const Eigen::MatrixXd& design, const Eigen::VectorXd& labels,
                         const Eigen::VectorXd& theta, double lambda);
// B^T W B + 2 lambda D with W = diag(yhat (1 - yhat)).
Eigen::MatrixXd hessian(const Eigen::MatrixXd& design, const Eigen::VectorXd& theta,
                        double lambda);

inline double objective(const ModelSpec& spec, const Eigen::MatrixXd& design,
                        const Eigen::VectorXd& labels, const Eigen::VectorXd& theta) {
  return objective(design, labels, theta, spec.lambda);
}
inline Eigen::VectorXd gradient(const ModelSpec& spec, const Eigen::MatrixXd& design,
                                const Eigen::VectorXd& labels, const Eigen::VectorXd& theta) {
  return gradient(design, labels, theta, spec.lambda);
}

struct FitOptions {
  int max_iter = 100;
  double tol = 1e-8;  // on the gradient sup-norm
  double armijo_c = 1e-4;
  std::optional<Eigen::VectorXd> start;  // default: theta = 0
};

struct FitDiagnostics {
  double objective = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  int ridge_boosts = 0;
  // Objective after each accepted step, starting with the initial point.
  std::vector<double> objective_trace;
};

class NumericalFailure : public Error {
 public:
  NumericalFailure(const std::string& message, FitDiagnostics diagnostics)
      : Error(ErrorKind::kNumericalFailure, message), diagnostics_(std::move(diagnostics)) {}

  const FitDiagnostics& diagnostics() const noexcept { return diagnostics_; }

 private:
  FitDiagnostics diagnostics_;
};

struct NewtonResult {
  Eigen::VectorXd theta;
  FitDiagnostics diagnostics;
};

// Damped Newton with Armijo backtracking on the exact Hessian. Deterministic.
NewtonResult minimize_penalized_logistic(const Eigen::MatrixXd& design,
                                         const Eigen::VectorXd& labels, double lambda,
                                         const FitOptions& options = {});

struct FittedModel {
  ModelSpec spec;
  double nu = 0.0;
  Eigen::VectorXd gamma;
  std::vector<Eigen::VectorXd> alpha;  // block_width(j) entries per predictor
  FitDiagnostics diagnostics;

  // Coefficients stacked in design-column order.
  Eigen::VectorXd theta() const;
  static FittedModel from_theta(ModelSpec spec, const Eigen::VectorXd& theta,
                                FitDiagnostics diagnostics = {});
};

FittedModel fit_model(const ModelSpec& spec, const Dataset& train, const FitOptions& options = {});

// nu + gamma^T z + sum_j sum_k alpha_{j,k} b_{j,k}(p_j) per row.
Eigen::VectorXd linear_predictor(const FittedModel& model, const Dataset& data);
Eigen::VectorXd predict_proba(const FittedModel& model, const Dataset& data);

}  // namespace gamspline

#endif  // GAMSPLINE_FIT_HPP_
