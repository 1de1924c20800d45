#include "gamspline/fit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gamspline/numeric.hpp"

namespace gamspline {
namespace {

void check_problem(const Eigen::MatrixXd& design, const Eigen::VectorXd& labels,
                   const Eigen::VectorXd& theta) {
  require(design.rows() == labels.size(), ErrorKind::kInvalidInput,
          "design rows do not match label count");
  require(design.cols() == theta.size(), ErrorKind::kInvalidInput,
          "coefficient vector length does not match design width");
  require(theta.allFinite(), ErrorKind::kInvalidInput, "coefficients must be finite");
}

double penalty(const Eigen::VectorXd& theta, double lambda) {
  return lambda * theta.tail(theta.size() - 1).squaredNorm();
}

// f(theta + step) - f(theta), accurate for small steps: each loss term is
// evaluated as log1p(yhat * expm1(d)) - y d instead of a difference of two
// O(1) softplus values.
// `shift` is design * step, formed directly rather than as a difference of
// two linear predictors.
double objective_change(const Eigen::VectorXd& eta, const Eigen::VectorXd& shift,
                        const Eigen::VectorXd& labels, const Eigen::VectorXd& theta,
                        const Eigen::VectorXd& step, double lambda) {
  double change = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const double d = shift[i];
    double term;
    if (std::abs(d) < 1.0) {
      term = std::log1p(logistic(eta[i]) * std::expm1(d));
    } else {
      term = softplus(eta[i] + d) - softplus(eta[i]);
    }
    change += term - labels[i] * d;
  }
  const auto n = theta.size() - 1;
  change += lambda * (step.tail(n).array() * (2.0 * theta.tail(n).array() + step.tail(n).array())).sum();
  return change;
}

}  // namespace

double objective(const Eigen::MatrixXd& design, const Eigen::VectorXd& labels,
                 const Eigen::VectorXd& theta, double lambda) {
  check_problem(design, labels, theta);
  const Eigen::VectorXd eta = design * theta;
  double loss = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) loss += softplus(eta[i]) - labels[i] * eta[i];
  return loss + penalty(theta, lambda);
}

Eigen::VectorXd gradient(const Eigen::MatrixXd& design, const Eigen::VectorXd& labels,
                         const Eigen::VectorXd& theta, double lambda) {
  check_problem(design, labels, theta);
  const Eigen::VectorXd eta = design * theta;
  const Eigen::VectorXd residual = eta.unaryExpr(&logistic<double>) - labels;
  Eigen::VectorXd g = design.transpose() * residual;
  g.tail(g.size() - 1) += 2.0 * lambda * theta.tail(theta.size() - 1);
  return g;
}

Eigen::MatrixXd hessian(const Eigen::MatrixXd& design, const Eigen::VectorXd& theta,
                        double lambda) {
  const Eigen::VectorXd eta = design * theta;
  const Eigen::VectorXd weight_sqrt = eta.unaryExpr([](double e) {
    const double p = logistic(e);
    return std::sqrt(p * (1.0 - p));
  });
  const Eigen::MatrixXd weighted = weight_sqrt.asDiagonal() * design;
  const Eigen::Index d = design.cols();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
  h.selfadjointView<Eigen::Lower>().rankUpdate(weighted.transpose());
  h.triangularView<Eigen::StrictlyUpper>() = h.transpose();
  h.diagonal().tail(d - 1).array() += 2.0 * lambda;
  return h;
}

NewtonResult minimize_penalized_logistic(const Eigen::MatrixXd& design,
                                         const Eigen::VectorXd& labels, double lambda,
                                         const FitOptions& options) {
  require(lambda >= 0.0 && std::isfinite(lambda), ErrorKind::kInvalidInput,
          "penalty lambda must be finite and >= 0");
  require(options.max_iter >= 0 && options.tol > 0.0, ErrorKind::kInvalidInput,
          "invalid solver options");
  const Eigen::Index d = design.cols();
  Eigen::VectorXd theta = options.start ? *options.start : Eigen::VectorXd::Zero(d);
  check_problem(design, labels, theta);
  require(((labels.array() == 0.0) || (labels.array() == 1.0)).all(), ErrorKind::kInvalidInput,
          "labels must be 0 or 1");

  FitDiagnostics diag;
  double f = objective(design, labels, theta, lambda);
  diag.objective_trace.push_back(f);
  Eigen::VectorXd eta = design * theta;

  constexpr int kMaxHalvings = 60;
  constexpr int kMaxRidgeBoosts = 12;
  for (int iter = 0;; ++iter) {
    const Eigen::VectorXd g = gradient(design, labels, theta, lambda);
    diag.gradient_norm = g.lpNorm<Eigen::Infinity>();
    diag.iterations = iter;
    if (diag.gradient_norm <= options.tol) {
      diag.converged = true;
      break;
    }
    if (iter >= options.max_iter) break;

    Eigen::MatrixXd h = hessian(design, theta, lambda);
    Eigen::VectorXd direction;
    const double scale = std::max(1.0, h.diagonal().cwiseAbs().maxCoeff());
    double ridge = 0.0;
    for (int attempt = 0;; ++attempt) {
      Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
      if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
        direction = -ldlt.solve(g);
        if (direction.allFinite() && direction.dot(g) < 0.0) break;
      }
      if (attempt >= kMaxRidgeBoosts) {
        diag.objective = f;
        throw NumericalFailure("Newton system could not be solved after " +
                                   std::to_string(kMaxRidgeBoosts) + " ridge boosts",
                               diag);
      }
      const double next = ridge == 0.0 ? 1e-10 * scale : ridge * 100.0;
      h.diagonal().array() += next - ridge;
      ridge = next;
      ++diag.ridge_boosts;
    }

    const double slope = g.dot(direction);
    const Eigen::VectorXd full_shift = design * direction;
    double step = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < kMaxHalvings; ++halving, step *= 0.5) {
      const Eigen::VectorXd delta = step * direction;
      const Eigen::VectorXd shift = step * full_shift;
      const double change = objective_change(eta, shift, labels, theta, delta, lambda);
      if (std::isfinite(change) && change <= options.armijo_c * step * slope) {
        theta += delta;
        eta = design * theta;
        f = objective(design, labels, theta, lambda);
        diag.objective_trace.push_back(f);
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // stalled at roundoff level
  }
  diag.objective = f;
  return {std::move(theta), std::move(diag)};
}

Eigen::VectorXd FittedModel::theta() const {
  Eigen::VectorXd out(spec.design_width());
  out[0] = nu;
  out.segment(1, gamma.size()) = gamma;
  for (Eigen::Index j = 0; j < spec.num_predictors(); ++j) {
    out.segment(spec.block_offset(j), spec.block_width(j)) = alpha[static_cast<std::size_t>(j)];
  }
  return out;
}

FittedModel FittedModel::from_theta(ModelSpec spec, const Eigen::VectorXd& theta,
                                    FitDiagnostics diagnostics) {
  require(theta.size() == spec.design_width(), ErrorKind::kInvalidInput,
          "coefficient vector length does not match the model design");
  FittedModel model;
  model.nu = theta[0];
  model.gamma = theta.segment(1, spec.num_covariates());
  for (Eigen::Index j = 0; j < spec.num_predictors(); ++j) {
    model.alpha.emplace_back(theta.segment(spec.block_offset(j), spec.block_width(j)));
  }
  model.spec = std::move(spec);
  model.diagnostics = std::move(diagnostics);
  return model;
}

FittedModel fit_model(const ModelSpec& spec, const Dataset& train, const FitOptions& options) {
  spec.validate();
  train.validate();
  const Eigen::MatrixXd design = build_design(spec, train);
  NewtonResult result = minimize_penalized_logistic(design, train.labels, spec.lambda, options);
  return FittedModel::from_theta(spec, result.theta, std::move(result.diagnostics));
}

Eigen::VectorXd linear_predictor(const FittedModel& model, const Dataset& data) {
  const Eigen::MatrixXd design = build_design(model.spec, data);
  return design * model.theta();
}

Eigen::VectorXd predict_proba(const FittedModel& model, const Dataset& data) {
  return linear_predictor(model, data).unaryExpr(&logistic<double>);
}

}  // namespace gamspline
