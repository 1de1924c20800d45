#ifndef GAMSPLINE_NUMERIC_HPP_
#define GAMSPLINE_NUMERIC_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "gamspline/error.hpp"

namespace gamspline {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Overflow-free logistic function.
template <typename Scalar>
Scalar logistic(Scalar x) {
  using std::exp;
  if (x >= Scalar(0)) return Scalar(1) / (Scalar(1) + exp(-x));
  const Scalar e = exp(x);
  return e / (Scalar(1) + e);
}

// log(1 + exp(x)) without overflow; equals -log(logistic(-x)).
template <typename Scalar>
Scalar softplus(Scalar x) {
  using std::exp;
  using std::log1p;
  if (x > Scalar(0)) return x + log1p(exp(-x));
  return log1p(exp(x));
}

template <typename Scalar>
Scalar logit(Scalar p) {
  using std::log;
  return log(p / (Scalar(1) - p));
}

// Linear-interpolation empirical quantile of already sorted data
// (the "type 7" definition: position (n - 1) * level).
template <typename Scalar>
Scalar sorted_quantile(std::span<const Scalar> sorted, double level) {
  require(!sorted.empty(), ErrorKind::kInvalidInput, "quantile of empty sample");
  const double pos = level * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const Scalar frac = Scalar(pos - static_cast<double>(lo));
  if (frac == Scalar(0) || lo == hi) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

template <typename Scalar>
Scalar empirical_quantile(std::span<const Scalar> values, double level) {
  std::vector<Scalar> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return sorted_quantile<Scalar>(sorted, level);
}

// Gauss-Legendre rule on [-1, 1] from the Golub-Welsch eigenproblem of the
// Jacobi matrix. Exact for polynomials of degree <= 2 * points - 1.
template <typename Scalar>
struct GaussLegendreRule {
  Vector<Scalar> nodes;
  Vector<Scalar> weights;
};

template <typename Scalar>
GaussLegendreRule<Scalar> gauss_legendre(int points) {
  require(points >= 1, ErrorKind::kInvalidInput, "Gauss-Legendre rule needs >= 1 point");
  Matrix<Scalar> jacobi = Matrix<Scalar>::Zero(points, points);
  for (int i = 1; i < points; ++i) {
    const Scalar k = Scalar(i);
    const Scalar beta = k / std::sqrt(Scalar(4) * k * k - Scalar(1));
    jacobi(i, i - 1) = beta;
    jacobi(i - 1, i) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(jacobi);
  GaussLegendreRule<Scalar> rule;
  rule.nodes = solver.eigenvalues();
  rule.weights = Scalar(2) * solver.eigenvectors().row(0).transpose().array().square();
  return rule;
}

// Composite Gauss-Legendre integral of f over [a, b] split at `breaks`
// (which must be sorted and lie within [a, b]).
template <typename Scalar, typename F>
Scalar integrate_piecewise(F&& f, std::span<const Scalar> breaks, int points) {
  const auto rule = gauss_legendre<Scalar>(points);
  Scalar total(0);
  for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
    const Scalar a = breaks[s], b = breaks[s + 1];
    if (!(b > a)) continue;
    const Scalar half = (b - a) / Scalar(2), mid = (a + b) / Scalar(2);
    for (Eigen::Index q = 0; q < rule.nodes.size(); ++q) {
      total += rule.weights[q] * half * f(mid + half * rule.nodes[q]);
    }
  }
  return total;
}

}  // namespace gamspline

#endif  // GAMSPLINE_NUMERIC_HPP_
