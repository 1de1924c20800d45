#ifndef GAMSPLINE_SPLINES_HPP_
#define GAMSPLINE_SPLINES_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gamspline/error.hpp"
#include "gamspline/log.hpp"
#include "gamspline/numeric.hpp"

namespace gamspline {

inline constexpr int kDefaultSplineOrder = 4;

// Clamped B-spline basis on [0, 1].
//
// The knot vector holds `order` zeros, the strictly increasing interior
// knots, then `order` ones, so num_basis() == knots().size() - order. Order
// is the polynomial degree plus one (4 for cubic splines).
//
// Instances are immutable once constructed and may be shared across threads.
template <typename Scalar>
class SplineBasis {
 public:
  using VectorType = Vector<Scalar>;

  SplineBasis() = default;

  // Validates the interior knots; `requested_num_basis` records the basis
  // count that was asked for before tied quantile knots were collapsed.
  SplineBasis(int order, const std::vector<Scalar>& interior_knots,
              Eigen::Index requested_num_basis = -1)
      : order_(order) {
    require(order >= 1 && order <= kMaxOrder, ErrorKind::kInvalidInput,
            "spline order out of range");
    for (std::size_t i = 0; i < interior_knots.size(); ++i) {
      const Scalar t = interior_knots[i];
      require(t > Scalar(0) && t < Scalar(1), ErrorKind::kInvalidInput,
              "interior knots must lie strictly inside (0, 1)");
      require(i == 0 || t > interior_knots[i - 1], ErrorKind::kInvalidInput,
              "interior knots must be strictly increasing");
    }
    const auto interior = static_cast<Eigen::Index>(interior_knots.size());
    knots_.resize(interior + 2 * order);
    knots_.head(order).setZero();
    for (Eigen::Index i = 0; i < interior; ++i) knots_[order + i] = interior_knots[i];
    knots_.tail(order).setOnes();
    requested_num_basis_ = requested_num_basis < 0 ? num_basis() : requested_num_basis;
  }

  int order() const { return order_; }
  int degree() const { return order_ - 1; }
  Eigen::Index num_basis() const { return knots_.size() - order_; }
  Eigen::Index requested_num_basis() const { return requested_num_basis_; }
  // Number of basis functions lost to collapsed duplicate quantile knots.
  Eigen::Index collapsed_knots() const { return requested_num_basis_ - num_basis(); }
  const VectorType& knots() const { return knots_; }
  VectorType interior_knots() const { return knots_.segment(order_, num_basis() - order_); }

  // Distinct knot values 0 = u_0 < ... < u_m = 1 delimiting the polynomial pieces.
  std::vector<Scalar> breakpoints() const {
    std::vector<Scalar> out{Scalar(0)};
    const VectorType inner = interior_knots();
    out.insert(out.end(), inner.data(), inner.data() + inner.size());
    out.push_back(Scalar(1));
    return out;
  }

  // Writes the `order()` possibly-nonzero basis values at x into `values`
  // and returns the index of the first of them. x is clamped to [0, 1]; at
  // x == 1 the last span is used (left limit) so the last basis owns the
  // right endpoint.
  Eigen::Index eval_nonzero(Scalar x, Eigen::Ref<VectorType> values) const {
    const int p = degree();
    const Eigen::Index i = span(x);
    x = std::clamp(x, Scalar(0), Scalar(1));
    if (x == Scalar(0) || x == Scalar(1)) {
      // clamped ends: exactly one function is nonzero there
      values.setZero();
      values[x == Scalar(0) ? 0 : p] = Scalar(1);
      return i - p;
    }
    // de Boor's triangular scheme; denominators are bounded below by the
    // (nonzero) width of span i.
    Scalar left[kMaxOrder], right[kMaxOrder];
    values[0] = Scalar(1);
    for (int j = 1; j <= p; ++j) {
      left[j] = x - knots_[i + 1 - j];
      right[j] = knots_[i + j] - x;
      Scalar saved(0);
      for (int r = 0; r < j; ++r) {
        const Scalar temp = values[r] / (right[r + 1] + left[j - r]);
        values[r] = saved + right[r + 1] * temp;
        saved = left[j - r] * temp;
      }
      values[j] = saved;
    }
    return i - p;
  }

  VectorType eval(Scalar x) const {
    VectorType out = VectorType::Zero(num_basis());
    VectorType local(order_);
    const Eigen::Index first = eval_nonzero(x, local);
    out.segment(first, order_) = local;
    return out;
  }

  // Index i of the knot span [t_i, t_{i+1}) containing clamped x.
  Eigen::Index span(Scalar x) const {
    const Eigen::Index last = num_basis() - 1;
    if (!(x < Scalar(1))) return last;
    if (!(x > Scalar(0))) return order_ - 1;
    const Scalar* first = knots_.data() + order_;
    const Scalar* end = knots_.data() + num_basis() + 1;
    return static_cast<Eigen::Index>(std::upper_bound(first, end, x) - knots_.data()) - 1;
  }

  // Exact integrals over [0, 1] of every basis function, by composite
  // Gauss-Legendre quadrature on each knot span with enough nodes to be exact
  // for polynomials of degree order - 1.
  VectorType integrals() const {
    VectorType out = VectorType::Zero(num_basis());
    const auto rule = gauss_legendre<Scalar>((order_ + 1) / 2);
    VectorType local(order_);
    const std::vector<Scalar> pieces = breakpoints();
    for (std::size_t s = 0; s + 1 < pieces.size(); ++s) {
      const Scalar half = (pieces[s + 1] - pieces[s]) / Scalar(2);
      const Scalar mid = (pieces[s + 1] + pieces[s]) / Scalar(2);
      for (Eigen::Index q = 0; q < rule.nodes.size(); ++q) {
        const Eigen::Index first = eval_nonzero(mid + half * rule.nodes[q], local);
        out.segment(first, order_) += rule.weights[q] * half * local;
      }
    }
    return out;
  }

  friend bool operator==(const SplineBasis& a, const SplineBasis& b) {
    return a.order_ == b.order_ && a.requested_num_basis_ == b.requested_num_basis_ &&
           a.knots_.size() == b.knots_.size() && a.knots_ == b.knots_;
  }

  static constexpr int kMaxOrder = 16;

 private:
  int order_ = kDefaultSplineOrder;
  Eigen::Index requested_num_basis_ = 0;
  VectorType knots_;
};

using SplineBasisd = SplineBasis<double>;

// K = round(2 n^(1/5)), rounding half away from zero, clamped below at the
// spline order so that the basis exists.
inline int choose_num_basis(std::int64_t n, int order = kDefaultSplineOrder) {
  require(n >= 1, ErrorKind::kInvalidInput, "choose_num_basis: n must be >= 1");
  const auto k = std::llround(2.0 * std::pow(static_cast<double>(n), 0.2));
  return std::max(static_cast<int>(k), order);
}

// Builds a clamped basis whose interior knots are the empirical quantiles of
// `values` at levels i / (K - order + 1), i = 1..K - order. Tied quantiles,
// and quantiles that land on the boundary, are collapsed with a warning.
template <typename Scalar>
SplineBasis<Scalar> build_basis(std::span<const Scalar> values, Eigen::Index num_basis,
                                int order = kDefaultSplineOrder) {
  require(!values.empty(), ErrorKind::kInvalidInput, "build_basis: no values");
  require(order >= 1 && order <= SplineBasis<Scalar>::kMaxOrder, ErrorKind::kInvalidInput,
          "build_basis: spline order out of range");
  require(num_basis >= order, ErrorKind::kInvalidInput,
          "build_basis: number of basis functions must be >= spline order");
  std::vector<Scalar> sorted(values.begin(), values.end());
  for (const Scalar v : sorted) {
    require(v >= Scalar(0) && v <= Scalar(1), ErrorKind::kDomain,
            "build_basis: value outside [0, 1]");
  }
  std::sort(sorted.begin(), sorted.end());

  const Eigen::Index interior = num_basis - order;
  std::vector<Scalar> knots;
  knots.reserve(static_cast<std::size_t>(interior));
  for (Eigen::Index i = 1; i <= interior; ++i) {
    const double level = static_cast<double>(i) / static_cast<double>(interior + 1);
    const Scalar q = sorted_quantile<Scalar>(sorted, level);
    if (q <= Scalar(0) || q >= Scalar(1)) continue;
    if (!knots.empty() && !(q > knots.back())) continue;
    knots.push_back(q);
  }
  SplineBasis<Scalar> basis(order, knots, num_basis);
  if (basis.collapsed_knots() > 0) {
    log_warning("collapsed " + std::to_string(basis.collapsed_knots()) +
                " tied quantile knot(s); effective basis count " +
                std::to_string(basis.num_basis()) + " instead of " + std::to_string(num_basis));
  }
  return basis;
}

template <typename Scalar>
Vector<Scalar> eval_basis(const SplineBasis<Scalar>& basis, Scalar x) {
  return basis.eval(x);
}

template <typename Scalar>
Vector<Scalar> basis_integrals(const SplineBasis<Scalar>& basis) {
  return basis.integrals();
}

// Dense n x K matrix of basis values, one row per entry of x.
template <typename Scalar, typename Derived>
Matrix<Scalar> basis_matrix(const SplineBasis<Scalar>& basis, const Eigen::MatrixBase<Derived>& x) {
  Matrix<Scalar> out = Matrix<Scalar>::Zero(x.size(), basis.num_basis());
  Vector<Scalar> local(basis.order());
  for (Eigen::Index r = 0; r < x.size(); ++r) {
    const Eigen::Index first = basis.eval_nonzero(x(r), local);
    out.row(r).segment(first, basis.order()) = local.transpose();
  }
  return out;
}

}  // namespace gamspline

#endif  // GAMSPLINE_SPLINES_HPP_
