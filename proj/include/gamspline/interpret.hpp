#ifndef GAMSPLINE_INTERPRET_HPP_
#define GAMSPLINE_INTERPRET_HPP_

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gamspline/design.hpp"
#include "gamspline/fit.hpp"

namespace gamspline {

// Centered partial-effect curve of one predictor on a grid over [0, 1].
struct CurveTable {
  std::string predictor_name;
  Eigen::VectorXd grid_x;
  Eigen::VectorXd partial_effect;
  double centering_constant = 0.0;
  SupportSummary empirical_support;
};

Eigen::VectorXd default_curve_grid(Eigen::Index points = 200);

// sum_k alpha_{j,k} * integral_0^1 b_{j,k}, the constant removed from predictor j.
double centering_constant(const FittedModel& model, Eigen::Index j);

// f_j(x) = sum_k alpha_{j,k} b_{j,k}(x) - centering_constant(j). Integrates
// to zero over [0, 1].
double partial_effect(const FittedModel& model, Eigen::Index j, double x);

// Throws kUnsupportedOperation for linear-baseline models.
CurveTable entrywise_function(const FittedModel& model, Eigen::Index j,
                              const Eigen::VectorXd& grid_x = default_curve_grid());

// Intercept after moving every centering constant into it:
// nu + sum_j centering_constant(j).
double centered_intercept(const FittedModel& model);

// `x,partial_effect` CSV with round-trip decimal floats.
std::string curve_csv(const CurveTable& curve);
CurveTable parse_curve_csv(std::string_view text);

// Static SVG line plot with the training support's interquartile range shaded.
std::string curve_svg(const CurveTable& curve);

enum class CurveFormat { kCsv, kSvg, kBoth };

// Writes one file per predictor and format into `out_dir`; returns the paths
// written, in predictor order.
std::vector<std::filesystem::path> export_curves(const FittedModel& model,
                                                 const std::filesystem::path& out_dir,
                                                 CurveFormat format = CurveFormat::kCsv,
                                                 const Eigen::VectorXd& grid_x = default_curve_grid());

}  // namespace gamspline

#endif  // GAMSPLINE_INTERPRET_HPP_
