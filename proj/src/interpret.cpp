#include "gamspline/interpret.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "gamspline/error.hpp"
#include "gamspline/text_io.hpp"

namespace gamspline {
namespace {

void check_spline_model(const FittedModel& model, Eigen::Index j) {
  require(model.spec.spline_enabled, ErrorKind::kUnsupportedOperation,
          "partial-effect curves need a spline model; this is a linear baseline");
  require(j >= 0 && j < model.spec.num_predictors(), ErrorKind::kInvalidInput,
          "predictor index out of range");
}

// Expands the K - 1 retained coefficients of predictor j to length K with a
// zero in the dropped slot.
Eigen::VectorXd full_coefficients(const FittedModel& model, Eigen::Index j) {
  const auto& basis = model.spec.bases[static_cast<std::size_t>(j)];
  const Eigen::Index drop = model.spec.dropped_index[static_cast<std::size_t>(j)];
  const Eigen::VectorXd& alpha = model.alpha[static_cast<std::size_t>(j)];
  Eigen::VectorXd full = Eigen::VectorXd::Zero(basis.num_basis());
  for (Eigen::Index k = 0, r = 0; k < basis.num_basis(); ++k) {
    if (k != drop) full[k] = alpha[r++];
  }
  return full;
}

std::string file_stem(Eigen::Index j, const std::string& name) {
  std::string safe = name;
  for (char& c : safe) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.') c = '_';
  }
  char prefix[32];
  std::snprintf(prefix, sizeof(prefix), "%03ld_", static_cast<long>(j));
  return std::string(prefix) + safe;
}

}  // namespace

Eigen::VectorXd default_curve_grid(Eigen::Index points) {
  require(points >= 2, ErrorKind::kInvalidInput, "curve grid needs >= 2 points");
  return Eigen::VectorXd::LinSpaced(points, 0.0, 1.0);
}

double centering_constant(const FittedModel& model, Eigen::Index j) {
  check_spline_model(model, j);
  const auto& basis = model.spec.bases[static_cast<std::size_t>(j)];
  return full_coefficients(model, j).dot(basis_integrals(basis));
}

double partial_effect(const FittedModel& model, Eigen::Index j, double x) {
  check_spline_model(model, j);
  const auto& basis = model.spec.bases[static_cast<std::size_t>(j)];
  return full_coefficients(model, j).dot(eval_basis(basis, x)) - centering_constant(model, j);
}

CurveTable entrywise_function(const FittedModel& model, Eigen::Index j,
                              const Eigen::VectorXd& grid_x) {
  check_spline_model(model, j);
  for (Eigen::Index i = 0; i < grid_x.size(); ++i) {
    require(grid_x[i] >= 0.0 && grid_x[i] <= 1.0 && (i == 0 || grid_x[i] > grid_x[i - 1]),
            ErrorKind::kInvalidInput, "curve grid must be strictly increasing within [0, 1]");
  }
  const auto& basis = model.spec.bases[static_cast<std::size_t>(j)];
  const Eigen::VectorXd coef = full_coefficients(model, j);
  CurveTable curve;
  curve.predictor_name = model.spec.predictor_names[static_cast<std::size_t>(j)];
  curve.grid_x = grid_x;
  curve.centering_constant = coef.dot(basis_integrals(basis));
  curve.partial_effect =
      (basis_matrix(basis, grid_x) * coef).array() - curve.centering_constant;
  if (static_cast<Eigen::Index>(model.spec.support.size()) > j) {
    curve.empirical_support = model.spec.support[static_cast<std::size_t>(j)];
  }
  return curve;
}

double centered_intercept(const FittedModel& model) {
  double nu = model.nu;
  for (Eigen::Index j = 0; j < model.spec.num_predictors(); ++j) nu += centering_constant(model, j);
  return nu;
}

std::string curve_csv(const CurveTable& curve) {
  std::string out = "x,partial_effect\n";
  for (Eigen::Index i = 0; i < curve.grid_x.size(); ++i) {
    out += format_double(curve.grid_x[i]);
    out += ',';
    out += format_double(curve.partial_effect[i]);
    out += '\n';
  }
  return out;
}

CurveTable parse_curve_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  require(static_cast<bool>(std::getline(in, line)) && trim(line) == "x,partial_effect",
          ErrorKind::kInvalidInput, "curve CSV must start with 'x,partial_effect'");
  std::vector<double> xs, ys;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    require(cells.size() == 2, ErrorKind::kInvalidInput, "curve CSV rows need two cells");
    xs.push_back(parse_double(cells[0]));
    ys.push_back(parse_double(cells[1]));
  }
  CurveTable curve;
  curve.grid_x = Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
  curve.partial_effect =
      Eigen::Map<const Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(ys.size()));
  return curve;
}

std::string curve_svg(const CurveTable& curve) {
  constexpr double kWidth = 640, kHeight = 400;
  constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 60;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  double lo = curve.partial_effect.size() ? curve.partial_effect.minCoeff() : 0.0;
  double hi = curve.partial_effect.size() ? curve.partial_effect.maxCoeff() : 0.0;
  if (hi - lo < 1e-9) {
    lo -= 1.0;
    hi += 1.0;
  } else {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  auto px = [&](double x) { return kLeft + x * plot_w; };
  auto py = [&](double y) { return kTop + (hi - y) / (hi - lo) * plot_h; };

  std::string out;
  char buf[256];
  auto emit = [&](const char* fmt, auto... args) {
    std::snprintf(buf, sizeof(buf), fmt, args...);
    out += buf;
  };
  emit("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
       "viewBox=\"0 0 %.0f %.0f\">\n",
       kWidth, kHeight, kWidth, kHeight);
  out += "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const SupportSummary& s = curve.empirical_support;
  if (s.q3 > s.q1) {
    emit("<rect x=\"%.3f\" y=\"%.3f\" width=\"%.3f\" height=\"%.3f\" fill=\"#e8e8e8\"/>\n",
         px(s.q1), kTop, px(s.q3) - px(s.q1), plot_h);
  }
  if (s.max > s.min) {
    for (const double edge : {s.min, s.max}) {
      emit("<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" stroke=\"#999\" "
           "stroke-dasharray=\"4 3\"/>\n",
           px(edge), kTop, px(edge), kTop + plot_h);
    }
  }
  if (lo < 0.0 && hi > 0.0) {
    emit("<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" stroke=\"#bbb\"/>\n", kLeft,
         py(0.0), kLeft + plot_w, py(0.0));
  }
  emit("<rect x=\"%.3f\" y=\"%.3f\" width=\"%.3f\" height=\"%.3f\" fill=\"none\" "
       "stroke=\"black\"/>\n",
       kLeft, kTop, plot_w, plot_h);
  for (int t = 0; t <= 4; ++t) {
    const double x = 0.25 * t;
    emit("<text x=\"%.3f\" y=\"%.3f\" font-size=\"11\" text-anchor=\"middle\">%.2f</text>\n",
         px(x), kTop + plot_h + 16, x);
    const double y = lo + (hi - lo) * 0.25 * t;
    emit("<text x=\"%.3f\" y=\"%.3f\" font-size=\"11\" text-anchor=\"end\">%.3g</text>\n",
         kLeft - 6, py(y) + 4, y);
  }
  out += "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"2\" points=\"";
  for (Eigen::Index i = 0; i < curve.grid_x.size(); ++i) {
    emit("%s%.3f,%.3f", i ? " " : "", px(curve.grid_x[i]), py(curve.partial_effect[i]));
  }
  out += "\"/>\n";
  emit("<text x=\"%.3f\" y=\"%.3f\" font-size=\"13\" text-anchor=\"middle\">Predictive Value</text>\n",
       kLeft + plot_w / 2, kHeight - 16);
  emit("<text x=\"16\" y=\"%.3f\" font-size=\"13\" text-anchor=\"middle\" "
       "transform=\"rotate(-90 16 %.3f)\">Partial Effect</text>\n",
       kTop + plot_h / 2, kTop + plot_h / 2);
  std::string title = curve.predictor_name;
  for (const auto& [from, to] : {std::pair{'&', "&amp;"}, std::pair{'<', "&lt;"}, std::pair{'>', "&gt;"}}) {
    std::string escaped;
    for (const char c : title) {
      if (c == from) escaped += to; else escaped += c;
    }
    title = escaped;
  }
  emit("<text x=\"%.3f\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">", kLeft + plot_w / 2);
  out += title + "</text>\n</svg>\n";
  return out;
}

std::vector<std::filesystem::path> export_curves(const FittedModel& model,
                                                 const std::filesystem::path& out_dir,
                                                 CurveFormat format,
                                                 const Eigen::VectorXd& grid_x) {
  require(model.spec.spline_enabled, ErrorKind::kUnsupportedOperation,
          "partial-effect curves need a spline model; this is a linear baseline");
  std::vector<std::filesystem::path> written;
  for (Eigen::Index j = 0; j < model.spec.num_predictors(); ++j) {
    const CurveTable curve = entrywise_function(model, j, grid_x);
    const std::string stem = file_stem(j, curve.predictor_name);
    if (format != CurveFormat::kSvg) {
      written.push_back(out_dir / (stem + ".csv"));
      write_file_atomic(written.back(), curve_csv(curve));
    }
    if (format != CurveFormat::kCsv) {
      written.push_back(out_dir / (stem + ".svg"));
      write_file_atomic(written.back(), curve_svg(curve));
    }
  }
  return written;
}

}  // namespace gamspline
