#ifndef GAMSPLINE_SERIALIZE_HPP_
#define GAMSPLINE_SERIALIZE_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gamspline/fit.hpp"
#include "gamspline/metrics.hpp"
#include "gamspline/tune.hpp"

namespace gamspline {

inline constexpr int kModelFormatVersion = 1;

// Versioned model document: knots, dropped indices, standardization,
// support summaries, penalty, order, coefficients and fit diagnostics.
// Doubles are written in shortest round-trip form, so load(save(m)) == m.
nlohmann::json to_json(const FittedModel& model);
FittedModel model_from_json(const nlohmann::json& doc);

std::string model_json(const FittedModel& model);
FittedModel parse_model_json(std::string_view text);
void save_model(const FittedModel& model, const std::filesystem::path& path);
FittedModel load_model(const std::filesystem::path& path);

nlohmann::json to_json(const FitDiagnostics& diagnostics);
nlohmann::json to_json(const TuneResult& result);
nlohmann::json to_json(const MetricReport& report);

}  // namespace gamspline

#endif  // GAMSPLINE_SERIALIZE_HPP_
