#ifndef GAMSPLINE_CLI_HPP_
#define GAMSPLINE_CLI_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gamspline {

// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitSuccess = 0,
  kExitUsage = 1,  // usage, I/O, load and schema errors
  kExitNotConverged = 2,
  kExitNumerical = 3,
};

// Effective settings of one command. Command-line flags override values from
// a JSON --config file, which override these defaults.
struct RunConfig {
  std::string command;
  std::optional<std::filesystem::path> train, valid, test, data, schema, model;
  double lambda = 1.0;
  std::vector<double> grid;  // default lambda grid when empty
  int order = 4;
  std::optional<int> num_basis;
  bool spline_enabled = true;
  std::uint64_t seed = 0;
  int bootstrap = 1000;
  std::optional<std::string> subgroup;
  std::filesystem::path out = ".";
  std::string format = "csv";
  std::string threshold_policy = "auto";  // auto | validation-f1 | fixed
  double threshold = 0.5;
  std::array<double, 3> split{0.6, 0.2, 0.2};
  int max_iter = 100;
  double tol = 1e-8;
  // simulate
  long n = 1000;
  std::vector<std::string> functions{"sine", "quadratic", "smooth-step", "zero"};
  int covariates = 3;
  double nu = -0.5;
  long rows_per_group = 1;
};

int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gamspline

#endif  // GAMSPLINE_CLI_HPP_
