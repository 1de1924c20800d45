#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "gamspline/cli.hpp"
#include "gamspline/text_io.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "gamspline");
  std::ostringstream out, err;
  const int code = gamspline::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& leaf) const { return (path / leaf).string(); }
};

long count_lines(const std::string& text) { return std::count(text.begin(), text.end(), '\n'); }

}  // namespace

TEST_CASE("simulate writes data, schema and manifest deterministically") {
  testutil::QuietLog quiet;
  TempDir dir("gamspline_cli_sim");
  REQUIRE(run({"simulate", "--n", "250", "--seed", "4", "--out", dir / "a"}).code == 0);
  REQUIRE(run({"simulate", "--n", "250", "--seed", "4", "--out", dir / "b"}).code == 0);
  const std::string a = gamspline::read_file(dir / "a/data.csv");
  CHECK(count_lines(a) == 251);
  CHECK(a == gamspline::read_file(dir / "b/data.csv"));
  CHECK(fs::exists(dir / "a/schema.json"));
  const std::string manifest = gamspline::read_file(dir / "a/manifest.json");
  CHECK(manifest.find("\"simulate\"") != std::string::npos);
  CHECK(manifest.find(dir.path.string()) == std::string::npos);
  REQUIRE(run({"simulate", "--n", "250", "--seed", "5", "--out", dir / "c"}).code == 0);
  CHECK(a != gamspline::read_file(dir / "c/data.csv"));
}

TEST_CASE("fit, tune, evaluate and curves") {
  testutil::QuietLog quiet;
  TempDir dir("gamspline_cli_pipeline");
  REQUIRE(run({"simulate", "--n", "1200", "--seed", "2", "--functions", "sine,zero", "--covariates",
               "2", "--out", dir / "sim"})
              .code == 0);
  const std::string data = dir / "sim/data.csv", schema = dir / "sim/schema.json";

  const Run fit = run({"fit", "--data", data, "--schema", schema, "--lambda", "1", "--out", dir / "fit"});
  CHECK(fit.code == 0);
  // 1200 * 0.6 training rows: K = round(2 * 720^0.2) = 7
  CHECK(fit.out.find("design width: 15") != std::string::npos);

  const Run lin = run({"fit", "--data", data, "--schema", schema, "--no-splines", "--out", dir / "lin"});
  CHECK(lin.code == 0);
  CHECK(lin.out.find("design width: 5") != std::string::npos);

  const Run tune = run({"tune", "--data", data, "--schema", schema, "--grid", "0.1,10", "--out", dir / "tune"});
  CHECK(tune.code == 0);
  CHECK(fs::exists(dir / "tune/tune.json"));

  const Run eval = run({"evaluate", "--model", dir / "tune/model.json", "--data", data, "--schema",
                        schema, "--bootstrap", "50", "--subgroup", "sex", "--out", dir / "eval"});
  CHECK(eval.code == 0);
  CHECK(eval.out.find("sex=female") != std::string::npos);
  CHECK(eval.out.find("sex=male") != std::string::npos);
  CHECK(gamspline::read_file(dir / "eval/metrics.json").find("\"subgroups\"") != std::string::npos);

  const Run curves = run({"curves", "--model", dir / "tune/model.json", "--format", "both", "--out", dir / "curves"});
  CHECK(curves.code == 0);
  CHECK(fs::exists(dir / "curves/000_p1.csv"));
  CHECK(fs::exists(dir / "curves/001_p2.svg"));
  CHECK(fs::exists(dir / "curves/index.json"));

  const Run bad = run({"curves", "--model", dir / "lin/model.json", "--out", dir / "nope"});
  CHECK(bad.code != 0);
  CHECK(bad.err.find("linear") != std::string::npos);
}

TEST_CASE("exit codes") {
  testutil::QuietLog quiet;
  TempDir dir("gamspline_cli_codes");
  CHECK(run({}).code == gamspline::kExitUsage);
  CHECK(run({"frobnicate"}).code == gamspline::kExitUsage);
  CHECK(run({"fit", "--lambda", "abc"}).code == gamspline::kExitUsage);
  CHECK(run({"fit", "--data", dir / "missing.csv", "--schema", dir / "missing.json"}).code ==
        gamspline::kExitUsage);
  CHECK(run({"simulate", "--functions", "cubic", "--out", dir / "x"}).code == gamspline::kExitUsage);
  CHECK(run({"--help"}).code == gamspline::kExitSuccess);
  REQUIRE(run({"simulate", "--n", "400", "--seed", "1", "--out", dir / "sim"}).code == 0);
  const Run capped = run({"fit", "--data", dir / "sim/data.csv", "--schema", dir / "sim/schema.json",
                          "--max-iter", "1", "--out", dir / "fit"});
  CHECK(capped.code == gamspline::kExitNotConverged);
}

TEST_CASE("config file and precedence") {
  testutil::QuietLog quiet;
  TempDir dir("gamspline_cli_config");
  fs::create_directories(dir.path);
  gamspline::write_file_atomic(dir / "cfg.json", R"({"n": 123, "seed": 8})");
  REQUIRE(run({"simulate", "--config", dir / "cfg.json", "--out", dir / "a"}).code == 0);
  CHECK(count_lines(gamspline::read_file(dir / "a/data.csv")) == 124);
  REQUIRE(run({"simulate", "--config", dir / "cfg.json", "--n", "50", "--out", dir / "b"}).code == 0);
  CHECK(count_lines(gamspline::read_file(dir / "b/data.csv")) == 51);
}
