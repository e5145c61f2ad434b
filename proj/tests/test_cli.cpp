#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "flagcurv/cli.hpp"
#include "support.hpp"

using namespace flagcurv;
using namespace flagcurv::cli;
using namespace flagcurv::testing;
using json = nlohmann::json;

namespace {

const char* kSaddle = R"({
  "zermelo": {"h": [[1,0,0],[0,1,0],[0,0,1]], "W": [0.1,0.2,0.3]},
  "immersion": "saddle", "samples": 200, "seed": 7})";

const char* kCylinder = R"({
  "zermelo": {"h": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]], "W": [0.1,0.2,0.3,0.05]},
  "immersion": "cylinder-graph", "samples": 16, "flagpoles": 20, "seed": 3})";

const char* kQuadric = R"({
  "zermelo": {"h": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]], "W": [0.1,0.2,0.3,0.05]},
  "immersion": "quadric-r4", "samples": 32, "flagpoles": 1, "point": [0.3,-0.2,0.1], "seed": 7})";

json strip_runtime(json j) {
  if (j.contains("summary")) j["summary"].erase("runtime_ms");
  return j;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    out.push_back(cells);
  }
  return out;
}

class ScopedEnv {
 public:
  ScopedEnv(const char* name, const char* value) : name_(name) {
    if (const char* old = std::getenv(name)) old_ = old;
    setenv(name, value, 1);
  }
  ~ScopedEnv() {
    if (old_.empty()) unsetenv(name_);
    else setenv(name_, old_.c_str(), 1);
  }

 private:
  const char* name_;
  std::string old_;
};

}  // namespace

TEST(Cli, ConvertExample) {
  const RunResult res = run(parse_config(R"({"randers": {"g": [[1,0],[0,1]], "B": [0.5,0]}})", Mode::Convert));
  EXPECT_EQ(res.exit_code, kExitOk);
  const json rep = json::parse(res.report);
  const auto h = rep["zermelo"]["h"];
  const auto W = rep["zermelo"]["W"];
  EXPECT_NEAR(h[0][0].get<double>(), 0.5625, 5e-7);
  EXPECT_NEAR(h[0][1].get<double>(), 0.0, 5e-7);
  EXPECT_NEAR(h[1][1].get<double>(), 0.75, 5e-7);
  EXPECT_NEAR(W[0].get<double>(), -0.666667, 5e-7);
  EXPECT_NEAR(W[1].get<double>(), 0.0, 5e-7);
}

TEST(Cli, ConvertRoundTrip) {
  SplitMix64 rng(81);
  const ZermeloData Z = random_zermelo(3, rng);
  json cfg;
  cfg["zermelo"] = {{"h", json::array()}, {"W", json::array()}};
  for (int i = 0; i < 3; ++i) {
    cfg["zermelo"]["W"].push_back(Z.W[i]);
    json row = json::array();
    for (int j = 0; j < 3; ++j) row.push_back(Z.h(i, j));
    cfg["zermelo"]["h"].push_back(row);
  }
  const json first = json::parse(run(parse_config(cfg.dump(), Mode::Convert)).report);
  const json back = json::parse(run(parse_config(json{{"randers", first["randers"]}}.dump(), Mode::Convert)).report);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(back["zermelo"]["W"][i].get<double>(), Z.W[i], 1e-12);
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(back["zermelo"]["h"][i][j].get<double>(), Z.h(i, j), 1e-12);
  }
}

TEST(Cli, EvalMatchesLibrary) {
  const char* text = R"({
    "zermelo": {"h": [[2,0.5,0],[0.5,1,0],[0,0,1]], "W": [0.2,-0.1,0.3]},
    "eval": {"v": [1,0.5,-0.2], "vectors": [[0,1,0],[1,0,1],[0.3,0.2,-1]]}})";
  const RunConfig cfg = parse_config(text, Mode::Eval);
  const json out = json::parse(run(cfg).report)["result"];
  const ZermeloData& Z = *cfg.zermelo;
  const Vec v = vec({1, 0.5, -0.2});
  EXPECT_DOUBLE_EQ(out["F"].get<double>(), zermelo_norm(Z, v));
  EXPECT_NEAR(out["randers_norm"].get<double>(), zermelo_norm(Z, v), 1e-12);
  EXPECT_DOUBLE_EQ(out["phi"].get<double>(), phi(Z, v));
  EXPECT_DOUBLE_EQ(out["g_v(a,b)"].get<double>(), fundamental_tensor(Z, v, vec({0, 1, 0}), vec({1, 0, 1})));
  EXPECT_DOUBLE_EQ(out["C_v(a,b,c)"].get<double>(),
                   cartan_tensor_full(Z, v, vec({0, 1, 0}), vec({1, 0, 1}), vec({0.3, 0.2, -1})));
  EXPECT_EQ(out["g_v"].size(), 3u);
}

TEST(Cli, VerifySaddle) {
  const RunResult res = run(parse_config(kSaddle, Mode::Verify));
  EXPECT_EQ(res.exit_code, kExitOk);
  const json rep = json::parse(res.report);
  EXPECT_EQ(rep["verdict"], "pass");
  EXPECT_EQ(rep["rows"].size(), 200u);
  double worst = 0.0;
  for (const auto& row : rep["rows"]) worst = std::max(worst, row["abs_diff"].get<double>());
  EXPECT_EQ(rep["summary"]["max_abs_diff"].get<double>(), worst);
  EXPECT_LT(worst, 1e-5);
}

TEST(Cli, VerifyFailsWhenToleranceIsTooTight) {
  RunConfig cfg = parse_config(kSaddle, Mode::Verify);
  cfg.samples = 5;
  cfg.tolerances.oracle = 1e-14;
  const RunResult res = run(cfg);
  EXPECT_EQ(res.exit_code, kExitVerdictFail);
  EXPECT_EQ(json::parse(res.report)["verdict"], "fail");
}

TEST(Cli, VerifyIndicatrixRunsAllChecks) {
  const char* text = R"({
    "zermelo": {"h": [[1,0,0],[0,1,0],[0,0,1]], "W": [0.5,0,0]},
    "immersion": "indicatrix", "samples": 10, "seed": 2})";
  const json rep = json::parse(run(parse_config(text, Mode::Verify)).report);
  ASSERT_EQ(rep["checks"].size(), 3u);
  for (const auto& c : rep["checks"]) EXPECT_TRUE(c["pass"].get<bool>()) << c.dump();
}

TEST(Cli, ScalarCheckVerdicts) {
  const RunResult cyl = run(parse_config(kCylinder, Mode::ScalarCheck));
  EXPECT_EQ(cyl.exit_code, kExitOk);
  const json rep = json::parse(cyl.report);
  EXPECT_EQ(rep["rows"].size(), 20u);
  for (const auto& row : rep["rows"]) EXPECT_TRUE(row["verdict"].get<bool>());

  const RunResult quad = run(parse_config(kQuadric, Mode::ScalarCheck));
  EXPECT_EQ(quad.exit_code, kExitVerdictFail);
  EXPECT_GT(json::parse(quad.report)["rows"][0]["spread"].get<double>(), 1e-3);
}

TEST(Cli, DeterministicAcrossThreadCounts) {
  RunConfig cfg = parse_config(kSaddle, Mode::Verify);
  cfg.samples = 24;
  std::string one, many;
  {
    ScopedEnv env("FLAG_TOOL_THREADS", "1");
    one = run(cfg).report;
  }
  {
    ScopedEnv env("FLAG_TOOL_THREADS", "4");
    many = run(cfg).report;
  }
  EXPECT_EQ(strip_runtime(json::parse(one)).dump(2), strip_runtime(json::parse(many)).dump(2));
  EXPECT_EQ(strip_runtime(json::parse(one)).dump(2), strip_runtime(json::parse(run(cfg).report)).dump(2));
}

TEST(Cli, CsvAndJsonEncodeTheSameRows) {
  RunConfig cfg = parse_config(kSaddle, Mode::Curvature);
  cfg.samples = 12;
  const json rep = json::parse(run(cfg).report);
  cfg.format = Format::Csv;
  const auto csv = parse_csv(run(cfg).report);
  ASSERT_EQ(csv.size(), 13u);
  const std::vector<std::string> header = {"x0", "x1", "v0", "v1", "u0", "u1", "K_closed",
                                           "K_oracle", "abs_diff", "K_h", "phi", "F_v"};
  EXPECT_EQ(csv[0], header);
  for (size_t r = 0; r < 12; ++r) {
    const json& row = rep["rows"][r];
    const auto& cells = csv[r + 1];
    ASSERT_EQ(cells.size(), header.size());
    for (int i = 0; i < 2; ++i) {
      EXPECT_EQ(std::stod(cells[static_cast<size_t>(i)]), row["x"][i].get<double>());
      EXPECT_EQ(std::stod(cells[static_cast<size_t>(2 + i)]), row["v"][i].get<double>());
      EXPECT_EQ(std::stod(cells[static_cast<size_t>(4 + i)]), row["u"][i].get<double>());
    }
    for (size_t c = 6; c < header.size(); ++c) {
      EXPECT_EQ(std::stod(cells[c]), row[header[c]].get<double>()) << header[c];
    }
  }
}

TEST(Cli, CurvatureWithoutOracleLeavesColumnsEmpty) {
  RunConfig cfg = parse_config(kSaddle, Mode::Curvature);
  cfg.samples = 3;
  cfg.oracle = false;
  const json rep = json::parse(run(cfg).report);
  EXPECT_TRUE(rep["rows"][0]["K_oracle"].is_null());
  EXPECT_TRUE(rep["summary"]["max_abs_diff"].is_null());
  EXPECT_TRUE(rep["rows"][0].contains("h_N_W"));
}

TEST(Cli, RandersConfigIsAccepted) {
  const char* text = R"({"randers": {"g": [[1,0,0],[0,1,0],[0,0,1]], "B": [0.1,0,0.2]},
                         "immersion": {"preset": "sphere", "params": [2]}, "samples": 4})";
  const RunConfig cfg = parse_config(text, Mode::Curvature);
  EXPECT_EQ(cfg.immersion, "sphere{2}");
  EXPECT_EQ(run(cfg).exit_code, kExitOk);
}

TEST(Cli, ConfigErrors) {
  const char* twice = R"({"zermelo": {"h": [[1]], "W": [0]}, "randers": {"g": [[1]], "B": [0]}})";
  EXPECT_THROW_KIND(parse_config(twice, Mode::Convert), ConfigError);
  EXPECT_THROW_KIND(parse_config(R"({"immersion": "saddle"})", Mode::Curvature), ConfigError);
  EXPECT_THROW_KIND(parse_config("{\"zermelo\": ", Mode::Convert), ConfigError);
  EXPECT_THROW_KIND(parse_config(R"({"zermelo": {"h": [[1,0],[0]], "W": [0,0]}})", Mode::Convert), ConfigError);
  EXPECT_THROW_KIND(parse_config(R"({"zermelo": {"h": [[1,0],[0,1]], "W": [2,0]}})", Mode::Convert), ConfigError);
  EXPECT_THROW_KIND(parse_config(R"({"zermelo": {"h": [[1,0],[0,1]], "W": ["a",0]}})", Mode::Convert),
                    ConfigError);
  const char* no_preset = R"({"zermelo": {"h": [[1,0,0],[0,1,0],[0,0,1]], "W": [0,0,0]}})";
  EXPECT_THROW_KIND(parse_config(no_preset, Mode::Verify), ConfigError);
  const char* bad_preset =
      R"({"zermelo": {"h": [[1,0,0],[0,1,0],[0,0,1]], "W": [0,0,0]}, "immersion": "quadric-r4"})";
  EXPECT_THROW_KIND(parse_config(bad_preset, Mode::Verify), ConfigError);
  const char* zero =
      R"({"zermelo": {"h": [[1,0,0],[0,1,0],[0,0,1]], "W": [0,0,0]}, "immersion": "saddle", "samples": 0})";
  EXPECT_THROW_KIND(parse_config(zero, Mode::Verify), ConfigError);
  const char* wrong_mode = R"({"mode": "eval", "zermelo": {"h": [[1]], "W": [0]}})";
  EXPECT_THROW_KIND(parse_config(wrong_mode, Mode::Convert), ConfigError);
  EXPECT_THROW_KIND(parse_mode("plot"), ConfigError);

  RunConfig cfg = parse_config(kSaddle, Mode::Verify);
  cfg.samples = 0;
  EXPECT_THROW_KIND(run(cfg), ConfigError);
  {
    ScopedEnv env("FLAG_TOOL_THREADS", "many");
    EXPECT_THROW_KIND(thread_count(), ConfigError);
  }
}

TEST(Cli, CommandLineExitCodes) {
  const std::string dir = ::testing::TempDir();
  const std::string cfg_path = dir + "flagcurv_cli_cfg.json";
  const std::string out_path = dir + "flagcurv_cli_out.csv";
  std::ofstream(cfg_path) << kSaddle;

  auto call = [](std::vector<std::string> args) {
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return run_command_line(static_cast<int>(argv.size()), argv.data());
  };
  EXPECT_EQ(call({"flagcurv", "verify", "--config", cfg_path, "--samples", "3", "--seed", "11",
                  "--format", "csv", "--out", out_path}),
            kExitOk);
  std::ifstream in(out_path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(parse_csv(ss.str()).size(), 4u);

  EXPECT_EQ(call({"flagcurv", "verify"}), kExitInvalidInput);
  EXPECT_EQ(call({"flagcurv", "plot", "--config", cfg_path}), kExitInvalidInput);
  EXPECT_EQ(call({"flagcurv", "verify", "--config", dir + "does-not-exist.json"}), kExitInvalidInput);
  EXPECT_EQ(call({"flagcurv", "verify", "--config", cfg_path, "--format", "xml"}), kExitInvalidInput);
  EXPECT_EQ(call({"flagcurv", "convert", "--config", cfg_path, "--format", "csv"}), kExitInvalidInput);
  std::remove(cfg_path.c_str());
  std::remove(out_path.c_str());
}
