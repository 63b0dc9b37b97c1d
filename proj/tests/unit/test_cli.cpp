#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "json.hpp"
#include "output.hpp"
#include "scenario.hpp"

namespace {

namespace fs = std::filesystem;
using namespace qmem::cli;

const fs::path kScenarios{QMEM_TEST_SCENARIO_DIR};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("qmem_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

RunContext context(const std::string& scenario, const fs::path& out) {
  RunContext ctx;
  ctx.scenario = load_scenario(kScenarios / scenario);
  ctx.out = out;
  return ctx;
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string("\"") + QMEM_CLI_BINARY + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Scenario, BundledScenariosParse) {
  for (const auto& entry : fs::directory_iterator(kScenarios)) {
    if (entry.path().filename() == "chain_sites.json") continue;
    EXPECT_NO_THROW(load_scenario(entry.path())) << entry.path();
  }
}

TEST(Scenario, SchemaErrors) {
  const fs::path base = kScenarios;
  EXPECT_THROW(parse_scenario("{", base), SchemaError);
  EXPECT_THROW(parse_scenario("[]", base), SchemaError);
  EXPECT_THROW(parse_scenario(R"({"potential": {"type": "bogus"}})", base), SchemaError);
  EXPECT_THROW(parse_scenario(R"({"potential": {"type": "discrete", "sites": []}, "extra": 1})", base),
               SchemaError);
  EXPECT_THROW(parse_scenario(R"({"potential": {"type": "discrete", "sites": [{"x": 0, "q": [1, 2]}]}})", base),
               SchemaError);
  EXPECT_THROW(parse_scenario(R"({"potential": {"type": "point-even", "g": -1}})", base), SchemaError);
  EXPECT_THROW(parse_scenario(R"({"potential": {"type": "point-even", "g": 1},
      "incoming": {"s_in": [1, 0], "parity": "odd",
                   "spectrum": {"type": "rectangular", "omega0": 1, "K": 2}}})",
                              base),
               SchemaError);
  EXPECT_THROW(parse_scenario(R"({"potential": {"type": "discrete", "sites": []},
      "incoming": {"s_in": [0, 0], "parity": "even",
                   "spectrum": {"type": "rectangular", "omega0": 1, "K": 2}}})",
                              base),
               SchemaError);
  EXPECT_THROW(parse_scenario(R"({"potential": {"type": "discrete", "file": "missing.json"}})", base),
               IoError);
}

TEST(Scenario, SpinorIsNormalizedAndSitesLoadFromFile) {
  const Scenario s = load_scenario(kScenarios / "point_even_rectangular.json");
  ASSERT_TRUE(s.incoming.has_value());
  EXPECT_TRUE(s.incoming->s_in.is_normalized());
  const Scenario a = load_scenario(kScenarios / "delta_chain.json");
  const Scenario b = load_scenario(kScenarios / "delta_chain_file.json");
  ASSERT_EQ(a.potential.sites.size(), b.potential.sites.size());
  for (std::size_t i = 0; i < a.potential.sites.size(); ++i) {
    EXPECT_EQ(a.potential.sites[i].x, b.potential.sites[i].x);
    EXPECT_EQ(a.potential.sites[i].q, b.potential.sites[i].q);
  }
}

TEST(Scenario, CommandRequirements) {
  const Scenario s = load_scenario(kScenarios / "free_space.json");
  EXPECT_THROW(s.require_incoming("impurity"), SchemaError);
  EXPECT_NO_THROW(s.require_grid("solve"));
}

TEST(Output, NumberFormatting) {
  EXPECT_EQ(format_double(0.0), "0");
  EXPECT_EQ(format_double(-0.0), "0");
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(2.0), "2");
  Report r;
  r["a"] = 1.5;
  r["b"] = {1, 2};
  EXPECT_EQ(to_csv_text(r), "key,value\na,1.5\nb[0],1\nb[1],2\n");
}

TEST(Commands, FreeSpaceIsTransparent) {
  const fs::path out = scratch("free");
  ASSERT_EQ(run_solve(context("free_space.json", out)), kOk);
  std::istringstream csv(slurp(out / "scattering.csv"));
  std::string line;
  std::getline(csv, line);
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    const std::string values = line.substr(line.find(',') + 1);
    EXPECT_EQ(values, "1,0,0,0,0,0,1,0,0,0,0,0,0,0,0,0,1,0,0,0,0,0,1,0,0,0,0,0,0,0,0,0");
  }
  EXPECT_EQ(rows, 9);
}

TEST(Commands, ImpurityAgreesWithAnalytic) {
  const fs::path out = scratch("agree");
  ASSERT_EQ(run_impurity(context("point_even_rectangular.json", out)), kOk);
  ASSERT_EQ(run_analytic(context("point_even_rectangular.json", out)), kOk);
  const auto imp = nlohmann::json::parse(slurp(out / "impurity.json"));
  const auto ana = nlohmann::json::parse(slurp(out / "analytic.json"));
  EXPECT_NEAR(imp["imp"].get<double>(), ana["imp"].get<double>(), 1e-6);
  EXPECT_LT(ana["route_disagreement"].get<double>(), 1e-9);
  EXPECT_NEAR(ana["rectangular"]["imp_formula"].get<double>(), 0.074298776376163907648, 1e-13);
}

TEST(Commands, CsvFormatWritesCsvReport) {
  const fs::path out = scratch("csv");
  RunContext ctx = context("point_odd_rectangular.json", out);
  ctx.format = Format::Csv;
  ASSERT_EQ(run_impurity(ctx), kOk);
  EXPECT_TRUE(fs::exists(out / "impurity.csv"));
  EXPECT_FALSE(fs::exists(out / "impurity.json"));
}

TEST(Commands, OutputIsDeterministic) {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  RunContext ca = context("point_even_rectangular.json", a);
  RunContext cb = context("point_even_rectangular.json", b);
  cb.threads = 3;
  for (auto* cmd : {&run_solve, &run_impurity, &run_analytic, &run_optimize}) {
    ASSERT_EQ((*cmd)(ca), kOk);
    ASSERT_EQ((*cmd)(cb), kOk);
  }
  for (const auto& entry : fs::directory_iterator(a)) {
    EXPECT_EQ(slurp(entry.path()), slurp(b / entry.path().filename())) << entry.path().filename();
  }
}

TEST(Binary, ExitCodes) {
  const std::string out = scratch("bin").string();
  EXPECT_EQ(run_binary("--help"), 0);
  EXPECT_EQ(run_binary(""), kUsage);
  EXPECT_EQ(run_binary("frobnicate"), kUsage);
  EXPECT_EQ(run_binary("impurity --scenario /nonexistent/s.json --out " + out), kIo);
  EXPECT_EQ(run_binary("impurity --scenario \"" + (kScenarios / "free_space.json").string() +
                       "\" --out " + out),
            kSchema);
  EXPECT_EQ(run_binary("impurity --scenario \"" + (kScenarios / "point_even_rectangular.json").string() +
                       "\" --out " + out),
            kOk);
}

}  // namespace
