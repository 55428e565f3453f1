#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "hyperfermi/bounds.hpp"
#include "hyperfermi/model.hpp"

namespace hyperfermi::cli {
namespace {

using json = nlohmann::json;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "hyperfermi");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string k3_path() { return std::string(HYPERFERMI_TEST_DATA) + "/k3.json"; }

TEST(Cli, ArborealDualityOnTriangle) {
  const auto r = invoke({"verify-arboreal", "--graph", k3_path(), "--trials", "50", "--seed", "7"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const json rep = json::parse(r.out);
  EXPECT_EQ(rep["command"], "verify-arboreal");
  ASSERT_EQ(rep["checks"].size(), 50u);
  for (const auto& c : rep["checks"]) {
    EXPECT_EQ(c["status"], "pass");
    EXPECT_EQ(c["lhs"], c["rhs"]);
  }
}

TEST(Cli, TwoPointExactMatchesSourceRoute) {
  const auto r = invoke({"two-point", "--lattice", "1d:6", "--m", "1", "--beta", "1/50", "--eps", "0", "--i", "0",
                         "--j", "5", "--mode", "exact"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const json rep = json::parse(r.out);
  Model<Rational> model(path_graph(6), Rational(1, 50), 1, true);
  EXPECT_EQ(rep["results"]["value"], to_string(model.two_point_from_sources(0, 5, 1)));
}

TEST(Cli, TwoPointFloatMode) {
  const auto r = invoke({"two-point", "--lattice", "1d:4", "--beta", "1/10", "--i", "0", "--j", "2", "--mode", "float"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const double v = json::parse(r.out)["results"]["value"];
  const double exact = to_double(Model<Rational>(path_graph(4), Rational(1, 10), 1).two_point(0, 2, 1));
  EXPECT_NEAR(v, exact, 1e-13);
}

TEST(Cli, BoundReport) {
  const auto r = invoke({"bound", "--class", "nn", "--beta", "1e-3", "--m", "2", "--d", "2", "--dist", "4"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const json rep = json::parse(r.out);
  const auto direct = nn_decay_bound(1e-3, 2, 2, 4);
  EXPECT_EQ(rep["results"]["bound"].get<double>(), direct.bound);
  EXPECT_TRUE(rep["results"]["convergent"].get<bool>());
  EXPECT_EQ(rep["inputs"]["class"], "nn");
  EXPECT_TRUE(rep["results"]["constants_used"].contains("C0"));
}

TEST(Cli, DivergentBoundIsReportedNotFailed) {
  const auto r = invoke({"bound", "--class", "nn", "--beta", "1/2", "--dist", "2"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const json rep = json::parse(r.out);
  EXPECT_FALSE(rep["results"]["convergent"].get<bool>());
  EXPECT_EQ(rep["results"]["bound"], "inf");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(invoke({"two-point", "--lattice", "1d:x", "--i", "0", "--j", "1"}).code, kConfigError);
  EXPECT_EQ(invoke({"two-point", "--graph", "/nonexistent.json", "--i", "0", "--j", "1"}).code, kConfigError);
  EXPECT_EQ(invoke({"two-point", "--lattice", "1d:3", "--beta", "1/0", "--i", "0", "--j", "1"}).code, kConfigError);
  EXPECT_EQ(invoke({"bound", "--class", "poly", "--a", "1"}).code, kConfigError);
  EXPECT_EQ(invoke({"frobnicate"}).code, kConfigError);
  EXPECT_EQ(invoke({"two-point", "--lattice", "1d:70", "--i", "0", "--j", "1"}).code, kCapacityError);
  // C_emp = 1 for m = 1, eps = 0, so a probe of 1/2 fails
  EXPECT_EQ(invoke({"constants", "--lattice", "1d:3", "--beta", "1/20", "--C", "0.5"}).code, kCheckFailed);
  EXPECT_EQ(invoke({"--help"}).code, kOk);
}

TEST(Cli, ReportsAreReproducible) {
  const std::vector<std::string> args = {"verify-polymer", "--lattice", "1d:4", "--m", "1", "--trials", "3",
                                         "--seed", "11"};
  const auto a = invoke(args), b = invoke(args);
  ASSERT_EQ(a.code, kOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  auto other = args;
  other.back() = "12";
  EXPECT_NE(invoke(other).out, a.out);

  auto timed = args;
  timed.push_back("--timing");
  const json t = json::parse(invoke(timed).out);
  EXPECT_TRUE(t.contains("timing"));
  EXPECT_FALSE(json::parse(a.out).contains("timing"));
}

TEST(Cli, ConstantsCsvAndOutFile) {
  const auto path = std::filesystem::temp_directory_path() / "hyperfermi_constants.csv";
  const auto r = invoke({"constants", "--lattice", "1d:4", "--m", "1,2", "--beta", "1/20", "--eps", "0,1/2",
                         "--extract", "--out", path.string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0].rfind("m,beta,eps,", 0), 0u);
  EXPECT_EQ(lines[1].rfind("1,1/20,0,15,1,1,1,0", 0), 0u);
  std::filesystem::remove(path);
}

TEST(Cli, NormsAndSingleSiteSuites) {
  const auto n = invoke({"verify-norms", "--lattice", "1d:4", "--m", "2", "--beta", "1/100"});
  ASSERT_EQ(n.code, kOk) << n.err;
  EXPECT_EQ(json::parse(n.out)["checks"].size(), 27u);
  const auto s = invoke({"verify-single-site", "--m-max", "3", "--r-m-max", "5", "--one-point-m-max", "3"});
  ASSERT_EQ(s.code, kOk) << s.err;
  for (const auto& c : json::parse(s.out)["checks"]) EXPECT_EQ(c["status"], "pass") << c["name"];
}

}  // namespace
}  // namespace hyperfermi::cli
