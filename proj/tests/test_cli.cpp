#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "redpath/cli.hpp"

using namespace redpath;

namespace {

struct Result {
  int status;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "redpath");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream l(line);
    std::string cell;
    while (std::getline(l, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("redpath_test_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("parse helpers") {
  CHECK(parse_grid("0:1:0.25") == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
  CHECK(parse_grid("0:0.3:0.1").size() == 4);
  CHECK_THROWS_AS(parse_grid("0:1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid("0:1:0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid("1:0:0.1"), std::invalid_argument);
  CHECK(parse_real_list("1,2.5,-3") == std::vector<double>{1, 2.5, -3});
  CHECK_THROWS_AS(parse_real_list("1,x"), std::invalid_argument);
}

TEST_CASE("exact") {
  const auto r = run({"exact", "--d", "2", "--n", "2000", "--every", "1000"});
  CHECK(r.status == 0);
  const auto rows = csv(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"n", "EL", "VarL", "ET", "VarT", "PL0"});
  CHECK(rows[2][0] == "2000");
  CHECK(std::abs(std::stod(rows[2][3]) - (2000.0 / 3 - 1.0 / 6)) < 1e-6);
  CHECK(std::abs(std::stod(rows[2][1]) - 1000.75) < 1e-6);

  const auto law = csv(run({"exact", "--n", "2", "--law"}).out);
  CHECK(law[0] == std::vector<std::string>{"value", "P_L", "P_T"});
  CHECK(law[1] == std::vector<std::string>{"0", "0.25", "0.5"});
  CHECK(law[3] == std::vector<std::string>{"2", "0.75", "0"});

  const auto w = csv(run({"exact", "--n", "5000", "--w", "2"}).out);
  CHECK(std::abs(std::stod(w[1][3]) - 1.625) < 1e-2);
  CHECK(w[1][4] == "1.625");

  const auto th = csv(run({"exact", "--n", "2", "--theta", "0"}).out);
  CHECK(th[1][2] == "1");

  const auto j = nlohmann::json::parse(run({"exact", "--n", "3", "--format", "json"}).out);
  CHECK(j["command"] == "exact");
  CHECK(j["columns"].size() == 6);
  CHECK(j["rows"].size() == 3);
  CHECK(j["rows"][2]["n"] == 3);
}

TEST_CASE("enumerate") {
  const auto r = run({"enumerate", "--d", "2", "--n", "2"});
  CHECK(r.status == 0);
  const auto rows = csv(r.out);
  CHECK(rows[0] == std::vector<std::string>{"L", "T", "D", "R_prev", "count"});
  long total = 0, empty = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    total += std::stol(rows[i][4]);
    if (rows[i][0] == "0") empty += std::stol(rows[i][4]);
  }
  CHECK(total == 16);
  CHECK(empty == 4);

  const auto big = run({"enumerate", "--d", "2", "--n", "20"});
  CHECK(big.status == kExitUsage);
  CHECK(big.err.find("exceeds the limit") != std::string::npos);
  CHECK(big.out.empty());
}

TEST_CASE("rate") {
  const auto r = run({"rate", "--d", "2", "--which", "T", "--x", "0.3333"});
  CHECK(r.status == 0);
  const auto rows = csv(r.out);
  CHECK(rows[0] == std::vector<std::string>{"x", "rate", "theta", "boundary"});
  CHECK(std::stod(rows[1][1]) <= 1e-6);

  const auto g = csv(run({"rate", "--which", "L", "--grid", "0:1:0.1"}).out);
  CHECK(g.size() == 12);
  // x = 1 is the edge of the domain of I_L, where the rate is log(4/3).
  CHECK(std::abs(std::stod(g[11][1]) - std::log(4.0 / 3)) < 1e-9);
  CHECK(csv(run({"rate", "--which", "T", "--x", "1"}).out)[1][1] == "inf");
  CHECK(run({"rate", "--which", "Q", "--x", "0.1"}).status == kExitUsage);
  CHECK(run({"rate", "--x", "0.1", "--grid", "0:1:0.1"}).status == kExitUsage);
  CHECK(run({"rate"}).status == kExitUsage);
}

TEST_CASE("simulate is reproducible and thread independent") {
  const auto a = run({"simulate", "--n", "200", "--replicates", "600", "--seed", "5", "--threads", "1"});
  const auto b = run({"simulate", "--n", "200", "--replicates", "600", "--seed", "5", "--threads", "3"});
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
  const auto rows = csv(a.out);
  CHECK(rows[0].size() == 14);
  CHECK(rows.back()[0] == "200");
  CHECK(run({"simulate", "--n", "200", "--replicates", "600", "--seed", "6"}).out != a.out);

  const auto cp = csv(run({"simulate", "--n", "10", "--checkpoints", "3,10", "--replicates", "5"}).out);
  CHECK(cp.size() == 3);
  CHECK(cp[1][0] == "3");
  CHECK(run({"simulate", "--n", "10", "--checkpoints", "11"}).status == kExitUsage);
}

TEST_CASE("clt and invariance outputs") {
  const auto c = csv(run({"clt", "--n", "400", "--replicates", "2000", "--seed", "2"}).out);
  REQUIRE(c.size() == 3);
  CHECK(c[0] == std::vector<std::string>{"observable", "n", "replicates", "mean_z", "var_z", "ks", "p_value"});
  CHECK(c[1][0] == "T");
  CHECK(c[2][0] == "L");
  CHECK(std::stod(c[1][5]) < 0.1);

  const auto paths = temp_path("paths.csv");
  const auto inv = csv(run({"invariance", "--n", "400", "--m", "20", "--replicates", "300", "--paths", paths}).out);
  REQUIRE(inv.size() == 5);
  CHECK(inv[1][0] == "var_W1");
  CHECK(inv[4][0] == "brownian_mean_sup");
  const auto p = csv(slurp(paths));
  CHECK(p.size() == 301);
  CHECK(p[0].size() == 23);
  std::remove(paths.c_str());
  CHECK(run({"invariance", "--n", "10", "--m", "20", "--replicates", "5"}).status == kExitUsage);
}

TEST_CASE("signature round trip through files") {
  const auto sig = temp_path("sig.json");
  CHECK(run({"sig-compute", "--d", "2", "--depth", "3", "--path", "2:1,3:2", "--out", sig}).status == 0);
  const auto j = nlohmann::json::parse(slurp(sig));
  CHECK(j["coeffs"]["1 1 2"] == 6.0);
  const auto r = run({"sig-invert", "--in", sig});
  CHECK(r.status == 0);
  CHECK(r.out == "2:1,3:2\n");

  // Depth 2 cannot carry a two-segment shape.
  CHECK(run({"sig-compute", "--d", "2", "--depth", "2", "--path", "2:1,3:2", "--out", sig}).status == 0);
  const auto shallow = run({"sig-invert", "--in", sig});
  CHECK(shallow.status == kExitNumeric);
  CHECK(!shallow.err.empty());
  std::remove(sig.c_str());

  CHECK(run({"sig-compute", "--d", "2", "--path", "2:3"}).status == kExitUsage);
  CHECK(run({"sig-invert", "--in", "/nonexistent/sig.json"}).status == kExitUsage);
  CHECK(run({"sig-compute", "--d", "2", "--path", "1:1", "--out", "/nonexistent/dir/x.json"}).status == kExitUsage);
}

TEST_CASE("usage errors") {
  CHECK(run({}).status == kExitUsage);
  CHECK(run({"bogus"}).status == kExitUsage);
  CHECK(run({"exact", "--n", "10", "--bogus"}).status == kExitUsage);
  CHECK(run({"exact", "--d", "1", "--n", "10"}).status == kExitUsage);
  CHECK(run({"exact", "--n", "10", "--w", "-1"}).status == kExitUsage);
  CHECK(run({"exact", "--n", "abc"}).status == kExitUsage);
  CHECK(run({"exact", "--n", "10", "--format", "xml"}).status == kExitUsage);
  const auto help = run({"--help"});
  CHECK(help.status == 0);
  CHECK(help.out.find("sig-invert") != std::string::npos);
}
