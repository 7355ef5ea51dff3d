#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "test_support.hpp"

namespace {

using nlohmann::json;

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout only
};

RunResult run_cli(const std::string& args) {
  const std::string command = std::string(EXPDIST_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult result;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buffer{};
  std::size_t n = 0;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
    result.output.append(buffer.data(), n);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string fixture(const std::string& name) { return testsupport::data_path(name); }

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path.string();
}

}  // namespace

TEST_CASE("fit command reproduces the published person-level fit or better") {
  const RunResult r =
      run_cli("fit " + fixture("nss63_rural_2006_07.csv") + " --unit person --family mixture");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.output);
  CHECK(j["family"] == "mixture");
  CHECK(j["chi2"].get<double>() <= 3.1909);
  CHECK(j["n_params"] == 5);
  CHECK(j["provenance"].contains("input_hash"));
  CHECK(j["provenance"].contains("kernels"));
}

TEST_CASE("gini command prints the table XI value") {
  const RunResult r = run_cli("gini " + fixture("nss63_rural_2006_07.csv") + " --unit person");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.output);
  CHECK(std::fabs(j["gini"].get<double>() - 28.45) <= 0.1);
}

TEST_CASE("frequency sum mismatches exit with code 1 and a clear message") {
  const std::string bad = temp_file("cli_bad_sum.csv",
                                    "lower,upper,class_mean,freq_households,freq_persons\n"
                                    "0,100,50,300,300\n100,200,150,300,300\n"
                                    "200,inf,300,300,300\n");
  const std::string command =
      std::string(EXPDIST_CLI_PATH) + " fit " + bad + " --unit person --family mixture 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string all;
  std::array<char, 4096> buffer{};
  std::size_t n = 0;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) all.append(buffer.data(), n);
  const int status = pclose(pipe);
  CHECK(WEXITSTATUS(status) == 1);
  CHECK(all.find("FrequencySumMismatch") != std::string::npos);
}

TEST_CASE("missing input files exit with the io code") {
  const RunResult r = run_cli("gini /no/such/file.csv --unit person");
  CHECK(r.exit_code == 3);
}

TEST_CASE("unknown family is an input error") {
  const RunResult r =
      run_cli("fit " + fixture("nss63_rural_2006_07.csv") + " --unit person --family gompertz");
  CHECK(r.exit_code == 1);
}

TEST_CASE("identical invocations produce byte-identical json") {
  const std::string args = "gof " + fixture("nss63_urban_2006_07.csv") +
                           " --unit household --family mixture --statistic ks"
                           " --replicates 200 --seed 77";
  const RunResult a = run_cli(args);
  const RunResult b = run_cli(args);
  REQUIRE(a.exit_code == 0);
  CHECK(a.output == b.output);

  const RunResult c = run_cli(args + "0");  // different seed changes the p-value path
  REQUIRE(c.exit_code == 0);
  CHECK(a.output != c.output);
}

TEST_CASE("weibull grid method through the cli") {
  const RunResult r = run_cli("fit " + fixture("nss63_urban_2006_07.csv") +
                              " --unit person --method weibull-grid");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.output);
  CHECK(std::fabs(j["params"]["k"].get<double>() - 2.1) <= 0.2);
  CHECK(std::fabs(j["params"]["lambda"].get<double>() - 1660.0) / 1660.0 <= 0.1);
}

TEST_CASE("trend params grid runs over the published series") {
  const RunResult r = run_cli("trend " + fixture("mixture_params_urban_household.csv") +
                              " --params --out /tmp/cli_trend.json");
  REQUIRE(r.exit_code == 0);
  std::ifstream in("/tmp/cli_trend.json");
  json j;
  in >> j;
  CHECK(j["trends"]["x_M"]["slope"].get<double>() > 0.0);
  CHECK(j["trends"]["x0"]["slope_p_value"].get<double>() < 0.001);
}

TEST_CASE("simulate command with overrides") {
  const RunResult r = run_cli("simulate --spec " + fixture("sim_baseline_urban2002.json") +
                              " --n 50000 --override nu=2.5 --top 0.1");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.output);
  CHECK(j["spec"]["params"]["nu"].get<double>() == 2.5);
  CHECK(j["gini_mean"].get<double>() > 15.0);
  CHECK(j["gini_mean"].get<double>() < 40.0);
  CHECK(j["top_shares"].contains("0.1"));
}

TEST_CASE("kde command writes a curve csv") {
  const std::string out = (std::filesystem::temp_directory_path() / "cli_kde.csv").string();
  const RunResult r = run_cli("kde " + fixture("nss63_rural_2006_07.csv") +
                              " --unit household --out " + out);
  REQUIRE(r.exit_code == 0);
  std::ifstream in(out);
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,density");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 512);
}

TEST_CASE("kde pooling with sector weights") {
  const std::string out = (std::filesystem::temp_directory_path() / "cli_kde_pool.csv").string();
  const RunResult r = run_cli("kde " + fixture("nss63_rural_2006_07.csv") + " " +
                              fixture("nss63_urban_2006_07.csv") + " --unit person --weights " +
                              fixture("example_sector_weights.csv") +
                              " --year 2006.5 --bandwidth 0.3 --out " + out);
  REQUIRE(r.exit_code == 0);
  CHECK(std::filesystem::exists(out));
}

TEST_CASE("agents command reports a hill exponent") {
  const RunResult r =
      run_cli("agents --n 50000 --kappa 1 --tau-mean 2 --ratio exponential:0.25 --hill 0.05");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.output);
  CHECK(j["hill_tail_exponent"].get<double>() > 0.0);
  CHECK(j["mean_consumption"].get<double>() >= 1.0);
}

TEST_CASE("gof accepts a published observed value") {
  const RunResult r = run_cli("gof " + fixture("nss63_urban_2006_07.csv") +
                              " --unit household --family double_pareto --statistic ks"
                              " --observed 0.42 --replicates 200");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.output);
  CHECK(j["observed_value"].get<double>() == 0.42);
  CHECK(j["p_value"].get<double>() < 0.02);
}
