#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "reelab/closedform.hpp"
#include "reelab/commands.hpp"

using namespace reelab;
using nlohmann::json;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "reelab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("measure on symmetric states") {
  const auto w = run({"measure", "--n", "3", "--k", "2"});
  REQUIRE(w.status == 0);
  const auto j = json::parse(w.out);
  CHECK(j["measures"]["E_R"]["value"].get<double>() == doctest::Approx(2 * std::log2(1.5)));
  CHECK(j["measures"]["E_R"]["method"] == "closed-form");

  const auto mix = run({"measure", "--n", "3", "--k", "0", "--k2", "1", "--s", "0.4", "--skip-numeric"});
  REQUIRE(mix.status == 0);
  const auto m = json::parse(mix.out);
  CHECK(m["measures"]["E_R"]["value"].get<double>() == doctest::Approx(ree_two_component(3, 0, 1, 0.4)));

  const auto ab = run({"measure", "--kvec", "2,0,0,1", "--kvec2", "1,1,1,0", "--s", "0.5", "--skip-numeric"});
  REQUIRE(ab.status == 0);
  CHECK(json::parse(ab.out)["measures"]["E_R"]["value"].get<double>() ==
        doctest::Approx(std::log2(9.0) - 1.5).epsilon(1e-9));
}

TEST_CASE("measure on a state file") {
  const std::string path = "reelab_cli_state.json";
  {
    std::ofstream f(path);
    f << R"({"party_dims":[2,2],"matrix":[0.25,0,0,0, 0,0.25,0,0, 0,0,0.25,0, 0,0,0,0.25]})";
  }
  const auto r = run({"measure", "--state", path, "--max-iter", "50"});
  std::remove(path.c_str());
  REQUIRE(r.status == 0);
  const auto j = json::parse(r.out)["measures"];
  CHECK(j["E_R_numeric"]["value"].get<double>() == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(j["entropy"]["value"].get<double>() == doctest::Approx(2.0));
  // The geometric measure of I/4 is -log2(1/4).
  CHECK(j["G_numeric"]["value"].get<double>() == doctest::Approx(2.0));
}

TEST_CASE("figure CSV") {
  const auto r = run({"figure", "er3", "--grid", "2", "--skip-numeric", "--format", "csv"});
  REQUIRE(r.status == 0);
  const auto ls = lines(r.out);
  REQUIRE(!ls.empty());
  CHECK(ls[0] == "panel,s,F,coF,E_R_numeric");
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const auto s = ls[i].substr(ls[i].find(',') + 1);
    CHECK((s.rfind("0,", 0) == 0 || s.rfind("1,", 0) == 0));
  }
  CHECK(ls.size() == 1 + 2 * 3);
}

TEST_CASE("trace-down") {
  const auto r = run({"trace-down", "--n", "4", "--k", "0"});
  REQUIRE(r.status == 0);
  const auto ls = lines(r.out);
  CHECK(ls[0] == "parties,state,E_R,method");
  CHECK(ls.size() == 4);
  for (std::size_t i = 1; i < ls.size(); ++i) CHECK(ls[i].find(",0,") != std::string::npos);
}

TEST_CASE("dur") {
  const auto r = run({"dur", "--N", "4", "--x", "0.3", "--samples", "200", "--skip-numeric"});
  REQUIRE(r.status == 0);
  const auto j = json::parse(r.out);
  CHECK(j["certificate"]["passed"] == true);
  CHECK(j["g_max"]["at_most_one"] == true);
}

TEST_CASE("solve trace CSV") {
  const auto r = run({"solve", "--n", "2", "--k", "0", "--k2", "1", "--s", "0.5", "--format", "csv",
                      "--max-iter", "20"});
  REQUIRE(r.status == 0);
  const auto ls = lines(r.out);
  CHECK(ls[0] == "iteration,value,gap");
  CHECK(ls.size() >= 2);
}

TEST_CASE("exit codes") {
  CHECK(run({}).status == 2);
  CHECK(run({"frobnicate"}).status == 2);
  CHECK(run({"measure", "--n", "3", "--k", "5"}).status == 4);
  CHECK(run({"trace-down", "--n", "3"}).status != 0);
  CHECK(run({"verify", "--suite", "nonsense"}).status == 2);

  const std::string path = "reelab_cli_bad.json";
  {
    std::ofstream f(path);
    f << "{\"party_dims\": [2], \"matrix\": ";
  }
  const auto bad = run({"measure", "--state", path});
  std::remove(path.c_str());
  CHECK(bad.status == 3);
  CHECK(bad.err.find("parse error") != std::string::npos);
}
