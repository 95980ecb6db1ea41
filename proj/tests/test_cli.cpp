#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hhv/cli.hpp"
#include "hhv/report.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = hhv::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

hhv::Json json_of(const Run& r) { return hhv::Json::parse(r.out); }

}  // namespace

TEST_CASE("chain dm on e^{x^2} holds") {
  const auto r = run({"chain", "--f", "exp(x^2)", "--a", "0", "--b", "1", "--c", "0", "--which", "dm", "--json"});
  CHECK(r.code == 0);
  const auto j = json_of(r);
  CHECK(j["tool"] == "hhverify");
  CHECK(j["command"] == "chain");
  CHECK(j["result"]["terms"].size() == 6);
  CHECK(j["result"]["holds"] == true);
  CHECK(j["violations"].empty());
  CHECK(j["result"]["terms"][3]["value"].get<double>() == doctest::Approx(1.4626517459071816).epsilon(1e-10));
}

TEST_CASE("constant function with c = 1 is a violation") {
  const auto r = run({"chain", "--f", "1", "--a", "0", "--b", "1", "--c", "1", "--which", "t1", "--json"});
  CHECK(r.code == 1);
  const auto j = json_of(r);
  REQUIRE(j["violations"].size() >= 1);
  CHECK(j["violations"][0]["from"] == "f(m)+c(b-a)^2/12");
  CHECK(j["violations"][0]["margin"].get<double>() == doctest::Approx(-1.0 / 12).epsilon(1e-14));
  CHECK(j["result"]["holds"] == false);
}

TEST_CASE("syntax errors exit 2 with a position") {
  const auto r = run({"chain", "--f", "exp(", "--a", "0", "--b", "1", "--which", "dm"});
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  CHECK(r.err.find("position 4") != std::string::npos);
  CHECK(r.err.find("    ^") != std::string::npos);
}

TEST_CASE("usage and domain errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"chain", "--f", "x", "--a", "0", "--b", "1"}).code == 2);                    // --which missing
  CHECK(run({"chain", "--f", "x", "--a", "0", "--b", "1", "--which", "zz"}).code == 2);  // bad choice
  CHECK(run({"chain", "--f", "x", "--a", "-1", "--b", "1", "--which", "dm"}).code == 2);  // f not positive
  CHECK(run({"chain", "--f", "x+2", "--a", "1", "--b", "1", "--which", "dm"}).code == 2);  // empty interval
  CHECK(run({"theorem2", "--f", "x+2", "--a", "0", "--b", "1"}).code == 2);                // --c missing
  CHECK(run({"sweep", "--families", "cubic", "--cases", "1", "--seed", "1"}).code == 2);
  CHECK(run({"chain", "--f", "x+1", "--a", "0", "--b", "1", "--which", "dm", "--json", "--csv"}).code == 2);
  CHECK(run({"maxc", "--f", "x^2", "--a", "1", "--b", "2"}).code == 2);  // chain fails at c = 0
  const auto help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("chain") != std::string::npos);
}

TEST_CASE("exit code 1 iff the report lists a violation") {
  const std::vector<std::vector<std::string>> commands = {
      {"chain", "--f", "exp(x^2)", "--a", "0", "--b", "1", "--which", "t1", "--c", "0.5", "--json"},
      {"chain", "--f", "exp(x^2)", "--a", "0", "--b", "1", "--which", "t1", "--c", "5", "--json"},
      {"chain", "--f", "-x^2", "--a", "0", "--b", "1", "--which", "classical", "--json"},
      {"theorem2", "--f", "exp(x^2)", "--a", "0", "--b", "1", "--c", "1", "--form", "both", "--json"},
      {"theorem2", "--f", "exp(x^2)", "--a", "0", "--b", "1", "--c", "1", "--json"},
      {"theorem2", "--f", "1", "--a", "0", "--b", "1", "--c", "1", "--json"},
      {"certify", "--f", "x^2", "--a", "1", "--b", "2", "--grid", "16", "--json"},
      {"certify", "--f", "exp(x^2)", "--a", "0", "--b", "1", "--grid", "16", "--json"},
      {"integrate", "--f", "x^2", "--a", "0", "--b", "1", "--json"},
      {"maxc", "--f", "exp(x^2)", "--a", "0", "--b", "1", "--json"},
      {"sweep", "--families", "log_affine", "--cases", "3", "--seed", "1", "--c", "0.2", "--grid", "12", "--json"},
      {"sweep", "--families", "log_affine", "--cases", "3", "--seed", "1", "--grid", "12", "--json"},
  };
  int ones = 0;
  int zeros = 0;
  for (const auto& args : commands) {
    const auto r = run(args);
    INFO(args[0] << " " << args[2]);
    REQUIRE(r.code != 2);
    const auto j = json_of(r);
    CHECK((r.code == 1) == !j["violations"].empty());
    (r.code == 1 ? ones : zeros) += 1;
  }
  CHECK(ones >= 4);
  CHECK(zeros >= 4);
}

TEST_CASE("JSON output is canonical: re-serialization is byte-identical") {
  const std::vector<std::vector<std::string>> commands = {
      {"chain", "--f", "exp(x^2)", "--a", "0", "--b", "1", "--which", "dm", "--json"},
      {"chain", "--f", "cosh(x)", "--a", "-0.3", "--b", "1.7", "--which", "t1", "--c", "0.1", "--json"},
      {"certify", "--f", "exp(x^2)", "--a", "0", "--b", "1", "--grid", "16", "--json"},
      {"theorem2", "--f", "exp(x^2)", "--a", "0", "--b", "1", "--c", "0.4", "--form", "both", "--json"},
      {"theorem2", "--f", "exp(-x)", "--a", "0", "--b", "1", "--c", "0.4", "--form", "printed", "--json"},
      {"integrate", "--f", "sin(x)", "--a", "0", "--b", "3", "--json"},
      {"sweep", "--families", "exp_quadratic,scaled_power", "--cases", "4", "--seed", "9", "--grid", "12",
       "--refine", "1", "--json"},
  };
  for (const auto& args : commands) {
    const auto r = run(args);
    REQUIRE(r.code != 2);
    std::string text = r.out;
    REQUIRE(!text.empty());
    CHECK(text.back() == '\n');
    text.pop_back();
    CHECK(hhv::dump_canonical(hhv::Json::parse(text)) == text);
  }
}

TEST_CASE("numbers use 17 significant digits") {
  const auto r = run({"integrate", "--f", "x", "--a", "0", "--b", "0.1", "--json"});
  CHECK(r.out.find("\"b\":0.10000000000000001") != std::string::npos);
  CHECK(hhv::dump_canonical(hhv::Json(1.0 / 3.0)) == "0.33333333333333331");
  CHECK(hhv::dump_canonical(hhv::Json(std::nan(""))) == "null");
}

TEST_CASE("identical invocations give identical bytes") {
  for (const char* fmt : {"--json", "--csv"}) {
    const std::vector<std::string> args = {"sweep",  "--families", "exp_quadratic,log_affine", "--cases", "6",
                                           "--seed", "77",         "--grid",                   "16",      fmt};
    const auto r1 = run(args);
    const auto r2 = run(args);
    CHECK(r1.out == r2.out);
    auto threaded = args;
    threaded.insert(threaded.end(), {"--threads", "3"});
    CHECK(run(threaded).out == r1.out);
  }
  const std::vector<std::string> chain = {"chain", "--f", "exp(x^2)", "--a", "0", "--b", "1", "--which", "dm"};
  CHECK(run(chain).out == run(chain).out);
}

TEST_CASE("CSV layouts") {
  auto r = run({"chain", "--f", "exp(x^2)", "--a", "0", "--b", "1", "--which", "dm", "--csv"});
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "term_index,term_name,value,margin_to_next");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 6);
  // term names with commas are quoted
  CHECK(r.out.find("\"mean G(f(x),f(a+b-x))\"") != std::string::npos);

  r = run({"sweep", "--families", "log_affine", "--cases", "2", "--seed", "3", "--grid", "12", "--csv"});
  std::istringstream sweep_lines(r.out);
  std::getline(sweep_lines, line);
  CHECK(line == "case_index,family,a,b,c,chain_kind,holds,min_margin");
  rows = 0;
  while (std::getline(sweep_lines, line)) ++rows;
  CHECK(rows == 2 * 4);

  CHECK(hhv::csv_field("plain") == "plain");
  CHECK(hhv::csv_field("a,b") == "\"a,b\"");
  CHECK(hhv::csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("sweep --out writes the report to a file") {
  const std::string path = "test_cli_sweep_out.json";
  const auto r = run({"sweep", "--families", "log_affine", "--cases", "2", "--seed", "3", "--grid", "12", "--json",
                      "--out", path});
  CHECK(r.code == 0);
  std::ifstream in(path);
  std::stringstream content;
  content << in.rdbuf();
  const auto direct = run({"sweep", "--families", "log_affine", "--cases", "2", "--seed", "3", "--grid", "12", "--json"});
  CHECK(content.str() == direct.out);
  std::remove(path.c_str());
}

TEST_CASE("table output") {
  const auto r = run({"theorem2", "--f", "exp(x^2)", "--a", "0", "--b", "1", "--c", "1", "--form", "both"});
  CHECK(r.code == 1);
  CHECK(r.out.find("rhs corrected") != std::string::npos);
  CHECK(r.out.find("VIOLATED") != std::string::npos);
  const auto m = run({"maxc", "--f", "exp(x^2)", "--a", "0", "--b", "1"});
  CHECK(m.code == 0);
  CHECK(m.out.find("1.386") != std::string::npos);
}
