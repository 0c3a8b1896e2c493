#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qvi/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = qvi::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "qvi_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch(name);
  std::ofstream(p) << text;
  return p.string();
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::vector<double> fields(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) {
    double x = 0.0;
    std::from_chars(cell.data(), cell.data() + cell.size(), x);
    out.push_back(x);
  }
  return out;
}

// Value printed after "<label> = " in analyze output.
double reported(const std::string& text, const std::string& label) {
  const auto at = text.find("\n" + label + " = ");
  REQUIRE(at != std::string::npos);
  return std::stod(text.substr(at + label.size() + 4));
}

}  // namespace

TEST_CASE("solve: remark problem converges in one step") {
  const auto r = run({"solve", "--problem", "builtin:remark5", "--algorithm", "alg1", "--x0", "0", "--h", "0.5"});
  CHECK(r.code == 0);
  const json s = json::parse(r.out);
  CHECK(s["converged"] == true);
  CHECK(s["iterations"].get<int>() <= 2);
  CHECK(std::abs(s["x_final"][0].get<double>() + 0.3168) <= 1e-3);
  CHECK(s["h_used"] == 0.5);
}

TEST_CASE("solve: catching-up on example2 is unsuccessful") {
  const auto r = run({"solve", "--problem", "builtin:example2", "--algorithm", "catchup", "--x0", "43,22,55", "--h", "0.3"});
  CHECK((r.code == 2 || r.code == 3));
  CHECK(json::parse(r.out)["converged"] == false);
}

TEST_CASE("solve: iteration cap exit code") {
  const auto r = run({"solve", "builtin:example1", "--x0", "6,2", "--h", "0.01", "--max-iter", "3"});
  CHECK(r.code == 3);
  CHECK(json::parse(r.out)["status"] == "iteration_cap");
}

TEST_CASE("solve: csv trace and summary file") {
  const std::string csv = scratch("trace.csv").string();
  const std::string summary = scratch("summary.json").string();
  const auto r = run({"solve", "--problem", "builtin:example2", "--x0", "43,22,55", "--h", "0.3", "--out", csv,
                      "--summary", summary});
  REQUIRE(r.code == 0);
  const auto lines = read_lines(csv);
  REQUIRE(lines.size() >= 2);
  CHECK(lines[0] == "iter,x1,x2,x3,residual");
  CHECK(lines[1].rfind("0,43,22,55,", 0) == 0);
  std::ifstream in(summary);
  const json s = json::parse(in);
  for (const char* key : {"converged", "diverged", "iterations", "x_final", "h_used", "rate_estimate"}) {
    CHECK_MESSAGE(s.contains(key), key);
  }
  CHECK(lines.size() == s["iterations"].get<std::size_t>() + 2);
  // 17 significant digits reproduce the reported doubles exactly.
  const auto last = fields(lines.back());
  for (int i = 0; i < 3; ++i) CHECK(last[static_cast<std::size_t>(i + 1)] == s["x_final"][i].get<double>());
}

TEST_CASE("number formatting") {
  CHECK(qvi::cli::format_number(0.5) == "0.5");
  CHECK(qvi::cli::format_number(43) == "43");
  CHECK(qvi::cli::format_number(0.1) == "0.10000000000000001");
  CHECK(qvi::cli::format_number(-1e-20) == "-9.9999999999999995e-21");
}

TEST_CASE("solve: algorithm choices") {
  CHECK(run({"solve", "builtin:rotation", "--algorithm", "tseng", "--x0", "0.5,0.5"}).code == 0);
  CHECK(run({"solve", "builtin:example1", "--algorithm", "tseng", "--tseng-variant", "literal", "--x0", "6,2"}).code != 1);
  const auto alg3 = run({"solve", "builtin:example3-zero", "--algorithm", "alg3", "--x0", "1,2,3", "--h", "1"});
  CHECK(alg3.code == 0);
  CHECK(run({"solve", "builtin:example1", "--algorithm", "alg3", "--x0", "1,2"}).code == 1);
  CHECK(run({"solve", "builtin:example1", "--algorithm", "newton", "--x0", "1,2"}).code == 1);
}

TEST_CASE("errors exit 1 with one line") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"solve", "--problem", scratch("missing.json").string(), "--x0", "1"},
           {"solve", "--problem", "builtin:example1", "--x0", "1,2,3"},
           {"solve", "--problem", "builtin:example1", "--x0", "1,abc"},
           {"solve", "--problem", "builtin:nothing", "--x0", "1"},
           {"solve", "--problem", "builtin:example1", "--x0", "1,2", "--h", "fast"},
           {"solve", "--problem", "builtin:example1"},
           {"frobnicate"},
           {}}) {
    const auto r = run(args);
    CHECK(r.code == 1);
    CHECK(r.err.rfind("error: ", 0) == 0);
    CHECK(r.err.find('\n') == r.err.size() - 1);
  }
  const std::string bad = write_file("bad_expr.json", R"j({"dim": 1, "f": ["x1 +* 2"], "set": {"type": "whole"}})j");
  const auto r = run({"solve", "--problem", bad, "--x0", "1"});
  CHECK(r.code == 1);
  CHECK(r.err.find("f[0]") != std::string::npos);
}

TEST_CASE("sweep") {
  const auto r = run({"sweep", "builtin:remark5", "--x0", "0.5", "--h", "0.01", "--T", "20"});
  CHECK(r.code == 0);
  CHECK(std::abs(json::parse(r.out)["x_final"][0].get<double>() + 0.3168) <= 1e-2);

  const std::string still = write_file("still.json", R"j({"dim": 2, "f": "zero", "v": "zero",
      "set": {"type": "box", "lower": -1, "upper": 1}})j");
  const std::string csv = scratch("sweep.csv").string();
  REQUIRE(run({"sweep", still, "--x0", "0.25,-0.5", "--h", "0.1", "--T", "1", "--out", csv}).code == 0);
  const auto lines = read_lines(csv);
  REQUIRE(lines.size() == 12);
  CHECK(lines[0] == "t,x1,x2,speed");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto row = fields(lines[i]);
    CHECK(row[1] == 0.25);
    CHECK(row[2] == -0.5);
    CHECK(row[3] == 0.0);
  }

  const auto ex1 = json::parse(run({"sweep", "builtin:example1", "--x0", "6,2", "--h", "0.01", "--T", "30"}).out);
  CHECK(ex1["decay_rate"].get<double>() > 0.0);
  CHECK(ex1["r_squared"].get<double>() >= 0.9);
}

TEST_CASE("analyze") {
  const auto l = run({"analyze", "builtin:example1", "--estimate", "l"});
  CHECK(l.code == 0);
  CHECK(std::abs(reported(l.out, "l") - 0.85) <= 0.01);
  CHECK(l.out.find("(spectral, exact)") != std::string::npos);

  const auto r5 = run({"analyze", "builtin:remark5", "--estimate", "gamma"});
  CHECK(reported(r5.out, "gamma") >= 2.0 / 9.0);
  CHECK(r5.out.find("upper bound") != std::string::npos);

  const auto e2 = run({"analyze", "builtin:example2", "--estimate", "gamma", "--seed", "42"});
  CHECK(reported(e2.out, "gamma") == doctest::Approx(20.832738740264315).epsilon(1e-12));
  CHECK(reported(e2.out, "gamma[linear parts]") == doctest::Approx(29.239497605849312).epsilon(1e-12));

  const auto lower = run({"analyze", "builtin:example1", "--estimate", "L"});
  CHECK(lower.out.find("lower bound") != std::string::npos);
  CHECK(run({"analyze", "builtin:example1", "--estimate", "pseudo"}).out.find("no violation") != std::string::npos);
  CHECK(run({"analyze", "builtin:example1", "--estimate", "sigma"}).code == 1);
  CHECK(run({"analyze", "builtin:example4"}).code == 0);
}

TEST_CASE("seed falls back to the environment") {
  ::setenv("QVI_SEED", "7", 1);
  const auto env = run({"analyze", "builtin:example1", "--estimate", "L"});
  const auto flag = run({"analyze", "builtin:example1", "--estimate", "L", "--seed", "7"});
  ::unsetenv("QVI_SEED");
  CHECK(env.out.find("seed 7,") != std::string::npos);
  CHECK(env.out == flag.out);
  CHECK(run({"analyze", "builtin:example1", "--estimate", "L"}).out.find("seed 42,") != std::string::npos);
  ::setenv("QVI_SEED", "seven", 1);
  CHECK(run({"analyze", "builtin:example1"}).code == 1);
  ::unsetenv("QVI_SEED");
}

TEST_CASE("zero") {
  const std::string id = write_file("identity.json", R"j({"kind": "zero", "dim": 2, "f": "identity",
      "w": {"matrix": [[1, 0], [0, 1]]}})j");
  const auto r = run({"zero", id, "--x0", "3,-4", "--h", "1"});
  CHECK(r.code == 0);
  const json s = json::parse(r.out);
  CHECK(s["iterations"] == 1);
  CHECK(s["x_final"] == json::array({0.0, 0.0}));

  const std::string singular = write_file("singular.json", R"j({"kind": "zero", "dim": 2, "f": "identity",
      "w": {"matrix": [[1, 2], [2, 4]]}})j");
  const auto bad = run({"zero", singular, "--x0", "1,1"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("singular") != std::string::npos);

  const std::string csv = scratch("zero.csv").string();
  CHECK(run({"zero", "builtin:example3-zero", "--x0", "1e4,2e4,3e4", "--out", csv, "--path", "matrix"}).code == 0);
  CHECK(read_lines(csv)[0] == "iter,x1,x2,x3,residual");
  CHECK(run({"zero", "builtin:example1", "--x0", "1,1"}).code == 1);
}

TEST_CASE("list and show") {
  const auto list = run({"list"});
  CHECK(list.code == 0);
  for (const char* name : {"remark5", "example1", "example2", "example3", "example4", "rotation"}) {
    CHECK(list.out.find(std::string(name) + "\t") != std::string::npos);
  }
  const auto shown = run({"show", "example3"});
  REQUIRE(shown.code == 0);
  const std::string path = write_file("example3.json", shown.out);
  const auto from_file = json::parse(run({"solve", path, "--x0", "5,4,2", "--h", "0.3"}).out);
  const auto from_builtin = json::parse(run({"solve", "builtin:example3", "--x0", "5,4,2", "--h", "0.3"}).out);
  CHECK(from_file["x_final"] == from_builtin["x_final"]);
  CHECK(from_file["iterations"] == from_builtin["iterations"]);
  CHECK(run({"show", "nothing"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}
