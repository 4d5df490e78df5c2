#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cli.hpp"

using xyep::cli::run_cli;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);)
    if (!l.empty() && l[0] != '#') lines.push_back(l);
  return lines;
}

std::vector<double> column(const std::vector<std::string>& lines, size_t col, size_t skip = 1) {
  std::vector<double> v;
  for (size_t i = skip; i < lines.size(); ++i) {
    std::istringstream is(lines[i]);
    std::string cell;
    for (size_t c = 0; c <= col; ++c) std::getline(is, cell, ',');
    v.push_back(std::stod(cell));
  }
  return v;
}

}  // namespace

TEST_CASE("spectrum, L = 2") {
  const auto r = run({"spectrum", "--L", "2", "--gamma", "0.3"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("# xyep ", 0) == 0);
  CHECK(r.out.find("# gamma = 0.3+0i") != std::string::npos);
  const auto tail = r.out.substr(r.out.find("occupation,"));
  auto re = column(data_lines(tail), 1);
  std::sort(re.begin(), re.end());
  REQUIRE(re.size() == 4);
  CHECK(re[0] == doctest::Approx(-0.5));
  CHECK(re[1] == doctest::Approx(-0.15));
  CHECK(re[2] == doctest::Approx(0.15));
  CHECK(re[3] == doctest::Approx(0.5));
}

TEST_CASE("spectrum, XX ground and the EP list") {
  const auto xx = run({"spectrum", "--L", "4", "--gamma", "0"});
  REQUIRE(xx.code == 0);
  auto re = column(data_lines(xx.out.substr(xx.out.find("occupation,"))), 1);
  CHECK(*std::min_element(re.begin(), re.end()) == doctest::Approx(-std::sqrt(5.0) / 2.0).epsilon(1e-11));

  const auto at_ep = run({"spectrum", "--L", "4", "--gamma", "0.6+0.8i"});
  REQUIRE(at_ep.code == 0);
  const auto lines = data_lines(at_ep.out.substr(at_ep.out.find("occupation,")));
  CHECK(lines.size() == 17);
  CHECK(at_ep.out.find("# near_ep = true") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(run({"spectrum", "--L", "3", "--gamma", "0.2"}).code == 2);
  CHECK(run({"spectrum", "--L", "14", "--gamma", "0.2"}).code == 2);
  CHECK(run({"spectrum", "--L", "4", "--gamma", "abc"}).code == 2);
  CHECK(run({"spectrum", "--L", "4"}).code == 2);
  CHECK(run({"spectrum", "--L", "4", "--gamma", "-1"}).code == 3);
  CHECK(run({"verify", "--suite", "nope"}).code == 2);
  CHECK(run({"ep-table", "--Lmax", "18"}).code == 2);
  CHECK(run({"loop", "--L", "4", "--center", "0.6+0.752i", "--radius", "0.05"}).code == 2);
  CHECK(run({}).code == 2);
}

TEST_CASE("ep-table") {
  const auto r = run({"ep-table", "--Lmax", "4"});
  REQUIRE(r.code == 0);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0].rfind("L,mode,re_gamma,im_gamma", 0) == 0);

  const auto big = run({"ep-table", "--Lmax", "8"});
  REQUIRE(big.code == 0);
  // mode I rows are the negated mode II rows
  std::vector<std::pair<double, double>> one, two;
  for (const auto& l : data_lines(big.out)) {
    if (l.rfind("L,", 0) == 0) continue;
    const auto re = column({"", l}, 2), im = column({"", l}, 3);
    (l.find(",I,") != std::string::npos ? one : two).emplace_back(re[0], im[0]);
  }
  REQUIRE(one.size() == two.size());
  for (auto [a, b] : two) {
    bool found = false;
    for (auto [c, d] : one) found = found || (std::abs(a + c) < 1e-9 && std::abs(b + d) < 1e-9);
    CHECK(found);
  }
}

TEST_CASE("loop reports a transposition") {
  const auto r = run({"loop", "--L", "4", "--center", "0.6+0.8i", "--radius", "0.05", "--steps", "256"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["header"]["config"]["center"] == "0.6+0.8i");
  const auto perm = j["permutation"].get<std::vector<int>>();
  int moved = 0;
  for (size_t i = 0; i < perm.size(); ++i) moved += perm[i] != static_cast<int>(i);
  CHECK(moved == 2);
  CHECK(j["closed"] == true);
}

TEST_CASE("oracle-compare") {
  const auto r = run({"oracle-compare", "--L", "6", "--samples", "25", "--seed", "7"});
  REQUIRE(r.code == 0);
  const auto pos = r.out.find("# max_distance = ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(r.out.substr(pos + 17)) < 1e-8);
}

TEST_CASE("verify suite") {
  const auto r = run({"verify", "--suite", "ep-table"});
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS ep-table") != std::string::npos);
}

TEST_CASE("overlap map and determinism") {
  const std::vector<std::string> args = {"overlap-map", "--L", "4", "--re-min", "0.5", "--re-max", "0.7",
                                         "--im-min", "0.7", "--im-max", "0.9", "--nx", "5", "--ny", "5"};
  const auto a = run(args), b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("# ep = 0.6+0.8i") != std::string::npos);
  CHECK(data_lines(a.out).size() == 26);
  setenv("XYEP_THREADS", "1", 1);
  CHECK(run(args).out == a.out);
  unsetenv("XYEP_THREADS");
}

TEST_CASE("output file and H dump") {
  const std::string csv = "cli_test_spectrum.csv", js = "cli_test_h.json";
  const auto r = run({"--output", csv, "spectrum", "--L", "2", "--gamma", "0.5-0.25i", "--dump-h", js});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(csv);
  std::string first;
  std::getline(f, first);
  CHECK(first.rfind("# xyep", 0) == 0);
  std::ifstream h(js);
  const auto j = nlohmann::json::parse(h);
  CHECK(j["H"].size() == 4);
  CHECK(j["eigenvalues"].size() == 4);
  std::remove(csv.c_str());
  std::remove(js.c_str());
}
