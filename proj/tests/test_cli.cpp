#include <charconv>
#include <cmath>
#include <cstdlib>
#include <random>
#include <set>
#include <sstream>

#include "commands.hpp"
#include "doctest.h"
#include "format.hpp"
#include "json.hpp"
#include "parallel.hpp"
#include "qvdp/bifurcation.hpp"
#include "qvdp/error.hpp"

using namespace qvdp;
using namespace qvdp::cli;

TEST_CASE("number formatting round trips") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 2000; ++i) {
    const double v = i % 3 ? u(rng) : u(rng) * 1e-200;
    const std::string s = format_number(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == v);
    CHECK(s.find(',') == std::string::npos);
  }
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(2.0) == "2");
  CHECK(path_stem("dir/run.json") == "dir/run");
}

TEST_CASE("argument parsing") {
  const GridAxis g = parse_grid("beta:0:2:5");
  CHECK(g.name == "beta");
  CHECK(g.at(0) == 0.0);
  CHECK(g.at(4) == 2.0);
  CHECK(g.at(1) == doctest::Approx(0.5));
  for (const char* bad : {"beta:0:2", "beta:0:2:1", "gamma:0:1:3", "mu:1:0:3", "mu:a:1:3", "mu:0:1:3x"}) {
    CHECK_THROWS_AS((void)parse_grid(bad), UsageError);
  }
  CHECK(parse_seed("0.5,-1.25") == State{0.5, -1.25});
  CHECK_THROWS_AS((void)parse_seed("1"), UsageError);
  CHECK_THROWS_AS((void)parse_seed("1,nan"), UsageError);
  CHECK(parse_format("svg") == Format::Svg);
  CHECK_THROWS_AS((void)parse_format("pdf"), UsageError);
}

TEST_CASE("parallel map keeps order and forwards failures") {
  setenv("QVDP_THREADS", "3", 1);
  CHECK(thread_count() == 3);
  const auto v = parallel_map<int>(100, [](std::size_t i) { return static_cast<int>(i * i); });
  for (int i = 0; i < 100; ++i) CHECK(v[i] == i * i);
  CHECK_THROWS_AS(parallel_map<int>(10, [](std::size_t i) -> int {
                    if (i == 7) throw std::runtime_error("boom");
                    return 0;
                  }),
                  std::runtime_error);
  unsetenv("QVDP_THREADS");
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(UsageError("x")) == 2);
  CHECK(exit_code_for(Error(ErrorCode::InvalidParams, "x")) == 2);
  CHECK(exit_code_for(Error(ErrorCode::Domain, "x")) == 2);
  CHECK(exit_code_for(Error(ErrorCode::StepUnderflow, "x")) == 3);
  RunConfig cfg;
  cfg.command = Command::Forced;
  CHECK_THROWS_AS((void)run(cfg), UsageError);
  cfg.command = Command::Sweep;
  CHECK_THROWS_AS((void)run(cfg), UsageError);
}

TEST_CASE("classify document") {
  RunConfig cfg;
  cfg.mu = -0.171;
  const auto res = cmd_classify(cfg);
  REQUIRE(res.artifacts.size() == 1);
  const auto j = nlohmann::json::parse(res.artifacts[0].content);
  for (const char* key : {"params", "equilibria", "critical_mus", "mu3", "region_label", "certificates"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["mu3"].get<double>() == doctest::Approx(-0.17142857).epsilon(1e-7));
  CHECK(j["homoclinic_proximal"].get<bool>());
  CHECK(j["equilibria"].size() == 3);
}

TEST_CASE("sweep labels change only across the critical curves") {
  RunConfig cfg;
  cfg.eps = 1.0;
  cfg.grid = {parse_grid("beta:0:2:41"), parse_grid("mu:-1:2:61")};
  const auto res = cmd_sweep(cfg);
  std::istringstream in(res.artifacts[0].content);
  std::string line;
  std::getline(in, line);
  CHECK(line == "beta,mu,eps,region,mu1,muc,mu2,mu3");
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (line.back() == ',') f.emplace_back();
    rows.push_back(f);
  }
  REQUIRE(rows.size() == 41 * 61);
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    if (rows[i][0] != rows[i + 1][0] || rows[i][3] == rows[i + 1][3]) continue;
    const double beta = std::stod(rows[i][0]);
    const double m0 = std::stod(rows[i][1]), m1 = std::stod(rows[i + 1][1]);
    std::vector<double> curves = {-0.25, 0.0, -5.0 / 36};
    if (beta > 0) {
      curves.push_back(hopf_curve(beta, 1.0));
      curves.push_back(homoclinic_curve(beta, 1.0));
    }
    const bool crossed = std::any_of(curves.begin(), curves.end(), [&](double c) { return m0 <= c && c <= m1; });
    CAPTURE(line);
    CHECK(crossed);
  }
}

TEST_CASE("portrait output is deterministic across thread counts") {
  RunConfig cfg;
  cfg.command = Command::Portrait;
  cfg.mu = -0.1;
  cfg.t1 = 15.0;
  setenv("QVDP_THREADS", "1", 1);
  const auto a = run(cfg);
  setenv("QVDP_THREADS", "4", 1);
  const auto b = run(cfg);
  unsetenv("QVDP_THREADS");
  REQUIRE(a.artifacts.size() == 1);
  CHECK(a.artifacts[0].content == b.artifacts[0].content);
  CHECK(a.exit_code == 0);

  std::istringstream in(a.artifacts[0].content);
  std::string line;
  std::set<std::string> ids;
  std::getline(in, line);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ids.insert(line.substr(0, line.find(',')));
    ++rows;
  }
  CHECK(ids.size() == 14);
  CHECK(rows > 14);
}

TEST_CASE("portrait reports escaping seeds") {
  RunConfig cfg;
  cfg.eps = -1.0;
  cfg.mu = 0.1;
  cfg.t1 = 100.0;
  cfg.seeds = {{1.0, 1.0}, {-0.5, 0.2}};
  const auto res = cmd_portrait(cfg);
  CHECK(res.warnings.size() == 2);
  CHECK(res.exit_code == 0);
}
