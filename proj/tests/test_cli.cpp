// Copyright 2026 The ensdist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace ensdist::cli {
namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split_lines(const std::string &s) {
  std::vector<std::string> lines;
  std::istringstream is(s);
  for (std::string line; std::getline(is, line);) lines.push_back(line);
  return lines;
}

TEST(Cli, DistanceTvMatchesQuadrature) {
  const auto r = invoke({"distance", "--metric", "tv", "--beta", "1", "--m", "1", "--a1", "20",
                         "--a2", "2000", "--n", "100000", "--seed", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  for (const char *key : {"metric", "value", "std_error", "n", "seed", "shards", "params"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["metric"], "tv");
  EXPECT_EQ(j["n"], 100000);
  EXPECT_EQ(j["seed"], 7);
  EXPECT_EQ(j["shards"], 1);

  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double two_a = 2.0 * 2020.0;
  const boost::math::beta_distribution<> be(20, 2000);
  const boost::math::chi_squared chi(40);
  auto f = [&](double t) { return std::fabs(pdf(be, t / two_a) / two_a - pdf(chi, t)); };
  double tv = 0.0;
  const double cuts[] = {0.0, 20.0, 40.0, 80.0, 200.0, two_a};
  for (int i = 0; i < 5; ++i) tv += GK::integrate(f, cuts[i], cuts[i + 1], 12, 1e-12);
  const double v = j["value"].get<double>();
  const double se = j["std_error"].get<double>();
  EXPECT_LT(std::fabs(v - tv), 3.0 * se) << v << " vs " << tv;
}

TEST(Cli, DistanceKl) {
  const auto r = invoke({"distance", "--metric", "kl", "--beta", "1", "--m", "10", "--a1", "10",
                         "--a2", "1e5", "--n", "2000", "--seed", "3", "--shards", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["metric"], "kl");
  EXPECT_EQ(j["shards"], 2);
  EXPECT_EQ(j["params"]["m"], 10);
}

TEST(Cli, SampleCsv) {
  const auto r = invoke({"sample", "--ensemble", "laguerre", "--beta", "2", "--m", "3", "--a1", "5",
                         "--n", "2", "--seed", "1", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = split_lines(r.out);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], "draw,eig1,eig2,eig3");
  EXPECT_EQ(r.out.find('\r'), std::string::npos);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::istringstream row(lines[i]);
    std::string cell;
    std::getline(row, cell, ',');
    EXPECT_EQ(cell, std::to_string(i - 1));
    std::vector<double> eig;
    while (std::getline(row, cell, ',')) eig.push_back(std::stod(cell));
    ASSERT_EQ(eig.size(), 3u);
    EXPECT_GE(eig[0], eig[1]);
    EXPECT_GE(eig[1], eig[2]);
    EXPECT_GT(eig[2], 0.0);
  }
}

TEST(Cli, SampleJacobiJson) {
  const auto r = invoke({"sample", "--ensemble", "jacobi", "--beta", "1", "--m", "4", "--a1", "5",
                         "--a2", "9", "--n", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  ASSERT_EQ(j["draws"].size(), 3u);
  for (const auto &d : j["draws"]) {
    for (const auto &v : d) {
      EXPECT_GT(v.get<double>(), 0.0);
      EXPECT_LT(v.get<double>(), 1.0);
    }
  }
  EXPECT_EQ(invoke({"sample", "--ensemble", "jacobi", "--m", "2", "--a1", "5"}).code, 2);
}

TEST(Cli, MomentsEchoLaguerreStats) {
  const auto r = invoke({"moments", "--beta", "1", "--m", "2", "--a1", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["var_sum"], 8.0);
  EXPECT_EQ(j["e_sq"], 12.0);
  EXPECT_EQ(j["e_cube"], 56.0);
  EXPECT_TRUE(j.contains("var_sq"));
  EXPECT_TRUE(j.contains("cov_lin_sq"));
  EXPECT_FALSE(j.contains("monte_carlo"));
}

TEST(Cli, MomentsMonteCarloAndTraces) {
  const auto r = invoke({"moments", "--beta", "2", "--m", "4", "--a1", "6", "--a2", "1e5", "--n",
                         "20000", "--trace-draws", "20", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = split_lines(r.out);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_NE(lines[0].find("monte_carlo.var_sum.value"), std::string::npos);
  EXPECT_NE(lines[0].find("jacobi_s1"), std::string::npos);
  EXPECT_NE(lines[0].find("trace_draws_checked"), std::string::npos);
}

TEST(Cli, Clt) {
  const auto r = invoke({"clt", "--regime", "A2", "--beta", "1", "--m", "100", "--a1", "1e4",
                         "--a2", "1e6", "--replicates", "600", "--seed", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["target_variance"].get<double>(), 0.25);
  EXPECT_TRUE(j.contains("p_value"));
  const auto q = invoke({"clt", "--regime", "A3", "--mode", "quadratic", "--beta", "1", "--m",
                         "100", "--a1", "100", "--a2", "1e4", "--replicates", "500"});
  EXPECT_EQ(q.code, 0) << q.err;
  EXPECT_EQ(invoke({"clt", "--m", "100", "--a1", "1e4", "--a2", "1e6", "--replicates", "10"}).code,
            2);
}

TEST(Cli, ScanCsv) {
  const auto r = invoke({"scan", "--regime", "vanishing", "--metric", "kl", "--beta", "1", "--m",
                         "10", "--a1", "10", "--n", "500", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = split_lines(r.out);
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0].rfind("point,", 0), 0u);
  EXPECT_NE(lines[0].find("params.a2"), std::string::npos);
}

TEST(Cli, ScanFlagsFailedPoints) {
  const auto r = invoke({"scan", "--regime", "vanishing", "--metric", "clt", "--m", "10", "--a1",
                         "10", "--replicates", "500"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  ASSERT_EQ(j.size(), 3u);
  for (const auto &e : j) {
    EXPECT_TRUE(e["failed"].get<bool>());
    EXPECT_TRUE(e.contains("error"));
  }
}

TEST(Cli, ParameterErrorsExitTwo) {
  const auto r = invoke({"distance", "--beta", "1", "--m", "5", "--a1", "1", "--a2", "100",
                         "--n", "1000"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("a1 must exceed beta(m-1)/2"), std::string::npos) << r.err;
  EXPECT_EQ(invoke({"distance", "--m", "1", "--a1", "2", "--n", "1000"}).code, 2);
  EXPECT_EQ(invoke({"distance", "--metric", "hellinger"}).code, 2);
  EXPECT_EQ(invoke({"bogus"}).code, 2);
  EXPECT_EQ(invoke({"scan", "--regime", "A3", "--x", "1", "--y", "3"}).code, 2);
  EXPECT_EQ(invoke({"distance", "--m", "1", "--a1", "2", "--a2", "9", "--n", "10"}).code, 2);
}

TEST(Cli, ConsistencyFailureExitsOne) {
  const auto r = invoke({"moments", "--beta", "1", "--m", "3", "--a1", "1e12", "--trace-draws", "50"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("mismatch"), std::string::npos) << r.err;
}

TEST(Cli, HelpExitsZero) {
  const auto r = invoke({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("distance"), std::string::npos);
}

TEST(Cli, OutputFileIsByteIdentical) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto a = (dir / "ensdist_cli_a.json").string();
  const auto b = (dir / "ensdist_cli_b.json").string();
  const std::vector<std::string> base = {"distance", "--metric", "tv", "--beta", "2", "--m", "20",
                                         "--a1", "100", "--a2", "1e4", "--n", "3000", "--seed",
                                         "11", "--shards", "3", "--out"};
  auto args_a = base;
  args_a.push_back(a);
  auto args_b = base;
  args_b.push_back(b);
  ASSERT_EQ(invoke(args_a).code, 0);
  ASSERT_EQ(invoke(args_b).code, 0);
  auto slurp = [](const std::string &p) {
    std::ifstream f(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(f), {});
  };
  const std::string ta = slurp(a);
  EXPECT_FALSE(ta.empty());
  EXPECT_EQ(ta, slurp(b));
  std::filesystem::remove(a);
  std::filesystem::remove(b);
  EXPECT_EQ(invoke({"distance", "--m", "1", "--a1", "2", "--a2", "9", "--n", "100", "--out",
                    "/nonexistent/dir/x.json"})
                .code,
            2);
}

}  // namespace
}  // namespace ensdist::cli
