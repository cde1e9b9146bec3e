// Copyright 2026 The infoload Authors
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

#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>
#include <stdexcept>

#include "infoload/config.h"
#include "infoload/error.h"
#include "infoload/optimize.h"
#include "infoload/parallel.h"
#include "infoload/rng.h"
#include "infoload/stats.h"

using namespace infoload;

TEST_CASE("empirical distribution") {
  const EmpiricalDistribution d({3, 1, 2, 2});
  CHECK(d.size() == 4);
  CHECK(d.ccdf(2) == 0.75);
  CHECK(d.ccdf(2.5) == 0.25);
  CHECK(d.cdf(2) == 0.75);
  CHECK(d.median() == 2);
  CHECK(d.mean() == 2);
  CHECK(d.quantile(0) == 1);
  CHECK(d.quantile(1) == 3);

  const auto t = ccdf_table(d);
  REQUIRE(t.size() == 3);
  CHECK(t[0].x == 1);
  CHECK(t[0].ccdf == 1.0);
  CHECK(t[1].ccdf == 0.75);
  CHECK(t[2].ccdf == 0.25);
}

TEST_CASE("bottom-90 mean drops the top decile") {
  std::vector<double> v;
  for (int i = 1; i <= 10; ++i) v.push_back(i);
  v.back() = 1000;
  const EmpiricalDistribution d(v);
  // p90 interpolates between 9 and 1000; everything but 1000 is kept.
  CHECK(d.bottom90_mean() == doctest::Approx(5.0));
}

TEST_CASE("log bins are decade aligned and contain their values") {
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    const double x = std::exp(rng.normal(0, 8));
    const auto [lo, hi] = log_bin_edges(x, 10);
    CHECK(lo <= x);
    CHECK(x < hi);
  }
  const auto [lo, hi] = log_bin_edges(10.0, 10);
  CHECK(lo == doctest::Approx(10.0));
  CHECK(hi == doctest::Approx(std::pow(10.0, 1.1)));
}

TEST_CASE("bin_log summarizes y per x bin") {
  const std::vector<double> x{1.0, 1.05, 1.1, 50, 0, -2};
  const std::vector<double> y{1, 3, 2, 7, 100, 100};
  const auto bins = bin_log(x, y, 10);
  REQUIRE(bins.size() == 2);
  CHECK(bins[0].n == 3);
  CHECK(bins[0].mean == 2);
  CHECK(bins[0].median == 2);
  CHECK(bins[1].n == 1);
  CHECK(bins[1].mean == 7);
}

TEST_CASE("ccdf knee finds the bend of a broken power law") {
  std::vector<CcdfPoint> t;
  for (int i = 0; i <= 40; ++i) {
    const double lx = i * 0.1;
    const double ly = lx <= 2 ? -0.2 * lx : -0.4 - 2.0 * (lx - 2);
    t.push_back({std::pow(10.0, lx), std::pow(10.0, ly)});
  }
  const auto knee = ccdf_knee(t);
  REQUIRE(knee);
  CHECK(*knee == doctest::Approx(100.0).epsilon(1e-9));
  CHECK_FALSE(ccdf_knee(std::span(t).first(2)));
}

TEST_CASE("config parsing") {
  std::istringstream in(
      "# comment\n"
      "mu = 1.5\n"
      "\n"
      "delay_bin.0.hi = inf\n"
      "name = two words  \n"
      "n = 12\n");
  auto c = KeyValueConfig::parse(in, "test");
  CHECK(c.get_double("mu") == 1.5);
  CHECK(std::isinf(c.get_double("delay_bin.0.hi")));
  CHECK(c.get_string("name", "") == "two words");
  CHECK(c.get_int("n") == 12);
  CHECK(c.get_u64("missing", 7) == 7);
  CHECK(c.get_bool("missing", true));
  CHECK_THROWS_AS(c.get_double("absent"), InputError);
  CHECK(c.keys_with_prefix("delay_bin.").size() == 1);

  std::istringstream dup("a = 1\na = 2\n");
  CHECK_THROWS_WITH_AS(KeyValueConfig::parse(dup, "d"),
                       doctest::Contains("duplicate"), InputError);
  std::istringstream bad("just words\n");
  CHECK_THROWS_AS(KeyValueConfig::parse(bad, "b"), InputError);

  std::istringstream nan_in("x = 1.5abc\n");
  auto c2 = KeyValueConfig::parse(nan_in, "n");
  CHECK_THROWS_AS(c2.get_double("x"), InputError);
}

TEST_CASE("config round trips through text") {
  KeyValueConfig c;
  c.set("b", format_double(0.1));
  c.set("a", format_double(1.0 / 3));
  std::istringstream in(c.to_string());
  const auto back = KeyValueConfig::parse(in, "rt");
  CHECK(back.get_double("a") == 1.0 / 3);
  CHECK(back.get_double("b") == 0.1);
  CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("environment overrides") {
  KeyValueConfig c;
  c.set("delay_bin.0.mu1", "1");
  setenv("INFOLOADTEST_DELAY_BIN_0_MU1", "2.5", 1);
  setenv("INFOLOADTEST_BETA0", "0.2", 1);
  c.apply_env_overrides("INFOLOADTEST_", {"beta0"});
  CHECK(c.get_double("delay_bin.0.mu1") == 2.5);
  CHECK(c.get_double("beta0") == 0.2);
  unsetenv("INFOLOADTEST_DELAY_BIN_0_MU1");
  unsetenv("INFOLOADTEST_BETA0");
}

TEST_CASE("nelder-mead minimizes the Rosenbrock function") {
  auto f = [](std::span<const double> x) {
    return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
  };
  NelderMeadOptions o;
  o.step = {0.5, 0.5};
  const auto r = nelder_mead(f, {-1.2, 1.0}, o);
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("nelder-mead treats non-finite values as infeasible") {
  auto f = [](std::span<const double> x) {
    return x[0] < 0 ? std::nan("") : (x[0] - 2) * (x[0] - 2);
  };
  NelderMeadOptions o;
  o.step = {1.0};
  const auto r = nelder_mead(f, {0.5}, o);
  CHECK(r.x[0] == doctest::Approx(2.0).epsilon(1e-5));
}

TEST_CASE("keyed streams are reproducible and distinct") {
  Rng a = Rng::keyed(1, {2, 3});
  Rng b = Rng::keyed(1, {2, 3});
  Rng c = Rng::keyed(1, {3, 2});
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
  CHECK(hash_keys(1, {2}) != hash_keys(2, {1}));
}

TEST_CASE("rng draws have the right moments") {
  Rng r(99);
  const int n = 200000;
  double su = 0, sn = 0, snn = 0, se = 0;
  std::map<std::uint64_t, int> below;
  for (int i = 0; i < n; ++i) {
    su += r.uniform();
    const double z = r.normal();
    sn += z;
    snn += z * z;
    se += r.exponential(4.0);
    ++below[r.below(5)];
  }
  CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(std::abs(sn / n) < 0.01);
  CHECK(snn / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(se / n == doctest::Approx(0.25).epsilon(0.02));
  CHECK(below.size() == 5);
  for (const auto& [k, cnt] : below) CHECK(cnt == doctest::Approx(n / 5.0).epsilon(0.03));
}

TEST_CASE("parallel_for covers every index once for any worker count") {
  for (unsigned w : {1u, 2u, 3u, 8u}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), w, [&](std::size_t i) { ++hits[i]; });
    for (auto& h : hits) CHECK(h.load() == 1);
  }
}

TEST_CASE("parallel_for rethrows the lowest failing index") {
  for (unsigned w : {1u, 4u}) {
    try {
      parallel_for(100, w, [](std::size_t i) {
        if (i == 17 || i == 60) throw std::runtime_error(std::to_string(i));
      });
      FAIL("no exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "17");
    }
  }
}
