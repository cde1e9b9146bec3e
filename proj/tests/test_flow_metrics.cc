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

#include <cmath>
#include <set>

#include "infoload/error.h"
#include "infoload/flow_metrics.h"
#include "infoload/rng.h"
#include "test_util.h"

using namespace infoload;
using infoload::testing::graph_from;
using infoload::testing::log_from;

namespace {

// Random log over users u0..u{n-1} with retweets of random earlier posts.
std::string random_log(Rng& rng, int users, int events) {
  std::string l;
  std::vector<std::pair<int, int>> posts;
  for (int i = 1; i <= events; ++i) {
    const int author = static_cast<int>(rng.below(users));
    const int ts = i * 30 + static_cast<int>(rng.below(20));
    if (!posts.empty() && rng.bernoulli(0.4)) {
      const auto [oid, oa] = posts[rng.below(posts.size())];
      l += std::to_string(ts) + "\tu" + std::to_string(author) + "\tR\t" +
           std::to_string(i) + "\t" + std::to_string(oid) + "\tu" +
           std::to_string(oa) + "\n";
    } else {
      l += std::to_string(ts) + "\tu" + std::to_string(author) + "\tT\t" +
           std::to_string(i) + "\n";
    }
    posts.emplace_back(i, author);
  }
  return l;
}

std::string random_graph(Rng& rng, int users, double p) {
  std::string g;
  for (int a = 0; a < users; ++a) {
    g += "u" + std::to_string(a) + "\n";
    for (int b = 0; b < users; ++b)
      if (a != b && rng.bernoulli(p))
        g += "u" + std::to_string(a) + "\tu" + std::to_string(b) + "\n";
  }
  return g;
}

}  // namespace

TEST_CASE("flow stats equal a brute-force count") {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto graph = graph_from(random_graph(rng, 8, 0.35));
    const auto parsed = log_from(random_log(rng, 8, 300));
    REQUIRE(parsed.rejects.empty());
    const auto& log = parsed.log;
    const TimeWindow w{1500, 7200};
    const FeedIndex feed(log, graph);
    for (bool rts : {true, false}) {
      const auto all = compute_all_flow_stats(feed, w, InFlowOptions{rts}, 3);
      for (NodeId u = 0; u < graph.node_count(); ++u) {
        std::size_t received = 0, own = 0, own_rt = 0, oof = 0;
        std::set<EventPos> sources;
        for (EventPos p = 0; p < log.size(); ++p) {
          const Event& e = log[p];
          if (!w.contains(e.ts)) continue;
          const NodeId author = *graph.find(log.author_name(e.author));
          if (graph.follows(u, author) && (rts || !e.is_retweet())) ++received;
          if (author != u) continue;
          ++own;
          if (!e.is_retweet()) continue;
          ++own_rt;
          const Event& s = log[e.orig];
          const NodeId sa = *graph.find(log.author_name(s.author));
          if (graph.follows(u, sa) && w.contains(s.ts) &&
              (rts || !s.is_retweet())) {
            sources.insert(e.orig);
          } else {
            ++oof;
          }
        }
        const FlowStats& s = all[u];
        const double hours = (7200 - 1500) / 3600.0;
        CHECK(s.received == received);
        CHECK(s.retweeted == sources.size());
        CHECK(s.out_of_feed_retweets == oof);
        CHECK(s.followees == graph.followees(u).size());
        CHECK(s.lambda == doctest::Approx(received / hours));
        CHECK(s.lambda_r == doctest::Approx(sources.size() / hours));
        CHECK(s.lambda_nr == doctest::Approx((received - sources.size()) / hours));
        CHECK(s.out_total == doctest::Approx(own / hours * 24));
        CHECK(s.retweet_outflow == doctest::Approx(own_rt / hours * 24));
        if (received > 0)
          CHECK(s.beta_r == doctest::Approx(double(sources.size()) / received));
      }
    }
  }
}

TEST_CASE("flow stats preconditions") {
  const auto log = log_from("100\tu\tT\t1\n").log;
  const auto graph = graph_from("u\tv\n");
  CHECK_THROWS_AS(compute_flow_stats("u", log, graph, TimeWindow{5, 5}),
                  PreconditionError);
  CHECK_THROWS_AS(compute_flow_stats("x", log, graph, TimeWindow{0, 5}),
                  UnknownIdError);
  const auto s = compute_flow_stats("v", log, graph, TimeWindow{0, 3600});
  CHECK(s.received == 0);
  CHECK(s.beta_r == 0);
}

TEST_CASE("power-law MLE") {
  SUBCASE("closed form on a tiny sample") {
    const std::vector<double> x{1, std::exp(1.0), std::exp(2.0), 0.5};
    const auto f = fit_power_law_mle(x, 1.0);
    CHECK(f.n == 3);
    CHECK(f.alpha == doctest::Approx(1.0 + 3.0 / 3.0));
  }
  SUBCASE("Pareto samples") {
    Rng rng(4);
    std::vector<double> x(50000);
    for (auto& v : x) v = 2.0 * std::pow(rng.uniform_open0(), -1.0 / 1.8);
    const auto f = fit_power_law_mle(x, 2.0);
    const double se = (f.alpha - 1) / std::sqrt(double(f.n));
    CHECK(std::abs(f.alpha - 2.8) < 4 * se);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(fit_power_law_mle(std::vector<double>{5}, 1), PreconditionError);
    CHECK_THROWS_AS(fit_power_law_mle(std::vector<double>{1, 1, 1}, 1), NumericError);
    CHECK_THROWS_AS(fit_power_law_mle(std::vector<double>{1, 2}, 0), PreconditionError);
  }
}

TEST_CASE("two-regime fit recovers noiseless parameters") {
  const TwoRegimeFit truth{30, 0.05, 0.65};
  std::vector<CurvePoint> pts;
  for (double l = 0.1; l < 3000; l *= 1.2) pts.push_back({l, two_regime_value(truth, l)});
  const auto fit = fit_two_regime(pts);
  CHECK(fit.lambda_c == doctest::Approx(30).epsilon(0.02));
  CHECK(fit.beta0 == doctest::Approx(0.05).epsilon(1e-6));
  CHECK(fit.gamma == doctest::Approx(0.65).epsilon(1e-6));
  CHECK(fit.overload_detected);
  CHECK(fit.residual < 1e-12);
}

TEST_CASE("flat curve has no overload regime") {
  std::vector<CurvePoint> pts;
  for (double l = 1; l < 1000; l *= 1.5) pts.push_back({l, 0.02});
  const auto fit = fit_two_regime(pts);
  CHECK(fit.gamma == doctest::Approx(0.0));
  CHECK_FALSE(fit.overload_detected);
  CHECK(fit.beta0 == doctest::Approx(0.02));
}

TEST_CASE("two-regime fit needs four points") {
  const std::vector<CurvePoint> pts{{1, 1}, {2, 1}, {3, 0.5}, {0, 4}};
  CHECK_THROWS_AS(fit_two_regime(pts), PreconditionError);
}

TEST_CASE("binomial MLE for the decay exponent") {
  Rng rng(9);
  std::vector<FlowStats> stats;
  for (int i = 0; i < 4000; ++i) {
    FlowStats s;
    s.lambda = 30 * std::exp(rng.uniform() * 4);
    s.received = 2000;
    const double p = 0.05 * std::pow(s.lambda / 30, -0.65);
    for (std::size_t k = 0; k < s.received; ++k) s.retweeted += rng.bernoulli(p);
    stats.push_back(s);
  }
  const auto f = fit_overload_exponent_mle(stats, 30);
  CHECK(f.converged);
  CHECK(f.gamma == doctest::Approx(0.65).epsilon(0.03));
  CHECK(f.beta_c == doctest::Approx(0.05).epsilon(0.03));
}

TEST_CASE("diminishing returns") {
  std::vector<CurvePoint> concave, convex;
  for (double x = 1; x < 100; x *= 2) {
    concave.push_back({x, std::sqrt(x)});
    convex.push_back({x, x * x});
  }
  CHECK(diminishing_returns_check(concave).holds);
  const auto r = diminishing_returns_check(convex);
  CHECK_FALSE(r.holds);
  CHECK(r.violations.size() == convex.size() - 2);
  CHECK_THROWS_AS(diminishing_returns_check(std::span(concave).first(2)),
                  PreconditionError);
}

TEST_CASE("population curves leave out lightly fed users") {
  std::vector<FlowStats> stats(3);
  stats[0].lambda = 2;
  stats[0].received = 50;
  stats[0].beta_r = 0.1;
  stats[1].lambda = 2.01;
  stats[1].received = 5;
  stats[1].beta_r = 0.9;
  stats[2].lambda = 200;
  stats[2].received = 500;
  stats[2].beta_r = 0.01;
  const auto c = population_curves(stats, 10);
  REQUIRE(c.beta_vs_inflow.size() == 2);
  CHECK(c.beta_vs_inflow[0].mean == 0.1);
  CHECK(c.inflow.size() == 3);
}
