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

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "infoload/config.h"
#include "infoload/contagion_sim.h"
#include "infoload/error.h"
#include "infoload/graphgen.h"
#include "infoload/rng.h"
#include "test_util.h"

using namespace infoload;
using infoload::testing::graph_of;

namespace {

SocialGraph random_graph(Rng& rng, std::size_t n, double p) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = 0; b < n; ++b)
      if (a != b && rng.bernoulli(p)) e.emplace_back(a, b);
  return SocialGraph::from_edges(n, e);
}

std::size_t edge_of(const SocialGraph& g, NodeId follower, NodeId followee) {
  const auto f = g.followees(follower);
  return g.followee_edge_base(follower) +
         static_cast<std::size_t>(std::find(f.begin(), f.end(), followee) - f.begin());
}

// Nodes that can hear from `seed`: fixpoint over "u follows an informed v".
std::set<NodeId> audience(const SocialGraph& g, NodeId seed) {
  std::vector<bool> in(g.node_count(), false);
  in[seed] = true;
  for (bool grew = true; grew;) {
    grew = false;
    for (NodeId u = 0; u < g.node_count(); ++u)
      for (NodeId v = 0; v < g.node_count(); ++v)
        if (!in[u] && in[v] && g.follows(u, v)) in[u] = grew = true;
  }
  std::set<NodeId> s;
  for (NodeId u = 0; u < g.node_count(); ++u)
    if (in[u]) s.insert(u);
  return s;
}

// Bellman-Ford over the live edges of one cascade, with the same draws.
std::map<NodeId, double> arrival_times(const SocialGraph& g, const Rates& r,
                                       const SimConfig& cfg, std::uint64_t c) {
  const std::size_t n = g.node_count();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> t(n, inf);
  t[cascade_seed(cfg, n, c)] = 0;
  for (std::size_t round = 0; round < n; ++round)
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = 0; v < n; ++v) {
        if (u == v || !g.follows(u, v) || t[v] == inf) continue;
        const std::size_t e = edge_of(g, u, v);
        if (!(edge_uniform(cfg, c, e) < beta_of_inflow(r.in[u], cfg.beta)))
          continue;
        const double a = t[v] + edge_delay(cfg, r, c, u, e);
        if (a <= cfg.max_time) t[u] = std::min(t[u], a);
      }
  std::map<NodeId, double> m;
  for (NodeId u = 0; u < n; ++u)
    if (t[u] < inf) m[u] = t[u];
  return m;
}

}  // namespace

TEST_CASE("beta curve") {
  const BetaCurve b{30, 0.01, 0.65};
  CHECK(beta_of_inflow(30, b) == 0.01);
  CHECK(beta_of_inflow(0, b) == 0.01);
  CHECK(beta_of_inflow(300, b) == doctest::Approx(0.01 * std::pow(10, -0.65)));
  CHECK(beta_of_inflow(300, b) == doctest::Approx(0.00224).epsilon(0.001));
  CHECK(beta_of_inflow(1, BetaCurve{30, 2.0, 0.5}) == 1.0);
}

TEST_CASE("degenerate rates") {
  // Node 0 follows 1..10.
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId v = 1; v <= 10; ++v) e.emplace_back(0, v);
  e.emplace_back(3, 4);
  const auto g = graph_of(11, e);
  const auto r = assign_rates(g, 2, 0, 1);
  for (double x : r.out) CHECK(x == 2);
  CHECK(r.in[0] == 20);
  CHECK(r.in[3] == 2);
  CHECK(r.in[1] == 0);
}

TEST_CASE("in-flow is the sum over followees") {
  Rng rng(8);
  const auto g = random_graph(rng, 60, 0.1);
  const auto r = assign_rates(g, 5, 3, 42);
  for (double x : r.out) CHECK(x >= 0);
  for (NodeId u = 0; u < 60; ++u) {
    double s = 0;
    for (NodeId v = 0; v < 60; ++v)
      if (g.follows(u, v)) s += r.out[v];
    CHECK(r.in[u] == doctest::Approx(s).epsilon(1e-12));
  }
  // Same seed, same draws.
  CHECK(assign_rates(g, 5, 3, 42).out == r.out);
}

TEST_CASE("truncated Gaussian out-flow") {
  const auto g = graph_of(20000, {});
  const auto r = assign_rates(g, 1, 0.25, 3);
  double m = 0;
  for (double x : r.out) m += x;
  m /= r.out.size();
  CHECK(m == doctest::Approx(1).epsilon(0.01));
}

TEST_CASE("zero beta gives single-node cascades") {
  Rng rng(1);
  const auto g = random_graph(rng, 40, 0.2);
  SimConfig cfg;
  cfg.beta.beta0 = 0;
  cfg.n_cascades = 200;
  const auto r = assign_rates(g, cfg.mu, cfg.effective_sigma(), cfg.seed);
  for (const auto& c : simulate_ic_bg(g, r, cfg, 2)) CHECK(c.size() == 1);
}

TEST_CASE("unit beta reaches the whole audience") {
  Rng rng(2);
  for (int trial = 0; trial < 5; ++trial) {
    const auto g = random_graph(rng, 30, 0.05);
    SimConfig cfg;
    cfg.beta = {30, 1, 0};
    cfg.n_cascades = 30;
    cfg.seed = trial;
    const auto r = assign_rates(g, 1, 0, 0);
    for (const auto& c : simulate_ic_bg(g, r, cfg, 2)) {
      const std::set<NodeId> got(c.adopters.begin(), c.adopters.end());
      CHECK(got.size() == c.size());
      CHECK(got == audience(g, c.seed));
      CHECK(c.adopters.front() == c.seed);
    }
  }
}

TEST_CASE("two-node chain with a fixed delay") {
  const auto g = graph_of(2, {{1, 0}});
  SimConfig cfg;
  cfg.beta = {30, 1, 0};
  cfg.delays = DelayModel::constant(5);
  cfg.n_cascades = 20;
  const auto r = assign_rates(g, 1, 0, 0);
  const auto recs = simulate_ct_bg(g, r, cfg, 1);
  bool saw = false;
  for (const auto& c : recs) {
    if (c.seed == 0) {
      REQUIRE(c.size() == 2);
      CHECK(c.duration == doctest::Approx(5).epsilon(1e-9));
      saw = true;
    } else {
      CHECK(c.size() == 1);
      CHECK(c.duration == 0);
    }
  }
  CHECK(saw);
}

TEST_CASE("continuous times equal shortest arrivals over the same draws") {
  Rng rng(3);
  DelayModel delays({DelayBin{0, 3, {2, 0.5, 1, 1}},
                     DelayBin{3, std::numeric_limits<double>::infinity(), {4, 1, 3, 2}}});
  for (int trial = 0; trial < 6; ++trial) {
    const auto g = random_graph(rng, 25, 0.12);
    SimConfig cfg;
    cfg.beta = {2, 0.6, 0.5};
    cfg.delays = delays;
    cfg.n_cascades = 40;
    cfg.seed = 100 + trial;
    if (trial % 2) cfg.max_time = 200;
    const auto r = assign_rates(g, 1, 0.5, cfg.seed);
    const auto ct = simulate_ct_bg(g, r, cfg, 3);
    const auto ic = simulate_ic_bg(g, r, cfg, 2);
    for (std::size_t c = 0; c < ct.size(); ++c) {
      const auto want = arrival_times(g, r, cfg, c);
      REQUIRE(ct[c].times.size() == ct[c].adopters.size());
      std::map<NodeId, double> got;
      for (std::size_t i = 0; i < ct[c].size(); ++i)
        got[ct[c].adopters[i]] = ct[c].times[i];
      REQUIRE(got.size() == want.size());
      double last = 0;
      for (const auto& [u, t] : want) {
        REQUIRE(got.count(u));
        CHECK(got[u] == doctest::Approx(t).epsilon(1e-12));
        last = std::max(last, t);
      }
      CHECK(ct[c].duration == doctest::Approx(last));
      CHECK(ct[c].duration <= cfg.max_time);
      CHECK(std::is_sorted(ct[c].times.begin(), ct[c].times.end()));
      if (cfg.max_time == std::numeric_limits<double>::infinity()) {
        // Without truncation both models see the same live edges.
        const std::set<NodeId> a(ct[c].adopters.begin(), ct[c].adopters.end());
        const std::set<NodeId> b(ic[c].adopters.begin(), ic[c].adopters.end());
        CHECK(a == b);
      }
    }
  }
}

TEST_CASE("results do not depend on the worker count") {
  KroneckerParams kp;
  kp.k = 8;
  kp.target_edges = 2000;
  const auto g = kronecker_generate(kp);
  SimConfig cfg;
  cfg.beta = {30, 0.3, 0.65};
  cfg.delays = DelayModel::constant(60);
  cfg.n_cascades = 300;
  cfg.seed = 11;
  const auto r = assign_rates(g, 1, 0.25, 11);
  auto key = [](const std::vector<CascadeRecord>& v) {
    std::vector<std::pair<std::vector<NodeId>, std::vector<double>>> k;
    for (const auto& c : v) k.emplace_back(c.adopters, c.times);
    return k;
  };
  const auto a = simulate_ct_bg(g, r, cfg, 1);
  CHECK(key(a) == key(simulate_ct_bg(g, r, cfg, 4)));
  CHECK(key(simulate_ic_bg(g, r, cfg, 1)) == key(simulate_ic_bg(g, r, cfg, 3)));
  for (const auto& c : a) CHECK(c.size() <= g.node_count());
}

TEST_CASE("delay model bins") {
  using B = DelayBin;
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(DelayModel({B{0, 10, {}}, B{20, inf, {}}}), PreconditionError);
  CHECK_THROWS_AS(DelayModel({B{1, inf, {}}}), PreconditionError);
  CHECK_THROWS_AS(DelayModel({B{0, 10, {}}}), PreconditionError);
  const DelayModel m({B{10, inf, {5, 1, 4, 1}}, B{0, 10, {1, 1, 0, 1}}});
  CHECK(m.bin_for(0).hi == 10);
  CHECK(m.bin_for(10).lo == 10);
  CHECK(DelayModel().empty());
  CHECK_THROWS_AS(DelayModel().bin_for(1), PreconditionError);

  const auto g = graph_of(2, {{1, 0}});
  SimConfig cfg;
  cfg.n_cascades = 1;
  CHECK_THROWS_AS(simulate_ct_bg(g, assign_rates(g, 1, 0, 0), cfg, 1),
                  PreconditionError);
}

TEST_CASE("configuration keys") {
  std::istringstream in(
      "mu = 10\nsigma = 0\nbeta0 = 0.2\ngamma = 1\nlambda_c = 5\n"
      "n_cascades = 7\nseed = 3\nmax_time = 100\n"
      "delay_bin.0.lo = 0\ndelay_bin.0.hi = 50\n"
      "delay_bin.0.mu1 = 1\ndelay_bin.0.sigma1 = 0.5\n"
      "delay_bin.0.mu2 = 2\ndelay_bin.0.sigma2 = 0.5\n"
      "delay_bin.1.lo = 50\ndelay_bin.1.hi = inf\n"
      "delay_bin.1.mu1 = 3\ndelay_bin.1.sigma1 = 1\n"
      "delay_bin.1.mu2 = 4\ndelay_bin.1.sigma2 = 1\n");
  const auto c = SimConfig::from_config(KeyValueConfig::parse(in, "test"));
  CHECK(c.mu == 10);
  CHECK(c.effective_sigma() == 0);
  CHECK(c.beta.beta0 == 0.2);
  CHECK(c.n_cascades == 7);
  CHECK(c.max_time == 100);
  REQUIRE(c.delays.bins().size() == 2);
  CHECK(c.delays.bin_for(60).params.mu2 == 4);
  CHECK(SimConfig{}.effective_sigma() == 0.25);

  std::istringstream one("delay_bin.0.mu1 = 1\ndelay_bin.0.sigma1 = 1\n"
                         "delay_bin.0.mu2 = 1\ndelay_bin.0.sigma2 = 1\n");
  const auto d = SimConfig::from_config(KeyValueConfig::parse(one, "test")).delays;
  REQUIRE(d.bins().size() == 1);
  CHECK(d.bins()[0].lo == 0);
  CHECK(std::isinf(d.bins()[0].hi));

  SimConfig bad;
  bad.mu = 0;
  CHECK_THROWS_AS(validate(bad), PreconditionError);
  bad = SimConfig{};
  bad.beta.beta0 = 1.5;
  CHECK_THROWS_AS(validate(bad), PreconditionError);
}

TEST_CASE("size and duration distributions") {
  std::vector<CascadeRecord> recs(3);
  for (int i = 0; i < 3; ++i) recs[i].adopters.assign(i + 1, 0);
  recs[1].duration = 4;
  recs[2].duration = 9;
  const auto rep = distribution_report(recs);
  CHECK(rep.fraction_at_least(2) == doctest::Approx(2.0 / 3));
  CHECK(rep.fraction_at_least(3) == doctest::Approx(1.0 / 3));
  CHECK(rep.multi_node == 2);
  CHECK_FALSE(rep.duration_empty);
  CHECK(rep.durations.size() == 2);

  std::vector<CascadeRecord> ones(4);
  for (auto& r : ones) r.adopters = {0};
  const auto flat = distribution_report(ones);
  CHECK(flat.duration_empty);
  CHECK(flat.duration_ccdf.empty());
  REQUIRE(flat.size_ccdf.size() == 1);
  CHECK(flat.size_ccdf[0].ccdf == 1);

  CHECK_THROWS_AS(distribution_report(std::vector<CascadeRecord>{}),
                  PreconditionError);
}

TEST_CASE("size CCDF matches sort and count") {
  Rng rng(12);
  std::vector<CascadeRecord> recs(50000);
  std::vector<std::size_t> sizes;
  for (auto& r : recs) {
    r.adopters.assign(1 + static_cast<std::size_t>(std::floor(-std::log(rng.uniform_open0()) * 3)), 0);
    sizes.push_back(r.size());
  }
  std::sort(sizes.begin(), sizes.end());
  const auto rep = distribution_report(recs);
  for (const auto& pt : rep.size_ccdf) {
    const auto ge = sizes.end() - std::lower_bound(sizes.begin(), sizes.end(),
                                                   static_cast<std::size_t>(pt.x));
    CHECK(pt.ccdf == doctest::Approx(double(ge) / sizes.size()));
  }
  std::set<std::size_t> distinct(sizes.begin(), sizes.end());
  CHECK(rep.size_ccdf.size() == distinct.size());
}
