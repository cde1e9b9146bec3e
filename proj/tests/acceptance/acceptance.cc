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

// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.h"
#include "infoload/contagion_sim.h"
#include "infoload/exposure.h"
#include "infoload/flow_metrics.h"
#include "infoload/graphgen.h"
#include "infoload/queue_analytics.h"
#include "infoload/rng.h"
#include "infoload/synth.h"
#include "support/oracles.h"

using namespace infoload;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

EventLogParse parse(const std::string& text) {
  std::istringstream in(text);
  return parse_event_log(in);
}

// 1. Beta-curve round trip through the synthetic generator.
Outcome beta_round_trip() {
  WorkloadSpec spec;
  KroneckerParams kp;
  kp.k = 11;  // 2048 nodes
  kp.target_edges = 40000;
  kp.seed = 1;
  spec.kronecker = kp;
  spec.mu = 1;
  spec.sigma = 0.25;
  spec.beta = {30, 0.05, 0.65};
  spec.horizon_hours = 100;
  spec.seed = 1;
  const auto w = generate_workload(spec);
  const FeedIndex feed(w.log, w.graph);
  InFlowOptions o;
  o.include_retweets = false;
  const auto stats = compute_all_flow_stats(feed, w.log.span(), o, 1);
  const auto curves = population_curves(stats, 10, 10);
  const auto fit = fit_two_regime(bin_means(curves.beta_vs_inflow));
  const double ratio = fit.lambda_c / 30;
  const bool ok = std::abs(fit.gamma - 0.65) <= 0.10 && ratio <= 1.5 &&
                  ratio >= 1 / 1.5;
  return {ok, fmt("%zu nodes, %zu events; gamma %.3f (0.65 +- 0.10), "
                  "lambda_c %.2f (30 within x1.5)",
                  w.graph.node_count(), w.log.size(), fit.gamma, fit.lambda_c)};
}

// 2. Fast queue positions against the quadratic scan.
Outcome queue_oracle() {
  Rng rng(2);
  std::size_t records = 0, mismatched = 0;
  for (int log_i = 0; log_i < 200; ++log_i) {
    const int users = 3 + static_cast<int>(rng.below(13));
    const int events = 100 + static_cast<int>(rng.below(901));
    std::vector<std::pair<NodeId, NodeId>> edges;
    const double p = 0.2 + 0.6 * rng.uniform();
    for (int a = 0; a < users; ++a)
      for (int b = 0; b < users; ++b)
        if (a != b && rng.bernoulli(p)) edges.emplace_back(a, b);
    const auto graph = SocialGraph::from_edges(users, edges);
    const auto parsed = parse(oracle::random_log_text(rng, users, events));
    const auto span = parsed.log.span();
    const std::int64_t len = span.end - span.start;
    const TimeWindow w{span.start + static_cast<std::int64_t>(rng.below(len / 4 + 1)),
                       span.end - static_cast<std::int64_t>(rng.below(len / 4 + 1))};
    const FeedIndex feed(parsed.log, graph);
    for (bool rts : {true, false}) {
      QueueOptions o;
      o.inflow.include_retweets = rts;
      auto got = queue_records(feed, w, o, 1 + log_i % 3).records;
      auto want = oracle::queue_positions(parsed.log, graph, w, rts);
      auto key = [](const QueuePositionRecord& r) {
        return std::make_tuple(r.user, r.retweet, r.original, r.q, r.delay_s);
      };
      std::multiset<decltype(key(got[0]))> a, b;
      for (const auto& r : got) a.insert(key(r));
      for (const auto& r : want) b.insert(key(r));
      records += want.size();
      if (a != b) {
        std::vector<decltype(key(got[0]))> diff;
        std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                      std::back_inserter(diff));
        mismatched += std::max<std::size_t>(1, diff.size());
      }
    }
  }
  return {mismatched == 0 && records > 0,
          fmt("200 logs x 2 in-flow modes, %zu records, %zu mismatched", records,
              mismatched)};
}

// 3. Little bounds from a stream built to have lambda = 10/h, lambda_r = 2/h,
// mean delay 0.1 h and mean queue position 5.
Outcome little_arithmetic() {
  std::string text;
  int id = 1;
  std::int64_t start = 1000000;
  auto post = [&](std::int64_t t) {
    text += std::to_string(t) + "\tf\tT\t" + std::to_string(id) + "\n";
    return id++;
  };
  auto forward = [&](std::int64_t t, int orig) {
    text += std::to_string(t) + "\tu\tR\t" + std::to_string(id++) + "\t" +
            std::to_string(orig) + "\tf\n";
  };
  for (int h = 0; h < 10; ++h) {
    const std::int64_t t0 = start + 3600 * h;
    // A, p1..p3, B, p4 | forward A (q = 5) | p5..p8 | forward B (q = 5)
    const int a = post(t0);
    for (int i = 1; i <= 3; ++i) post(t0 + 10 * i);
    const int b = post(t0 + 40);
    post(t0 + 50);
    forward(t0 + 360, a);
    for (int s : {370, 380, 390, 395}) post(t0 + s);
    forward(t0 + 400, b);
  }
  const auto parsed = parse(text);
  std::istringstream gin("u\tf\n");
  const auto graph = parse_graph(gin).graph;
  const FeedIndex feed(parsed.log, graph);
  const TimeWindow w{start, start + 36000};
  const NodeId u = graph.require("u");
  const auto st = compute_flow_stats(feed, u, w);
  const auto q = queue_records(feed, w, QueueOptions{}, 1).records;
  double delay_h = 0, pos = 0;
  for (const auto& r : q) {
    delay_h += r.delay_s / 3600.0;
    pos += static_cast<double>(r.q);
  }
  delay_h /= static_cast<double>(q.size());
  pos /= static_cast<double>(q.size());
  const auto b = little_bounds(st, delay_h, pos);
  const bool inputs = st.lambda == 10 && st.lambda_r == 2 &&
                      std::abs(delay_h - 0.1) < 1e-12 && pos == 5;
  const bool ok = inputs && std::abs(b.delta_nr_star - 0.6) <= 1e-12 &&
                  std::abs(b.delta_star - 0.5) <= 1e-12;
  return {ok, fmt("measured lambda %.12g, lambda_r %.12g, delta_r %.12g h, N_r %.12g; "
                  "delta*_nr %.15g h, delta* %.15g h",
                  st.lambda, st.lambda_r, delay_h, pos, b.delta_nr_star, b.delta_star)};
}

// 4. Power-law exponent from inverse-CDF Pareto samples.
Outcome power_law() {
  Rng rng(4);
  const double alpha = 2.5, x_min = 1.0;
  std::vector<double> x(100000);
  for (auto& v : x) v = x_min * std::pow(rng.uniform_open0(), -1.0 / (alpha - 1));
  const auto fit = fit_power_law_mle(x, x_min);
  return {fit.alpha >= 2.45 && fit.alpha <= 2.55,
          fmt("alpha %.4f from %zu samples (want [2.45, 2.55])", fit.alpha, fit.n)};
}

SocialGraph standard_graph() {
  KroneckerParams kp;  // [0.9 0.5; 0.5 0.3], 1024 nodes, 20000 edges
  kp.seed = 1;
  return kronecker_generate(kp);
}

SimConfig standard_sim(double mu) {
  SimConfig c;
  c.mu = mu;
  c.beta = {30, 0.02, 0.65};
  c.n_cascades = 50000;
  c.seed = 5;
  const double inf = std::numeric_limits<double>::infinity();
  // Light-tailed delays up to 100 posts/h, heavy tail above.
  c.delays = DelayModel({DelayBin{0, 100, {std::log(600.0), 0.3, std::log(300.0), 0.3}},
                         DelayBin{100, inf, {std::log(60.0), 0.5, std::log(30.0), 3.0}}});
  return c;
}

// 5. Background traffic shrinks independent cascades.
Outcome ic_sizes() {
  const auto g = standard_graph();
  std::vector<double> frac;
  for (double mu : {1.0, 10.0, 100.0}) {
    const auto cfg = standard_sim(mu);
    const auto r = assign_rates(g, mu, cfg.effective_sigma(), cfg.seed);
    frac.push_back(distribution_report(simulate_ic_bg(g, r, cfg, 1)).fraction_at_least(3));
  }
  const bool monotone = frac[0] >= frac[1] && frac[1] >= frac[2];
  const bool factor = frac[2] == 0 ? frac[0] > 0 : frac[0] / frac[2] >= 20;
  return {monotone && factor,
          fmt("size>=3 fraction: mu=1 %.4f, mu=10 %.4f, mu=100 %.5f (ratio %.1f, "
              "need >= 20 and non-increasing)",
              frac[0], frac[1], frac[2], frac[0] / frac[2])};
}

double quantile_of(std::vector<double>& v, double p) {
  const auto k = static_cast<std::size_t>(p * static_cast<double>(v.size() - 1));
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
  return v[k];
}

// 6. Heavy delay tails for overloaded users stretch the duration tail.
Outcome ct_tail() {
  const auto g = standard_graph();
  std::vector<std::vector<double>> d;
  for (double mu : {1.0, 100.0}) {
    const auto cfg = standard_sim(mu);
    const auto r = assign_rates(g, mu, cfg.effective_sigma(), cfg.seed);
    const auto rep = distribution_report(simulate_ct_bg(g, r, cfg, 1));
    d.emplace_back(rep.durations.values().begin(), rep.durations.values().end());
  }
  auto stat = [](std::vector<double> v, double p) { return quantile_of(v, p); };
  const double q99_1 = stat(d[0], 0.99), q99_100 = stat(d[1], 0.99);
  const double med_1 = stat(d[0], 0.5), med_100 = stat(d[1], 0.5);
  // Percentile bootstrap of the two differences.
  Rng rng(6);
  const int reps = 1000;
  std::vector<double> tail_diff, med_diff;
  std::vector<double> a, b;
  for (int i = 0; i < reps; ++i) {
    a.resize(d[0].size());
    b.resize(d[1].size());
    for (auto& x : a) x = d[0][rng.below(d[0].size())];
    for (auto& x : b) x = d[1][rng.below(d[1].size())];
    tail_diff.push_back(quantile_of(b, 0.99) - quantile_of(a, 0.99));
    med_diff.push_back(quantile_of(b, 0.5) - quantile_of(a, 0.5));
  }
  const double tail_lo = quantile_of(tail_diff, 0.025);
  const double med_hi = quantile_of(med_diff, 0.975);
  return {tail_lo > 0 && med_hi < 0,
          fmt("multi-node cascades %zu / %zu; p99 duration %.0f s -> %.0f s "
              "(95%% CI of increase > %.0f s); median %.0f s -> %.0f s "
              "(95%% CI of change < %.0f s)",
              d[0].size(), d[1].size(), q99_1, q99_100, tail_lo, med_1, med_100,
              med_hi)};
}

// Sparse random digraph with Poisson out-degrees: few triangles, so
// exposures rarely arrive in quick succession.
SocialGraph sparse_graph(std::size_t n, double mean_degree, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u < n; ++u) {
    const int d = std::poisson_distribution<int>(mean_degree)(rng);
    std::set<NodeId> f;
    while (static_cast<int>(f.size()) < d) {
      const auto v = static_cast<NodeId>(rng.below(n));
      if (v != u) f.insert(v);
    }
    for (NodeId v : f) edges.emplace_back(u, v);
  }
  return SocialGraph::from_edges(n, edges);
}

struct ExposureRun {
  std::vector<AggregatePoint> all;
  std::vector<std::vector<AggregatePoint>> groups;
};

ExposureRun exposure_run(double overload_factor, double lambda_c) {
  const auto g = sparse_graph(5000, 8, 7);
  WorkloadSpec spec;
  spec.mu = 1;
  spec.sigma = 0.5;
  spec.beta = {30, 0, 0};
  spec.seed = 7;
  std::vector<std::string> tokens;
  for (int t = 0; t < 100; ++t) {
    ContagionPlan p;
    p.token = "#c" + std::to_string(t);
    p.initial_adopters = 20;
    p.hazard = 0.1;
    p.overload_factor = overload_factor;
    p.overload_lambda = lambda_c;
    spec.contagions.push_back(p);
    tokens.push_back(p.token);
  }
  const auto w = generate_workload(g, spec);
  const FeedIndex feed(w.log, w.graph);
  const auto traces = build_traces(tokens, feed, w.log.span(), 1);
  const auto stats = compute_all_flow_stats(feed, w.log.span(), InFlowOptions{}, 1);
  const std::vector<InflowRange> ranges{{0, lambda_c}, {lambda_c, 1e12}};
  const auto groups = group_users_by_inflow(stats, ranges);
  ExposureRun out;
  std::vector<ExposureCurve> curves;
  for (const auto& t : traces) curves.push_back(exposure_curve(t, ExposureCurveOptions{1}));
  out.all = aggregate_curves(curves, Aggregation::kPooled, 1);
  for (const auto& grp : groups) {
    curves.clear();
    for (const auto& t : traces)
      curves.push_back(exposure_curve(t, grp.users, ExposureCurveOptions{1}));
    out.groups.push_back(aggregate_curves(curves, Aggregation::kPooled, 1));
  }
  return out;
}

// 7. Exposure curves: constant hazard recovered, overload hazard ordered.
Outcome exposure_curves() {
  const double p = 0.1, lambda_c = 8;
  const auto flat = exposure_run(1.0, lambda_c);
  double worst = 0;
  std::string flat_pts;
  bool flat_ok = true;
  int flat_k = 0;
  for (const auto& a : flat.all) {
    if (a.k == 0 || a.exposed < 200) continue;
    const double z = (a.p - p) / std::sqrt(p * (1 - p) / static_cast<double>(a.exposed));
    worst = std::max(worst, std::abs(z));
    flat_ok &= std::abs(z) <= 2;
    ++flat_k;
    flat_pts += fmt(" k=%zu:%.4f(E=%zu)", a.k, a.p, a.exposed);
  }
  const auto halved = exposure_run(0.5, lambda_c);
  const auto& low = halved.groups[0];
  const auto& high = halved.groups[1];
  bool order_ok = true;
  int order_k = 0;
  std::string order_pts;
  for (const auto& a : low) {
    if (a.k == 0 || a.exposed < 200) continue;
    for (const auto& b : high) {
      if (b.k != a.k || b.exposed < 200) continue;
      order_ok &= b.p < a.p;
      ++order_k;
      order_pts += fmt(" k=%zu:%.4f>%.4f", a.k, a.p, b.p);
    }
  }
  return {flat_ok && flat_k > 0 && order_ok && order_k > 0,
          fmt("constant hazard:%s, max |z| %.2f (<= 2); halved above %.0f/h, "
              "low vs high group:%s",
              flat_pts.c_str(), worst, lambda_c, order_pts.c_str())};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// 8. Randomized commands give identical bytes for any worker count.
Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "infoload_acceptance_det";
  fs::remove_all(root);
  const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> cmds{
      {{"graphgen", "--set", "kronecker.k=9", "--set", "kronecker.edges=4000"},
       {"graph.tsv"}},
      {{"simulate", "--model", "ic", "--set", "kronecker.k=9", "--set",
        "kronecker.edges=4000", "--set", "beta0=0.1", "--set", "n_cascades=2000"},
       {"cascades.csv", "size_ccdf.csv", "simulation.txt"}},
      {{"simulate", "--model", "ct", "--set", "kronecker.k=9", "--set",
        "kronecker.edges=4000", "--set", "beta0=0.1", "--set", "n_cascades=2000",
        "--set", "delay_bin.0.mu1=5", "--set", "delay_bin.0.sigma1=1",
        "--set", "delay_bin.0.mu2=3", "--set", "delay_bin.0.sigma2=2"},
       {"cascades.csv", "size_ccdf.csv", "duration_ccdf.csv", "simulation.txt"}},
      {{"synth", "--set", "kronecker.k=8", "--set", "kronecker.edges=2000",
        "--set", "mu=2", "--set", "beta0=0.2", "--set", "horizon_hours=24",
        "--set", "contagion.0.token=#x", "--set", "contagion.0.hazard=0.2"},
       {"events.tsv", "graph.tsv", "rates.tsv", "ground_truth.txt"}},
  };
  const unsigned worker_sets[][2] = {{1, 2}, {1, 4}, {2, 3}, {1, 8}, {3, 5},
                                     {4, 1}, {2, 7}, {1, 3}, {6, 2}, {8, 1}};
  std::size_t compared = 0, differing = 0, failed_runs = 0;
  for (int trial = 0; trial < 10; ++trial) {
    for (std::size_t c = 0; c < cmds.size(); ++c) {
      std::vector<std::string> outputs;
      for (int rep = 0; rep < 2; ++rep) {
        const fs::path dir = root / fmt("t%d_c%zu_r%d", trial, c, rep);
        auto args = cmds[c].first;
        args.insert(args.end(),
                    {"--seed", std::to_string(100 + trial), "--workers",
                     std::to_string(worker_sets[trial][rep]), "--out", dir.string()});
        std::ostringstream out, err;
        if (cli::run(args, out, err) != 0) {
          ++failed_runs;
          std::fprintf(stderr, "%s", err.str().c_str());
        }
        std::string all;
        for (const auto& f : cmds[c].second) all += f + "\n" + slurp(dir / f);
        outputs.push_back(all);
      }
      ++compared;
      differing += outputs[0] != outputs[1];
    }
  }
  fs::remove_all(root);
  return {differing == 0 && failed_runs == 0,
          fmt("10 trials x %zu commands, %zu compared, %zu differing, %zu failed runs",
              cmds.size(), compared, differing, failed_runs)};
}

// 9. Sum-of-lognormals fit on self-generated delays.
Outcome lognormal_fit() {
  const LognormalSum truth{5.0, 0.2, 3.0, 1.5};
  Rng rng(9);
  std::vector<double> z(10000);
  for (auto& v : z) v = sample_lognormal_sum(rng, truth);
  const auto fit = fit_lognormal_convolution(z);
  const double dev = std::max({std::abs(fit.params.mu1 - truth.mu1),
                               std::abs(fit.params.sigma1 - truth.sigma1),
                               std::abs(fit.params.mu2 - truth.mu2),
                               std::abs(fit.params.sigma2 - truth.sigma2)});
  return {dev <= 0.15,
          fmt("fit (%.3f, %.3f, %.3f, %.3f) vs (5, 0.2, 3, 1.5), max deviation %.3f",
              fit.params.mu1, fit.params.sigma1, fit.params.mu2, fit.params.sigma2, dev)};
}

struct Criterion {
  int number;
  const char* name;
  double limit_s;  // 0 means no runtime limit
  std::function<Outcome()> check;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "beta-curve round trip", 300, beta_round_trip},
      {2, "queue-position oracle equivalence", 60, queue_oracle},
      {3, "Little-bound arithmetic", 0, little_arithmetic},
      {4, "power-law MLE", 0, power_law},
      {5, "IC cascade sizes under background traffic", 600, ic_sizes},
      {6, "CT duration tail", 0, ct_tail},
      {7, "exposure-curve estimator", 0, exposure_curves},
      {8, "determinism across worker counts", 0, determinism},
      {9, "lognormal-convolution fit recovery", 120, lognormal_fit},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string timing = fmt("%.1f s", secs);
    if (c.limit_s > 0) {
      timing += fmt(" (limit %.0f s)", c.limit_s);
      if (secs > c.limit_s) {
        o.pass = false;
        timing += " over limit";
      }
    }
    failures += !o.pass;
    std::printf("%s %d %s: %s [%s]\n", o.pass ? "PASS" : "FAIL", c.number, c.name,
                o.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
