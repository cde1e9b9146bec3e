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

#include "infoload/contagion_sim.h"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "infoload/error.h"
#include "infoload/parallel.h"

namespace infoload {

namespace {

// Stream tags.
constexpr std::uint64_t kRateStream = 1;
constexpr std::uint64_t kSeedStream = 2;
constexpr std::uint64_t kCoinStream = 3;
constexpr std::uint64_t kDelayStream = 4;

}  // namespace

double beta_of_inflow(double lambda_in, const BetaCurve& curve) {
  double b = curve.beta0;
  if (lambda_in > curve.lambda_c)
    b *= std::pow(lambda_in / curve.lambda_c, -curve.gamma);
  return std::clamp(b, 0.0, 1.0);
}

DelayModel::DelayModel(std::vector<DelayBin> bins) : bins_(std::move(bins)) {
  if (bins_.empty()) throw PreconditionError("delay model has no bins");
  std::sort(bins_.begin(), bins_.end(),
            [](const DelayBin& a, const DelayBin& b) { return a.lo < b.lo; });
  if (bins_.front().lo != 0)
    throw PreconditionError("delay bins must start at in-flow 0, first is " +
                            format_double(bins_.front().lo));
  for (std::size_t i = 0; i < bins_.size(); ++i) {
    const DelayBin& b = bins_[i];
    if (!(b.hi > b.lo))
      throw PreconditionError("delay bin " + std::to_string(i) + " is empty");
    if (b.params.sigma1 < 0 || b.params.sigma2 < 0)
      throw PreconditionError("delay bin " + std::to_string(i) +
                              " has a negative sigma");
    if (i + 1 < bins_.size() && bins_[i + 1].lo != b.hi)
      throw PreconditionError("delay bins leave a gap or overlap at in-flow " +
                              format_double(b.hi));
  }
  if (!std::isinf(bins_.back().hi))
    throw PreconditionError("delay bins must extend to infinity, last ends at " +
                            format_double(bins_.back().hi));
}

DelayModel DelayModel::constant(double seconds) {
  DelayBin b;
  const double half = std::log(seconds / 2);
  b.params = {half, 0.0, half, 0.0};
  return DelayModel({b});
}

DelayModel DelayModel::from_config(const KeyValueConfig& config,
                                   std::string_view prefix) {
  std::vector<DelayBin> bins;
  for (int i = 0;; ++i) {
    const std::string p = std::string(prefix) + std::to_string(i) + ".";
    if (!config.has(p + "lo") && !config.has(p + "mu1")) break;
    DelayBin b;
    // lo defaults to the previous bin's upper edge, hi to infinity.
    b.lo = config.get_double(p + "lo", bins.empty() ? 0.0 : bins.back().hi);
    b.hi = config.get_double(p + "hi", b.hi);
    b.params.mu1 = config.get_double(p + "mu1");
    b.params.sigma1 = config.get_double(p + "sigma1");
    b.params.mu2 = config.get_double(p + "mu2");
    b.params.sigma2 = config.get_double(p + "sigma2");
    bins.push_back(b);
  }
  if (bins.empty()) return {};
  return DelayModel(std::move(bins));
}

const DelayBin& DelayModel::bin_for(double lambda_in) const {
  auto it = std::upper_bound(
      bins_.begin(), bins_.end(), lambda_in,
      [](double x, const DelayBin& b) { return x < b.lo; });
  if (it == bins_.begin() || !(lambda_in < std::prev(it)->hi))
    throw PreconditionError("no delay bin holds in-flow " +
                            format_double(lambda_in));
  return *std::prev(it);
}

SimConfig SimConfig::from_config(const KeyValueConfig& config) {
  SimConfig c;
  c.mu = config.get_double("mu", c.mu);
  c.sigma = config.get_double("sigma", c.sigma);
  c.beta.lambda_c = config.get_double("lambda_c", c.beta.lambda_c);
  c.beta.beta0 = config.get_double("beta0", c.beta.beta0);
  c.beta.gamma = config.get_double("gamma", c.beta.gamma);
  c.n_cascades = config.get_u64("n_cascades", c.n_cascades);
  c.seed = config.get_u64("seed", c.seed);
  c.max_time = config.get_double("max_time", c.max_time);
  c.delays = DelayModel::from_config(config);
  return c;
}

void validate(const SimConfig& c) {
  if (!(c.mu > 0)) throw PreconditionError("mu must be positive");
  if (!(c.beta.beta0 >= 0 && c.beta.beta0 <= 1))
    throw PreconditionError("beta0 must lie in [0, 1]");
  if (!(c.beta.lambda_c > 0))
    throw PreconditionError("lambda_c must be positive");
  if (!(c.beta.gamma >= 0)) throw PreconditionError("gamma must be >= 0");
  if (!(c.max_time > 0)) throw PreconditionError("max_time must be positive");
}

Rates assign_rates(const SocialGraph& graph, double mu, double sigma,
                   std::uint64_t seed) {
  if (graph.node_count() == 0)
    throw PreconditionError("cannot assign rates on an empty graph");
  if (!(mu > 0) || sigma < 0)
    throw PreconditionError("rates need mu > 0 and sigma >= 0");
  const std::size_t n = graph.node_count();
  Rates r;
  r.out.resize(n);
  r.in.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (sigma == 0) {
      r.out[i] = mu;
      continue;
    }
    Rng rng = Rng::keyed(seed, {kRateStream, i});
    double x;
    do {
      x = rng.normal(mu, sigma);
    } while (x < 0);
    r.out[i] = x;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (NodeId v : graph.followees(static_cast<NodeId>(i))) r.in[i] += r.out[v];
  return r;
}

NodeId cascade_seed(const SimConfig& config, std::size_t nodes,
                    std::uint64_t cascade) {
  Rng rng = Rng::keyed(config.seed, {kSeedStream, cascade});
  return static_cast<NodeId>(rng.below(nodes));
}

double edge_uniform(const SimConfig& config, std::uint64_t cascade,
                    std::size_t edge) {
  return Rng::keyed(config.seed, {kCoinStream, cascade, edge}).uniform();
}

double edge_delay(const SimConfig& config, const Rates& rates,
                  std::uint64_t cascade, NodeId follower, std::size_t edge) {
  Rng rng = Rng::keyed(config.seed, {kDelayStream, cascade, edge});
  return config.delays.sample(rng, rates.in[follower]);
}

namespace {

std::size_t edge_index(const SocialGraph& g, NodeId follower, NodeId followee) {
  const auto f = g.followees(follower);
  const auto it = std::lower_bound(f.begin(), f.end(), followee);
  return g.followee_edge_base(follower) +
         static_cast<std::size_t>(it - f.begin());
}

std::vector<double> node_betas(const Rates& rates, const BetaCurve& curve) {
  std::vector<double> b(rates.in.size());
  for (std::size_t i = 0; i < b.size(); ++i)
    b[i] = beta_of_inflow(rates.in[i], curve);
  return b;
}

void check_inputs(const SocialGraph& graph, const Rates& rates,
                  const SimConfig& config) {
  validate(config);
  if (graph.node_count() == 0)
    throw PreconditionError("cannot simulate on an empty graph");
  if (rates.in.size() != graph.node_count())
    throw PreconditionError("rates do not match the graph");
}

}  // namespace

std::vector<CascadeRecord> simulate_ic_bg(const SocialGraph& graph,
                                          const Rates& rates,
                                          const SimConfig& config,
                                          unsigned workers) {
  check_inputs(graph, rates, config);
  const auto beta = node_betas(rates, config.beta);
  std::vector<CascadeRecord> out(config.n_cascades);
  parallel_for(out.size(), workers, [&](std::size_t c) {
    CascadeRecord& rec = out[c];
    rec.id = c;
    rec.seed = cascade_seed(config, graph.node_count(), c);
    std::unordered_set<NodeId> adopted{rec.seed};
    rec.adopters.push_back(rec.seed);
    // adopters doubles as the BFS queue.
    for (std::size_t head = 0; head < rec.adopters.size(); ++head) {
      const NodeId v = rec.adopters[head];
      for (NodeId u : graph.followers(v)) {
        if (adopted.count(u) || beta[u] <= 0) continue;
        if (edge_uniform(config, c, edge_index(graph, u, v)) < beta[u]) {
          adopted.insert(u);
          rec.adopters.push_back(u);
        }
      }
    }
  });
  return out;
}

std::vector<CascadeRecord> simulate_ct_bg(const SocialGraph& graph,
                                          const Rates& rates,
                                          const SimConfig& config,
                                          unsigned workers) {
  check_inputs(graph, rates, config);
  if (config.delays.empty())
    throw PreconditionError("continuous-time simulation needs a delay model");
  for (std::size_t i = 0; i < rates.in.size(); ++i)
    config.delays.bin_for(rates.in[i]);
  const auto beta = node_betas(rates, config.beta);
  std::vector<CascadeRecord> out(config.n_cascades);
  parallel_for(out.size(), workers, [&](std::size_t c) {
    CascadeRecord& rec = out[c];
    rec.id = c;
    rec.seed = cascade_seed(config, graph.node_count(), c);
    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    std::unordered_map<NodeId, double> best{{rec.seed, 0.0}};
    std::unordered_set<NodeId> settled;
    pq.emplace(0.0, rec.seed);
    while (!pq.empty()) {
      const auto [t, v] = pq.top();
      pq.pop();
      if (!settled.insert(v).second) continue;
      rec.adopters.push_back(v);
      rec.times.push_back(t);
      for (NodeId u : graph.followers(v)) {
        if (settled.count(u) || beta[u] <= 0) continue;
        const std::size_t e = edge_index(graph, u, v);
        if (!(edge_uniform(config, c, e) < beta[u])) continue;
        const double arrival = t + edge_delay(config, rates, c, u, e);
        if (arrival > config.max_time) continue;
        const auto it = best.find(u);
        if (it != best.end() && it->second <= arrival) continue;
        best[u] = arrival;
        pq.emplace(arrival, u);
      }
    }
    rec.duration = rec.times.back();
  });
  return out;
}

DistributionReport distribution_report(std::span<const CascadeRecord> records) {
  if (records.empty())
    throw PreconditionError("distribution report needs at least one cascade");
  DistributionReport r;
  r.cascades = records.size();
  std::vector<double> sizes, durations;
  sizes.reserve(records.size());
  for (const auto& rec : records) {
    sizes.push_back(static_cast<double>(rec.size()));
    if (rec.size() >= 2) durations.push_back(rec.duration);
  }
  r.multi_node = durations.size();
  r.duration_empty = durations.empty();
  r.sizes = EmpiricalDistribution(std::move(sizes));
  r.durations = EmpiricalDistribution(std::move(durations));
  r.size_ccdf = ccdf_table(r.sizes);
  if (!r.duration_empty) r.duration_ccdf = ccdf_table(r.durations);
  return r;
}

}  // namespace infoload
