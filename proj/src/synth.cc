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

#include "infoload/synth.h"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <tuple>
#include <unordered_set>

#include "infoload/error.h"
#include "infoload/rng.h"

namespace infoload {

namespace {

constexpr std::uint64_t kPostStream = 10;
constexpr std::uint64_t kForwardStream = 11;
constexpr std::uint64_t kDelayStream = 12;
constexpr std::uint64_t kSeedStream = 20;
constexpr std::uint64_t kExposureStream = 21;
constexpr std::uint64_t kRateStream = 22;

struct Draft {
  std::int64_t ts = 0;
  std::uint64_t seq = 0;
  NodeId author = kNone;
  EventKind kind = EventKind::kTweet;
  std::uint64_t orig_seq = 0;
  int mark = -1;  // contagion plan index
};

}  // namespace

WorkloadSpec WorkloadSpec::from_config(const KeyValueConfig& c) {
  WorkloadSpec s;
  s.graph_file = c.get_string("graph", "");
  if (c.has("kronecker.k")) {
    KroneckerParams k;
    k.initiator[0][0] = c.get_double("kronecker.a", k.initiator[0][0]);
    k.initiator[0][1] = c.get_double("kronecker.b", k.initiator[0][1]);
    k.initiator[1][0] = c.get_double("kronecker.c", k.initiator[1][0]);
    k.initiator[1][1] = c.get_double("kronecker.d", k.initiator[1][1]);
    k.k = static_cast<int>(c.get_int("kronecker.k"));
    k.target_edges = c.get_u64("kronecker.edges", k.target_edges);
    s.kronecker = k;
  }
  s.mu = c.get_double("mu", s.mu);
  s.sigma = c.get_double("sigma", s.sigma);
  s.beta.lambda_c = c.get_double("lambda_c", s.beta.lambda_c);
  s.beta.beta0 = c.get_double("beta0", s.beta.beta0);
  s.beta.gamma = c.get_double("gamma", s.beta.gamma);
  s.chains = c.get_bool("chains", s.chains);
  s.horizon_hours = c.get_double("horizon_hours", s.horizon_hours);
  s.start_ts = c.get_int("start_ts", s.start_ts);
  s.seed = c.get_u64("seed", s.seed);
  if (auto d = DelayModel::from_config(c); !d.empty()) s.delays = std::move(d);
  for (int i = 0;; ++i) {
    const std::string p = "contagion." + std::to_string(i) + ".";
    if (!c.has(p + "token")) break;
    ContagionPlan plan;
    plan.token = *c.get(p + "token");
    plan.initial_adopters = c.get_u64(p + "initial_adopters", plan.initial_adopters);
    plan.hazard = c.get_double(p + "hazard", plan.hazard);
    plan.overload_factor = c.get_double(p + "overload_factor", plan.overload_factor);
    plan.overload_lambda = c.get_double(p + "overload_lambda", plan.overload_lambda);
    plan.adoption_delay_s = c.get_double(p + "adoption_delay_s", plan.adoption_delay_s);
    s.contagions.push_back(plan);
  }
  return s;
}

void validate(const WorkloadSpec& s) {
  if (!(s.horizon_hours > 0))
    throw PreconditionError("horizon must be positive");
  if (s.mu < 0 || s.sigma < 0)
    throw PreconditionError("posting rate parameters must be non-negative");
  for (double r : s.rates)
    if (!(r >= 0)) throw PreconditionError("posting rates must be >= 0");
  if (!(s.beta.beta0 >= 0 && s.beta.beta0 <= 1))
    throw PreconditionError("beta0 must lie in [0, 1]");
  if (s.delays.empty()) throw PreconditionError("workload needs a delay model");
  for (const auto& p : s.contagions) {
    if (p.token.empty() || p.token.find_first_of(" \t\n,") != std::string::npos)
      throw PreconditionError("contagion token '" + p.token + "' is not valid");
    const double h = p.hazard * p.overload_factor;
    if (!(p.hazard >= 0 && p.hazard <= 1 && h >= 0 && h <= 1))
      throw PreconditionError("contagion '" + p.token +
                              "' hazard must lie in [0, 1]");
    if (!(p.adoption_delay_s >= 0))
      throw PreconditionError("adoption delay must be >= 0");
  }
}

Workload generate_workload(const WorkloadSpec& spec) {
  if (spec.kronecker) {
    KroneckerParams k = *spec.kronecker;
    k.seed = spec.seed;
    return generate_workload(kronecker_generate(k), spec);
  }
  if (spec.graph_file.empty())
    throw PreconditionError("workload names neither a graph file nor Kronecker "
                            "parameters");
  auto parsed = parse_graph_file(spec.graph_file);
  if (!parsed.rejects.empty())
    throw InputError(spec.graph_file + ":" +
                     std::to_string(parsed.rejects.front().line) + ": " +
                     parsed.rejects.front().message);
  return generate_workload(std::move(parsed.graph), spec);
}

Workload generate_workload(SocialGraph graph, const WorkloadSpec& spec) {
  validate(spec);
  const std::size_t n = graph.node_count();
  Workload w;
  GroundTruth& truth = w.truth;

  if (!spec.rates.empty()) {
    if (spec.rates.size() != n)
      throw PreconditionError("workload gives " +
                              std::to_string(spec.rates.size()) +
                              " rates for " + std::to_string(n) + " nodes");
    truth.lambda_out = spec.rates;
  } else if (spec.mu == 0 || n == 0) {
    truth.lambda_out.assign(n, 0.0);
  } else {
    truth.lambda_out =
        assign_rates(graph, spec.mu, spec.sigma, hash_keys(spec.seed, {kRateStream}))
            .out;
  }
  truth.lambda_in.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (NodeId v : graph.followees(static_cast<NodeId>(i)))
      truth.lambda_in[i] += truth.lambda_out[v];

  const double horizon_s = spec.horizon_hours * 3600.0;
  std::vector<Draft> drafts;
  std::uint64_t seq = 0;
  auto emit = [&](Draft d) {
    d.seq = seq++;
    drafts.push_back(d);
    return d.seq;
  };

  // Original posts, one Poisson stream per node.
  for (std::size_t v = 0; v < n; ++v) {
    const double rate = truth.lambda_out[v] / 3600.0;
    if (!(rate > 0)) continue;
    Rng rng = Rng::keyed(spec.seed, {kPostStream, v});
    for (double t = rng.exponential(rate); t < horizon_s;
         t += rng.exponential(rate)) {
      Draft d;
      d.ts = spec.start_ts + static_cast<std::int64_t>(std::floor(t));
      d.author = static_cast<NodeId>(v);
      emit(d);
    }
  }
  truth.tweets = drafts.size();

  std::vector<double> beta(n);
  for (std::size_t i = 0; i < n; ++i)
    beta[i] = beta_of_inflow(truth.lambda_in[i], spec.beta);

  // Forwarding. With chains, forwards are themselves forwarded; each user
  // forwards a given original at most once.
  const std::size_t originals = drafts.size();
  for (std::size_t o = 0; o < originals; ++o) {
    const Draft root = drafts[o];
    std::unordered_set<NodeId> forwarded{root.author};
    std::vector<Draft> frontier{root};
    for (std::size_t head = 0; head < frontier.size(); ++head) {
      const Draft src = frontier[head];
      for (NodeId u : graph.followers(src.author)) {
        if (forwarded.count(u) || beta[u] <= 0) continue;
        const std::initializer_list<std::uint64_t> keys{root.seq, src.author, u};
        Rng coin = Rng::keyed(hash_keys(spec.seed, {kForwardStream}), keys);
        if (!(coin.uniform() < beta[u])) continue;
        Rng lag = Rng::keyed(hash_keys(spec.seed, {kDelayStream}), keys);
        const double delay = spec.delays.sample(lag, truth.lambda_in[u]);
        Draft d;
        d.ts = src.ts + std::max<std::int64_t>(0, std::llround(delay));
        d.author = u;
        d.kind = EventKind::kRetweet;
        d.orig_seq = src.seq;
        forwarded.insert(u);
        d.seq = emit(d);
        if (spec.chains) frontier.push_back(d);
      }
    }
  }
  truth.retweets = drafts.size() - truth.tweets;

  // Contagions: event-driven adoption with a coin per (follower, adopter).
  for (std::size_t ci = 0; ci < spec.contagions.size(); ++ci) {
    const ContagionPlan& plan = spec.contagions[ci];
    std::size_t adoptions = 0;
    // (time, kind, node). Kind 0 is an adoption caused by an exposure, kind
    // 1 a spontaneous one; at equal times exposures are applied first.
    using Item = std::tuple<std::int64_t, int, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    if (n > 0) {
      Rng rng = Rng::keyed(spec.seed, {kSeedStream, ci});
      std::unordered_set<NodeId> seeds;
      const std::size_t want = std::min(plan.initial_adopters, n);
      while (seeds.size() < want) {
        const auto v = static_cast<NodeId>(rng.below(n));
        if (!seeds.insert(v).second) continue;
        const auto t = static_cast<std::int64_t>(std::floor(rng.uniform() * horizon_s));
        pq.emplace(t, 1, v);
      }
    }
    std::vector<bool> adopted(n, false);
    std::vector<bool> exposed(n, false);
    while (!pq.empty()) {
      const auto [t, kind, v] = pq.top();
      pq.pop();
      // Only unexposed users adopt spontaneously, so every adoption of an
      // exposed user goes through the per-exposure hazard.
      if (adopted[v] || (kind == 1 && exposed[v])) continue;
      adopted[v] = true;
      ++adoptions;
      Draft d;
      d.ts = spec.start_ts + t;
      d.author = v;
      d.mark = static_cast<int>(ci);
      emit(d);
      for (NodeId u : graph.followers(v)) {
        if (adopted[u]) continue;
        exposed[u] = true;
        const double h = truth.lambda_in[u] > plan.overload_lambda
                             ? plan.hazard * plan.overload_factor
                             : plan.hazard;
        Rng rng = Rng::keyed(spec.seed, {kExposureStream, ci, u, v});
        if (!(rng.uniform() < h)) continue;
        const double lag = plan.adoption_delay_s > 0
                               ? rng.exponential(1.0 / plan.adoption_delay_s)
                               : 0.0;
        const std::int64_t at =
            t + std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(lag)));
        if (static_cast<double>(at) < horizon_s) pq.emplace(at, 0, u);
      }
    }
    truth.adoptions.push_back(adoptions);
  }

  // Ids follow (ts, creation order); a source is always created before its
  // forwards and never later in time, so it precedes them.
  std::vector<std::size_t> order(drafts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return drafts[a].ts != drafts[b].ts ? drafts[a].ts < drafts[b].ts
                                        : drafts[a].seq < drafts[b].seq;
  });
  std::vector<std::uint64_t> id_of(drafts.size());
  for (std::size_t i = 0; i < order.size(); ++i) id_of[order[i]] = i + 1;

  EventLogBuilder builder;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Draft& d = drafts[order[i]];
    RawEvent e;
    e.ts = d.ts;
    e.author = graph.name(d.author);
    e.kind = d.kind;
    e.id = std::to_string(id_of[order[i]]);
    if (d.kind == EventKind::kRetweet) {
      e.orig_id = std::to_string(id_of[d.orig_seq]);
      e.orig_author = graph.name(drafts[d.orig_seq].author);
    }
    if (d.mark >= 0) e.marks.push_back(spec.contagions[d.mark].token);
    builder.add(std::move(e), i + 1);
  }
  std::vector<LineError> rejects;
  w.log = std::move(builder).build(&rejects);
  if (!rejects.empty())
    throw NumericError("generated log failed validation: " +
                       rejects.front().message);
  w.graph = std::move(graph);
  return w;
}

std::string GroundTruth::to_text(const WorkloadSpec& spec) const {
  KeyValueConfig c;
  if (!spec.graph_file.empty()) c.set("graph", spec.graph_file);
  if (spec.kronecker) {
    const auto& k = *spec.kronecker;
    c.set("kronecker.a", format_double(k.initiator[0][0]));
    c.set("kronecker.b", format_double(k.initiator[0][1]));
    c.set("kronecker.c", format_double(k.initiator[1][0]));
    c.set("kronecker.d", format_double(k.initiator[1][1]));
    c.set("kronecker.k", std::to_string(k.k));
    c.set("kronecker.edges", std::to_string(k.target_edges));
  }
  c.set("mu", format_double(spec.mu));
  c.set("sigma", format_double(spec.sigma));
  c.set("lambda_c", format_double(spec.beta.lambda_c));
  c.set("beta0", format_double(spec.beta.beta0));
  c.set("gamma", format_double(spec.beta.gamma));
  c.set("chains", spec.chains ? "true" : "false");
  c.set("horizon_hours", format_double(spec.horizon_hours));
  c.set("start_ts", std::to_string(spec.start_ts));
  c.set("seed", std::to_string(spec.seed));
  const auto bins = spec.delays.bins();
  for (std::size_t i = 0; i < bins.size(); ++i) {
    const std::string p = "delay_bin." + std::to_string(i) + ".";
    c.set(p + "lo", format_double(bins[i].lo));
    c.set(p + "hi", format_double(bins[i].hi));
    c.set(p + "mu1", format_double(bins[i].params.mu1));
    c.set(p + "sigma1", format_double(bins[i].params.sigma1));
    c.set(p + "mu2", format_double(bins[i].params.mu2));
    c.set(p + "sigma2", format_double(bins[i].params.sigma2));
  }
  for (std::size_t i = 0; i < spec.contagions.size(); ++i) {
    const auto& pl = spec.contagions[i];
    const std::string p = "contagion." + std::to_string(i) + ".";
    c.set(p + "token", pl.token);
    c.set(p + "initial_adopters", std::to_string(pl.initial_adopters));
    c.set(p + "hazard", format_double(pl.hazard));
    c.set(p + "overload_factor", format_double(pl.overload_factor));
    c.set(p + "overload_lambda", format_double(pl.overload_lambda));
    c.set(p + "adoption_delay_s", format_double(pl.adoption_delay_s));
    if (i < adoptions.size())
      c.set("result.adoptions." + std::to_string(i), std::to_string(adoptions[i]));
  }
  c.set("result.nodes", std::to_string(lambda_out.size()));
  c.set("result.tweets", std::to_string(tweets));
  c.set("result.retweets", std::to_string(retweets));
  return c.to_string();
}

void GroundTruth::write_rates_tsv(std::ostream& out,
                                  const SocialGraph& graph) const {
  for (std::size_t i = 0; i < lambda_out.size(); ++i)
    out << graph.name(static_cast<NodeId>(i)) << '\t'
        << format_double(lambda_out[i]) << '\t' << format_double(lambda_in[i])
        << '\n';
}

}  // namespace infoload
