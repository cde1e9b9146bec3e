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

#include "cli/commands.h"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "cli/manifest.h"
#include "infoload/config.h"
#include "infoload/contagion_sim.h"
#include "infoload/error.h"
#include "infoload/event_model.h"
#include "infoload/exposure.h"
#include "infoload/flow_metrics.h"
#include "infoload/graphgen.h"
#include "infoload/queue_analytics.h"
#include "infoload/source_prioritization.h"
#include "infoload/synth.h"

#ifndef INFOLOAD_VERSION
#define INFOLOAD_VERSION "0.0.0"
#endif

namespace infoload::cli {

namespace {

namespace fs = std::filesystem;

// Bad or missing command-line arguments; exit code 2.
class UsageError : public InputError {
 public:
  using InputError::InputError;
};

struct Common {
  std::string config_file;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  std::string window;
  std::string out_dir = ".";
  std::vector<std::string> sets;
  std::string log_file;
  std::string graph_file;
};

// Per-invocation state: merged config, digested inputs, written outputs.
class Run {
 public:
  Run(std::string command, const Common& common, std::ostream& out,
      std::ostream& err, bool needs_seed)
      : common_(common), out_(out), err_(err) {
    manifest_.command = std::move(command);
    manifest_.tool_version = INFOLOAD_VERSION;
    manifest_.workers = common.workers;
    if (!common.config_file.empty()) {
      manifest_.inputs.push_back(digest_file(common.config_file));
      config_ = KeyValueConfig::load(common.config_file);
    }
    config_.apply_env_overrides(kEnvPrefix, {"seed"});
    for (const auto& kv : common.sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0)
        throw UsageError("--set expects key=value, got '" + kv + "'");
      config_.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (common.seed) config_.set("seed", std::to_string(*common.seed));
    if (needs_seed) {
      if (!config_.has("seed"))
        throw UsageError(manifest_.command + " is randomized and needs --seed");
      manifest_.seed = config_.get_u64("seed", 0);
    }
    fs::create_directories(common.out_dir);
  }

  const KeyValueConfig& config() const { return config_; }
  const Common& common() const { return common_; }
  std::ostream& out() { return out_; }
  std::ostream& err() { return err_; }
  std::uint64_t seed() const { return *manifest_.seed; }

  EventLog load_log() {
    if (common_.log_file.empty()) throw UsageError("--log is required");
    manifest_.inputs.push_back(digest_file(common_.log_file));
    auto parsed = parse_event_log_file(common_.log_file);
    report_rejects(common_.log_file, parsed.rejects);
    return std::move(parsed.log);
  }

  SocialGraph load_graph() {
    if (common_.graph_file.empty()) throw UsageError("--graph is required");
    manifest_.inputs.push_back(digest_file(common_.graph_file));
    auto parsed = parse_graph_file(common_.graph_file);
    report_rejects(common_.graph_file, parsed.rejects);
    return std::move(parsed.graph);
  }

  TimeWindow window(const EventLog& log) const {
    if (common_.window.empty()) return log.span();
    const auto comma = common_.window.find(',');
    if (comma == std::string::npos)
      throw UsageError("--window expects start,end");
    TimeWindow w;
    w.start = parse_int(common_.window.substr(0, comma), "window start");
    w.end = parse_int(common_.window.substr(comma + 1), "window end");
    if (w.end < w.start) throw UsageError("--window end precedes start");
    return w;
  }

  void write(const std::string& name, std::string_view contents) {
    write_file_atomic(fs::path(common_.out_dir) / name, contents);
    manifest_.outputs.push_back(name);
  }

  void finish() {
    for (const auto& [k, v] : config_.entries()) manifest_.config[k] = v;
    write_file_atomic(fs::path(common_.out_dir) / "manifest.json",
                      manifest_.to_json());
  }

 private:
  void report_rejects(const std::string& file,
                      const std::vector<LineError>& rejects) {
    for (const auto& r : rejects)
      err_ << file << ":" << r.line << ": skipped: " << r.message << "\n";
  }

  Common common_;
  std::ostream& out_;
  std::ostream& err_;
  KeyValueConfig config_;
  RunManifest manifest_;
};

std::string fmt(double v) { return format_double(v); }

InFlowOptions inflow_options(const KeyValueConfig& c) {
  InFlowOptions o;
  o.include_retweets = !c.get_bool("originals_only", false);
  return o;
}

int per_decade(const KeyValueConfig& c) {
  const auto v = c.get_int("per_decade", 10);
  if (v < 1) throw InputError("per_decade must be >= 1");
  return static_cast<int>(v);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

// ---------------------------------------------------------------------------

void cmd_validate(Run& run) {
  const bool strict = run.config().get_bool("strict", false);
  std::ostringstream rep;
  std::size_t rejected = 0;
  if (!run.common().log_file.empty()) {
    const auto& path = run.common().log_file;
    auto parsed = parse_event_log_file(path);
    const EventLog& log = parsed.log;
    std::size_t retweets = 0;
    for (const auto& e : log.events()) retweets += e.is_retweet();
    rep << log.size() << " events (" << (log.size() - retweets)
        << " tweets, " << retweets << " retweets), " << log.author_count()
        << " authors, " << log.token_count() << " tokens\n";
    if (!log.empty()) {
      const auto s = log.span();
      rep << "span " << s.start << "," << s.end << "\n";
    }
    rep << parsed.rejects.size() << " rejected lines\n";
    for (const auto& r : parsed.rejects)
      rep << "  line " << r.line << ": " << r.message << "\n";
    rejected += parsed.rejects.size();
    run.load_log();  // records the digest
    if (!run.common().graph_file.empty()) {
      auto g = parse_graph_file(run.common().graph_file);
      std::size_t missing = 0;
      for (std::size_t a = 0; a < log.author_count(); ++a)
        if (!g.graph.find(log.author_name(static_cast<AuthorId>(a)))) ++missing;
      rep << missing << " authors not in graph\n";
    }
  }
  if (!run.common().graph_file.empty()) {
    auto g = parse_graph_file(run.common().graph_file);
    rep << g.graph.node_count() << " nodes, " << g.graph.edge_count()
        << " edges, " << g.duplicate_edges << " duplicate edges\n";
    rep << g.rejects.size() << " rejected graph lines\n";
    for (const auto& r : g.rejects)
      rep << "  line " << r.line << ": " << r.message << "\n";
    rejected += g.rejects.size();
    run.load_graph();
  }
  if (run.common().log_file.empty() && run.common().graph_file.empty())
    throw UsageError("validate needs --log and/or --graph");
  run.out() << rep.str();
  run.write("validation.txt", rep.str());
  if (strict && rejected > 0)
    throw InputError(std::to_string(rejected) + " lines rejected (strict)");
}

void cmd_flows(Run& run) {
  const EventLog log = run.load_log();
  const SocialGraph graph = run.load_graph();
  const FeedIndex feed(log, graph);
  const TimeWindow window = run.window(log);
  const auto& c = run.config();
  const auto stats =
      compute_all_flow_stats(feed, window, inflow_options(c), run.common().workers);

  std::ostringstream csv;
  csv << "user,followees,received,retweeted,lambda,lambda_r,lambda_nr,beta_r,"
         "out_total,retweet_outflow,out_of_feed_retweets\n";
  for (const auto& s : stats) {
    csv << graph.name(s.user) << ',' << s.followees << ',' << s.received << ','
        << s.retweeted << ',' << fmt(s.lambda) << ',' << fmt(s.lambda_r) << ','
        << fmt(s.lambda_nr) << ',' << fmt(s.beta_r) << ',' << fmt(s.out_total)
        << ',' << fmt(s.retweet_outflow) << ',' << s.out_of_feed_retweets
        << '\n';
  }
  run.write("flows.csv", csv.str());

  const auto curves = population_curves(
      stats, static_cast<std::size_t>(c.get_int("min_received", 10)),
      per_decade(c));
  std::ostringstream bc;
  bc << "lo,hi,users,lambda_mean,beta_mean,beta_median,beta_p10,beta_p90\n";
  for (const auto& b : curves.beta_vs_inflow)
    bc << fmt(b.lo) << ',' << fmt(b.hi) << ',' << b.n << ',' << fmt(b.x_mean)
       << ',' << fmt(b.mean) << ',' << fmt(b.median) << ',' << fmt(b.p10)
       << ',' << fmt(b.p90) << '\n';
  run.write("beta_curve.csv", bc.str());

  KeyValueConfig rep;
  rep.set("users", std::to_string(stats.size()));
  rep.set("window.start", std::to_string(window.start));
  rep.set("window.end", std::to_string(window.end));
  try {
    TwoRegimeOptions opt;
    opt.grid_per_decade = static_cast<int>(c.get_int("grid_per_decade", 100));
    opt.min_gamma = c.get_double("min_gamma", opt.min_gamma);
    const auto pts = bin_means(curves.beta_vs_inflow);
    const auto fit = fit_two_regime(pts, opt);
    rep.set("fit.status", "ok");
    rep.set("fit.lambda_c", fmt(fit.lambda_c));
    rep.set("fit.beta0", fmt(fit.beta0));
    rep.set("fit.gamma", fmt(fit.gamma));
    rep.set("fit.residual", fmt(fit.residual));
    rep.set("fit.points", std::to_string(fit.points));
    rep.set("fit.points_above", std::to_string(fit.points_above));
    rep.set("fit.overload_detected", fit.overload_detected ? "true" : "false");
    const auto mle = fit_overload_exponent_mle(stats, fit.lambda_c);
    rep.set("mle.users", std::to_string(mle.users));
    rep.set("mle.converged", mle.converged ? "true" : "false");
    if (mle.converged) {
      rep.set("mle.beta_c", fmt(mle.beta_c));
      rep.set("mle.gamma", fmt(mle.gamma));
    }
    std::vector<double> lam;
    for (const auto& s : stats) lam.push_back(s.lambda);
    try {
      const auto pl = fit_power_law_mle(lam, fit.lambda_c);
      rep.set("inflow_tail.alpha", fmt(pl.alpha));
      rep.set("inflow_tail.n", std::to_string(pl.n));
    } catch (const Error& e) {
      rep.set("inflow_tail.status", e.what());
    }
    const auto dr = diminishing_returns_check(bin_means(curves.retweet_rate_vs_inflow));
    rep.set("diminishing_returns", dr.holds ? "true" : "false");
  } catch (const Error& e) {
    rep.set("fit.status", std::string("failed: ") + e.what());
  }
  run.write("flow_fit.txt", rep.to_string());
}

void cmd_queues(Run& run) {
  const EventLog log = run.load_log();
  const SocialGraph graph = run.load_graph();
  const FeedIndex feed(log, graph);
  const TimeWindow window = run.window(log);
  const auto& c = run.config();
  QueueOptions opt;
  opt.inflow = inflow_options(c);
  const std::string source = c.get_string("source", "immediate");
  if (source == "root") {
    opt.source = SourceMode::kRoot;
  } else if (source != "immediate") {
    throw InputError("source must be immediate or root, got '" + source + "'");
  }
  const unsigned workers = run.common().workers;
  const auto q = queue_records(feed, window, opt, workers);

  std::ostringstream csv;
  csv << "user,retweet_id,original_id,q,delay_s\n";
  for (const auto& r : q.records)
    csv << graph.name(r.user) << ',' << log.id(r.retweet) << ','
        << log.id(r.original) << ',' << r.q << ',' << r.delay_s << '\n';
  run.write("queue_positions.csv", csv.str());

  const auto stats = compute_all_flow_stats(feed, window, opt.inflow, workers);
  const auto groups = summarize_by_inflow(stats, q.records, per_decade(c));
  std::ostringstream gc;
  gc << "lo,hi,users,records,mean_lambda,mean_lambda_r,median_delay_s,"
        "mean_delay_s,bottom90_mean_delay_s,mean_q,median_q,delta_nr_star_h,"
        "delta_star_h,clamped\n";
  for (const auto& g : groups) {
    gc << fmt(g.lo) << ',' << fmt(g.hi) << ',' << g.users << ',' << g.records
       << ',' << fmt(g.mean_lambda) << ',' << fmt(g.mean_lambda_r) << ','
       << fmt(g.median_delay_s) << ',' << fmt(g.mean_delay_s) << ','
       << fmt(g.bottom90_mean_delay_s) << ',' << fmt(g.mean_q) << ','
       << fmt(g.median_q) << ',';
    if (g.little) {
      gc << fmt(g.little->delta_nr_star) << ',' << fmt(g.little->delta_star)
         << ',' << (g.little->clamped ? 1 : 0);
    } else {
      gc << ",,";
    }
    gc << '\n';
  }
  run.write("queue_groups.csv", gc.str());

  KeyValueConfig rep;
  rep.set("retweets", std::to_string(q.coverage.retweets));
  rep.set("included", std::to_string(q.coverage.included));
  rep.set("excluded", std::to_string(q.coverage.excluded));
  std::vector<double> delays;
  for (const auto& r : q.records) delays.push_back(static_cast<double>(r.delay_s));
  if (!q.records.empty()) {
    const auto d = delay_histogram(q.records);
    rep.set("delay.median_s", fmt(d.median_s));
    rep.set("delay.mean_s", fmt(d.mean_s));
    rep.set("delay.bottom90_mean_s", fmt(d.bottom90_mean_s));
    std::ostringstream hc;
    hc << "lo,hi,count,density\n";
    for (const auto& b : log_histogram(d.delays, per_decade(c)))
      hc << fmt(b.lo) << ',' << fmt(b.hi) << ',' << b.count << ','
         << fmt(b.density) << '\n';
    run.write("delay_histogram.csv", hc.str());
  }
  try {
    ConvolutionFitOptions fo;
    fo.min_samples = static_cast<std::size_t>(c.get_int("min_fit_samples", 100));
    const auto fit = fit_lognormal_convolution(delays, fo);
    rep.set("fit.status", "ok");
    rep.set("fit.n", std::to_string(fit.n));
    rep.set("fit.rejected_nonpositive", std::to_string(fit.rejected_nonpositive));
    rep.set("fit.mu1", fmt(fit.params.mu1));
    rep.set("fit.sigma1", fmt(fit.params.sigma1));
    rep.set("fit.mu2", fmt(fit.params.mu2));
    rep.set("fit.sigma2", fmt(fit.params.sigma2));
    rep.set("fit.log_likelihood", fmt(fit.log_likelihood));
    std::vector<double> pos;
    for (double x : delays)
      if (x > 0) pos.push_back(x);
    const auto single = fit_lognormal(pos);
    rep.set("single.mu", fmt(single.mu));
    rep.set("single.sigma", fmt(single.sigma));
    rep.set("single.log_likelihood", fmt(single.log_likelihood));
  } catch (const Error& e) {
    rep.set("fit.status", std::string("failed: ") + e.what());
  }
  run.write("delay_fit.txt", rep.to_string());
}

void cmd_sources(Run& run) {
  const EventLog log = run.load_log();
  const SocialGraph graph = run.load_graph();
  const FeedIndex feed(log, graph);
  const TimeWindow window = run.window(log);
  const auto stats = compute_all_source_stats(feed, window, run.common().workers);
  std::ostringstream csv;
  csv << "user,F,S_r,p_src,out_of_feed_retweets\n";
  for (const auto& s : stats)
    csv << graph.name(s.user) << ',' << s.followees << ',' << s.sources << ','
        << fmt(s.p_src) << ',' << s.out_of_feed_retweets << '\n';
  run.write("sources.csv", csv.str());

  const auto curve = source_curve(stats, per_decade(run.config()));
  std::ostringstream cc;
  cc << "F,mean_S_r\n";
  for (const auto& p : curve) cc << fmt(p.x) << ',' << fmt(p.y) << '\n';
  run.write("source_curve.csv", cc.str());

  KeyValueConfig rep;
  try {
    const auto fit = fit_source_regimes(curve);
    rep.set("fit.status", "ok");
    rep.set("fit.exponent_low", fmt(fit.exponent_low));
    rep.set("fit.exponent_high", fmt(fit.exponent_high));
    rep.set("fit.f_c", fmt(fit.f_c));
    rep.set("fit.breakpoint_identified", fit.breakpoint_identified ? "true" : "false");
    rep.set("fit.residual", fmt(fit.residual));
  } catch (const Error& e) {
    rep.set("fit.status", std::string("failed: ") + e.what());
  }
  run.write("source_fit.txt", rep.to_string());
}

std::vector<InflowRange> parse_ranges(const std::string& text) {
  std::vector<InflowRange> out;
  for (const auto& item : split(text, ',')) {
    const auto dash = item.find('-', 1);
    if (dash == std::string::npos)
      throw InputError("range '" + item + "' is not lo-hi");
    out.push_back({parse_double(item.substr(0, dash), "range lo"),
                   parse_double(item.substr(dash + 1), "range hi")});
  }
  return out;
}

void cmd_exposure(Run& run) {
  const EventLog log = run.load_log();
  const SocialGraph graph = run.load_graph();
  const FeedIndex feed(log, graph);
  const TimeWindow window = run.window(log);
  const auto& c = run.config();
  const unsigned workers = run.common().workers;

  std::vector<std::string> tokens = split(c.get_string("tokens", ""), ',');
  if (tokens.empty())
    for (std::size_t t = 0; t < log.token_count(); ++t)
      tokens.push_back(log.token_name(static_cast<TokenId>(t)));
  std::sort(tokens.begin(), tokens.end());

  std::vector<UserGroup> groups;
  if (c.has("ranges")) {
    const auto stats =
        compute_all_flow_stats(feed, window, inflow_options(c), workers);
    const auto ranges = parse_ranges(*c.get("ranges"));
    groups = group_users_by_inflow(stats, ranges);
  } else {
    UserGroup all;
    all.range = {0, std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < graph.node_count(); ++i)
      all.users.push_back(static_cast<NodeId>(i));
    groups.push_back(std::move(all));
  }
  ExposureCurveOptions eo;
  eo.min_exposed = static_cast<std::size_t>(c.get_int("min_exposed", 50));
  const std::string agg = c.get_string("aggregate", "mean");
  if (agg != "mean" && agg != "pooled")
    throw InputError("aggregate must be mean or pooled, got '" + agg + "'");
  const Aggregation mode =
      agg == "pooled" ? Aggregation::kPooled : Aggregation::kMeanOfCurves;

  const auto traces = build_traces(tokens, feed, window, workers);
  std::ostringstream cc, ac;
  cc << "token,group,k,E,I,P\n";
  ac << "group,k,P,curves,E,I\n";
  for (const auto& g : groups) {
    const std::string label = g.range.label();
    std::vector<ExposureCurve> curves;
    for (const auto& t : traces) {
      auto curve = exposure_curve(t, g.users, eo);
      for (int k = 0; k <= curve.k_max; ++k) {
        cc << t.token << ",\"" << label << "\"," << k << ','
           << curve.exposed[k] << ',' << curve.adopted[k] << ','
           << fmt(curve.p(static_cast<std::size_t>(k))) << '\n';
      }
      curves.push_back(std::move(curve));
    }
    for (const auto& p : aggregate_curves(curves, mode, eo.min_exposed))
      ac << '"' << label << "\"," << p.k << ',' << fmt(p.p) << ',' << p.curves
         << ',' << p.exposed << ',' << p.adopted << '\n';
  }
  run.write("exposure_curves.csv", cc.str());
  run.write("exposure_aggregate.csv", ac.str());
}

KroneckerParams kronecker_from(const KeyValueConfig& c, std::uint64_t seed) {
  KroneckerParams k;
  k.initiator[0][0] = c.get_double("kronecker.a", k.initiator[0][0]);
  k.initiator[0][1] = c.get_double("kronecker.b", k.initiator[0][1]);
  k.initiator[1][0] = c.get_double("kronecker.c", k.initiator[1][0]);
  k.initiator[1][1] = c.get_double("kronecker.d", k.initiator[1][1]);
  k.k = static_cast<int>(c.get_int("kronecker.k", k.k));
  k.target_edges = c.get_u64("kronecker.edges", k.target_edges);
  k.seed = seed;
  return k;
}

void cmd_graphgen(Run& run) {
  const auto graph = kronecker_generate(kronecker_from(run.config(), run.seed()));
  std::ostringstream g;
  graph.write_tsv(g);
  run.write("graph.tsv", g.str());
  run.out() << graph.node_count() << " nodes, " << graph.edge_count()
            << " edges\n";
}

void cmd_simulate(Run& run, const std::string& model) {
  if (model != "ic" && model != "ct")
    throw UsageError("--model must be ic or ct, got '" + model + "'");
  const auto& c = run.config();
  SocialGraph graph;
  if (!run.common().graph_file.empty()) {
    graph = run.load_graph();
  } else if (c.has("kronecker.k")) {
    graph = kronecker_generate(kronecker_from(c, run.seed()));
  } else {
    throw UsageError("simulate needs --graph or kronecker.* config keys");
  }
  SimConfig sim = SimConfig::from_config(c);
  sim.seed = run.seed();
  validate(sim);
  const Rates rates =
      assign_rates(graph, sim.mu, sim.effective_sigma(), sim.seed);
  const auto records = model == "ic"
                           ? simulate_ic_bg(graph, rates, sim, run.common().workers)
                           : simulate_ct_bg(graph, rates, sim, run.common().workers);

  std::ostringstream csv;
  csv << "cascade_id,seed_node,size,duration\n";
  for (const auto& r : records)
    csv << r.id << ',' << graph.name(r.seed) << ',' << r.size() << ','
        << fmt(r.duration) << '\n';
  run.write("cascades.csv", csv.str());

  const auto rep = distribution_report(records);
  std::ostringstream sc;
  sc << "size,ccdf\n";
  for (const auto& p : rep.size_ccdf) sc << fmt(p.x) << ',' << fmt(p.ccdf) << '\n';
  run.write("size_ccdf.csv", sc.str());
  if (model == "ct") {
    std::ostringstream dc;
    dc << "duration,ccdf\n";
    for (const auto& p : rep.duration_ccdf)
      dc << fmt(p.x) << ',' << fmt(p.ccdf) << '\n';
    run.write("duration_ccdf.csv", dc.str());
  }
  KeyValueConfig summary;
  summary.set("model", model);
  summary.set("cascades", std::to_string(rep.cascades));
  summary.set("fraction_size_ge_2", fmt(rep.fraction_at_least(2)));
  summary.set("fraction_size_ge_3", fmt(rep.fraction_at_least(3)));
  summary.set("max_size", fmt(rep.sizes.values().back()));
  summary.set("mean_size", fmt(rep.sizes.mean()));
  if (model == "ct") {
    summary.set("multi_node_cascades", std::to_string(rep.multi_node));
    summary.set("duration_empty", rep.duration_empty ? "true" : "false");
    if (!rep.duration_empty) {
      summary.set("duration.median", fmt(rep.durations.median()));
      summary.set("duration.p99", fmt(rep.durations.quantile(0.99)));
    }
  }
  run.write("simulation.txt", summary.to_string());
  run.out() << summary.to_string();
}

void cmd_synth(Run& run) {
  WorkloadSpec spec = WorkloadSpec::from_config(run.config());
  spec.seed = run.seed();
  Workload w;
  if (!run.common().graph_file.empty()) {
    spec.graph_file = run.common().graph_file;
    spec.kronecker.reset();
    w = generate_workload(run.load_graph(), spec);
  } else {
    w = generate_workload(spec);
  }
  std::ostringstream ev, gr, rates;
  w.log.write_tsv(ev);
  w.graph.write_tsv(gr);
  w.truth.write_rates_tsv(rates, w.graph);
  run.write("events.tsv", ev.str());
  run.write("graph.tsv", gr.str());
  run.write("rates.tsv", rates.str());
  run.write("ground_truth.txt", w.truth.to_text(spec));
  run.out() << w.log.size() << " events on " << w.graph.node_count()
            << " nodes\n";
}

void add_common(CLI::App* sub, Common& c, bool io) {
  sub->add_option("--config", c.config_file, "key = value config file")
      ->check(CLI::ExistingFile);
  sub->add_option("--seed", c.seed, "RNG seed");
  sub->add_option("--workers", c.workers, "worker threads")
      ->check(CLI::Range(1u, 1024u));
  sub->add_option("--out", c.out_dir, "output directory");
  sub->add_option("--set", c.sets, "override a config key (key=value)");
  if (io) {
    sub->add_option("--log", c.log_file, "event log TSV");
    sub->add_option("--window", c.window, "analysis window start,end (epoch s)");
  }
  sub->add_option("--graph", c.graph_file, "follow graph TSV");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"infoload: feed-queue analytics and cascade simulation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", INFOLOAD_VERSION);
  Common common;
  std::string model = "ic";

  struct Sub {
    const char* name;
    const char* help;
    bool io;
    bool seeded;
  };
  const Sub subs[] = {
      {"validate", "check an event log and/or graph", true, false},
      {"flows", "per-user rates and the two-regime retweet curve", true, false},
      {"queues", "queue positions, delays and Little bounds", true, false},
      {"sources", "retweet source sets and their growth fit", true, false},
      {"exposure", "ordinal exposure curves by in-flow group", true, false},
      {"graphgen", "Kronecker follow graph", false, true},
      {"simulate", "cascades under background traffic", false, true},
      {"synth", "synthetic workload with ground truth", false, true},
  };
  std::vector<CLI::App*> apps;
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    add_common(sub, common, s.io);
    if (std::string_view(s.name) == "simulate")
      sub->add_option("--model", model, "ic or ct");
    apps.push_back(sub);
  }

  std::vector<const char*> argv{"infoload"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  std::size_t which = 0;
  while (!apps[which]->parsed()) ++which;
  const Sub& s = subs[which];
  try {
    Run r(s.name, common, out, err, s.seeded);
    const std::string name = s.name;
    if (name == "validate") cmd_validate(r);
    else if (name == "flows") cmd_flows(r);
    else if (name == "queues") cmd_queues(r);
    else if (name == "sources") cmd_sources(r);
    else if (name == "exposure") cmd_exposure(r);
    else if (name == "graphgen") cmd_graphgen(r);
    else if (name == "simulate") cmd_simulate(r, model);
    else if (name == "synth") cmd_synth(r);
    r.finish();
  } catch (const UsageError& e) {
    err << "infoload " << s.name << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "infoload " << s.name << ": error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace infoload::cli
