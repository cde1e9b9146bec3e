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

#include "infoload/queue_analytics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include "infoload/error.h"
#include "infoload/kernels/kernels.h"
#include "infoload/optimize.h"
#include "infoload/parallel.h"

namespace infoload {

// ---------------------------------------------------------------------------
// Queue positions

std::optional<QueuePositionRecord> queue_position_at_retweet(
    const EventLog& log, EventPos retweet, const InFlowStream& in_flow,
    SourceMode source) {
  const Event& rt = log[retweet];
  if (!rt.is_retweet()) return std::nullopt;
  const EventPos src =
      source == SourceMode::kImmediate ? rt.orig : log.root_of(retweet);
  const auto& feed = in_flow.events;
  if (!std::binary_search(feed.begin(), feed.end(), src)) return std::nullopt;
  const auto after_src = std::upper_bound(feed.begin(), feed.end(), src);
  const auto before_rt = std::lower_bound(feed.begin(), feed.end(), retweet);
  QueuePositionRecord r;
  r.user = in_flow.user;
  r.retweet = retweet;
  r.original = src;
  r.q = before_rt > after_src ? static_cast<std::size_t>(before_rt - after_src)
                              : 0;
  r.delay_s = rt.ts - log[src].ts;
  return r;
}

QueueRecords queue_records(const FeedIndex& feed, const TimeWindow& window,
                           const QueueOptions& options, unsigned workers) {
  const std::size_t n = feed.graph().node_count();
  std::vector<std::vector<QueuePositionRecord>> per_user(n);
  std::vector<QueueCoverage> cov(n);
  parallel_for(n, workers, [&](std::size_t i) {
    const auto u = static_cast<NodeId>(i);
    const auto own = own_events(feed, u, window);
    if (own.empty()) return;
    const InFlowStream stream = in_flow_stream(feed, u, window, options.inflow);
    for (EventPos p : own) {
      if (!feed.log()[p].is_retweet()) continue;
      ++cov[i].retweets;
      if (auto r = queue_position_at_retweet(feed.log(), p, stream,
                                             options.source)) {
        per_user[i].push_back(*r);
        ++cov[i].included;
      } else {
        ++cov[i].excluded;
      }
    }
  });
  QueueRecords out;
  for (std::size_t i = 0; i < n; ++i) {
    out.records.insert(out.records.end(), per_user[i].begin(),
                       per_user[i].end());
    out.coverage.retweets += cov[i].retweets;
    out.coverage.included += cov[i].included;
    out.coverage.excluded += cov[i].excluded;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Delay distributions

DelaySummary delay_histogram(std::span<const QueuePositionRecord> records) {
  if (records.empty())
    throw PreconditionError("delay histogram of an empty group");
  std::vector<double> d;
  d.reserve(records.size());
  for (const auto& r : records) d.push_back(static_cast<double>(r.delay_s));
  DelaySummary s;
  s.delays = EmpiricalDistribution(std::move(d));
  s.n = s.delays.size();
  s.median_s = s.delays.median();
  s.mean_s = s.delays.mean();
  s.bottom90_mean_s = s.delays.bottom90_mean();
  return s;
}

std::vector<HistogramBin> log_histogram(const EmpiricalDistribution& dist,
                                        int per_decade) {
  std::vector<HistogramBin> out;
  const auto v = dist.values();
  if (v.empty()) return out;
  const double n = static_cast<double>(v.size());
  std::size_t i = 0;
  const auto first_pos = std::upper_bound(v.begin(), v.end(), 0.0);
  if (first_pos != v.begin()) {
    HistogramBin b;
    b.lo = 0;
    b.hi = first_pos != v.end() ? log_bin_edges(*first_pos, per_decade).first
                                : 1.0;
    b.count = static_cast<std::size_t>(first_pos - v.begin());
    b.density = static_cast<double>(b.count) / (n * (b.hi - b.lo));
    out.push_back(b);
    i = b.count;
  }
  while (i < v.size()) {
    const auto [lo, hi] = log_bin_edges(v[i], per_decade);
    std::size_t j = i;
    while (j < v.size() && v[j] < hi) ++j;
    HistogramBin b;
    b.lo = lo;
    b.hi = hi;
    b.count = j - i;
    b.density = static_cast<double>(b.count) / (n * (hi - lo));
    out.push_back(b);
    i = j;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lognormal-sum density

namespace {

constexpr double kTailSd = 8.0;
constexpr int kMaxIntervals = 4096;

struct Scratch {
  std::vector<double> y, w, f;
};

// Integral over x < z/2 of f_small(x) f_other(z - x) dx, in the variable
// t = (ln x - mu_s) / sigma_s. The integrand is phi(t) f_other(z - e^{...}).
double convolution_half(double z, double mu_s, double sigma_s, double mu_o,
                        double sigma_o, Scratch& s) {
  const double t_end =
      std::min(kTailSd, (std::log(0.5 * z) - mu_s) / sigma_s);
  if (t_end <= -kTailSd) return 0.0;
  const double span = t_end + kTailSd;
  const double h_target = std::min(0.0625, 0.125 * sigma_o / sigma_s);
  int intervals = std::max(2, static_cast<int>(std::ceil(span / h_target)));
  intervals = std::min(intervals + (intervals & 1), kMaxIntervals);
  const double h = span / intervals;
  const std::size_t nodes = static_cast<std::size_t>(intervals) + 1;
  s.y.resize(nodes);
  s.w.resize(nodes);
  s.f.resize(nodes);

  // x_m and phi(t_m) by recurrence: x_{m+1} = x_m e^{sigma h} and
  // phi_{m+1} = phi_m e^{-h t_m - h^2/2}.
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  double t = -kTailSd;
  double x = std::exp(mu_s + sigma_s * t);
  const double x_ratio = std::exp(sigma_s * h);
  double phi = inv_sqrt_2pi * std::exp(-0.5 * t * t);
  double phi_ratio = std::exp(-h * t - 0.5 * h * h);
  const double phi_step = std::exp(-h * h);
  for (std::size_t m = 0; m < nodes; ++m) {
    const double simpson =
        (m == 0 || m + 1 == nodes) ? 1.0 : ((m & 1) ? 4.0 : 2.0);
    s.y[m] = z - x;
    s.w[m] = simpson * phi;
    x *= x_ratio;
    phi *= phi_ratio;
    phi_ratio *= phi_step;
    t += h;
  }
  kernels::lognormal_pdf(s.y, mu_o, sigma_o, s.f);
  return kernels::dot(s.w, s.f) * h / 3.0;
}

double sum_pdf(double z, const LognormalSum& p, Scratch& s) {
  if (!(z > 0)) return 0.0;
  return convolution_half(z, p.mu1, p.sigma1, p.mu2, p.sigma2, s) +
         convolution_half(z, p.mu2, p.sigma2, p.mu1, p.sigma1, s);
}

}  // namespace

double lognormal_sum_pdf(double z, const LognormalSum& p) {
  Scratch s;
  return sum_pdf(z, p, s);
}

void lognormal_sum_pdf(std::span<const double> z, const LognormalSum& p,
                       std::span<double> out) {
  Scratch s;
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = sum_pdf(z[i], p, s);
}

// ---------------------------------------------------------------------------
// Fitting

LognormalFit fit_lognormal(std::span<const double> samples) {
  if (samples.size() < 2)
    throw PreconditionError("lognormal fit needs at least 2 samples");
  std::vector<double> logs;
  logs.reserve(samples.size());
  for (double x : samples) {
    if (!(x > 0)) throw PreconditionError("lognormal fit needs positive data");
    logs.push_back(std::log(x));
  }
  const double n = static_cast<double>(logs.size());
  const double mean = std::accumulate(logs.begin(), logs.end(), 0.0) / n;
  double ss = 0;
  for (double l : logs) ss += (l - mean) * (l - mean);
  LognormalFit f;
  f.mu = mean;
  f.sigma = std::sqrt(ss / n);
  f.log_likelihood = -mean * n - n * std::log(f.sigma) -
                     0.5 * n * std::log(2 * std::numbers::pi) - 0.5 * n;
  return f;
}

double lognormal_sum_log_likelihood(std::span<const double> delays,
                                    const LognormalSum& p, int /*grid_points*/) {
  Scratch s;
  double ll = 0;
  for (double z : delays) ll += std::log(sum_pdf(z, p, s));
  return ll;
}

namespace {

// Density tabulated on a log-spaced grid; the likelihood of the data is a
// fixed linear combination of log-density values at the grid points
// (linear interpolation of log f in log z).
class TabulatedLikelihood {
 public:
  TabulatedLikelihood(std::span<const double> data, int grid_points) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double z : data) {
      lo = std::min(lo, std::log(z));
      hi = std::max(hi, std::log(z));
    }
    if (hi - lo < 1e-9) hi = lo + 1e-3;
    const int g = std::max(2, grid_points);
    const double step = (hi - lo) / (g - 1);
    grid_.resize(static_cast<std::size_t>(g));
    coef_.assign(static_cast<std::size_t>(g), 0.0);
    for (int j = 0; j < g; ++j) grid_[j] = std::exp(lo + j * step);
    for (double z : data) {
      const double u = (std::log(z) - lo) / step;
      int j = std::clamp(static_cast<int>(std::floor(u)), 0, g - 2);
      const double w = std::clamp(u - j, 0.0, 1.0);
      coef_[j] += 1.0 - w;
      coef_[j + 1] += w;
    }
    dens_.resize(grid_.size());
  }

  double operator()(const LognormalSum& p) {
    double ll = 0;
    for (std::size_t j = 0; j < grid_.size(); ++j) {
      if (coef_[j] == 0.0) continue;
      const double f = sum_pdf(grid_[j], p, scratch_);
      if (!(f > 0)) return -std::numeric_limits<double>::infinity();
      ll += coef_[j] * std::log(f);
    }
    return ll;
  }

 private:
  std::vector<double> grid_, coef_, dens_;
  Scratch scratch_;
};

}  // namespace

LognormalConvolutionFit fit_lognormal_convolution(
    std::span<const double> delays, const ConvolutionFitOptions& options) {
  std::vector<double> data;
  data.reserve(delays.size());
  std::size_t rejected = 0;
  for (double z : delays) {
    if (z > 0 && std::isfinite(z)) {
      data.push_back(z);
    } else {
      ++rejected;
    }
  }
  if (data.size() < options.min_samples) {
    throw PreconditionError(
        "lognormal-sum fit needs at least " +
        std::to_string(options.min_samples) + " positive delays, got " +
        std::to_string(data.size()) + " (" + std::to_string(rejected) +
        " non-positive rejected)");
  }

  const LognormalFit single = fit_lognormal(data);
  TabulatedLikelihood tab(data, options.grid_points);
  const double lo = std::log(options.min_sigma);
  const double hi = std::log(options.max_sigma);
  auto objective = [&](std::span<const double> x) {
    if (x[1] < lo || x[1] > hi || x[3] < lo || x[3] > hi) return std::numeric_limits<double>::infinity();
    const LognormalSum p{x[0], std::exp(x[1]), x[2], std::exp(x[3])};
    return -tab(p);
  };

  const double m = single.mu;
  const double s = std::max(single.sigma, 2 * options.min_sigma);
  auto clamp_log_sigma = [&](double v) {
    return std::clamp(std::log(v), lo + 1e-9, hi - 1e-9);
  };
  const std::vector<std::vector<double>> starts = {
      {m - 0.3, clamp_log_sigma(0.7 * s), m - 1.2, clamp_log_sigma(s)},
      {m - 0.2, clamp_log_sigma(s), m - 1.5, clamp_log_sigma(0.5 * s)},
      {m - 0.5, clamp_log_sigma(0.6 * s), m - 0.9, clamp_log_sigma(0.6 * s)},
      {m - 0.1, clamp_log_sigma(0.9 * s), m - 2.5, clamp_log_sigma(0.3 * s)},
  };

  NelderMeadOptions nm;
  nm.step = {0.4, 0.3, 0.4, 0.3};
  nm.f_tol = 1e-11;
  nm.x_tol = 1e-6;
  nm.max_evaluations = 6000;

  NelderMeadResult best;
  best.value = std::numeric_limits<double>::infinity();
  int evaluations = 0;
  bool any_converged = false;
  std::ostringstream diag;
  for (const auto& start : starts) {
    const auto r = nelder_mead(objective, start, nm);
    evaluations += r.evaluations;
    diag << " start(" << start[0] << "," << start[2] << ")->"
         << (r.converged ? "ok" : "no") << ":" << r.value;
    if (r.converged) any_converged = true;
    if (r.value < best.value) best = r;
  }
  if (!any_converged || !std::isfinite(best.value)) {
    throw NumericError("lognormal-sum fit did not converge after " +
                       std::to_string(evaluations) +
                       " evaluations;" + diag.str());
  }

  LognormalConvolutionFit fit;
  fit.params = {best.x[0], std::exp(best.x[1]), best.x[2], std::exp(best.x[3])};
  if (fit.params.mu1 < fit.params.mu2) {
    std::swap(fit.params.mu1, fit.params.mu2);
    std::swap(fit.params.sigma1, fit.params.sigma2);
  }
  fit.log_likelihood = lognormal_sum_log_likelihood(data, fit.params);
  fit.n = data.size();
  fit.rejected_nonpositive = rejected;
  fit.evaluations = evaluations;
  return fit;
}

// ---------------------------------------------------------------------------
// Little's law

LittleBound little_bounds(double lambda, double lambda_r, double delta_r_hours,
                          double mean_queue_position) {
  if (lambda_r < 0 || delta_r_hours < 0 || mean_queue_position < 0)
    throw PreconditionError("Little bounds need non-negative inputs");
  const double lambda_nr = lambda - lambda_r;
  if (!(lambda_nr > 0))
    throw PreconditionError("no non-forwarded traffic (lambda_nr = 0)");
  LittleBound b;
  b.lambda = lambda;
  b.lambda_r = lambda_r;
  b.lambda_nr = lambda_nr;
  b.delta_r = delta_r_hours;
  b.n_r = mean_queue_position;
  const double forwarded = lambda_r * delta_r_hours;
  b.delta_nr_star = (mean_queue_position - forwarded) / lambda_nr;
  if (b.delta_nr_star < 0) {
    b.delta_nr_star = 0;
    b.clamped = true;
  }
  b.delta_star = (forwarded + lambda_nr * b.delta_nr_star) / lambda;
  return b;
}

LittleBound little_bounds(const FlowStats& stats, double delta_r_hours,
                          double mean_queue_position) {
  return little_bounds(stats.lambda, stats.lambda_r, delta_r_hours,
                       mean_queue_position);
}

std::vector<InflowGroupSummary> summarize_by_inflow(
    std::span<const FlowStats> stats,
    std::span<const QueuePositionRecord> records, int per_decade) {
  std::map<long, InflowGroupSummary> groups;
  std::vector<long> key_of(stats.size(), 0);
  std::vector<bool> has_key(stats.size(), false);
  std::map<NodeId, std::size_t> row_of;
  for (std::size_t i = 0; i < stats.size(); ++i) {
    row_of[stats[i].user] = i;
    if (!(stats[i].lambda > 0)) continue;
    const auto [lo, hi] = log_bin_edges(stats[i].lambda, per_decade);
    const long key = std::lround(std::log10(lo) * per_decade);
    key_of[i] = key;
    has_key[i] = true;
    auto& g = groups[key];
    g.lo = lo;
    g.hi = hi;
    ++g.users;
    g.mean_lambda += stats[i].lambda;
    g.mean_lambda_r += stats[i].lambda_r;
  }
  for (const auto& r : records) {
    const auto it = row_of.find(r.user);
    if (it == row_of.end() || !has_key[it->second]) continue;
    auto& g = groups[key_of[it->second]];
    g.delays_s.push_back(static_cast<double>(r.delay_s));
    g.positions.push_back(static_cast<double>(r.q));
  }
  std::vector<InflowGroupSummary> out;
  for (auto& [key, g] : groups) {
    g.mean_lambda /= static_cast<double>(g.users);
    g.mean_lambda_r /= static_cast<double>(g.users);
    g.records = g.delays_s.size();
    if (g.records > 0) {
      const EmpiricalDistribution d(g.delays_s);
      const EmpiricalDistribution q(g.positions);
      g.median_delay_s = d.median();
      g.mean_delay_s = d.mean();
      g.bottom90_mean_delay_s = d.bottom90_mean();
      g.mean_q = q.mean();
      g.median_q = q.median();
      if (g.mean_lambda > g.mean_lambda_r) {
        g.little = little_bounds(g.mean_lambda, g.mean_lambda_r,
                                 g.mean_delay_s / 3600.0, g.mean_q);
      }
    }
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace infoload
