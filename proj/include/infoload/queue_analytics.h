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

#ifndef INFOLOAD_QUEUE_ANALYTICS_H_
#define INFOLOAD_QUEUE_ANALYTICS_H_

// LIFO feed reconstruction: queue positions at retweet time, queueing-delay
// distributions and their lognormal-sum fit, and Little's-law bounds on the
// delay of posts that are read but not forwarded.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "infoload/event_model.h"
#include "infoload/flow_metrics.h"
#include "infoload/lognormal_sum.h"
#include "infoload/stats.h"

namespace infoload {

struct QueuePositionRecord {
  NodeId user = kNone;
  EventPos retweet = kNone;
  EventPos original = kNone;
  // Feed items that arrived strictly between the original and the retweet.
  std::size_t q = 0;
  std::int64_t delay_s = 0;
};

enum class SourceMode {
  kImmediate,  // the event the retweet cites (what sat in the feed)
  kRoot,       // the original tweet at the head of a retweet chain
};

struct QueueOptions {
  InFlowOptions inflow;
  SourceMode source = SourceMode::kImmediate;
};

// Empty when the source is not in `in_flow` (author not followed, outside
// the window, or filtered out).
std::optional<QueuePositionRecord> queue_position_at_retweet(
    const EventLog& log, EventPos retweet, const InFlowStream& in_flow,
    SourceMode source = SourceMode::kImmediate);

struct QueueCoverage {
  std::size_t retweets = 0;
  std::size_t included = 0;
  std::size_t excluded = 0;
};

struct QueueRecords {
  std::vector<QueuePositionRecord> records;  // by user, then log order
  QueueCoverage coverage;
};

// Every retweet posted inside the window by a graph user.
QueueRecords queue_records(const FeedIndex& feed, const TimeWindow& window,
                           const QueueOptions& options, unsigned workers);

struct DelaySummary {
  std::size_t n = 0;
  double median_s = 0;
  double mean_s = 0;
  double bottom90_mean_s = 0;
  EmpiricalDistribution delays;
};

// Pools the delays of a group. Throws PreconditionError for an empty group.
DelaySummary delay_histogram(std::span<const QueuePositionRecord> records);

struct HistogramBin {
  double lo = 0;
  double hi = 0;
  std::size_t count = 0;
  // count / (n * (hi - lo))
  double density = 0;
};

// Logarithmic histogram of positive values; non-positive values go to a
// leading [0, smallest edge) bin.
std::vector<HistogramBin> log_histogram(const EmpiricalDistribution& dist,
                                        int per_decade = 10);

struct LognormalFit {
  double mu = 0;
  double sigma = 0;
  double log_likelihood = 0;
};

// Closed-form single-lognormal MLE (for nested-model comparison).
LognormalFit fit_lognormal(std::span<const double> samples);

struct LognormalConvolutionFit {
  LognormalSum params;
  double log_likelihood = 0;
  std::size_t n = 0;
  std::size_t rejected_nonpositive = 0;
  int evaluations = 0;
};

struct ConvolutionFitOptions {
  std::size_t min_samples = 100;
  // Points of the log-spaced grid on which the density is tabulated.
  int grid_points = 256;
  double min_sigma = 0.05;
  double max_sigma = 5.0;
};

// Maximum likelihood for the sum-of-two-lognormals model by Nelder-Mead from
// several deterministic starting points. Components are ordered so that
// mu1 >= mu2. Throws PreconditionError for fewer than min_samples positive
// delays and NumericError when no start converges.
LognormalConvolutionFit fit_lognormal_convolution(
    std::span<const double> delays, const ConvolutionFitOptions& options = {});

// Log-likelihood of the model on `delays`, evaluating the density at every
// sample. `grid_points` is accepted for symmetry with the fit and unused.
double lognormal_sum_log_likelihood(std::span<const double> delays,
                                    const LognormalSum& p,
                                    int grid_points = 256);

// Little's-law quantities, all in hours (rates per hour).
struct LittleBound {
  double lambda = 0;
  double lambda_r = 0;
  double lambda_nr = 0;
  double delta_r = 0;
  // Mean queue position at retweet; a lower bound on the mean number of
  // unread posts N_u.
  double n_r = 0;
  double delta_nr_star = 0;
  double delta_star = 0;
  // delta_nr_star came out negative and was set to zero.
  bool clamped = false;

  double n_u_lower_bound() const { return n_r; }
};

// Throws PreconditionError when lambda_nr <= 0 or an input is negative.
LittleBound little_bounds(double lambda, double lambda_r, double delta_r_hours,
                          double mean_queue_position);
LittleBound little_bounds(const FlowStats& stats, double delta_r_hours,
                          double mean_queue_position);

// Users grouped into logarithmic in-flow bins, with pooled queue statistics.
struct InflowGroupSummary {
  double lo = 0;
  double hi = 0;
  std::size_t users = 0;
  std::size_t records = 0;
  double mean_lambda = 0;
  double mean_lambda_r = 0;
  double median_delay_s = 0;
  double mean_delay_s = 0;
  double bottom90_mean_delay_s = 0;
  double mean_q = 0;
  double median_q = 0;
  std::optional<LittleBound> little;
  std::vector<double> delays_s;
  std::vector<double> positions;
};

std::vector<InflowGroupSummary> summarize_by_inflow(
    std::span<const FlowStats> stats,
    std::span<const QueuePositionRecord> records, int per_decade = 10);

}  // namespace infoload

#endif  // INFOLOAD_QUEUE_ANALYTICS_H_
