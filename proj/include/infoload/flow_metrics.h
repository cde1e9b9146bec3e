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

#ifndef INFOLOAD_FLOW_METRICS_H_
#define INFOLOAD_FLOW_METRICS_H_

// Per-user rates, population distributions, and the two-regime fit of
// retweet probability against in-flow rate.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "infoload/event_model.h"
#include "infoload/stats.h"

namespace infoload {

// Rates are per hour except the out-flow rates, which are per day.
struct FlowStats {
  NodeId user = kNone;
  double lambda = 0;           // in-flow, posts received per hour
  double out_total = 0;        // posts published per day
  double retweet_outflow = 0;  // retweets published per day
  double lambda_r = 0;         // received posts later retweeted, per hour
  double lambda_nr = 0;        // lambda - lambda_r
  double beta_r = 0;           // retweeted / received
  std::size_t followees = 0;   // F
  std::size_t received = 0;
  std::size_t retweeted = 0;
  // Retweets whose source is not in the user's feed for the window.
  std::size_t out_of_feed_retweets = 0;
};

// Throws PreconditionError when the window has zero length.
FlowStats compute_flow_stats(const FeedIndex& feed, NodeId user,
                             const TimeWindow& window,
                             const InFlowOptions& options = {});
// Throws UnknownIdError for a user missing from the graph.
FlowStats compute_flow_stats(std::string_view user, const EventLog& log,
                             const SocialGraph& graph,
                             const TimeWindow& window,
                             const InFlowOptions& options = {});
// One entry per graph node, in node order.
std::vector<FlowStats> compute_all_flow_stats(const FeedIndex& feed,
                                              const TimeWindow& window,
                                              const InFlowOptions& options,
                                              unsigned workers);

struct PowerLawFit {
  double x_min = 0;
  double alpha = 0;
  std::size_t n = 0;
};

// Continuous maximum-likelihood exponent over the samples >= x_min:
//   alpha = 1 + n / sum(ln(x / x_min)).
PowerLawFit fit_power_law_mle(std::span<const double> samples, double x_min);

struct CurvePoint {
  double x = 0;
  double y = 0;
};

struct TwoRegimeOptions {
  int grid_per_decade = 100;
  // Below this decay exponent the curve is reported as having no overload
  // regime.
  double min_gamma = 0.05;
};

// beta(lambda) = beta0                              lambda <= lambda_c
//              = beta0 * (lambda / lambda_c)^-gamma  lambda >  lambda_c
struct TwoRegimeFit {
  double lambda_c = 0;
  double beta0 = 0;
  double gamma = 0;
  // Sum of squared residuals in natural-log space.
  double residual = 0;
  bool overload_detected = false;
  std::size_t points = 0;
  std::size_t points_above = 0;
};

double two_regime_value(const TwoRegimeFit& fit, double lambda);

// Least squares in log-log space over a logarithmic grid of thresholds,
// refined by golden-section search around the best grid point. Points with
// non-positive coordinates are ignored; at least four must remain.
TwoRegimeFit fit_two_regime(std::span<const CurvePoint> curve,
                            const TwoRegimeOptions& options = {});

// Binomial maximum likelihood for the decay exponent over users above the
// threshold: retweeted_u ~ Binomial(received_u, b * (lambda_u/lambda_c)^-g).
struct OverloadExponentFit {
  double beta_c = 0;
  double gamma = 0;
  std::size_t users = 0;
  bool converged = false;
};
OverloadExponentFit fit_overload_exponent_mle(std::span<const FlowStats> stats,
                                              double lambda_c);

struct DiminishingReturns {
  bool holds = true;
  // Index i means the slope of segment (i, i+1) exceeds that of (i-1, i).
  std::vector<std::size_t> violations;
};

// Concavity of a binned curve: successive slopes must not increase.
// Points are taken in ascending x. Requires at least three points.
DiminishingReturns diminishing_returns_check(std::span<const CurvePoint> curve);

std::vector<CurvePoint> bin_means(std::span<const Bin> bins);

struct PopulationCurves {
  std::vector<Bin> beta_vs_inflow;
  std::vector<Bin> retweet_rate_vs_inflow;
  std::vector<Bin> inflow_vs_followees;
  EmpiricalDistribution outflow;
  EmpiricalDistribution retweet_outflow;
  EmpiricalDistribution inflow;
  EmpiricalDistribution followees;
};

// Users with fewer than `min_received` received posts are left out of the
// rate-vs-rate curves; the marginal distributions use every user.
PopulationCurves population_curves(std::span<const FlowStats> stats,
                                   std::size_t min_received = 10,
                                   int per_decade = 10);

}  // namespace infoload

#endif  // INFOLOAD_FLOW_METRICS_H_
