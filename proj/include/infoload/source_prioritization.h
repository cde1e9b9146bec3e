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

#ifndef INFOLOAD_SOURCE_PRIORITIZATION_H_
#define INFOLOAD_SOURCE_PRIORITIZATION_H_

// Retweet source sets: how many distinct followees a user forwards from, and
// how that count grows with the number of followees.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "infoload/event_model.h"
#include "infoload/flow_metrics.h"

namespace infoload {

struct SourceStats {
  NodeId user = kNone;
  std::size_t followees = 0;  // F
  std::size_t sources = 0;    // S_r
  double p_src = 0;           // S_r / F, 0 when F = 0
  // Retweets whose source author is not a followee; not part of S_r.
  std::size_t out_of_feed_retweets = 0;
};

// S_r counts the distinct authors, among the user's followees, of the
// immediate sources of the user's retweets posted inside the window.
SourceStats source_stats(const FeedIndex& feed, NodeId user,
                         const TimeWindow& window);
// Throws UnknownIdError for a user missing from the graph.
SourceStats source_stats(std::string_view user, const EventLog& log,
                         const SocialGraph& graph, const TimeWindow& window);
std::vector<SourceStats> compute_all_source_stats(const FeedIndex& feed,
                                                  const TimeWindow& window,
                                                  unsigned workers);

// Mean S_r per logarithmic bin of F (users with F = 0 left out).
std::vector<CurvePoint> source_curve(std::span<const SourceStats> stats,
                                     int per_decade = 10);

struct SourceRegimeOptions {
  int grid_per_decade = 100;
  // Points required on each side of a candidate breakpoint.
  std::size_t min_points_per_side = 2;
  // Slopes closer than this leave the breakpoint unidentified.
  double min_slope_change = 0.1;
};

// log S = a + low * min(0, log F - log F_c) + high * max(0, log F - log F_c)
struct SourceRegimeFit {
  double exponent_low = 0;
  double exponent_high = 0;
  double f_c = 0;
  // Fitted mean S_r at F_c.
  double s_c = 0;
  double residual = 0;
  std::size_t points = 0;
  bool breakpoint_identified = false;
};

double source_regime_value(const SourceRegimeFit& fit, double f);

// Continuous piecewise log-log fit. Throws PreconditionError when fewer than
// four positive points remain or no breakpoint leaves min_points_per_side
// distinct points on both sides.
SourceRegimeFit fit_source_regimes(std::span<const CurvePoint> points,
                                   const SourceRegimeOptions& options = {});

}  // namespace infoload

#endif  // INFOLOAD_SOURCE_PRIORITIZATION_H_
