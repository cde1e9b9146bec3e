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

#ifndef INFOLOAD_EXPOSURE_H_
#define INFOLOAD_EXPOSURE_H_

// k-exposure tracking and ordinal-time exposure curves.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "infoload/event_model.h"
#include "infoload/flow_metrics.h"

namespace infoload {

inline constexpr std::int64_t kNever = std::numeric_limits<std::int64_t>::max();

struct ExposureStep {
  std::int64_t ts = 0;
  // Exposure count from ts on. Jumps by more than one when several followees
  // adopt at the same timestamp.
  std::uint32_t k = 0;
};

struct ContagionTrace {
  std::string token;
  TimeWindow window;
  // Per node: time of the first in-window event carrying the token, or
  // kNever.
  std::vector<std::int64_t> adoption;
  // Per node: the user used the token before the window and is left out.
  std::vector<bool> excluded;
  // Per node: times at which a distinct followee first adopts inside the
  // window, with the resulting exposure count. Excluded users have none.
  std::vector<std::vector<ExposureStep>> exposures;

  std::size_t adopters() const;
};

// Throws InputError when the token never occurs in the log.
ContagionTrace build_trace(std::string_view token, const FeedIndex& feed,
                           const TimeWindow& window);

struct ExposureCurve {
  std::string label;
  // Indexed by k. E[k]: users ever k-exposed before adopting; I[k]: users
  // adopting while k-exposed.
  std::vector<std::size_t> exposed;
  std::vector<std::size_t> adopted;
  // Largest k with exposed[k] >= the threshold given to exposure_curve, or
  // -1 when there is none.
  int k_max = -1;

  std::size_t size() const { return exposed.size(); }
  // I(k)/E(k); NaN when E(k) = 0 or k is out of range.
  double p(std::size_t k) const;
};

struct ExposureCurveOptions {
  std::size_t min_exposed = 50;
};

// Adoption at the timestamp of an exposure counts at the new k.
ExposureCurve exposure_curve(const ContagionTrace& trace,
                             std::span<const NodeId> users,
                             const ExposureCurveOptions& options = {});
// Every non-excluded node.
ExposureCurve exposure_curve(const ContagionTrace& trace,
                             const ExposureCurveOptions& options = {});

// Half-open [lo, hi) in posts per hour.
struct InflowRange {
  double lo = 0;
  double hi = 0;
  std::string label() const;
};

struct UserGroup {
  InflowRange range;
  std::vector<NodeId> users;
};

// One group per range, in the given order; users outside every range are
// dropped. Throws PreconditionError for overlapping or empty ranges.
std::vector<UserGroup> group_users_by_inflow(std::span<const FlowStats> stats,
                                             std::span<const InflowRange> ranges);

enum class Aggregation {
  kMeanOfCurves,  // unweighted mean of per-token P(k)
  kPooled,        // sum I(k) / sum E(k)
};

struct AggregatePoint {
  std::size_t k = 0;
  double p = 0;
  std::size_t curves = 0;  // curves contributing at this k
  std::size_t exposed = 0;
  std::size_t adopted = 0;
};

// Points at every k where at least one curve has E(k) >= min_exposed.
std::vector<AggregatePoint> aggregate_curves(std::span<const ExposureCurve> curves,
                                             Aggregation mode,
                                             std::size_t min_exposed = 1);

// Traces for several tokens, built in parallel. Output order follows tokens.
std::vector<ContagionTrace> build_traces(std::span<const std::string> tokens,
                                         const FeedIndex& feed,
                                         const TimeWindow& window,
                                         unsigned workers);

}  // namespace infoload

#endif  // INFOLOAD_EXPOSURE_H_
