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

#include "infoload/exposure.h"

#include <algorithm>
#include <cmath>

#include "infoload/config.h"
#include "infoload/error.h"
#include "infoload/parallel.h"

namespace infoload {

std::size_t ContagionTrace::adopters() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < adoption.size(); ++i)
    if (!excluded[i] && adoption[i] != kNever) ++n;
  return n;
}

ContagionTrace build_trace(std::string_view token, const FeedIndex& feed,
                           const TimeWindow& window) {
  const EventLog& log = feed.log();
  const SocialGraph& graph = feed.graph();
  const auto tok = log.find_token(token);
  if (!tok) throw InputError("token '" + std::string(token) + "' not in log");

  const std::size_t n = graph.node_count();
  ContagionTrace t;
  t.token = std::string(token);
  t.window = window;
  t.adoption.assign(n, kNever);
  t.excluded.assign(n, false);
  t.exposures.resize(n);

  for (const Event& e : log.events()) {
    if (!std::binary_search(e.marks.begin(), e.marks.end(), *tok)) continue;
    const NodeId u = feed.node_of(e.author);
    if (u == kNone || t.excluded[u] || t.adoption[u] != kNever) continue;
    if (e.ts < window.start) {
      t.excluded[u] = true;
    } else if (e.ts <= window.end) {
      t.adoption[u] = e.ts;
    }
  }

  std::vector<std::int64_t> times;
  for (std::size_t i = 0; i < n; ++i) {
    if (t.excluded[i]) continue;
    times.clear();
    for (NodeId v : graph.followees(static_cast<NodeId>(i)))
      if (!t.excluded[v] && t.adoption[v] != kNever)
        times.push_back(t.adoption[v]);
    std::sort(times.begin(), times.end());
    std::uint32_t k = 0;
    for (std::size_t j = 0; j < times.size(); ++j) {
      ++k;
      if (j + 1 < times.size() && times[j + 1] == times[j]) continue;
      t.exposures[i].push_back({times[j], k});
    }
  }
  return t;
}

double ExposureCurve::p(std::size_t k) const {
  if (k >= exposed.size() || exposed[k] == 0) return std::nan("");
  return static_cast<double>(adopted[k]) / static_cast<double>(exposed[k]);
}

ExposureCurve exposure_curve(const ContagionTrace& trace,
                             std::span<const NodeId> users,
                             const ExposureCurveOptions& options) {
  ExposureCurve c;
  c.label = trace.token;
  auto bump = [](std::vector<std::size_t>& v, std::size_t k) {
    if (v.size() <= k) v.resize(k + 1, 0);
    ++v[k];
  };
  for (NodeId u : users) {
    if (trace.excluded[u]) continue;
    const std::int64_t adopt = trace.adoption[u];
    std::uint32_t k = 0;
    bump(c.exposed, 0);
    for (const ExposureStep& s : trace.exposures[u]) {
      if (s.ts > adopt) break;
      k = s.k;
      bump(c.exposed, k);
    }
    if (adopt != kNever) bump(c.adopted, k);
  }
  c.adopted.resize(c.exposed.size(), 0);
  for (std::size_t k = 0; k < c.exposed.size(); ++k)
    if (c.exposed[k] >= options.min_exposed) c.k_max = static_cast<int>(k);
  return c;
}

ExposureCurve exposure_curve(const ContagionTrace& trace,
                             const ExposureCurveOptions& options) {
  std::vector<NodeId> all;
  for (std::size_t i = 0; i < trace.excluded.size(); ++i)
    if (!trace.excluded[i]) all.push_back(static_cast<NodeId>(i));
  return exposure_curve(trace, all, options);
}

std::string InflowRange::label() const {
  return "[" + format_double(lo) + "," + format_double(hi) + ")";
}

std::vector<UserGroup> group_users_by_inflow(
    std::span<const FlowStats> stats, std::span<const InflowRange> ranges) {
  std::vector<InflowRange> sorted(ranges.begin(), ranges.end());
  for (const auto& r : sorted)
    if (!(r.hi > r.lo))
      throw PreconditionError("in-flow range " + r.label() + " is empty");
  std::sort(sorted.begin(), sorted.end(),
            [](const InflowRange& a, const InflowRange& b) { return a.lo < b.lo; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].lo < sorted[i - 1].hi)
      throw PreconditionError("in-flow ranges " + sorted[i - 1].label() +
                              " and " + sorted[i].label() + " overlap");

  std::vector<UserGroup> groups(ranges.size());
  for (std::size_t g = 0; g < ranges.size(); ++g) groups[g].range = ranges[g];
  for (const auto& s : stats) {
    for (auto& g : groups) {
      if (s.lambda >= g.range.lo && s.lambda < g.range.hi) {
        g.users.push_back(s.user);
        break;
      }
    }
  }
  return groups;
}

std::vector<AggregatePoint> aggregate_curves(
    std::span<const ExposureCurve> curves, Aggregation mode,
    std::size_t min_exposed) {
  std::size_t kmax = 0;
  for (const auto& c : curves) kmax = std::max(kmax, c.size());
  std::vector<AggregatePoint> out;
  for (std::size_t k = 0; k < kmax; ++k) {
    AggregatePoint pt;
    pt.k = k;
    double sum_p = 0;
    for (const auto& c : curves) {
      if (k >= c.size() || c.exposed[k] < min_exposed || c.exposed[k] == 0)
        continue;
      ++pt.curves;
      pt.exposed += c.exposed[k];
      pt.adopted += c.adopted[k];
      sum_p += c.p(k);
    }
    if (pt.curves == 0) continue;
    pt.p = mode == Aggregation::kPooled
               ? static_cast<double>(pt.adopted) / static_cast<double>(pt.exposed)
               : sum_p / static_cast<double>(pt.curves);
    out.push_back(pt);
  }
  return out;
}

std::vector<ContagionTrace> build_traces(std::span<const std::string> tokens,
                                         const FeedIndex& feed,
                                         const TimeWindow& window,
                                         unsigned workers) {
  std::vector<ContagionTrace> out(tokens.size());
  parallel_for(tokens.size(), workers, [&](std::size_t i) {
    out[i] = build_trace(tokens[i], feed, window);
  });
  return out;
}

}  // namespace infoload
