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

#include "infoload/source_prioritization.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "infoload/error.h"
#include "infoload/kernels/kernels.h"
#include "infoload/parallel.h"
#include "infoload/stats.h"

namespace infoload {

SourceStats source_stats(const FeedIndex& feed, NodeId user,
                         const TimeWindow& window) {
  const EventLog& log = feed.log();
  const SocialGraph& graph = feed.graph();
  SourceStats s;
  s.user = user;
  s.followees = graph.followees(user).size();
  std::vector<NodeId> authors;
  for (EventPos p : own_events(feed, user, window)) {
    const Event& e = log[p];
    if (!e.is_retweet()) continue;
    const NodeId author = feed.node_of(log[e.orig].author);
    if (author != kNone && graph.follows(user, author)) {
      authors.push_back(author);
    } else {
      ++s.out_of_feed_retweets;
    }
  }
  std::sort(authors.begin(), authors.end());
  s.sources = static_cast<std::size_t>(
      std::unique(authors.begin(), authors.end()) - authors.begin());
  s.p_src = s.followees > 0 ? static_cast<double>(s.sources) /
                                  static_cast<double>(s.followees)
                            : 0.0;
  return s;
}

SourceStats source_stats(std::string_view user, const EventLog& log,
                         const SocialGraph& graph, const TimeWindow& window) {
  const NodeId n = graph.require(user);
  const FeedIndex feed(log, graph);
  return source_stats(feed, n, window);
}

std::vector<SourceStats> compute_all_source_stats(const FeedIndex& feed,
                                                  const TimeWindow& window,
                                                  unsigned workers) {
  std::vector<SourceStats> out(feed.graph().node_count());
  parallel_for(out.size(), workers, [&](std::size_t i) {
    out[i] = source_stats(feed, static_cast<NodeId>(i), window);
  });
  return out;
}

std::vector<CurvePoint> source_curve(std::span<const SourceStats> stats,
                                     int per_decade) {
  std::vector<double> f, s;
  for (const auto& st : stats) {
    if (st.followees == 0) continue;
    f.push_back(static_cast<double>(st.followees));
    s.push_back(static_cast<double>(st.sources));
  }
  const auto bins = bin_log(f, s, per_decade);
  return bin_means(bins);
}

namespace {

struct Piecewise {
  double a = 0, low = 0, high = 0;
  double residual = std::numeric_limits<double>::infinity();
};

// Least squares for y = a + b1*u + b2*v. Since u*v = 0 the normal matrix is
// [[n, su, sv], [su, suu, 0], [sv, 0, svv]].
Piecewise solve_piecewise(std::span<const double> x, std::span<const double> y,
                          double knot) {
  const kernels::HingeMoments m = kernels::hinge_moments(x, y, knot);
  Piecewise p;
  if (m.suu <= 0 || m.svv <= 0) return p;
  const double det = m.n * m.suu * m.svv - m.su * m.su * m.svv -
                     m.sv * m.sv * m.suu;
  if (!(std::abs(det) > 1e-300)) return p;
  // Cramer's rule.
  const double da = m.sy * m.suu * m.svv - m.su * m.suy * m.svv -
                    m.sv * m.suu * m.svy;
  const double db1 = m.n * m.suy * m.svv - m.sy * m.su * m.svv +
                     m.sv * (m.su * m.svy - m.sv * m.suy);
  const double db2 = m.n * m.suu * m.svy - m.su * m.su * m.svy -
                     m.sv * m.suu * m.sy + m.sv * m.su * m.suy;
  p.a = da / det;
  p.low = db1 / det;
  p.high = db2 / det;
  p.residual = std::max(
      0.0, m.syy - (p.a * m.sy + p.low * m.suy + p.high * m.svy));
  return p;
}

}  // namespace

double source_regime_value(const SourceRegimeFit& fit, double f) {
  const double d = std::log(f / fit.f_c);
  return fit.s_c * std::exp(d < 0 ? fit.exponent_low * d
                                   : fit.exponent_high * d);
}

SourceRegimeFit fit_source_regimes(std::span<const CurvePoint> points,
                                   const SourceRegimeOptions& options) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : points)
    if (p.x > 0 && p.y > 0) pts.emplace_back(std::log(p.x), std::log(p.y));
  if (pts.size() < 4)
    throw PreconditionError("source regime fit needs at least 4 positive bins");
  std::sort(pts.begin(), pts.end());
  std::vector<double> lx, ly;
  for (const auto& [x, y] : pts) {
    lx.push_back(x);
    ly.push_back(y);
  }
  const std::size_t need = options.min_points_per_side;
  auto feasible = [&](double t) {
    std::size_t below = 0, above = 0;
    for (double x : lx) {
      if (x < t) ++below;
      if (x > t) ++above;
    }
    return below >= need && above >= need;
  };

  const double step = std::log(10.0) / options.grid_per_decade;
  Piecewise best;
  double best_t = 0;
  for (double t = std::floor(lx.front() / step) * step;
       t <= lx.back() + 1e-12; t += step) {
    if (!feasible(t)) continue;
    const Piecewise p = solve_piecewise(lx, ly, t);
    if (p.residual < best.residual - 1e-15) {
      best = p;
      best_t = t;
    }
  }
  if (!std::isfinite(best.residual)) {
    throw PreconditionError(
        "source regime fit: bins do not span a breakpoint with " +
        std::to_string(need) + " points on each side");
  }
  // Golden-section refinement within one grid step.
  {
    double lo = best_t - step, hi = best_t + step;
    const double g = (std::sqrt(5.0) - 1) / 2;
    auto cost = [&](double t) {
      return feasible(t) ? solve_piecewise(lx, ly, t).residual
                         : std::numeric_limits<double>::infinity();
    };
    double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
    double fc = cost(c), fd = cost(d);
    for (int it = 0; it < 80; ++it) {
      if (fc <= fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - g * (hi - lo);
        fc = cost(c);
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + g * (hi - lo);
        fd = cost(d);
      }
    }
    const double t = 0.5 * (lo + hi);
    if (cost(t) <= best.residual) {
      best = solve_piecewise(lx, ly, t);
      best_t = t;
    }
  }

  SourceRegimeFit fit;
  fit.exponent_low = best.low;
  fit.exponent_high = best.high;
  fit.f_c = std::exp(best_t);
  fit.s_c = std::exp(best.a);
  fit.residual = best.residual;
  fit.points = lx.size();
  fit.breakpoint_identified =
      std::abs(best.low - best.high) >= options.min_slope_change;
  return fit;
}

}  // namespace infoload
