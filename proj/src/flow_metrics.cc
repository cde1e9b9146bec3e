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

#include "infoload/flow_metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "infoload/error.h"
#include "infoload/kernels/kernels.h"
#include "infoload/optimize.h"
#include "infoload/parallel.h"

namespace infoload {

FlowStats compute_flow_stats(const FeedIndex& feed, NodeId user,
                             const TimeWindow& window,
                             const InFlowOptions& options) {
  if (!(window.end > window.start))
    throw PreconditionError("flow stats need a window of positive length");
  const EventLog& log = feed.log();
  const SocialGraph& graph = feed.graph();
  FlowStats s;
  s.user = user;
  s.followees = graph.followees(user).size();
  s.received = in_flow_stream(feed, user, window, options).events.size();

  std::vector<EventPos> sources;
  std::size_t own = 0;
  std::size_t own_retweets = 0;
  for (EventPos p : own_events(feed, user, window)) {
    ++own;
    const Event& e = log[p];
    if (!e.is_retweet()) continue;
    ++own_retweets;
    const Event& src = log[e.orig];
    const NodeId author = feed.node_of(src.author);
    const bool in_feed = author != kNone && graph.follows(user, author) &&
                         window.contains(src.ts) &&
                         (options.include_retweets || !src.is_retweet());
    if (in_feed) {
      sources.push_back(e.orig);
    } else {
      ++s.out_of_feed_retweets;
    }
  }
  std::sort(sources.begin(), sources.end());
  s.retweeted = static_cast<std::size_t>(
      std::unique(sources.begin(), sources.end()) - sources.begin());

  const double hours = window.hours();
  const double days = hours / 24.0;
  s.lambda = static_cast<double>(s.received) / hours;
  s.lambda_r = static_cast<double>(s.retweeted) / hours;
  s.lambda_nr = s.lambda - s.lambda_r;
  s.beta_r = s.received > 0 ? static_cast<double>(s.retweeted) /
                                  static_cast<double>(s.received)
                            : 0.0;
  s.out_total = static_cast<double>(own) / days;
  s.retweet_outflow = static_cast<double>(own_retweets) / days;
  return s;
}

FlowStats compute_flow_stats(std::string_view user, const EventLog& log,
                             const SocialGraph& graph,
                             const TimeWindow& window,
                             const InFlowOptions& options) {
  const NodeId n = graph.require(user);
  return compute_flow_stats(FeedIndex(log, graph), n, window, options);
}

std::vector<FlowStats> compute_all_flow_stats(const FeedIndex& feed,
                                              const TimeWindow& window,
                                              const InFlowOptions& options,
                                              unsigned workers) {
  std::vector<FlowStats> out(feed.graph().node_count());
  parallel_for(out.size(), workers, [&](std::size_t i) {
    out[i] = compute_flow_stats(feed, static_cast<NodeId>(i), window, options);
  });
  return out;
}

PowerLawFit fit_power_law_mle(std::span<const double> samples, double x_min) {
  if (!(x_min > 0)) throw PreconditionError("power-law fit needs x_min > 0");
  std::vector<double> ratios;
  ratios.reserve(samples.size());
  for (double x : samples)
    if (x >= x_min) ratios.push_back(x / x_min);
  if (ratios.size() < 2)
    throw PreconditionError("power-law fit needs at least 2 samples >= x_min");
  const double sum = kernels::sum_log(ratios);
  if (!(sum > 0))
    throw NumericError(
        "power-law fit is degenerate: every sample equals x_min");
  PowerLawFit fit;
  fit.x_min = x_min;
  fit.n = ratios.size();
  fit.alpha = 1.0 + static_cast<double>(fit.n) / sum;
  return fit;
}

double two_regime_value(const TwoRegimeFit& fit, double lambda) {
  if (lambda <= fit.lambda_c) return fit.beta0;
  return fit.beta0 * std::pow(lambda / fit.lambda_c, -fit.gamma);
}

namespace {

struct HingeSolution {
  double a = 0;
  double b = 0;
  double residual = std::numeric_limits<double>::infinity();
  std::size_t above = 0;
};

// y ~ a + b * max(0, x - t) with b <= 0.
HingeSolution solve_hinge(std::span<const double> lx,
                          std::span<const double> ly, double t) {
  HingeSolution s;
  for (double x : lx)
    if (x > t) ++s.above;
  const auto m = kernels::hinge_moments(lx, ly, t);
  const double det = m.n * m.svv - m.sv * m.sv;
  double b = 0.0;
  if (det > 1e-300) b = (m.n * m.svy - m.sv * m.sy) / det;
  if (b > 0.0) b = 0.0;
  const double a = (m.sy - b * m.sv) / m.n;
  s.a = a;
  s.b = b;
  s.residual = m.syy - 2 * a * m.sy - 2 * b * m.svy + m.n * a * a +
               2 * a * b * m.sv + b * b * m.svv;
  s.residual = std::max(0.0, s.residual);
  return s;
}

}  // namespace

TwoRegimeFit fit_two_regime(std::span<const CurvePoint> curve,
                            const TwoRegimeOptions& options) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : curve)
    if (p.x > 0 && p.y > 0) pts.emplace_back(std::log(p.x), std::log(p.y));
  if (pts.size() < 4)
    throw PreconditionError("two-regime fit needs at least 4 positive points");
  std::sort(pts.begin(), pts.end());
  std::vector<double> lx, ly;
  for (const auto& [x, y] : pts) {
    lx.push_back(x);
    ly.push_back(y);
  }

  // Thresholds at or above the second-largest x leave fewer than two points
  // in the decaying regime; those are skipped unless nothing else fits.
  const double step = std::log(10.0) / options.grid_per_decade;
  const double first = std::floor(lx.front() / step) * step;
  HingeSolution best;
  double best_t = lx.front();
  for (double t = first; t <= lx.back() + 1e-12; t += step) {
    std::size_t below = 0;
    for (double x : lx)
      if (x <= t) ++below;
    const std::size_t above = lx.size() - below;
    if (below < 1 || above < 2) continue;
    const HingeSolution s = solve_hinge(lx, ly, t);
    if (s.residual < best.residual - 1e-15) {
      best = s;
      best_t = t;
    }
  }
  if (!std::isfinite(best.residual)) {
    best = solve_hinge(lx, ly, lx.back());
    best_t = lx.back();
  } else {
    // Golden-section refinement within one grid step on either side.
    double lo = best_t - step, hi = best_t + step;
    const double g = (std::sqrt(5.0) - 1) / 2;
    double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
    HingeSolution sc = solve_hinge(lx, ly, c), sd = solve_hinge(lx, ly, d);
    for (int it = 0; it < 80; ++it) {
      if (sc.residual <= sd.residual) {
        hi = d;
        d = c;
        sd = sc;
        c = hi - g * (hi - lo);
        sc = solve_hinge(lx, ly, c);
      } else {
        lo = c;
        c = d;
        sc = sd;
        d = lo + g * (hi - lo);
        sd = solve_hinge(lx, ly, d);
      }
    }
    const double t = 0.5 * (lo + hi);
    const HingeSolution s = solve_hinge(lx, ly, t);
    if (s.residual <= best.residual && s.above >= 2) {
      best = s;
      best_t = t;
    }
  }

  TwoRegimeFit fit;
  fit.lambda_c = std::exp(best_t);
  fit.beta0 = std::min(1.0, std::exp(best.a));
  fit.gamma = -best.b;
  fit.residual = best.residual;
  fit.points = lx.size();
  fit.points_above = best.above;
  fit.overload_detected = fit.gamma >= options.min_gamma;
  return fit;
}

OverloadExponentFit fit_overload_exponent_mle(std::span<const FlowStats> stats,
                                              double lambda_c) {
  std::vector<const FlowStats*> users;
  for (const auto& s : stats)
    if (s.lambda > lambda_c && s.received > 0) users.push_back(&s);
  OverloadExponentFit fit;
  fit.users = users.size();
  if (users.size() < 2) return fit;
  double total_r = 0, total_n = 0;
  for (const auto* s : users) {
    total_r += static_cast<double>(s->retweeted);
    total_n += static_cast<double>(s->received);
  }
  if (total_r <= 0) return fit;
  auto nll = [&](std::span<const double> p) {
    const double log_b = p[0];
    const double g = p[1];
    double ll = 0;
    for (const auto* s : users) {
      const double beta =
          std::exp(log_b - g * std::log(s->lambda / lambda_c));
      if (!(beta < 1.0)) return std::numeric_limits<double>::infinity();
      const double k = static_cast<double>(s->retweeted);
      const double n = static_cast<double>(s->received);
      ll += k * std::log(beta) + (n - k) * std::log1p(-beta);
    }
    return -ll;
  };
  NelderMeadOptions o;
  o.step = {0.3, 0.2};
  const auto r = nelder_mead(nll, {std::log(total_r / total_n), 0.5}, o);
  fit.beta_c = std::exp(r.x[0]);
  fit.gamma = r.x[1];
  fit.converged = r.converged;
  return fit;
}

DiminishingReturns diminishing_returns_check(
    std::span<const CurvePoint> curve) {
  if (curve.size() < 3)
    throw PreconditionError("diminishing-returns check needs >= 3 points");
  std::vector<CurvePoint> pts(curve.begin(), curve.end());
  std::sort(pts.begin(), pts.end(),
            [](const CurvePoint& a, const CurvePoint& b) { return a.x < b.x; });
  std::vector<double> slopes;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double dx = pts[i + 1].x - pts[i].x;
    if (dx <= 0)
      throw PreconditionError("diminishing-returns check needs distinct x");
    slopes.push_back((pts[i + 1].y - pts[i].y) / dx);
  }
  DiminishingReturns r;
  for (std::size_t i = 1; i < slopes.size(); ++i) {
    const double tol =
        1e-12 * std::max({1.0, std::abs(slopes[i]), std::abs(slopes[i - 1])});
    if (slopes[i] > slopes[i - 1] + tol) r.violations.push_back(i);
  }
  r.holds = r.violations.empty();
  return r;
}

std::vector<CurvePoint> bin_means(std::span<const Bin> bins) {
  std::vector<CurvePoint> out;
  out.reserve(bins.size());
  for (const auto& b : bins) out.push_back({b.x_mean, b.mean});
  return out;
}

PopulationCurves population_curves(std::span<const FlowStats> stats,
                                   std::size_t min_received, int per_decade) {
  std::vector<double> lam, beta, lam_r, fol, lam_all, out, rt_out, fol_all;
  for (const auto& s : stats) {
    lam_all.push_back(s.lambda);
    out.push_back(s.out_total);
    rt_out.push_back(s.retweet_outflow);
    fol_all.push_back(static_cast<double>(s.followees));
    if (s.received < min_received) continue;
    lam.push_back(s.lambda);
    beta.push_back(s.beta_r);
    lam_r.push_back(s.lambda_r);
    fol.push_back(static_cast<double>(s.followees));
  }
  PopulationCurves c;
  c.beta_vs_inflow = bin_log(lam, beta, per_decade);
  c.retweet_rate_vs_inflow = bin_log(lam, lam_r, per_decade);
  c.inflow_vs_followees = bin_log(fol, lam, per_decade);
  c.outflow = EmpiricalDistribution(std::move(out));
  c.retweet_outflow = EmpiricalDistribution(std::move(rt_out));
  c.inflow = EmpiricalDistribution(std::move(lam_all));
  c.followees = EmpiricalDistribution(std::move(fol_all));
  return c;
}

}  // namespace infoload
