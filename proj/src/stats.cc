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

#include "infoload/stats.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace infoload {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples)
    : values_(std::move(samples)) {
  std::sort(values_.begin(), values_.end());
}

double EmpiricalDistribution::ccdf(double x) const {
  if (values_.empty()) return 0.0;
  const auto it = std::lower_bound(values_.begin(), values_.end(), x);
  return static_cast<double>(values_.end() - it) /
         static_cast<double>(values_.size());
}

double EmpiricalDistribution::cdf(double x) const {
  if (values_.empty()) return 0.0;
  const auto it = std::upper_bound(values_.begin(), values_.end(), x);
  return static_cast<double>(it - values_.begin()) /
         static_cast<double>(values_.size());
}

double EmpiricalDistribution::quantile(double p) const {
  if (values_.empty()) return std::nan("");
  p = std::clamp(p, 0.0, 1.0);
  const double pos = p * static_cast<double>(values_.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values_.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values_[lo] + frac * (values_[hi] - values_[lo]);
}

double EmpiricalDistribution::mean() const {
  if (values_.empty()) return std::nan("");
  return std::accumulate(values_.begin(), values_.end(), 0.0) /
         static_cast<double>(values_.size());
}

double EmpiricalDistribution::bottom90_mean() const {
  if (values_.empty()) return std::nan("");
  const double cut = quantile(0.9);
  const auto end = std::upper_bound(values_.begin(), values_.end(), cut);
  return std::accumulate(values_.begin(), end, 0.0) /
         static_cast<double>(end - values_.begin());
}

std::vector<CcdfPoint> ccdf_table(const EmpiricalDistribution& dist) {
  std::vector<CcdfPoint> out;
  const auto v = dist.values();
  const double n = static_cast<double>(v.size());
  for (std::size_t i = 0; i < v.size();) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    out.push_back({v[i], static_cast<double>(v.size() - i) / n});
    i = j;
  }
  return out;
}

std::optional<double> ccdf_knee(std::span<const CcdfPoint> table) {
  std::vector<double> lx, ly;
  for (const auto& p : table) {
    if (p.x > 0 && p.ccdf > 0) {
      lx.push_back(std::log10(p.x));
      ly.push_back(std::log10(p.ccdf));
    }
  }
  if (lx.size() < 3) return std::nullopt;
  double best = -INFINITY;
  std::size_t best_i = 0;
  for (std::size_t i = 1; i + 1 < lx.size(); ++i) {
    const double s1 = (ly[i] - ly[i - 1]) / (lx[i] - lx[i - 1]);
    const double s2 = (ly[i + 1] - ly[i]) / (lx[i + 1] - lx[i]);
    // A knee is where the curve turns downward: slope decreases.
    const double second = (s1 - s2) / (0.5 * (lx[i + 1] - lx[i - 1]));
    if (second > best) {
      best = second;
      best_i = i;
    }
  }
  return std::pow(10.0, lx[best_i]);
}

std::pair<double, double> log_bin_edges(double x, int per_decade) {
  const double k = std::floor(std::log10(x) * per_decade + 1e-9);
  double lo = std::pow(10.0, k / per_decade);
  double hi = std::pow(10.0, (k + 1) / per_decade);
  // Guard against rounding placing x just outside its computed bin.
  if (x < lo) {
    hi = lo;
    lo = std::pow(10.0, (k - 1) / per_decade);
  } else if (x >= hi) {
    lo = hi;
    hi = std::pow(10.0, (k + 2) / per_decade);
  }
  return {lo, hi};
}

std::vector<Bin> bin_log(std::span<const double> x, std::span<const double> y,
                         int per_decade) {
  struct Item {
    long key;
    double x, y;
  };
  std::vector<Item> items;
  items.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0)) continue;
    const auto [lo, hi] = log_bin_edges(x[i], per_decade);
    items.push_back({std::lround(std::log10(lo) * per_decade), x[i], y[i]});
  }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.key != b.key) return a.key < b.key;
    if (a.y != b.y) return a.y < b.y;
    return a.x < b.x;
  });
  std::vector<Bin> bins;
  for (std::size_t i = 0; i < items.size();) {
    std::size_t j = i;
    while (j < items.size() && items[j].key == items[i].key) ++j;
    std::vector<double> ys;
    double xs = 0.0;
    for (std::size_t k = i; k < j; ++k) {
      ys.push_back(items[k].y);
      xs += items[k].x;
    }
    EmpiricalDistribution d(std::move(ys));
    Bin b;
    b.lo = std::pow(10.0, static_cast<double>(items[i].key) / per_decade);
    b.hi = std::pow(10.0, static_cast<double>(items[i].key + 1) / per_decade);
    b.n = j - i;
    b.x_mean = xs / static_cast<double>(b.n);
    b.mean = d.mean();
    b.median = d.median();
    b.p10 = d.quantile(0.1);
    b.p90 = d.quantile(0.9);
    bins.push_back(b);
    i = j;
  }
  return bins;
}

}  // namespace infoload
