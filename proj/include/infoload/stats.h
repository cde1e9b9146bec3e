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

#ifndef INFOLOAD_STATS_H_
#define INFOLOAD_STATS_H_

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace infoload {

// Sorted sample with CCDF and quantile queries.
class EmpiricalDistribution {
 public:
  EmpiricalDistribution() = default;
  explicit EmpiricalDistribution(std::vector<double> samples);

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  std::span<const double> values() const { return values_; }

  // Fraction of samples >= x. CCDF(min) == 1.
  double ccdf(double x) const;
  // Fraction of samples <= x.
  double cdf(double x) const;
  // Linear interpolation between order statistics (p in [0, 1]).
  double quantile(double p) const;
  double median() const { return quantile(0.5); }
  double mean() const;
  // Mean of the samples at or below the 90th percentile.
  double bottom90_mean() const;

 private:
  std::vector<double> values_;
};

// One distinct sample value and the fraction of samples >= it.
struct CcdfPoint {
  double x;
  double ccdf;
};

std::vector<CcdfPoint> ccdf_table(const EmpiricalDistribution& dist);

// Knee of a CCDF in log-log space: the interior point with the largest
// second difference of log10(ccdf) against log10(x). Points with x <= 0 are
// ignored. Empty when fewer than three usable points exist.
std::optional<double> ccdf_knee(std::span<const CcdfPoint> table);

// Summary of the y values whose x falls into [lo, hi).
struct Bin {
  double lo = 0;
  double hi = 0;
  std::size_t n = 0;
  double x_mean = 0;
  double mean = 0;
  double median = 0;
  double p10 = 0;
  double p90 = 0;
};

// Logarithmic bins aligned to decades, `per_decade` bins per decade.
// Pairs with x <= 0 are dropped; empty bins are omitted.
std::vector<Bin> bin_log(std::span<const double> x, std::span<const double> y,
                         int per_decade = 10);

// Edges of the logarithmic bin containing x > 0.
std::pair<double, double> log_bin_edges(double x, int per_decade = 10);

// Kolmogorov-Smirnov distance between a sample and a reference CDF.
template <class Cdf>
double ks_distance(const EmpiricalDistribution& dist, Cdf&& cdf) {
  const auto v = dist.values();
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double f = cdf(v[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max({d, f - lo, hi - f});
  }
  return d;
}

}  // namespace infoload

#endif  // INFOLOAD_STATS_H_
