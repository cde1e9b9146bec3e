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

#include "infoload/optimize.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace infoload {
namespace {

struct Simplex {
  std::vector<std::vector<double>> x;
  std::vector<double> f;
};

bool run_once(const std::function<double(std::span<const double>)>& eval,
              const std::vector<double>& start, const NelderMeadOptions& o,
              int& budget, std::vector<double>& best_x, double& best_f) {
  const std::size_t d = start.size();
  Simplex s;
  s.x.assign(d + 1, start);
  for (std::size_t i = 0; i < d; ++i) {
    const double h = i < o.step.size() ? o.step[i] : 0.5;
    s.x[i + 1][i] += h;
  }
  s.f.resize(d + 1);
  for (std::size_t i = 0; i <= d; ++i) s.f[i] = eval(s.x[i]);
  budget -= static_cast<int>(d + 1);

  std::vector<std::size_t> order(d + 1);
  std::vector<double> centroid(d), xr(d), xe(d), xc(d);
  bool converged = false;

  while (budget > 0) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return s.f[a] < s.f[b];
    });
    const std::size_t lo = order.front();
    const std::size_t hi = order.back();
    const std::size_t second = order[d - 1];

    double size = 0.0;
    for (std::size_t i = 0; i <= d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        size = std::max(size, std::abs(s.x[i][j] - s.x[lo][j]));
    const double spread = s.f[hi] - s.f[lo];
    if (std::isfinite(spread) &&
        spread <= o.f_tol * (std::abs(s.f[lo]) + o.f_tol) && size <= o.x_tol) {
      converged = true;
      break;
    }
    if (std::isfinite(s.f[lo]) && spread == 0.0 && size <= o.x_tol) {
      converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= d; ++i) {
      if (i == hi) continue;
      for (std::size_t j = 0; j < d; ++j) centroid[j] += s.x[i][j];
    }
    for (double& c : centroid) c /= static_cast<double>(d);

    for (std::size_t j = 0; j < d; ++j)
      xr[j] = centroid[j] + (centroid[j] - s.x[hi][j]);
    const double fr = eval(xr);
    --budget;

    if (fr < s.f[lo]) {
      for (std::size_t j = 0; j < d; ++j)
        xe[j] = centroid[j] + 2.0 * (centroid[j] - s.x[hi][j]);
      const double fe = eval(xe);
      --budget;
      if (fe < fr) {
        s.x[hi] = xe;
        s.f[hi] = fe;
      } else {
        s.x[hi] = xr;
        s.f[hi] = fr;
      }
      continue;
    }
    if (fr < s.f[second]) {
      s.x[hi] = xr;
      s.f[hi] = fr;
      continue;
    }
    const bool outside = fr < s.f[hi];
    for (std::size_t j = 0; j < d; ++j) {
      xc[j] = outside ? centroid[j] + 0.5 * (xr[j] - centroid[j])
                      : centroid[j] + 0.5 * (s.x[hi][j] - centroid[j]);
    }
    const double fc = eval(xc);
    --budget;
    if (fc < (outside ? fr : s.f[hi])) {
      s.x[hi] = xc;
      s.f[hi] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= d; ++i) {
      if (i == lo) continue;
      for (std::size_t j = 0; j < d; ++j)
        s.x[i][j] = s.x[lo][j] + 0.5 * (s.x[i][j] - s.x[lo][j]);
      s.f[i] = eval(s.x[i]);
      --budget;
    }
  }

  const auto it = std::min_element(s.f.begin(), s.f.end());
  const std::size_t b = static_cast<std::size_t>(it - s.f.begin());
  best_x = s.x[b];
  best_f = s.f[b];
  return converged;
}

}  // namespace

NelderMeadResult nelder_mead(
    const std::function<double(std::span<const double>)>& objective,
    std::vector<double> start, const NelderMeadOptions& options) {
  int evaluations = 0;
  auto eval = [&](std::span<const double> x) {
    ++evaluations;
    const double v = objective(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };
  int budget = options.max_evaluations;
  NelderMeadResult result;
  std::vector<double> x = std::move(start);
  double f = std::numeric_limits<double>::infinity();
  bool converged = run_once(eval, x, options, budget, x, f);
  NelderMeadOptions shrunk = options;
  for (int r = 0; r < options.restarts && budget > 0; ++r) {
    for (double& h : shrunk.step) h *= 0.25;
    std::vector<double> x2;
    double f2 = 0;
    converged = run_once(eval, x, shrunk, budget, x2, f2);
    if (f2 < f) {
      x = x2;
      f = f2;
    }
  }
  result.x = std::move(x);
  result.value = f;
  result.evaluations = evaluations;
  result.converged = converged && std::isfinite(f);
  return result;
}

}  // namespace infoload
