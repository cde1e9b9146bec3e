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

#ifndef INFOLOAD_OPTIMIZE_H_
#define INFOLOAD_OPTIMIZE_H_

#include <functional>
#include <span>
#include <vector>

namespace infoload {

struct NelderMeadOptions {
  // Initial simplex edge along each coordinate.
  std::vector<double> step;
  double f_tol = 1e-10;
  double x_tol = 1e-8;
  int max_evaluations = 20000;
  // Restarts from the best vertex after convergence; guards against a
  // collapsed simplex stopping short of the minimum.
  int restarts = 2;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0;
  int evaluations = 0;
  bool converged = false;
};

// Derivative-free minimization. Non-finite objective values are treated as
// +infinity, so the objective may reject infeasible points that way.
NelderMeadResult nelder_mead(
    const std::function<double(std::span<const double>)>& objective,
    std::vector<double> start, const NelderMeadOptions& options);

}  // namespace infoload

#endif  // INFOLOAD_OPTIMIZE_H_
