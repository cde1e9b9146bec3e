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

#ifndef INFOLOAD_LOGNORMAL_SUM_H_
#define INFOLOAD_LOGNORMAL_SUM_H_

// Sum of two independent lognormal variables: the queueing-delay model
// (observation time plus reaction time).

#include <cmath>
#include <span>
#include <vector>

#include "infoload/rng.h"

namespace infoload {

struct LognormalSum {
  double mu1 = 0;
  double sigma1 = 1;
  double mu2 = 0;
  double sigma2 = 1;
};

// A sigma of zero makes that component the constant exp(mu).
inline double sample_lognormal_sum(Rng& rng, const LognormalSum& p) {
  const double a = std::exp(p.mu1 + p.sigma1 * rng.normal());
  const double b = std::exp(p.mu2 + p.sigma2 * rng.normal());
  return a + b;
}

// Density of the sum by numerical convolution. Each half of the convolution
// integral (smaller summand from either component) is integrated with
// Simpson's rule in that component's standardized log variable, so the
// quadrature nodes are log-spaced in the delay domain. Requires sigmas > 0.
double lognormal_sum_pdf(double z, const LognormalSum& p);
void lognormal_sum_pdf(std::span<const double> z, const LognormalSum& p,
                       std::span<double> out);

}  // namespace infoload

#endif  // INFOLOAD_LOGNORMAL_SUM_H_
