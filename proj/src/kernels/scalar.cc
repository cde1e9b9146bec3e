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

#include <cmath>
#include <numbers>

#include "infoload/kernels/kernels.h"

namespace infoload::kernels {
namespace {

double sum_log_scalar(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::log(x[i]);
  return s;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void lognormal_pdf_scalar(const double* x, std::size_t n, double mu,
                          double sigma, double* out) {
  const double inv_sigma = 1.0 / sigma;
  const double norm = inv_sigma / std::sqrt(2.0 * std::numbers::pi);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0)) {
      out[i] = 0.0;
      continue;
    }
    const double z = (std::log(x[i]) - mu) * inv_sigma;
    out[i] = norm * std::exp(-0.5 * z * z) / x[i];
  }
}

HingeMoments hinge_moments_scalar(const double* x, const double* y,
                                  std::size_t n, double knot) {
  HingeMoments m;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - knot;
    const double u = d < 0.0 ? d : 0.0;
    const double v = d > 0.0 ? d : 0.0;
    m.sy += y[i];
    m.syy += y[i] * y[i];
    m.su += u;
    m.suu += u * u;
    m.suy += u * y[i];
    m.sv += v;
    m.svv += v * v;
    m.svy += v * y[i];
  }
  m.n = static_cast<double>(n);
  return m;
}

constexpr KernelTable kScalar{
    "scalar", sum_log_scalar, dot_scalar, lognormal_pdf_scalar,
    hinge_moments_scalar};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace infoload::kernels
