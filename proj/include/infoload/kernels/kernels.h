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

#ifndef INFOLOAD_KERNELS_KERNELS_H_
#define INFOLOAD_KERNELS_KERNELS_H_

// Data-parallel inner loops used by the estimators. Every kernel has a
// scalar reference implementation; vector variants (AVX2+FMA on x86-64,
// NEON on AArch64) are selected once at runtime and are tested for
// equivalence against the reference.
//
// The environment variable INFOLOAD_SIMD=scalar|avx2|neon forces a variant;
// an unavailable request falls back to scalar.

#include <cstddef>
#include <span>
#include <string_view>

namespace infoload::kernels {

// Sums over the two hinge coordinates of x around a knot t:
//   u = min(0, x - t),  v = max(0, x - t).
// Enough to solve the least-squares problems y ~ a + b*v and
// y ~ a + b1*u + b2*v in closed form.
struct HingeMoments {
  double n = 0;
  double sy = 0, syy = 0;
  double su = 0, suu = 0, suy = 0;
  double sv = 0, svv = 0, svy = 0;
};

struct KernelTable {
  std::string_view name;
  // Sum of natural logs. Inputs must be positive, finite and normal.
  double (*sum_log)(const double* x, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
  // Lognormal density at x; x <= 0 yields 0.
  void (*lognormal_pdf)(const double* x, std::size_t n, double mu,
                        double sigma, double* out);
  HingeMoments (*hinge_moments)(const double* x, const double* y,
                                std::size_t n, double knot);
};

const KernelTable& scalar_table();
// nullptr when the variant is not compiled in or the CPU lacks support.
const KernelTable* avx2_table();
const KernelTable* neon_table();

// The table chosen for this process (first call decides).
const KernelTable& active();

double sum_log(std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);
void lognormal_pdf(std::span<const double> x, double mu, double sigma,
                   std::span<double> out);
HingeMoments hinge_moments(std::span<const double> x,
                           std::span<const double> y, double knot);

}  // namespace infoload::kernels

#endif  // INFOLOAD_KERNELS_KERNELS_H_
