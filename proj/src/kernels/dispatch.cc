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

#include <cassert>
#include <cstdlib>
#include <string_view>

#include "infoload/kernels/kernels.h"

namespace infoload::kernels {

#if !defined(INFOLOAD_HAVE_AVX2)
const KernelTable* avx2_table() { return nullptr; }
#endif
#if !defined(INFOLOAD_HAVE_NEON)
const KernelTable* neon_table() { return nullptr; }
#endif

namespace {

const KernelTable& choose() {
  const char* env = std::getenv("INFOLOAD_SIMD");
  const std::string_view want = env ? env : "";
  if (want == "scalar") return scalar_table();
  if (want == "avx2") {
    if (const KernelTable* t = avx2_table()) return *t;
    return scalar_table();
  }
  if (want == "neon") {
    if (const KernelTable* t = neon_table()) return *t;
    return scalar_table();
  }
  if (const KernelTable* t = avx2_table()) return *t;
  if (const KernelTable* t = neon_table()) return *t;
  return scalar_table();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = choose();
  return table;
}

double sum_log(std::span<const double> x) {
  return active().sum_log(x.data(), x.size());
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return active().dot(a.data(), b.data(), a.size());
}

void lognormal_pdf(std::span<const double> x, double mu, double sigma,
                   std::span<double> out) {
  assert(out.size() >= x.size());
  active().lognormal_pdf(x.data(), x.size(), mu, sigma, out.data());
}

HingeMoments hinge_moments(std::span<const double> x,
                           std::span<const double> y, double knot) {
  assert(x.size() == y.size());
  return active().hinge_moments(x.data(), y.data(), x.size(), knot);
}

}  // namespace infoload::kernels
