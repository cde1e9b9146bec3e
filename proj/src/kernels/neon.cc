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

// NEON variants for AArch64, where Advanced SIMD is always present.
// Same algorithms as the AVX2 file, two lanes wide.

#include <arm_neon.h>

#include <cmath>
#include <cstdint>
#include <numbers>

#include "infoload/kernels/kernels.h"

namespace infoload::kernels {
namespace {

constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;

inline float64x2_t splat(double v) { return vdupq_n_f64(v); }

inline float64x2_t log2l(float64x2_t x) {
  const uint64x2_t bits = vreinterpretq_u64_f64(x);
  const uint64x2_t biased = vshrq_n_u64(bits, 52);
  float64x2_t e = vsubq_f64(vcvtq_f64_u64(biased), splat(1023.0));
  float64x2_t m = vreinterpretq_f64_u64(
      vorrq_u64(vandq_u64(bits, vdupq_n_u64(0x000fffffffffffffULL)),
                vdupq_n_u64(0x3ff0000000000000ULL)));
  const uint64x2_t big = vcgtq_f64(m, splat(std::numbers::sqrt2));
  m = vbslq_f64(big, vmulq_f64(m, splat(0.5)), m);
  e = vaddq_f64(e, vreinterpretq_f64_u64(
                       vandq_u64(big, vreinterpretq_u64_f64(splat(1.0)))));

  const float64x2_t f =
      vdivq_f64(vsubq_f64(m, splat(1.0)), vaddq_f64(m, splat(1.0)));
  const float64x2_t s = vmulq_f64(f, f);
  float64x2_t p = splat(1.0 / 23.0);
  p = vfmaq_f64(splat(1.0 / 21.0), p, s);
  p = vfmaq_f64(splat(1.0 / 19.0), p, s);
  p = vfmaq_f64(splat(1.0 / 17.0), p, s);
  p = vfmaq_f64(splat(1.0 / 15.0), p, s);
  p = vfmaq_f64(splat(1.0 / 13.0), p, s);
  p = vfmaq_f64(splat(1.0 / 11.0), p, s);
  p = vfmaq_f64(splat(1.0 / 9.0), p, s);
  p = vfmaq_f64(splat(1.0 / 7.0), p, s);
  p = vfmaq_f64(splat(1.0 / 5.0), p, s);
  p = vfmaq_f64(splat(1.0 / 3.0), p, s);
  const float64x2_t two_f = vaddq_f64(f, f);
  const float64x2_t log_m = vaddq_f64(two_f, vmulq_f64(vmulq_f64(two_f, s), p));
  return vaddq_f64(vmulq_f64(e, splat(kLn2Hi)),
                   vfmaq_f64(log_m, e, splat(kLn2Lo)));
}

inline float64x2_t exp2l(float64x2_t x) {
  const uint64x2_t tiny = vcltq_f64(x, splat(-708.0));
  x = vminq_f64(vmaxq_f64(x, splat(-708.0)), splat(709.0));
  const float64x2_t n = vrndnq_f64(vmulq_f64(x, splat(std::numbers::log2e)));
  float64x2_t r = vfmsq_f64(x, n, splat(kLn2Hi));
  r = vfmsq_f64(r, n, splat(kLn2Lo));
  float64x2_t p = splat(1.0 / 6227020800.0);
  p = vfmaq_f64(splat(1.0 / 479001600.0), p, r);
  p = vfmaq_f64(splat(1.0 / 39916800.0), p, r);
  p = vfmaq_f64(splat(1.0 / 3628800.0), p, r);
  p = vfmaq_f64(splat(1.0 / 362880.0), p, r);
  p = vfmaq_f64(splat(1.0 / 40320.0), p, r);
  p = vfmaq_f64(splat(1.0 / 5040.0), p, r);
  p = vfmaq_f64(splat(1.0 / 720.0), p, r);
  p = vfmaq_f64(splat(1.0 / 120.0), p, r);
  p = vfmaq_f64(splat(1.0 / 24.0), p, r);
  p = vfmaq_f64(splat(1.0 / 6.0), p, r);
  p = vfmaq_f64(splat(0.5), p, r);
  p = vfmaq_f64(splat(1.0), p, r);
  p = vfmaq_f64(splat(1.0), p, r);
  const int64x2_t biased = vaddq_s64(vcvtq_s64_f64(n), vdupq_n_s64(1023));
  const float64x2_t scale = vreinterpretq_f64_s64(vshlq_n_s64(biased, 52));
  const float64x2_t y = vmulq_f64(p, scale);
  return vbslq_f64(tiny, splat(0.0), y);
}

double sum_log_neon(const double* x, std::size_t n) {
  float64x2_t acc = splat(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, log2l(vld1q_f64(x + i)));
  double s = vaddvq_f64(acc);
  if (i < n) s += std::log(x[i]);
  return s;
}

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = splat(0.0);
  float64x2_t acc1 = splat(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

inline float64x2_t lognormal2(float64x2_t x, float64x2_t mu,
                              float64x2_t inv_sigma, float64x2_t norm) {
  const uint64x2_t pos = vcgtq_f64(x, splat(0.0));
  const float64x2_t safe = vbslq_f64(pos, x, splat(1.0));
  const float64x2_t z = vmulq_f64(vsubq_f64(log2l(safe), mu), inv_sigma);
  const float64x2_t g = exp2l(vmulq_f64(splat(-0.5), vmulq_f64(z, z)));
  return vbslq_f64(pos, vdivq_f64(vmulq_f64(norm, g), safe), splat(0.0));
}

void lognormal_pdf_neon(const double* x, std::size_t n, double mu,
                        double sigma, double* out) {
  const float64x2_t vmu = splat(mu);
  const float64x2_t vinv = splat(1.0 / sigma);
  const float64x2_t vnorm =
      splat(1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi)));
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(out + i, lognormal2(vld1q_f64(x + i), vmu, vinv, vnorm));
  if (i < n) {
    double pad[2] = {x[i], 1.0};
    double res[2];
    vst1q_f64(res, lognormal2(vld1q_f64(pad), vmu, vinv, vnorm));
    out[i] = res[0];
  }
}

HingeMoments hinge_moments_neon(const double* x, const double* y,
                                std::size_t n, double knot) {
  const float64x2_t vk = splat(knot);
  const float64x2_t zero = splat(0.0);
  float64x2_t sy = zero, syy = zero, su = zero, suu = zero, suy = zero;
  float64x2_t sv = zero, svv = zero, svy = zero;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t vy = vld1q_f64(y + i);
    const float64x2_t d = vsubq_f64(vld1q_f64(x + i), vk);
    const float64x2_t u = vminq_f64(d, zero);
    const float64x2_t v = vmaxq_f64(d, zero);
    sy = vaddq_f64(sy, vy);
    syy = vfmaq_f64(syy, vy, vy);
    su = vaddq_f64(su, u);
    suu = vfmaq_f64(suu, u, u);
    suy = vfmaq_f64(suy, u, vy);
    sv = vaddq_f64(sv, v);
    svv = vfmaq_f64(svv, v, v);
    svy = vfmaq_f64(svy, v, vy);
  }
  HingeMoments m;
  m.sy = vaddvq_f64(sy);
  m.syy = vaddvq_f64(syy);
  m.su = vaddvq_f64(su);
  m.suu = vaddvq_f64(suu);
  m.suy = vaddvq_f64(suy);
  m.sv = vaddvq_f64(sv);
  m.svv = vaddvq_f64(svv);
  m.svy = vaddvq_f64(svy);
  for (; i < n; ++i) {
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

constexpr KernelTable kNeon{"neon", sum_log_neon, dot_neon,
                            lognormal_pdf_neon, hinge_moments_neon};

}  // namespace

const KernelTable* neon_table() { return &kNeon; }

}  // namespace infoload::kernels
