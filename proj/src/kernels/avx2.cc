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

// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma;
// nothing here may run before avx2_table() has checked the CPU.

#include <immintrin.h>

#include <cmath>
#include <cstdint>
#include <numbers>

#include "infoload/kernels/kernels.h"

namespace infoload::kernels {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;

// Natural log for positive normal inputs. Splits x = m * 2^e with
// m in [sqrt(1/2), sqrt(2)) and sums the atanh series of (m-1)/(m+1).
inline __m256d log4(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  const __m256i mant_mask = _mm256_set1_epi64x(0x000fffffffffffffLL);
  const __m256i one_bits = _mm256_set1_epi64x(0x3ff0000000000000LL);
  const __m256i magic_bits = _mm256_set1_epi64x(0x4330000000000000LL);
  const __m256d magic = _mm256_set1_pd(0x1.0p52);

  const __m256i biased = _mm256_srli_epi64(bits, 52);
  __m256d e = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_or_si256(biased, magic_bits)), magic);
  e = _mm256_sub_pd(e, _mm256_set1_pd(1023.0));
  __m256d m = _mm256_castsi256_pd(
      _mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));

  const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(std::numbers::sqrt2),
                                    _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  e = _mm256_add_pd(e, _mm256_and_pd(big, _mm256_set1_pd(1.0)));

  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d f =
      _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d s = _mm256_mul_pd(f, f);
  __m256d p = _mm256_set1_pd(1.0 / 23.0);
  p = _mm256_fmadd_pd(p, s, _mm256_set1_pd(1.0 / 21.0));
  p = _mm256_fmadd_pd(p, s, _mm256_set1_pd(1.0 / 19.0));
  p = _mm256_fmadd_pd(p, s, _mm256_set1_pd(1.0 / 17.0));
  p = _mm256_fmadd_pd(p, s, _mm256_set1_pd(1.0 / 15.0));
  p = _mm256_fmadd_pd(p, s, _mm256_set1_pd(1.0 / 13.0));
  p = _mm256_fmadd_pd(p, s, _mm256_set1_pd(1.0 / 11.0));
  p = _mm256_fmadd_pd(p, s, _mm256_set1_pd(1.0 / 9.0));
  p = _mm256_fmadd_pd(p, s, _mm256_set1_pd(1.0 / 7.0));
  p = _mm256_fmadd_pd(p, s, _mm256_set1_pd(1.0 / 5.0));
  p = _mm256_fmadd_pd(p, s, _mm256_set1_pd(1.0 / 3.0));
  // log m = 2f + 2f*s*q, q = p - 1 evaluated without cancellation.
  const __m256d two_f = _mm256_add_pd(f, f);
  const __m256d tail = _mm256_mul_pd(_mm256_mul_pd(two_f, s), p);
  const __m256d log_m = _mm256_add_pd(two_f, tail);
  return _mm256_add_pd(
      _mm256_mul_pd(e, _mm256_set1_pd(kLn2Hi)),
      _mm256_fmadd_pd(e, _mm256_set1_pd(kLn2Lo), log_m));
}

// exp for x in [-708, 709]; below that the result is flushed to zero.
inline __m256d exp4(__m256d x) {
  const __m256d tiny = _mm256_cmp_pd(x, _mm256_set1_pd(-708.0), _CMP_LT_OQ);
  x = _mm256_max_pd(x, _mm256_set1_pd(-708.0));
  x = _mm256_min_pd(x, _mm256_set1_pd(709.0));
  const __m256d n = _mm256_round_pd(
      _mm256_mul_pd(x, _mm256_set1_pd(std::numbers::log2e)),
      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kLn2Hi), x);
  r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kLn2Lo), r);

  // Taylor series to r^13; |r| <= ln(2)/2 keeps the remainder below 1e-17.
  __m256d p = _mm256_set1_pd(1.0 / 6227020800.0);
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 479001600.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 39916800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 3628800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 362880.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 40320.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 5040.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 720.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 120.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 24.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 6.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(0.5));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

  const __m128i ni = _mm256_cvtpd_epi32(n);
  __m256i biased = _mm256_add_epi64(_mm256_cvtepi32_epi64(ni),
                                    _mm256_set1_epi64x(1023));
  const __m256d scale = _mm256_castsi256_pd(_mm256_slli_epi64(biased, 52));
  return _mm256_andnot_pd(tiny, _mm256_mul_pd(p, scale));
}

double sum_log_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, log4(_mm256_loadu_pd(x + i)));
  if (i < n) {
    alignas(32) double pad[4] = {1.0, 1.0, 1.0, 1.0};
    for (std::size_t j = 0; i + j < n; ++j) pad[j] = x[i + j];
    acc = _mm256_add_pd(acc, log4(_mm256_load_pd(pad)));
  }
  return hsum(acc);
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                           _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

inline __m256d lognormal4(__m256d x, __m256d mu, __m256d inv_sigma,
                          __m256d norm) {
  const __m256d pos = _mm256_cmp_pd(x, _mm256_setzero_pd(), _CMP_GT_OQ);
  const __m256d safe = _mm256_blendv_pd(_mm256_set1_pd(1.0), x, pos);
  const __m256d z = _mm256_mul_pd(_mm256_sub_pd(log4(safe), mu), inv_sigma);
  const __m256d g =
      exp4(_mm256_mul_pd(_mm256_set1_pd(-0.5), _mm256_mul_pd(z, z)));
  return _mm256_and_pd(pos, _mm256_div_pd(_mm256_mul_pd(norm, g), safe));
}

void lognormal_pdf_avx2(const double* x, std::size_t n, double mu,
                        double sigma, double* out) {
  const __m256d vmu = _mm256_set1_pd(mu);
  const __m256d vinv = _mm256_set1_pd(1.0 / sigma);
  const __m256d vnorm =
      _mm256_set1_pd(1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi)));
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, lognormal4(_mm256_loadu_pd(x + i), vmu, vinv, vnorm));
  if (i < n) {
    alignas(32) double pad[4] = {1.0, 1.0, 1.0, 1.0};
    alignas(32) double res[4];
    for (std::size_t j = 0; i + j < n; ++j) pad[j] = x[i + j];
    _mm256_store_pd(res, lognormal4(_mm256_load_pd(pad), vmu, vinv, vnorm));
    for (std::size_t j = 0; i + j < n; ++j) out[i + j] = res[j];
  }
}

HingeMoments hinge_moments_avx2(const double* x, const double* y,
                                std::size_t n, double knot) {
  const __m256d vk = _mm256_set1_pd(knot);
  const __m256d zero = _mm256_setzero_pd();
  __m256d sy = zero, syy = zero, su = zero, suu = zero, suy = zero;
  __m256d sv = zero, svv = zero, svy = zero;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_loadu_pd(y + i);
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), vk);
    const __m256d u = _mm256_min_pd(d, zero);
    const __m256d v = _mm256_max_pd(d, zero);
    sy = _mm256_add_pd(sy, vy);
    syy = _mm256_fmadd_pd(vy, vy, syy);
    su = _mm256_add_pd(su, u);
    suu = _mm256_fmadd_pd(u, u, suu);
    suy = _mm256_fmadd_pd(u, vy, suy);
    sv = _mm256_add_pd(sv, v);
    svv = _mm256_fmadd_pd(v, v, svv);
    svy = _mm256_fmadd_pd(v, vy, svy);
  }
  HingeMoments m;
  m.sy = hsum(sy);
  m.syy = hsum(syy);
  m.su = hsum(su);
  m.suu = hsum(suu);
  m.suy = hsum(suy);
  m.sv = hsum(sv);
  m.svv = hsum(svv);
  m.svy = hsum(svy);
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

constexpr KernelTable kAvx2{"avx2", sum_log_avx2, dot_avx2,
                            lognormal_pdf_avx2, hinge_moments_avx2};

}  // namespace

const KernelTable* avx2_table() {
  static const bool supported =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &kAvx2 : nullptr;
}

}  // namespace infoload::kernels
