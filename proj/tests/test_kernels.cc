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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "infoload/kernels/kernels.h"
#include "infoload/rng.h"

using namespace infoload;
namespace k = infoload::kernels;

namespace {

std::vector<const k::KernelTable*> variants() {
  std::vector<const k::KernelTable*> v{&k::scalar_table()};
  if (auto* t = k::avx2_table()) v.push_back(t);
  if (auto* t = k::neon_table()) v.push_back(t);
  return v;
}

std::vector<double> positive(Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> x(n);
  for (auto& v : x)
    v = std::exp(std::log(lo) + rng.uniform() * (std::log(hi) - std::log(lo)));
  return x;
}

double rel(double a, double b) {
  return std::abs(a - b) / std::max(1e-300, std::max(std::abs(a), std::abs(b)));
}

}  // namespace

TEST_CASE("scalar kernels match naive loops") {
  Rng rng(11);
  const auto x = positive(rng, 1001, 1e-3, 1e6);
  const auto y = positive(rng, 1001, 1e-2, 10);
  const auto& s = k::scalar_table();
  double sl = 0, d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sl += std::log(x[i]);
    d += x[i] * y[i];
  }
  CHECK(rel(s.sum_log(x.data(), x.size()), sl) < 1e-12);
  CHECK(rel(s.dot(x.data(), y.data(), x.size()), d) < 1e-12);

  std::vector<double> out(x.size());
  s.lognormal_pdf(x.data(), x.size(), 1.5, 0.8, out.data());
  for (std::size_t i = 0; i < x.size(); i += 97) {
    const double z = (std::log(x[i]) - 1.5) / 0.8;
    const double want =
        std::exp(-0.5 * z * z) / (x[i] * 0.8 * std::sqrt(2 * std::numbers::pi));
    CHECK(rel(out[i], want) < 1e-12);
  }
}

TEST_CASE("lognormal density is zero off the positive axis") {
  const std::vector<double> x{-3.0, 0.0, -0.0, 1.0};
  for (const auto* t : variants()) {
    std::vector<double> out(x.size(), -1.0);
    t->lognormal_pdf(x.data(), x.size(), 0.0, 1.0, out.data());
    CHECK(out[0] == 0.0);
    CHECK(out[1] == 0.0);
    CHECK(out[2] == 0.0);
    CHECK(out[3] == doctest::Approx(1 / std::sqrt(2 * std::numbers::pi)));
  }
}

TEST_CASE("hinge moments match naive sums") {
  Rng rng(3);
  std::vector<double> x(257), y(257);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = rng.normal(0, 2);
    y[i] = rng.normal(1, 1);
  }
  const double t = 0.3;
  k::HingeMoments m;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double u = std::min(0.0, x[i] - t), v = std::max(0.0, x[i] - t);
    m.n += 1;
    m.sy += y[i];
    m.syy += y[i] * y[i];
    m.su += u;
    m.suu += u * u;
    m.suy += u * y[i];
    m.sv += v;
    m.svv += v * v;
    m.svy += v * y[i];
  }
  const auto got = k::scalar_table().hinge_moments(x.data(), y.data(), x.size(), t);
  CHECK(got.n == m.n);
  CHECK(rel(got.sy, m.sy) < 1e-12);
  CHECK(rel(got.suy, m.suy) < 1e-12);
  CHECK(rel(got.svv, m.svv) < 1e-12);
}

TEST_CASE("vector variants agree with the scalar reference") {
  Rng rng(2024);
  const auto& ref = k::scalar_table();
  for (const auto* t : variants()) {
    CAPTURE(t->name);
    // Lengths around the vector width exercise the tails.
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 31u, 1000u, 4099u}) {
      CAPTURE(n);
      const auto x = positive(rng, n, 1e-300, 1e300);
      const auto xd = positive(rng, n, 1e-100, 1e100);
      const auto y = positive(rng, n, 1e-3, 1e3);
      CHECK(rel(t->sum_log(x.data(), n), ref.sum_log(x.data(), n)) < 1e-12);
      CHECK(rel(t->dot(xd.data(), y.data(), n), ref.dot(xd.data(), y.data(), n)) <
            1e-12);

      const auto z = positive(rng, n, 1e-4, 1e5);
      std::vector<double> a(n), b(n);
      t->lognormal_pdf(z.data(), n, 2.0, 1.3, a.data());
      ref.lognormal_pdf(z.data(), n, 2.0, 1.3, b.data());
      for (std::size_t i = 0; i < n; ++i) {
        if (b[i] < 1e-290) {
          CHECK(a[i] < 1e-280);
        } else {
          CHECK(rel(a[i], b[i]) < 1e-11);
        }
      }

      std::vector<double> hx(n), hy(n);
      for (std::size_t i = 0; i < n; ++i) {
        hx[i] = rng.normal(0, 3);
        hy[i] = rng.normal(0, 3);
      }
      const auto ha = t->hinge_moments(hx.data(), hy.data(), n, 0.5);
      const auto hb = ref.hinge_moments(hx.data(), hy.data(), n, 0.5);
      CHECK(ha.n == hb.n);
      for (auto [p, q] : {std::pair{ha.sy, hb.sy}, {ha.syy, hb.syy},
                          {ha.su, hb.su}, {ha.suu, hb.suu}, {ha.suy, hb.suy},
                          {ha.sv, hb.sv}, {ha.svv, hb.svv}, {ha.svy, hb.svy}})
        CHECK(std::abs(p - q) <= 1e-10 * (1 + std::abs(q)));
    }
  }
}

TEST_CASE("active table is one of the compiled variants") {
  const auto name = k::active().name;
  CHECK((name == "scalar" || name == "avx2" || name == "neon"));
}
