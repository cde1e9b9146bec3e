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

#ifndef INFOLOAD_GRAPHGEN_H_
#define INFOLOAD_GRAPHGEN_H_

// Stochastic Kronecker graphs with an exact edge count, sampled by ball
// dropping.

#include <array>
#include <cstdint>
#include <utility>

#include "infoload/event_model.h"
#include "infoload/rng.h"

namespace infoload {

struct KroneckerParams {
  std::array<std::array<double, 2>, 2> initiator{{{0.9, 0.5}, {0.5, 0.3}}};
  int k = 10;
  std::uint64_t target_edges = 20000;
  std::uint64_t seed = 0;
  // Drops allowed before giving up; 0 means 50 * target_edges + 10^6.
  std::uint64_t max_drops = 0;

  std::uint64_t nodes() const { return std::uint64_t{1} << k; }
};

// Throws PreconditionError for entries outside [0, 1], an all-zero
// initiator, or k outside [1, 30].
void validate(const KroneckerParams& params);

// Cumulative quadrant probabilities in the order (0,0), (0,1), (1,0), (1,1).
std::array<double, 4> quadrant_cdf(const KroneckerParams& params);

// One ball: k levels, each picking a quadrant from `cdf`. Returns (row, col).
std::pair<std::uint64_t, std::uint64_t> drop_ball(
    const std::array<double, 4>& cdf, int k, Rng& rng);

// Number of distinct non-loop (row, col) pairs with positive probability.
std::uint64_t reachable_pairs(const KroneckerParams& params);

// 2^k nodes and exactly target_edges distinct edges without self-loops.
// A dropped (row, col) means row follows col. Throws PreconditionError when
// target_edges >= nodes^2 - nodes or exceeds the reachable pairs, and
// NumericError when max_drops is exhausted.
SocialGraph kronecker_generate(const KroneckerParams& params);

}  // namespace infoload

#endif  // INFOLOAD_GRAPHGEN_H_
