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

#include "infoload/graphgen.h"

#include <algorithm>
#include <string>
#include <unordered_set>
#include <vector>

#include "infoload/error.h"

namespace infoload {

void validate(const KroneckerParams& params) {
  double total = 0;
  for (const auto& row : params.initiator) {
    for (double p : row) {
      if (!(p >= 0 && p <= 1))
        throw PreconditionError("initiator entries must lie in [0, 1]");
      total += p;
    }
  }
  if (!(total > 0)) throw PreconditionError("initiator is all zero");
  if (params.k < 1 || params.k > 30)
    throw PreconditionError("Kronecker power must be in [1, 30], got " +
                            std::to_string(params.k));
}

std::array<double, 4> quadrant_cdf(const KroneckerParams& params) {
  const auto& m = params.initiator;
  const double total = m[0][0] + m[0][1] + m[1][0] + m[1][1];
  std::array<double, 4> cdf{};
  double acc = 0;
  int i = 0;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      acc += m[r][c] / total;
      cdf[i++] = acc;
    }
  }
  // Close the table at the last positive quadrant so rounding can never
  // select a zero-probability one.
  int last = 3;
  while (last > 0 && m[last >> 1][last & 1] == 0) --last;
  for (int j = last; j < 4; ++j) cdf[j] = 1.0;
  return cdf;
}

std::pair<std::uint64_t, std::uint64_t> drop_ball(
    const std::array<double, 4>& cdf, int k, Rng& rng) {
  std::uint64_t row = 0, col = 0;
  for (int level = 0; level < k; ++level) {
    const double u = rng.uniform();
    int q = 0;
    while (q < 3 && u >= cdf[q]) ++q;
    row = (row << 1) | static_cast<std::uint64_t>(q >> 1);
    col = (col << 1) | static_cast<std::uint64_t>(q & 1);
  }
  return {row, col};
}

std::uint64_t reachable_pairs(const KroneckerParams& params) {
  const auto& m = params.initiator;
  std::uint64_t nz = 0, nz_diag = 0;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      if (m[r][c] > 0) {
        ++nz;
        if (r == c) ++nz_diag;
      }
  std::uint64_t all = 1, loops = 1;
  for (int i = 0; i < params.k; ++i) {
    all *= nz;
    loops *= nz_diag;
  }
  return all - loops;
}

SocialGraph kronecker_generate(const KroneckerParams& params) {
  validate(params);
  const std::uint64_t n = params.nodes();
  if (params.target_edges >= n * n - n)
    throw PreconditionError("target edge count " +
                            std::to_string(params.target_edges) +
                            " unreachable: a graph on " + std::to_string(n) +
                            " nodes has at most " + std::to_string(n * n - n) +
                            " edges without self-loops");
  const std::uint64_t reachable = reachable_pairs(params);
  if (params.target_edges > reachable)
    throw PreconditionError("target edge count " +
                            std::to_string(params.target_edges) +
                            " unreachable: the initiator allows only " +
                            std::to_string(reachable) + " non-loop edges");

  const auto cdf = quadrant_cdf(params);
  const std::uint64_t max_drops = params.max_drops > 0
                                      ? params.max_drops
                                      : 50 * params.target_edges + 1000000;
  Rng rng = Rng::keyed(params.seed, {0x6b726f6eULL});
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(params.target_edges * 2);
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(params.target_edges);
  std::uint64_t drops = 0;
  while (edges.size() < params.target_edges) {
    if (drops++ >= max_drops)
      throw NumericError("Kronecker generation placed " +
                         std::to_string(edges.size()) + " of " +
                         std::to_string(params.target_edges) +
                         " edges within " + std::to_string(max_drops) +
                         " drops");
    const auto [r, c] = drop_ball(cdf, params.k, rng);
    if (r == c) continue;
    if (!seen.insert(r * n + c).second) continue;
    edges.emplace_back(static_cast<NodeId>(r), static_cast<NodeId>(c));
  }
  std::sort(edges.begin(), edges.end());
  return SocialGraph::from_edges(n, edges);
}

}  // namespace infoload
