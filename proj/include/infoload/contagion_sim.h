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

#ifndef INFOLOAD_CONTAGION_SIM_H_
#define INFOLOAD_CONTAGION_SIM_H_

// Cascades under background traffic. The adoption probability of a follower
// falls with its in-flow rate; the continuous-time model adds per-edge
// delays drawn from in-flow dependent lognormal-sum distributions.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "infoload/config.h"
#include "infoload/event_model.h"
#include "infoload/lognormal_sum.h"
#include "infoload/rng.h"
#include "infoload/stats.h"

namespace infoload {

struct BetaCurve {
  double lambda_c = 30;
  double beta0 = 0.05;
  double gamma = 0.65;
};

// beta0 up to lambda_c, beta0 * (lambda_in / lambda_c)^-gamma above, clamped
// to [0, 1].
double beta_of_inflow(double lambda_in, const BetaCurve& curve);

// Delays for receivers whose in-flow lies in [lo, hi), in seconds.
struct DelayBin {
  double lo = 0;
  double hi = std::numeric_limits<double>::infinity();
  LognormalSum params;
};

class DelayModel {
 public:
  DelayModel() = default;
  // Throws PreconditionError unless the bins tile [0, inf) without gaps.
  explicit DelayModel(std::vector<DelayBin> bins);
  // One bin; every delay is exactly `seconds` up to rounding.
  static DelayModel constant(double seconds);
  // Keys <prefix><i>.{lo,hi,mu1,sigma1,mu2,sigma2}; hi may be "inf". lo
  // defaults to the previous bin's hi (0 for the first), hi to inf.
  static DelayModel from_config(const KeyValueConfig& config,
                                std::string_view prefix = "delay_bin.");

  bool empty() const { return bins_.empty(); }
  std::span<const DelayBin> bins() const { return bins_; }
  // Throws PreconditionError when no bin holds lambda_in.
  const DelayBin& bin_for(double lambda_in) const;
  double sample(Rng& rng, double lambda_in) const {
    return sample_lognormal_sum(rng, bin_for(lambda_in).params);
  }

 private:
  std::vector<DelayBin> bins_;
};

struct SimConfig {
  double mu = 1;  // mean out-flow, posts per hour
  // Out-flow standard deviation; negative selects mu / 4.
  double sigma = -1;
  BetaCurve beta;
  DelayModel delays;
  std::uint64_t n_cascades = 1000;
  std::uint64_t seed = 0;
  // Continuous model only, seconds after the seed adoption.
  double max_time = std::numeric_limits<double>::infinity();

  double effective_sigma() const { return sigma < 0 ? mu / 4 : sigma; }
  // Keys mu, sigma, lambda_c, beta0, gamma, n_cascades, seed, max_time and
  // delay_bin.<i>.*. Missing keys keep their defaults.
  static SimConfig from_config(const KeyValueConfig& config);
};

// Throws PreconditionError for mu <= 0, negative sigma (other than the
// default marker), beta0 outside [0, 1], lambda_c <= 0 or gamma < 0.
void validate(const SimConfig& config);

struct Rates {
  std::vector<double> out;  // per node, posts per hour
  std::vector<double> in;   // sum of out over the node's followees
};

// Out-flow rates from Normal(mu, sigma), negatives redrawn. Each node draws
// from its own stream, so the result does not depend on node order.
Rates assign_rates(const SocialGraph& graph, double mu, double sigma,
                   std::uint64_t seed);

struct CascadeRecord {
  std::uint64_t id = 0;
  NodeId seed = kNone;
  // In adoption order; the seed first.
  std::vector<NodeId> adopters;
  // Seconds after the seed adoption, parallel to adopters. Empty for the
  // discrete model.
  std::vector<double> times;
  double duration = 0;

  std::size_t size() const { return adopters.size(); }
};

// The random choices a cascade makes. `edge` is the index of the follow
// edge follower -> followee (see SocialGraph::followee_edge_base).
NodeId cascade_seed(const SimConfig& config, std::size_t nodes,
                    std::uint64_t cascade);
double edge_uniform(const SimConfig& config, std::uint64_t cascade,
                    std::size_t edge);
double edge_delay(const SimConfig& config, const Rates& rates,
                  std::uint64_t cascade, NodeId follower, std::size_t edge);

// Discrete independent cascade: each new adopter gets one attempt on each
// follower, succeeding with beta_of_inflow(lambda_in(follower)).
std::vector<CascadeRecord> simulate_ic_bg(const SocialGraph& graph,
                                          const Rates& rates,
                                          const SimConfig& config,
                                          unsigned workers);

// Continuous time: same edge outcomes as the discrete model, with a delay on
// every live edge; adoption time is the earliest arrival. Adoptions after
// max_time are dropped. Throws PreconditionError without a delay model.
std::vector<CascadeRecord> simulate_ct_bg(const SocialGraph& graph,
                                          const Rates& rates,
                                          const SimConfig& config,
                                          unsigned workers);

struct DistributionReport {
  std::size_t cascades = 0;
  // Over all cascades.
  std::vector<CcdfPoint> size_ccdf;
  // Over cascades with two or more adopters.
  std::vector<CcdfPoint> duration_ccdf;
  std::size_t multi_node = 0;
  bool duration_empty = true;
  EmpiricalDistribution sizes;
  EmpiricalDistribution durations;

  // Fraction of cascades with at least `size` adopters.
  double fraction_at_least(double size) const { return sizes.ccdf(size); }
};

// Throws PreconditionError for no records.
DistributionReport distribution_report(std::span<const CascadeRecord> records);

}  // namespace infoload

#endif  // INFOLOAD_CONTAGION_SIM_H_
