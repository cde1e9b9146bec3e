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

#ifndef INFOLOAD_SYNTH_H_
#define INFOLOAD_SYNTH_H_

// Synthetic event logs with known generating parameters: Poisson posting,
// in-flow dependent forwarding with lognormal-sum delays, and injected
// contagions with a per-exposure adoption hazard.

#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "infoload/config.h"
#include "infoload/contagion_sim.h"
#include "infoload/event_model.h"
#include "infoload/graphgen.h"

namespace infoload {

struct ContagionPlan {
  std::string token;
  // Users drawn to adopt spontaneously at uniform times over the horizon. A
  // drawn user that is already exposed by then does not.
  std::size_t initial_adopters = 10;
  // Probability of adopting on each new exposure.
  double hazard = 0.1;
  // Users whose generator in-flow exceeds overload_lambda use
  // hazard * overload_factor.
  double overload_factor = 1.0;
  double overload_lambda = std::numeric_limits<double>::infinity();
  // Mean of the exponential lag between the deciding exposure and the
  // adoption, seconds; lags are rounded up to whole seconds (at least 1).
  double adoption_delay_s = 60;
};

struct WorkloadSpec {
  // Graph source: a file in graph TSV format, or Kronecker parameters.
  std::string graph_file;
  std::optional<KroneckerParams> kronecker;

  // Posting rates, posts per hour. `rates` overrides mu/sigma when non-empty.
  double mu = 1;
  double sigma = 0;
  std::vector<double> rates;

  BetaCurve beta;
  DelayModel delays = DelayModel::constant(60);
  // Allow forwarding of forwards (the default forwards originals only).
  bool chains = false;

  std::vector<ContagionPlan> contagions;

  double horizon_hours = 100;
  std::int64_t start_ts = 1246406400;
  std::uint64_t seed = 0;

  // Keys: graph, kronecker.{a,b,c,d,k,edges}, mu, sigma, lambda_c, beta0,
  // gamma, chains, horizon_hours, start_ts, seed, delay_bin.<i>.*,
  // contagion.<i>.{token,initial_adopters,hazard,overload_factor,
  // overload_lambda,adoption_delay_s}.
  static WorkloadSpec from_config(const KeyValueConfig& config);
};

// Throws PreconditionError for a non-positive horizon, hazards outside
// [0, 1] or negative rates.
void validate(const WorkloadSpec& spec);

struct GroundTruth {
  // Per node, posts per hour. lambda_in counts followees' original posts.
  std::vector<double> lambda_out;
  std::vector<double> lambda_in;
  // Background posts. Adoption posts are counted in `adoptions` only.
  std::size_t tweets = 0;
  std::size_t retweets = 0;
  std::vector<std::size_t> adoptions;  // per contagion plan

  // Every generator parameter plus the counts, as key = value lines.
  std::string to_text(const WorkloadSpec& spec) const;
  // node \t lambda_out \t lambda_in
  void write_rates_tsv(std::ostream& out, const SocialGraph& graph) const;
};

struct Workload {
  SocialGraph graph;
  EventLog log;
  GroundTruth truth;
};

// Loads or generates the graph named by the spec, then generates.
Workload generate_workload(const WorkloadSpec& spec);
Workload generate_workload(SocialGraph graph, const WorkloadSpec& spec);

}  // namespace infoload

#endif  // INFOLOAD_SYNTH_H_
