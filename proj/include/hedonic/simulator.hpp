// Copyright 2026 The Hedonic Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HEDONIC_SIMULATOR_HPP_
#define HEDONIC_SIMULATOR_HPP_

// Finite populations of individually shocked agents, their choices at given
// prices, and the solve -> simulate -> identify round trip.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hedonic/entropy.hpp"
#include "hedonic/market.hpp"

namespace hedonic {

struct Population {
  // One agents x (|Z|+1) shock matrix per type, opt-out shock in column 0.
  std::vector<Table> producer_shocks;
  std::vector<Table> consumer_shocks;
  std::uint64_t seed = 0;
  std::string generator_id;
  std::size_t agents_per_type = 0;
};

struct EmpiricalShares {
  std::vector<std::vector<std::int64_t>> supply_counts;  // per x, |Z|+1
  std::vector<std::vector<std::int64_t>> demand_counts;  // per y, |Z|+1
  ChoiceProbabilities shares;
  std::size_t agents_per_type = 0;
};

// Logit: iid standard Gumbel shocks from the keyed generator. Empirical:
// rows resampled from each type's draw matrix. agents_per_type must be >= 1
// (kUsage).
Population draw_population(const MarketSpec& spec,
                           const HeterogeneitySpec& het,
                           std::size_t agents_per_type, std::uint64_t seed);

EmpiricalShares simulate_choices(const Population& pop,
                                 const MarketSpec& spec,
                                 const PriceVector& p);

struct RoundTripReport {
  double alpha_err = 0.0;  // max-norm over finite cells
  double gamma_err = 0.0;
  double share_gap = 0.0;  // max |empirical - theoretical| share
  double clearing_residual = 0.0;
  std::size_t agents_per_type = 0;
  std::uint64_t seed = 0;
  bool exact_shares = false;
  PriceVector prices;
  ChoiceProbabilities theoretical;
  ChoiceProbabilities empirical;
  Table alpha_hat;
  Table gamma_hat;
};

// Solves the logit equilibrium, simulates agents at its prices, identifies
// alpha and gamma from the empirical shares and the true prices, and
// reports the errors. With exact_shares the theoretical shares are fed to
// identification directly. Propagates kBoundarySupport when a sampled cell
// is empty.
RoundTripReport round_trip(const MarketSpec& spec,
                           const HeterogeneitySpec& het,
                           std::size_t agents_per_type, std::uint64_t seed,
                           bool exact_shares = false);

}  // namespace hedonic

#endif  // HEDONIC_SIMULATOR_HPP_
