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

#ifndef HEDONIC_KERNELS_HPP_
#define HEDONIC_KERNELS_HPP_

// Data-parallel inner loops. Every kernel has an OpenMP version and a serial
// reference with the same signature; tests hold the two to identical output
// and bench/ compares their speed. Parallel versions merge per-type or
// per-agent partial results in a fixed order, so results do not depend on
// the thread count.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hedonic/market.hpp"
#include "hedonic/rng.hpp"

namespace hedonic::kernels {

// Logit emax of one row of systematic utilities and its choice
// probabilities (opt-out first). -inf entries get probability zero.
struct LogitRow {
  double emax;
  Vector probabilities;  // |Z|+1
};
LogitRow logit_row(const Vector& utilities);

// Logit price functional W(p), its gradient (excess supply) and optionally
// its Hessian (mass-weighted sum of softmax covariances).
struct PriceTerms {
  double value = 0.0;
  Vector gradient;
  Table hessian;
  Table supply_shares;  // |X| x (|Z|+1)
  Table demand_shares;  // |Y| x (|Z|+1)
};
PriceTerms logit_price_terms(const MarketSpec& spec, const Vector& p,
                             bool with_hessian);
PriceTerms logit_price_terms_serial(const MarketSpec& spec, const Vector& p,
                                    bool with_hessian);

// Fills out(agent, option) with standard Gumbel draws keyed by
// (side, type, agent, option).
void fill_gumbel(const Philox4x32& rng, StreamSide side, std::uint32_t type,
                 Table& out);
void fill_gumbel_serial(const Philox4x32& rng, StreamSide side,
                        std::uint32_t type, Table& out);

// Fills out with rows resampled uniformly from `source`.
void fill_resampled(const Philox4x32& rng, StreamSide side,
                    std::uint32_t type, const Table& source, Table& out);
void fill_resampled_serial(const Philox4x32& rng, StreamSide side,
                           std::uint32_t type, const Table& source,
                           Table& out);

// Number of agents choosing each option (opt-out first). Agent i picks the
// argmax over k of systematic[k] + shocks(i, k) with systematic[0] = 0;
// ties go to the lowest option.
std::vector<std::int64_t> count_choices(const Table& shocks,
                                        const Vector& systematic);
std::vector<std::int64_t> count_choices_serial(const Table& shocks,
                                               const Vector& systematic);

}  // namespace hedonic::kernels

#endif  // HEDONIC_KERNELS_HPP_
