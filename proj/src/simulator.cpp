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

#include "hedonic/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "hedonic/error.hpp"
#include "hedonic/identification.hpp"
#include "hedonic/kernels.hpp"
#include "hedonic/rng.hpp"

namespace hedonic {
namespace {

Table DrawType(const Philox4x32& rng, StreamSide side, std::size_t type,
               TypeShocks shocks, std::size_t agents, Eigen::Index options) {
  Table out(static_cast<Eigen::Index>(agents), options);
  const auto id = static_cast<std::uint32_t>(type);
  if (shocks.logit()) {
    kernels::fill_gumbel(rng, side, id, out);
  } else {
    kernels::fill_resampled(rng, side, id, shocks.empirical->draws, out);
  }
  return out;
}

std::vector<double> Shares(const std::vector<std::int64_t>& counts,
                           std::size_t agents) {
  std::vector<double> s(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    s[k] = static_cast<double>(counts[k]) / static_cast<double>(agents);
  }
  return s;
}

double MaxFiniteGap(const Table& estimate, const Table& truth) {
  double gap = 0.0;
  for (Eigen::Index i = 0; i < truth.rows(); ++i) {
    for (Eigen::Index j = 0; j < truth.cols(); ++j) {
      if (truth(i, j) == kNegInf) continue;
      gap = std::max(gap, std::abs(estimate(i, j) - truth(i, j)));
    }
  }
  return gap;
}

}  // namespace

Population draw_population(const MarketSpec& spec,
                           const HeterogeneitySpec& het,
                           std::size_t agents_per_type, std::uint64_t seed) {
  if (agents_per_type < 1) {
    throw HedonicError(ErrorCode::kUsage, "agents per type must be at least 1");
  }
  validate_heterogeneity(het, spec);
  const Philox4x32 rng(seed);
  const auto options = static_cast<Eigen::Index>(spec.num_qualities() + 1);
  Population pop;
  pop.seed = seed;
  pop.generator_id = std::string(Philox4x32::kGeneratorId);
  pop.agents_per_type = agents_per_type;
  for (std::size_t x = 0; x < spec.num_producers(); ++x) {
    pop.producer_shocks.push_back(DrawType(rng, StreamSide::kProducer, x,
                                           het.producer(x), agents_per_type,
                                           options));
  }
  for (std::size_t y = 0; y < spec.num_consumers(); ++y) {
    pop.consumer_shocks.push_back(DrawType(rng, StreamSide::kConsumer, y,
                                           het.consumer(y), agents_per_type,
                                           options));
  }
  return pop;
}

EmpiricalShares simulate_choices(const Population& pop,
                                 const MarketSpec& spec,
                                 const PriceVector& p) {
  const std::size_t nz = spec.num_qualities();
  if (pop.producer_shocks.size() != spec.num_producers() ||
      pop.consumer_shocks.size() != spec.num_consumers() ||
      static_cast<std::size_t>(p.size()) != nz) {
    throw HedonicError(ErrorCode::kDimensionMismatch,
                       "population does not match the market");
  }
  const SystematicUtilities su = systematic_utilities(spec, p);
  EmpiricalShares out;
  out.agents_per_type = pop.agents_per_type;
  out.shares.supply.resize(spec.num_producers(), nz + 1);
  out.shares.demand.resize(spec.num_consumers(), nz + 1);
  Vector systematic(nz + 1);
  systematic[0] = 0.0;
  for (std::size_t x = 0; x < spec.num_producers(); ++x) {
    systematic.tail(nz) = su.U.row(x).transpose();
    out.supply_counts.push_back(
        kernels::count_choices(pop.producer_shocks[x], systematic));
    const auto s = Shares(out.supply_counts.back(), pop.agents_per_type);
    out.shares.supply.row(x) = Eigen::Map<const Vector>(s.data(), s.size());
  }
  for (std::size_t y = 0; y < spec.num_consumers(); ++y) {
    systematic.tail(nz) = su.V.col(y);
    out.demand_counts.push_back(
        kernels::count_choices(pop.consumer_shocks[y], systematic));
    const auto s = Shares(out.demand_counts.back(), pop.agents_per_type);
    out.shares.demand.row(y) = Eigen::Map<const Vector>(s.data(), s.size());
  }
  return out;
}

RoundTripReport round_trip(const MarketSpec& spec,
                           const HeterogeneitySpec& het,
                           std::size_t agents_per_type, std::uint64_t seed,
                           bool exact_shares) {
  if (!het.logit()) {
    throw HedonicError(ErrorCode::kUsage,
                       "the round trip needs logit heterogeneity");
  }
  if (agents_per_type < 1 && !exact_shares) {
    throw HedonicError(ErrorCode::kUsage, "agents per type must be at least 1");
  }
  const SmoothEquilibrium eq = solve_price_equilibrium(spec, het);
  RoundTripReport report;
  report.agents_per_type = agents_per_type;
  report.seed = seed;
  report.exact_shares = exact_shares;
  report.prices = eq.p;
  report.clearing_residual = eq.clearing_residual;
  report.theoretical = eq.shares;
  if (exact_shares) {
    report.empirical = eq.shares;
  } else {
    const Population pop = draw_population(spec, het, agents_per_type, seed);
    report.empirical = simulate_choices(pop, spec, eq.p).shares;
  }
  report.share_gap = std::max(
      (report.empirical.supply - report.theoretical.supply)
          .lpNorm<Eigen::Infinity>(),
      (report.empirical.demand - report.theoretical.demand)
          .lpNorm<Eigen::Infinity>());

  ObservedMarket obs{report.empirical, spec.n, spec.m, eq.p, het};
  IdentifiedPrimitives id;
  try {
    id = identify_primitives(obs);
  } catch (const HedonicError& e) {
    if (e.code() != ErrorCode::kBoundarySupport) throw;
    throw HedonicError(ErrorCode::kBoundarySupport,
                       std::string(e.what()) +
                           "; a sampled cell is empty, increase --agents");
  }
  report.alpha_hat = id.alpha_hat;
  report.gamma_hat = id.gamma_hat;
  report.alpha_err = MaxFiniteGap(id.alpha_hat, spec.alpha);
  report.gamma_err = MaxFiniteGap(id.gamma_hat, spec.gamma);
  return report;
}

}  // namespace hedonic
