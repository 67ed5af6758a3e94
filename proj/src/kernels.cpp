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

#include "hedonic/kernels.hpp"

#include <algorithm>
#include <cmath>

#include <omp.h>

namespace hedonic::kernels {
namespace {

// Per-type contribution to the price functional.
struct TypeTerm {
  double value = 0.0;
  Vector probabilities;
};

Vector ProducerRow(const MarketSpec& spec, const Vector& p, std::size_t x) {
  Vector row(spec.num_qualities());
  for (std::size_t z = 0; z < spec.num_qualities(); ++z) {
    const double a = spec.alpha(x, z);
    row[z] = a == kNegInf ? kNegInf : a + p[z];
  }
  return row;
}

Vector ConsumerRow(const MarketSpec& spec, const Vector& p, std::size_t y) {
  Vector row(spec.num_qualities());
  for (std::size_t z = 0; z < spec.num_qualities(); ++z) {
    const double g = spec.gamma(z, y);
    row[z] = g == kNegInf ? kNegInf : g - p[z];
  }
  return row;
}

TypeTerm EvaluateType(const MarketSpec& spec, const Vector& p,
                      std::size_t type) {
  const std::size_t nx = spec.num_producers();
  const bool producer = type < nx;
  const LogitRow row = producer ? logit_row(ProducerRow(spec, p, type))
                                : logit_row(ConsumerRow(spec, p, type - nx));
  return {row.emax, row.probabilities};
}

// Merges per-type terms in type order.
PriceTerms Merge(const MarketSpec& spec, const std::vector<TypeTerm>& terms,
                 bool with_hessian) {
  const std::size_t nx = spec.num_producers();
  const std::size_t ny = spec.num_consumers();
  const std::size_t nz = spec.num_qualities();
  PriceTerms out;
  out.gradient = Vector::Zero(nz);
  out.supply_shares.resize(nx, nz + 1);
  out.demand_shares.resize(ny, nz + 1);
  if (with_hessian) out.hessian = Table::Zero(nz, nz);
  for (std::size_t t = 0; t < nx + ny; ++t) {
    const bool producer = t < nx;
    const double mass = producer ? spec.n[t] : spec.m[t - nx];
    const Vector& prob = terms[t].probabilities;
    if (producer) {
      out.supply_shares.row(t) = prob.transpose();
    } else {
      out.demand_shares.row(t - nx) = prob.transpose();
    }
    if (mass == 0.0) continue;
    out.value += mass * terms[t].value;
    const auto q = prob.tail(nz);
    if (producer) {
      out.gradient += mass * q;
    } else {
      out.gradient -= mass * q;
    }
    if (with_hessian) {
      out.hessian.diagonal() += mass * q;
      out.hessian.noalias() -= mass * q * q.transpose();
    }
  }
  return out;
}

}  // namespace

LogitRow logit_row(const Vector& utilities) {
  const Eigen::Index nz = utilities.size();
  double shift = 0.0;  // the opt-out utility
  for (Eigen::Index z = 0; z < nz; ++z) shift = std::max(shift, utilities[z]);
  LogitRow row;
  row.probabilities.resize(nz + 1);
  row.probabilities[0] = std::exp(-shift);
  double total = row.probabilities[0];
  for (Eigen::Index z = 0; z < nz; ++z) {
    const double e = utilities[z] == kNegInf ? 0.0 : std::exp(utilities[z] - shift);
    row.probabilities[z + 1] = e;
    total += e;
  }
  row.probabilities /= total;
  row.emax = shift + std::log(total);
  return row;
}

PriceTerms logit_price_terms_serial(const MarketSpec& spec, const Vector& p,
                                    bool with_hessian) {
  const std::size_t types = spec.num_producers() + spec.num_consumers();
  std::vector<TypeTerm> terms(types);
  for (std::size_t t = 0; t < types; ++t) terms[t] = EvaluateType(spec, p, t);
  return Merge(spec, terms, with_hessian);
}

PriceTerms logit_price_terms(const MarketSpec& spec, const Vector& p,
                             bool with_hessian) {
  const long types = static_cast<long>(spec.num_producers() + spec.num_consumers());
  std::vector<TypeTerm> terms(types);
#pragma omp parallel for schedule(static) if (types > 16)
  for (long t = 0; t < types; ++t) terms[t] = EvaluateType(spec, p, t);
  return Merge(spec, terms, with_hessian);
}

void fill_gumbel_serial(const Philox4x32& rng, StreamSide side,
                        std::uint32_t type, Table& out) {
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index k = 0; k < out.cols(); ++k) {
      out(i, k) = keyed_gumbel(rng, {side, type, static_cast<std::uint64_t>(i),
                                     static_cast<std::uint32_t>(k)});
    }
  }
}

void fill_gumbel(const Philox4x32& rng, StreamSide side, std::uint32_t type,
                 Table& out) {
  const Eigen::Index rows = out.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index k = 0; k < out.cols(); ++k) {
      out(i, k) = keyed_gumbel(rng, {side, type, static_cast<std::uint64_t>(i),
                                     static_cast<std::uint32_t>(k)});
    }
  }
}

namespace {
// Auxiliary stream for resampling, past any real option index.
constexpr std::uint32_t kResampleOption = 0xFFFFFFFFu;
}  // namespace

void fill_resampled_serial(const Philox4x32& rng, StreamSide side,
                           std::uint32_t type, const Table& source,
                           Table& out) {
  const auto bound = static_cast<std::uint64_t>(source.rows());
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const auto r = keyed_index(
        rng, {side, type, static_cast<std::uint64_t>(i), kResampleOption}, bound);
    out.row(i) = source.row(static_cast<Eigen::Index>(r));
  }
}

void fill_resampled(const Philox4x32& rng, StreamSide side,
                    std::uint32_t type, const Table& source, Table& out) {
  const auto bound = static_cast<std::uint64_t>(source.rows());
  const Eigen::Index rows = out.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto r = keyed_index(
        rng, {side, type, static_cast<std::uint64_t>(i), kResampleOption}, bound);
    out.row(i) = source.row(static_cast<Eigen::Index>(r));
  }
}

namespace {

inline Eigen::Index ChooseOption(const Table& shocks, const Vector& systematic,
                                 Eigen::Index i) {
  Eigen::Index best = 0;
  double best_payoff = shocks(i, 0);
  for (Eigen::Index k = 1; k < systematic.size(); ++k) {
    if (systematic[k] == kNegInf) continue;
    const double payoff = systematic[k] + shocks(i, k);
    if (payoff > best_payoff) {
      best_payoff = payoff;
      best = k;
    }
  }
  return best;
}

}  // namespace

std::vector<std::int64_t> count_choices_serial(const Table& shocks,
                                               const Vector& systematic) {
  std::vector<std::int64_t> counts(systematic.size(), 0);
  for (Eigen::Index i = 0; i < shocks.rows(); ++i) {
    ++counts[ChooseOption(shocks, systematic, i)];
  }
  return counts;
}

std::vector<std::int64_t> count_choices(const Table& shocks,
                                        const Vector& systematic) {
  const Eigen::Index options = systematic.size();
  const Eigen::Index rows = shocks.rows();
  std::vector<std::int64_t> counts(options, 0);
#pragma omp parallel
  {
    std::vector<std::int64_t> local(options, 0);
#pragma omp for schedule(static) nowait
    for (Eigen::Index i = 0; i < rows; ++i) {
      ++local[ChooseOption(shocks, systematic, i)];
    }
#pragma omp critical
    for (Eigen::Index k = 0; k < options; ++k) counts[k] += local[k];
  }
  return counts;
}

}  // namespace hedonic::kernels
