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

#include "hedonic/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hedonic/flow.hpp"
#include "hedonic/kernels.hpp"
#include "hedonic/rng.hpp"

namespace hedonic {
namespace {

double XLogX(double v) { return v > 0.0 ? v * std::log(v) : 0.0; }

void CheckDraws(const std::vector<EmpiricalShocks>& draws, std::size_t types,
                std::size_t options, const char* side) {
  if (draws.size() != types) {
    std::ostringstream os;
    os << side << " draw matrices: expected " << types << ", got "
       << draws.size();
    throw HedonicError(ErrorCode::kDimensionMismatch, os.str());
  }
  for (const auto& d : draws) {
    if (d.draws.rows() < 1 ||
        static_cast<std::size_t>(d.draws.cols()) != options) {
      std::ostringstream os;
      os << side << " draw matrix has shape " << d.draws.rows() << "x"
         << d.draws.cols() << ", expected at least one row and " << options
         << " columns";
      throw HedonicError(ErrorCode::kDimensionMismatch, os.str());
    }
    if (!d.draws.allFinite()) {
      throw HedonicError(ErrorCode::kInvalidSurplus,
                         std::string(side) + " draws must be finite");
    }
  }
}

Vector ProducerUtilities(const MarketSpec& spec, const PriceVector& p,
                         std::size_t x) {
  Vector row(spec.num_qualities());
  for (std::size_t z = 0; z < spec.num_qualities(); ++z) {
    const double a = spec.alpha(x, z);
    row[z] = a == kNegInf ? kNegInf : a + p[z];
  }
  return row;
}

Vector ConsumerUtilities(const MarketSpec& spec, const PriceVector& p,
                         std::size_t y) {
  Vector row(spec.num_qualities());
  for (std::size_t z = 0; z < spec.num_qualities(); ++z) {
    const double g = spec.gamma(z, y);
    row[z] = g == kNegInf ? kNegInf : g - p[z];
  }
  return row;
}

// Value and supergradient of mu.U - emax(U) at U for empirical shocks.
struct EmpiricalObjective {
  double value;
  Vector ascent;  // mu_tail - P_tail(U)
};

EmpiricalObjective EvaluateEmpirical(const Vector& shares, const Vector& U,
                                     TypeShocks shocks) {
  const Vector prob = emax_gradient(U, shocks);
  const Vector tail = shares.tail(U.size());
  return {tail.dot(U) - emax(U, shocks), tail - prob.tail(U.size())};
}

// Projected supergradient ascent with step 1/sqrt(k+1); keeps the best of
// the iterates and of their running average over the second half.
ConjugateResult EmpiricalConjugate(const Vector& shares, TypeShocks shocks,
                                   std::size_t max_iter) {
  const Eigen::Index nz = shares.size() - 1;
  Vector U = Vector::Zero(nz);
  Vector average = Vector::Zero(nz);
  std::size_t averaged = 0;
  EmpiricalObjective current = EvaluateEmpirical(shares, U, shocks);
  ConjugateResult best{current.value, U, 0.0, 0};
  for (std::size_t k = 0; k < max_iter; ++k) {
    if (current.ascent.lpNorm<Eigen::Infinity>() == 0.0) break;
    U += current.ascent / std::sqrt(static_cast<double>(k + 1));
    current = EvaluateEmpirical(shares, U, shocks);
    if (current.value > best.value) {
      best.value = current.value;
      best.gradient = U;
    }
    if (2 * k >= max_iter) {
      average += (U - average) / static_cast<double>(++averaged);
    }
    best.iterations = k + 1;
  }
  if (averaged > 0) {
    const EmpiricalObjective at_average =
        EvaluateEmpirical(shares, average, shocks);
    if (at_average.value > best.value) {
      best.value = at_average.value;
      best.gradient = average;
    }
  }
  best.residual =
      (emax_gradient(best.gradient, shocks) - shares).lpNorm<Eigen::Infinity>();
  return best;
}

// Damped Newton ascent on mu.U - log(1 + sum exp U) from U = 0.
ConjugateResult LogitNumericalConjugate(const Vector& shares) {
  const Eigen::Index nz = shares.size() - 1;
  const Vector tail = shares.tail(nz);
  auto objective = [&](const Vector& U) {
    return tail.dot(U) - kernels::logit_row(U).emax;
  };
  Vector U = Vector::Zero(nz);
  std::size_t iter = 0;
  for (; iter < 200; ++iter) {
    const kernels::LogitRow row = kernels::logit_row(U);
    const Vector q = row.probabilities.tail(nz);
    const Vector g = tail - q;
    const double gnorm = g.lpNorm<Eigen::Infinity>();
    if (gnorm <= 1e-16) break;
    Table H = Table(q.asDiagonal()) - q * q.transpose();
    Vector d = H.ldlt().solve(g);
    if (!d.allFinite() || g.dot(d) <= 0.0) d = g;
    const double f0 = tail.dot(U) - row.emax;
    double t = 1.0;
    bool moved = false;
    for (int halving = 0; halving < 60; ++halving, t *= 0.5) {
      const Vector trial = U + t * d;
      const double f1 = objective(trial);
      const Vector g1 =
          tail - kernels::logit_row(trial).probabilities.tail(nz);
      if (f1 >= f0 + 1e-4 * t * g.dot(d) ||
          (g1.lpNorm<Eigen::Infinity>() < gnorm &&
           f1 >= f0 - 1e-14 * (1.0 + std::abs(f0)))) {
        moved = (trial - U).lpNorm<Eigen::Infinity>() > 0.0;
        U = trial;
        break;
      }
    }
    if (!moved) break;
  }
  ConjugateResult result;
  result.value = objective(U);
  result.gradient = U;
  result.iterations = iter;
  result.residual = (kernels::logit_row(U).probabilities - shares)
                        .lpNorm<Eigen::Infinity>();
  return result;
}

// Pushes masses to conditional shares; zero-mass types opt out entirely.
Table ConditionalRows(const Table& by_type, const Vector& mass) {
  const Eigen::Index types = by_type.rows();
  const Eigen::Index nz = by_type.cols();
  Table rows = Table::Zero(types, nz + 1);
  for (Eigen::Index t = 0; t < types; ++t) {
    if (mass[t] <= 0.0) {
      rows(t, 0) = 1.0;
      continue;
    }
    rows(t, 0) = (mass[t] - by_type.row(t).sum()) / mass[t];
    rows.row(t).tail(nz) = by_type.row(t) / mass[t];
  }
  return rows;
}

void CheckQualitiesTraded(const MarketSpec& spec) {
  for (std::size_t z = 0; z < spec.num_qualities(); ++z) {
    bool supplied = false;
    bool demanded = false;
    for (std::size_t x = 0; x < spec.num_producers(); ++x) {
      supplied |= spec.alpha(x, z) != kNegInf && spec.n[x] > 0.0;
    }
    for (std::size_t y = 0; y < spec.num_consumers(); ++y) {
      demanded |= spec.gamma(z, y) != kNegInf && spec.m[y] > 0.0;
    }
    if (!supplied || !demanded) {
      throw HedonicError(ErrorCode::kDeadQuality,
                         "quality '" + spec.qualities[z] + "' has no " +
                             (supplied ? "consumer" : "producer") +
                             " able to trade it; drop it from the market");
    }
  }
}

SmoothEquilibrium SolveLogit(const MarketSpec& spec,
                             const PriceSolverOptions& opts) {
  const std::size_t nz = spec.num_qualities();
  SmoothEquilibrium eq;
  eq.p = opts.initial_prices.value_or(Vector::Zero(nz));
  if (static_cast<std::size_t>(eq.p.size()) != nz) {
    throw HedonicError(ErrorCode::kDimensionMismatch,
                       "initial prices do not match the quality set");
  }
  kernels::PriceTerms terms = kernels::logit_price_terms(spec, eq.p, true);
  double gnorm = terms.gradient.lpNorm<Eigen::Infinity>();
  while (gnorm > opts.tol && eq.iterations < opts.max_iter) {
    const Vector& g = terms.gradient;
    Vector d = -terms.hessian.ldlt().solve(g);
    if (!d.allFinite() || g.dot(d) >= 0.0) d = -g;
    double t = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving, t *= 0.5) {
      const Vector trial = eq.p + t * d;
      kernels::PriceTerms next = kernels::logit_price_terms(spec, trial, true);
      const double next_norm = next.gradient.lpNorm<Eigen::Infinity>();
      const bool armijo = next.value <= terms.value + 1e-4 * t * g.dot(d);
      // Near the minimum W changes below rounding; accept any step that
      // shrinks the excess supply without raising W measurably.
      const bool flat = next_norm < gnorm &&
                        next.value <= terms.value +
                                          1e-13 * (1.0 + std::abs(terms.value));
      if (armijo || flat) {
        eq.p = trial;
        terms = std::move(next);
        gnorm = next_norm;
        accepted = true;
        break;
      }
    }
    ++eq.iterations;
    if (!accepted) break;
  }
  eq.converged = gnorm <= opts.tol;
  eq.clearing_residual = gnorm;
  eq.welfare = terms.value;
  eq.shares = {terms.supply_shares, terms.demand_shares};
  eq.mu = Allocation::Zero(spec);
  for (std::size_t x = 0; x < spec.num_producers(); ++x) {
    eq.mu.supply.row(x) = spec.n[x] * terms.supply_shares.row(x).tail(nz);
  }
  for (std::size_t y = 0; y < spec.num_consumers(); ++y) {
    eq.mu.demand.col(y) =
        spec.m[y] * terms.demand_shares.row(y).tail(nz).transpose();
  }
  return eq;
}

// With finitely many draws per type, every draw row is an agent type of its
// own with payoff eps_0 + max(alpha_xz + eps_z - eps_0 + p_z, 0), so W(p) is
// the dual of a maximum surplus flow over the expanded market plus a
// constant.
SmoothEquilibrium SolveEmpirical(const MarketSpec& spec,
                                 const HeterogeneitySpec& het) {
  const std::size_t nz = spec.num_qualities();
  MarketSpec expanded;
  expanded.qualities = spec.qualities;
  std::vector<std::size_t> producer_of;
  std::vector<std::size_t> consumer_of;
  std::vector<double> n_rows, m_rows;
  std::vector<Vector> alpha_rows, gamma_rows;
  for (std::size_t x = 0; x < spec.num_producers(); ++x) {
    if (spec.n[x] <= 0.0) continue;
    const Table& draws = het.producer_draws[x].draws;
    for (Eigen::Index r = 0; r < draws.rows(); ++r) {
      Vector row(nz);
      for (std::size_t z = 0; z < nz; ++z) {
        const double a = spec.alpha(x, z);
        row[z] = a == kNegInf ? kNegInf : a + draws(r, z + 1) - draws(r, 0);
      }
      expanded.producers.push_back(spec.producers[x] + "#" + std::to_string(r));
      producer_of.push_back(x);
      n_rows.push_back(spec.n[x] / static_cast<double>(draws.rows()));
      alpha_rows.push_back(row);
    }
  }
  for (std::size_t y = 0; y < spec.num_consumers(); ++y) {
    if (spec.m[y] <= 0.0) continue;
    const Table& draws = het.consumer_draws[y].draws;
    for (Eigen::Index r = 0; r < draws.rows(); ++r) {
      Vector col(nz);
      for (std::size_t z = 0; z < nz; ++z) {
        const double g = spec.gamma(z, y);
        col[z] = g == kNegInf ? kNegInf : g + draws(r, z + 1) - draws(r, 0);
      }
      expanded.consumers.push_back(spec.consumers[y] + "#" + std::to_string(r));
      consumer_of.push_back(y);
      m_rows.push_back(spec.m[y] / static_cast<double>(draws.rows()));
      gamma_rows.push_back(col);
    }
  }
  expanded.n = Eigen::Map<Vector>(n_rows.data(), n_rows.size());
  expanded.m = Eigen::Map<Vector>(m_rows.data(), m_rows.size());
  expanded.alpha.resize(alpha_rows.size(), nz);
  for (std::size_t i = 0; i < alpha_rows.size(); ++i) {
    expanded.alpha.row(i) = alpha_rows[i].transpose();
  }
  expanded.gamma.resize(nz, gamma_rows.size());
  for (std::size_t j = 0; j < gamma_rows.size(); ++j) {
    expanded.gamma.col(j) = gamma_rows[j];
  }

  const FlowNetwork net = build_network(expanded);
  const FlowSolution solution = solve_max_surplus_flow(net);
  const EquilibriumOutcome outcome =
      extract_equilibrium(expanded, net, solution);

  SmoothEquilibrium eq;
  eq.p = 0.5 * (solution.price_low + solution.price_high);
  double scale = 1.0;
  for (double v : eq.p) scale = std::max(scale, std::abs(v));
  eq.non_unique = ((solution.price_high - solution.price_low).array() >
                   1e-9 * scale)
                      .any();
  eq.mu = Allocation::Zero(spec);
  for (std::size_t i = 0; i < producer_of.size(); ++i) {
    eq.mu.supply.row(producer_of[i]) += outcome.mu.supply.row(i);
  }
  for (std::size_t j = 0; j < consumer_of.size(); ++j) {
    eq.mu.demand.col(consumer_of[j]) += outcome.mu.demand.col(j);
  }
  eq.shares = choice_probabilities(spec, het, eq.p);
  const ChoiceProbabilities realized = conditional_shares(spec, eq.mu);
  for (std::size_t x = 0; x < spec.num_producers(); ++x) {
    if (spec.n[x] > 0.0) eq.shares.supply.row(x) = realized.supply.row(x);
  }
  for (std::size_t y = 0; y < spec.num_consumers(); ++y) {
    if (spec.m[y] > 0.0) eq.shares.demand.row(y) = realized.demand.row(y);
  }
  eq.welfare = social_welfare_dual(spec, het, eq.p);
  eq.clearing_residual = (eq.mu.supply.colwise().sum().transpose() -
                          eq.mu.demand.rowwise().sum())
                             .lpNorm<Eigen::Infinity>();
  eq.iterations = solution.augmentations;
  eq.converged = true;
  return eq;
}

}  // namespace

void validate_heterogeneity(const HeterogeneitySpec& het,
                            const MarketSpec& spec) {
  if (het.logit()) return;
  const std::size_t options = spec.num_qualities() + 1;
  CheckDraws(het.producer_draws, spec.num_producers(), options, "producer");
  CheckDraws(het.consumer_draws, spec.num_consumers(), options, "consumer");
}

HeterogeneitySpec empirical_gumbel(const MarketSpec& spec, std::size_t rows,
                                   std::uint64_t seed) {
  HeterogeneitySpec het;
  het.kind = HeterogeneitySpec::Kind::kEmpirical;
  het.seed = seed;
  const Philox4x32 rng(seed);
  const auto options = static_cast<Eigen::Index>(spec.num_qualities() + 1);
  for (std::size_t x = 0; x < spec.num_producers(); ++x) {
    EmpiricalShocks shocks{Table(rows, options)};
    kernels::fill_gumbel(rng, StreamSide::kProducer,
                         static_cast<std::uint32_t>(x), shocks.draws);
    het.producer_draws.push_back(std::move(shocks));
  }
  for (std::size_t y = 0; y < spec.num_consumers(); ++y) {
    EmpiricalShocks shocks{Table(rows, options)};
    kernels::fill_gumbel(rng, StreamSide::kConsumer,
                         static_cast<std::uint32_t>(y), shocks.draws);
    het.consumer_draws.push_back(std::move(shocks));
  }
  return het;
}

SystematicUtilities systematic_utilities(const MarketSpec& spec,
                                         const PriceVector& p) {
  SystematicUtilities su{Table(spec.num_producers(), spec.num_qualities()),
                         Table(spec.num_qualities(), spec.num_consumers())};
  for (std::size_t x = 0; x < spec.num_producers(); ++x) {
    su.U.row(x) = ProducerUtilities(spec, p, x).transpose();
  }
  for (std::size_t y = 0; y < spec.num_consumers(); ++y) {
    su.V.col(y) = ConsumerUtilities(spec, p, y);
  }
  return su;
}

double emax(const Vector& utilities, TypeShocks shocks) {
  if (shocks.logit()) return kernels::logit_row(utilities).emax;
  const Table& draws = shocks.empirical->draws;
  double total = 0.0;
  for (Eigen::Index r = 0; r < draws.rows(); ++r) {
    double best = draws(r, 0);
    for (Eigen::Index z = 0; z < utilities.size(); ++z) {
      if (utilities[z] == kNegInf) continue;
      best = std::max(best, utilities[z] + draws(r, z + 1));
    }
    total += best;
  }
  return total / static_cast<double>(draws.rows());
}

Vector emax_gradient(const Vector& utilities, TypeShocks shocks) {
  if (shocks.logit()) return kernels::logit_row(utilities).probabilities;
  const Table& draws = shocks.empirical->draws;
  const Eigen::Index options = utilities.size() + 1;
  Vector prob = Vector::Zero(options);
  std::vector<Eigen::Index> tied;
  for (Eigen::Index r = 0; r < draws.rows(); ++r) {
    double best = draws(r, 0);
    tied.assign(1, 0);
    for (Eigen::Index z = 0; z < utilities.size(); ++z) {
      if (utilities[z] == kNegInf) continue;
      const double payoff = utilities[z] + draws(r, z + 1);
      if (payoff > best) {
        best = payoff;
        tied.assign(1, z + 1);
      } else if (payoff == best) {
        tied.push_back(z + 1);
      }
    }
    for (Eigen::Index k : tied) prob[k] += 1.0 / static_cast<double>(tied.size());
  }
  return prob / static_cast<double>(draws.rows());
}

ConjugateResult conjugate(const Vector& shares, TypeShocks shocks,
                          const ConjugateOptions& options) {
  if (shares.size() < 1) {
    throw HedonicError(ErrorCode::kDimensionMismatch, "empty share vector");
  }
  if (!shocks.logit() && shocks.empirical->draws.cols() != shares.size()) {
    throw HedonicError(ErrorCode::kDimensionMismatch,
                       "share vector does not match the draw matrix");
  }
  if (!shares.allFinite() || (shares.array() < -1e-12).any() ||
      std::abs(shares.sum() - 1.0) > 1e-9) {
    throw HedonicError(ErrorCode::kNotAProbability,
                       "shares must be nonnegative and sum to one");
  }
  const Vector mu = shares.cwiseMax(0.0);
  const bool interior = (mu.array() > 0.0).all();
  if (options.with_gradient && !interior) {
    throw HedonicError(ErrorCode::kBoundarySupport,
                       "a zero share has no finite systematic utility");
  }

  if (!shocks.logit()) {
    ConjugateResult result = EmpiricalConjugate(mu, shocks, options.max_iter);
    if (!options.with_gradient) result.gradient.resize(0);
    return result;
  }
  if (options.method == ConjugateMethod::kNumerical && interior) {
    ConjugateResult result = LogitNumericalConjugate(mu);
    if (!options.with_gradient) result.gradient.resize(0);
    return result;
  }

  ConjugateResult result;
  for (Eigen::Index k = 0; k < mu.size(); ++k) result.value += XLogX(mu[k]);
  if (options.with_gradient) {
    const Eigen::Index nz = mu.size() - 1;
    result.gradient = (mu.tail(nz) / mu[0]).array().log().matrix();
    result.residual = (kernels::logit_row(result.gradient).probabilities - mu)
                          .lpNorm<Eigen::Infinity>();
  }
  return result;
}

ChoiceProbabilities conditional_shares(const MarketSpec& spec,
                                       const Allocation& mu) {
  return {ConditionalRows(mu.supply, spec.n),
          ConditionalRows(mu.demand.transpose(), spec.m)};
}

double generalized_entropy(const MarketSpec& spec, const Allocation& mu,
                           const HeterogeneitySpec& het) {
  const ChoiceProbabilities shares = conditional_shares(spec, mu);
  ConjugateOptions options;
  options.with_gradient = false;
  double total = 0.0;
  for (std::size_t x = 0; x < spec.num_producers(); ++x) {
    if (spec.n[x] <= 0.0) continue;
    total += spec.n[x] *
             conjugate(shares.supply.row(x).transpose(), het.producer(x), options)
                 .value;
  }
  for (std::size_t y = 0; y < spec.num_consumers(); ++y) {
    if (spec.m[y] <= 0.0) continue;
    total += spec.m[y] *
             conjugate(shares.demand.row(y).transpose(), het.consumer(y), options)
                 .value;
  }
  return total;
}

double logit_entropy(const MarketSpec& spec, const Allocation& mu) {
  auto term = [](double mass, double total) {
    return mass > 0.0 ? mass * std::log(mass / total) : 0.0;
  };
  double total = 0.0;
  const Vector out_x = mu.producer_optout(spec.n);
  const Vector out_y = mu.consumer_optout(spec.m);
  for (std::size_t x = 0; x < spec.num_producers(); ++x) {
    for (std::size_t z = 0; z < spec.num_qualities(); ++z) {
      total += term(mu.supply(x, z), spec.n[x]);
    }
    total += term(out_x[x], spec.n[x]);
  }
  for (std::size_t y = 0; y < spec.num_consumers(); ++y) {
    for (std::size_t z = 0; z < spec.num_qualities(); ++z) {
      total += term(mu.demand(z, y), spec.m[y]);
    }
    total += term(out_y[y], spec.m[y]);
  }
  return total;
}

double social_welfare_primal(const MarketSpec& spec,
                             const HeterogeneitySpec& het,
                             const Allocation& mu, double tol) {
  return welfare(spec, mu, tol) - generalized_entropy(spec, mu, het);
}

double social_welfare_dual(const MarketSpec& spec,
                           const HeterogeneitySpec& het, const PriceVector& p) {
  if (het.logit()) return kernels::logit_price_terms(spec, p, false).value;
  double total = 0.0;
  for (std::size_t x = 0; x < spec.num_producers(); ++x) {
    if (spec.n[x] == 0.0) continue;
    total += spec.n[x] * emax(ProducerUtilities(spec, p, x), het.producer(x));
  }
  for (std::size_t y = 0; y < spec.num_consumers(); ++y) {
    if (spec.m[y] == 0.0) continue;
    total += spec.m[y] * emax(ConsumerUtilities(spec, p, y), het.consumer(y));
  }
  return total;
}

ChoiceProbabilities choice_probabilities(const MarketSpec& spec,
                                         const HeterogeneitySpec& het,
                                         const PriceVector& p) {
  const std::size_t nz = spec.num_qualities();
  ChoiceProbabilities out{Table(spec.num_producers(), nz + 1),
                          Table(spec.num_consumers(), nz + 1)};
  for (std::size_t x = 0; x < spec.num_producers(); ++x) {
    out.supply.row(x) =
        emax_gradient(ProducerUtilities(spec, p, x), het.producer(x)).transpose();
  }
  for (std::size_t y = 0; y < spec.num_consumers(); ++y) {
    out.demand.row(y) =
        emax_gradient(ConsumerUtilities(spec, p, y), het.consumer(y)).transpose();
  }
  return out;
}

Vector excess_supply(const MarketSpec& spec, const HeterogeneitySpec& het,
                     const PriceVector& p) {
  if (het.logit()) return kernels::logit_price_terms(spec, p, false).gradient;
  const std::size_t nz = spec.num_qualities();
  const ChoiceProbabilities shares = choice_probabilities(spec, het, p);
  Vector excess = Vector::Zero(nz);
  for (std::size_t x = 0; x < spec.num_producers(); ++x) {
    excess += spec.n[x] * shares.supply.row(x).tail(nz).transpose();
  }
  for (std::size_t y = 0; y < spec.num_consumers(); ++y) {
    excess -= spec.m[y] * shares.demand.row(y).tail(nz).transpose();
  }
  return excess;
}

SmoothEquilibrium solve_price_equilibrium(const MarketSpec& spec,
                                          const HeterogeneitySpec& het,
                                          const PriceSolverOptions& opts) {
  validate_market(spec);
  validate_heterogeneity(het, spec);
  if (spec.free_disposal) {
    throw HedonicError(ErrorCode::kUsage,
                       "free disposal is not supported with heterogeneity");
  }
  CheckQualitiesTraded(spec);
  if (!het.logit()) return SolveEmpirical(spec, het);
  SmoothEquilibrium eq = SolveLogit(spec, opts);
  if (!eq.converged) {
    std::ostringstream os;
    os << "price solver stopped after " << eq.iterations
       << " iterations with excess supply " << eq.clearing_residual;
    throw NotConverged(os.str(), std::move(eq));
  }
  return eq;
}

}  // namespace hedonic
