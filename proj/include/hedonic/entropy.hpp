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

#ifndef HEDONIC_ENTROPY_HPP_
#define HEDONIC_ENTROPY_HPP_

// Markets with unobserved taste heterogeneity. Each agent's payoff from
// quality z is a systematic part (alpha_xz + p_z, or gamma_zy - p_z) plus an
// individual shock; the opt-out pays the shock of option 0 alone. The
// expected maximum (emax) of these payoffs is convex in the systematic part,
// its gradient is the vector of choice probabilities, and its convex
// conjugate inverts choice probabilities back into systematic utilities.
//
// Vectors of choice probabilities have |Z|+1 entries with the opt-out at
// index 0. Vectors of systematic utilities have |Z| entries (-inf allowed).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hedonic/error.hpp"
#include "hedonic/market.hpp"

namespace hedonic {

// Draw matrix for one observable type: rows are simulated agents, columns
// are the |Z|+1 options with the opt-out first.
struct EmpiricalShocks {
  Table draws;
};

// Shock distribution of one observable type. Null draws means iid standard
// Gumbel (logit) shocks.
struct TypeShocks {
  const EmpiricalShocks* empirical = nullptr;
  bool logit() const { return empirical == nullptr; }
};

struct HeterogeneitySpec {
  enum class Kind { kLogit, kEmpirical };
  Kind kind = Kind::kLogit;
  std::vector<EmpiricalShocks> producer_draws;  // one per producer type
  std::vector<EmpiricalShocks> consumer_draws;  // one per consumer type
  std::uint64_t seed = 0;

  static HeterogeneitySpec Logit() { return {}; }
  bool logit() const { return kind == Kind::kLogit; }

  TypeShocks producer(std::size_t x) const {
    return logit() ? TypeShocks{} : TypeShocks{&producer_draws.at(x)};
  }
  TypeShocks consumer(std::size_t y) const {
    return logit() ? TypeShocks{} : TypeShocks{&consumer_draws.at(y)};
  }
};

// Checks draw matrix shapes against the market and that every draw is
// finite. Throws kDimensionMismatch or kInvalidSurplus.
void validate_heterogeneity(const HeterogeneitySpec& het,
                            const MarketSpec& spec);

// Empirical heterogeneity whose draw matrices hold `rows` standard Gumbel
// draws per type, generated by the keyed simulation generator.
HeterogeneitySpec empirical_gumbel(const MarketSpec& spec, std::size_t rows,
                                   std::uint64_t seed);

// Conditional choice shares per type, opt-out in column 0.
struct ChoiceProbabilities {
  Table supply;  // |X| x (|Z|+1)
  Table demand;  // |Y| x (|Z|+1)
};

struct SystematicUtilities {
  Table U;  // |X| x |Z|, alpha_xz + p_z
  Table V;  // |Z| x |Y|, gamma_zy - p_z
};

SystematicUtilities systematic_utilities(const MarketSpec& spec,
                                         const PriceVector& p);

// Expected maximum payoff over the opt-out and the |Z| qualities.
double emax(const Vector& utilities, TypeShocks shocks);

// Choice probabilities, |Z|+1 entries summing to one. Empirical ties are
// split uniformly between the tied options.
Vector emax_gradient(const Vector& utilities, TypeShocks shocks);

enum class ConjugateMethod {
  kClosedForm,  // entropy formula; logit only
  kNumerical,   // concave maximization of mu.U - emax(U)
};

struct ConjugateResult {
  double value = 0.0;
  Vector gradient;  // |Z| systematic utilities; empty when not requested
  // Max-norm gap between emax_gradient(gradient) and the input shares.
  double residual = 0.0;
  std::size_t iterations = 0;
};

struct ConjugateOptions {
  ConjugateMethod method = ConjugateMethod::kClosedForm;
  bool with_gradient = true;
  std::size_t max_iter = 20000;  // subgradient steps for empirical shocks
};

// Convex conjugate of emax at the share vector `shares` (|Z|+1 entries, opt-out
// first). Throws kNotAProbability outside the simplex and kBoundarySupport
// when a gradient is requested at a share vector with a zero entry.
ConjugateResult conjugate(const Vector& shares, TypeShocks shocks,
                          const ConjugateOptions& options = {});

// Divides allocation masses by type masses. Types of zero mass get the
// all-opt-out row.
ChoiceProbabilities conditional_shares(const MarketSpec& spec,
                                       const Allocation& mu);

// sum_x n_x G*_x(mu_.|x) + sum_y m_y H*_y(mu_.|y).
double generalized_entropy(const MarketSpec& spec, const Allocation& mu,
                           const HeterogeneitySpec& het);

// Logit entropy written directly on masses:
//   sum mu_xz log(mu_xz/n_x) + sum mu_x0 log(mu_x0/n_x) + consumer terms.
double logit_entropy(const MarketSpec& spec, const Allocation& mu);

// sum mu_xz alpha_xz + sum mu_zy gamma_zy - generalized_entropy.
double social_welfare_primal(const MarketSpec& spec,
                             const HeterogeneitySpec& het,
                             const Allocation& mu,
                             double tol = kDefaultTolerance);

// Price functional W(p) = sum n_x G_x(alpha_x + p) + sum m_y H_y(gamma_y - p)
// and its gradient, the excess supply per quality.
double social_welfare_dual(const MarketSpec& spec,
                           const HeterogeneitySpec& het, const PriceVector& p);
Vector excess_supply(const MarketSpec& spec, const HeterogeneitySpec& het,
                     const PriceVector& p);

// Conditional shares of every type at prices p.
ChoiceProbabilities choice_probabilities(const MarketSpec& spec,
                                         const HeterogeneitySpec& het,
                                         const PriceVector& p);

struct SmoothEquilibrium {
  PriceVector p;
  Allocation mu;
  ChoiceProbabilities shares;
  double welfare = 0.0;
  double clearing_residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  // Empirical shocks only: the minimizing price set is not a single point.
  bool non_unique = false;
};

struct PriceSolverOptions {
  double tol = 1e-10;
  std::size_t max_iter = 200;
  std::optional<PriceVector> initial_prices;
};

// Thrown when the price solver runs out of iterations; carries the last
// iterate.
class NotConverged : public HedonicError {
 public:
  NotConverged(const std::string& what, SmoothEquilibrium partial)
      : HedonicError(ErrorCode::kMaxIterations, what),
        partial_(std::move(partial)) {}
  const SmoothEquilibrium& partial() const { return partial_; }

 private:
  SmoothEquilibrium partial_;
};

// Minimizes W(p). Logit shocks: damped Newton with backtracking from p = 0
// (or opts.initial_prices). Empirical shocks: W is piecewise linear and its
// minimization is the dual of a maximum surplus flow over the simulated
// agents, which is solved exactly. Throws kDeadQuality for a quality that
// one side of the market cannot trade, and NotConverged.
SmoothEquilibrium solve_price_equilibrium(const MarketSpec& spec,
                                          const HeterogeneitySpec& het,
                                          const PriceSolverOptions& opts = {});

}  // namespace hedonic

#endif  // HEDONIC_ENTROPY_HPP_
