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

#ifndef HEDONIC_MARKET_HPP_
#define HEDONIC_MARKET_HPP_

// Data model of a discrete hedonic market: producer types X, consumer types
// Y and qualities Z, with surplus tables alpha (X x Z) and gamma (Z x Y).
// Forbidden producer-quality or quality-consumer pairs are encoded as -inf.

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hedonic {

using Table = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kDefaultTolerance = 1e-9;

struct MarketSpec {
  std::vector<std::string> producers;  // X
  std::vector<std::string> consumers;  // Y
  std::vector<std::string> qualities;  // Z
  Vector n;                            // mass per producer type
  Vector m;                            // mass per consumer type
  Table alpha;                         // |X| x |Z|
  Table gamma;                         // |Z| x |Y|
  bool free_disposal = false;

  std::size_t num_producers() const { return producers.size(); }
  std::size_t num_consumers() const { return consumers.size(); }
  std::size_t num_qualities() const { return qualities.size(); }

  // True when every mass is an integer.
  bool integral() const;
};

// Non-fatal findings of validate_market.
struct MarketWarning {
  enum class Kind { kAllInfeasibleProducer, kAllInfeasibleConsumer };
  Kind kind;
  std::size_t index;
  std::string message;
};

// Throws HedonicError (kDimensionMismatch, kNegativeMass, kInvalidSurplus)
// when an invariant fails. Types that can only opt out are reported as
// warnings.
std::vector<MarketWarning> validate_market(const MarketSpec& spec);

// Supply masses mu_xz and demand masses mu_zy.
struct Allocation {
  Table supply;  // |X| x |Z|
  Table demand;  // |Z| x |Y|

  static Allocation Zero(const MarketSpec& spec);
  Vector producer_optout(const Vector& n) const;
  Vector consumer_optout(const Vector& m) const;
};

using PriceVector = Vector;

struct IndirectUtilities {
  Vector u;  // producers
  Vector v;  // consumers
};

struct PriceBounds {
  Vector p_min;
  Vector p_max;
};

struct IndirectSurplus {
  Table phi;  // |X| x |Y|
  // argmax[x][y] lists every quality attaining phi(x, y); empty when -inf.
  std::vector<std::vector<std::vector<std::size_t>>> argmax;
};

// Phi_xy = max_z (alpha_xz + gamma_zy).
IndirectSurplus indirect_surplus_matrix(const MarketSpec& spec);

// Sum of mu_xz alpha_xz + sum of mu_zy gamma_zy. Throws kInfeasibleMass for
// positive mass on a forbidden cell and kConstraintViolation when mu breaks
// people counting or market clearing by more than tol.
double welfare(const MarketSpec& spec, const Allocation& mu,
               double tol = kDefaultTolerance);

enum class Side { kProducer, kConsumer };

struct RationalityViolation {
  Side side;
  std::size_t agent_type;
  std::optional<std::size_t> chosen;  // nullopt: opt-out
  std::optional<std::size_t> better;  // nullopt: opt-out
  double slack;                       // payoff forgone, > tol
};

struct VerificationReport {
  bool people_counting_ok = true;
  bool market_clearing_ok = true;
  std::vector<RationalityViolation> rationality_violations;
  double max_residual = 0.0;

  bool all_clear() const {
    return people_counting_ok && market_clearing_ok &&
           rationality_violations.empty();
  }
};

VerificationReport verify_equilibrium(const MarketSpec& spec,
                                      const PriceVector& p,
                                      const Allocation& mu,
                                      double tol = kDefaultTolerance);

// p_min_z = max_y (gamma_zy - v_y), p_max_z = min_x (u_x - alpha_xz).
PriceBounds price_bounds(const MarketSpec& spec, const IndirectUtilities& uv);

// u_x = max(max_z(alpha_xz + p_z), 0) and v_y = max(max_z(gamma_zy - p_z), 0).
IndirectUtilities envelope_utilities(const MarketSpec& spec,
                                     const PriceVector& p);

// The four-seller, three-buyer, three-quality market with unit masses.
MarketSpec worked_example_market();

}  // namespace hedonic

#endif  // HEDONIC_MARKET_HPP_
